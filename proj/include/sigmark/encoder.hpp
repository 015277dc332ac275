#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "sigmark/errors.hpp"
#include "sigmark/pattern.hpp"
#include "sigmark/provider.hpp"

namespace sigmark {

struct GenerationRequest {
  std::string prompt;
  Pattern pattern;
  ProviderConfig provider;
  int target_length = 200;
  bool suppress_eos = true;
};

struct StepRecord {
  CandidatePool pool;        // the filtered pool the rank indexed into
  int selected_rank = 1;     // 1-based rank actually used
  bool shallow_fallback = false;
};

struct GenerationRecord {
  std::vector<Token> prompt_tokens;
  std::vector<Token> generated;
  std::vector<StepRecord> steps;
  PatternSpec key;
  bool suppress_eos = true;
};

namespace encoder_detail {

inline GenerationRecord run(const Provider& provider, const std::string& prompt,
                            const Pattern& pattern, const ProviderConfig& config,
                            int target_length, bool suppress_eos) {
  if (target_length < 1) throw InvalidSpec("generation: target_length must be >= 1");
  if (static_cast<std::size_t>(target_length) > pattern.ranks.size())
    throw InvalidSpec("generation: pattern shorter than target_length");

  GenerationRecord record;
  record.prompt_tokens = provider.tokenize(prompt);
  if (record.prompt_tokens.empty()) throw EmptyText("generation: prompt has no tokens");
  record.key = pattern.spec;
  record.suppress_eos = suppress_eos;

  std::vector<Token> prefix = record.prompt_tokens;
  prefix.reserve(prefix.size() + static_cast<std::size_t>(target_length));
  for (int i = 0; i < target_length; ++i) {
    StepRecord step;
    step.pool = filtered_pool(provider, prefix, config, suppress_eos);
    if (step.pool.entries.empty()) throw ProviderError("generation: provider returned empty pool");
    const int wanted = pattern.ranks[static_cast<std::size_t>(i)];
    if (static_cast<std::size_t>(wanted) > step.pool.entries.size()) {
      // Shallow remote pools degrade one step instead of aborting the text.
      step.selected_rank = static_cast<int>(step.pool.entries.size());
      step.shallow_fallback = true;
    } else {
      step.selected_rank = wanted;
    }
    const Token chosen = step.pool.entries[static_cast<std::size_t>(step.selected_rank - 1)].token;
    record.generated.push_back(chosen);
    prefix.push_back(chosen);
    record.steps.push_back(std::move(step));
  }
  return record;
}

}  // namespace encoder_detail

// Embeds the rank schedule: step i appends the candidate at 1-based rank
// pattern.ranks[i] of that step's pool, then reconditions on it.
inline GenerationRecord generate_watermarked(const Provider& provider,
                                             const GenerationRequest& request) {
  if (request.provider.top_k < request.pattern.spec.amplitude_max)
    throw InvalidSpec("generation: top_k below pattern amplitude_max");
  return encoder_detail::run(provider, request.prompt, request.pattern, request.provider,
                             request.target_length, request.suppress_eos);
}

// Rank-1 control text: greedy at temperature 0, the sampled-order top entry
// otherwise.
inline GenerationRecord generate_plain(const Provider& provider, const std::string& prompt,
                                       const ProviderConfig& config, int target_length = 200,
                                       bool suppress_eos = true) {
  PatternSpec ones{1, 0.0, 1, 10, target_length};
  return encoder_detail::run(provider, prompt, generate_pattern(ones), config, target_length,
                             suppress_eos);
}

}  // namespace sigmark
