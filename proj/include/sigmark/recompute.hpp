#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "sigmark/errors.hpp"
#include "sigmark/provider.hpp"

namespace sigmark {

// Per-token ranks of a finished text within re-computed candidate pools: the
// detector's time-domain signal. ranks[i] belongs to text position
// i + context_len, where context_len counts leading text tokens consumed as
// seed context (1 when no external context was supplied, else 0).
struct RankSeries {
  std::vector<int> ranks;        // 1..k, or k+1 when the token is out of pool
  std::vector<double> logprobs;  // temperature-0 scores of the same tokens
  int context_len = 0;
};

// Rebuilds each position's pool and records the actual token's rank (the
// re-computation pass). Always runs the provider at temperature 0; the pool
// pipeline (EOS filtering included) mirrors generation so that ranks of
// embedded text land exactly where the encoder put them.
inline RankSeries recompute_ranks(const Provider& provider, std::span<const Token> text,
                                  std::span<const Token> context, const ProviderConfig& config,
                                  bool suppress_eos = true) {
  if (text.empty()) throw EmptyText("recompute: text is empty");
  ProviderConfig cfg = config;
  cfg.temperature = 0.0;

  RankSeries series;
  series.context_len = context.empty() ? 1 : 0;

  std::vector<Token> prefix(context.begin(), context.end());
  prefix.insert(prefix.end(), text.begin(),
                text.begin() + static_cast<std::ptrdiff_t>(series.context_len));
  for (std::size_t i = static_cast<std::size_t>(series.context_len); i < text.size(); ++i) {
    const CandidatePool pool = filtered_pool(provider, prefix, cfg, suppress_eos);
    int rank = cfg.top_k + 1;  // sentinel: deeper than the pool
    for (std::size_t r = 0; r < pool.entries.size(); ++r) {
      if (pool.entries[r].token.id == text[i].id &&
          (text[i].id >= 0 || pool.entries[r].token.surface == text[i].surface)) {
        rank = static_cast<int>(r) + 1;
        break;
      }
    }
    series.ranks.push_back(rank);
    series.logprobs.push_back(provider.score_token(prefix, text[i]));
    prefix.push_back(text[i]);
  }
  return series;
}

inline double perplexity(const RankSeries& series) {
  if (series.logprobs.empty()) throw EmptyText("perplexity: no scored tokens");
  double sum = 0.0;
  for (double lp : series.logprobs) sum += lp;
  return std::exp(-sum / static_cast<double>(series.logprobs.size()));
}

inline double perplexity(const Provider& provider, std::span<const Token> text,
                         std::span<const Token> context, const ProviderConfig& config) {
  return perplexity(recompute_ranks(provider, text, context, config));
}

}  // namespace sigmark
