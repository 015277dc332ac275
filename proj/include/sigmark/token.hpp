#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace sigmark {

// A token's id is stable within one provider instance; id -1 marks a surface
// that is outside the provider's vocabulary.
struct Token {
  std::int32_t id = -1;
  std::string surface;

  bool operator==(const Token&) const = default;
};

struct PoolEntry {
  Token token;
  double logprob = 0.0;  // natural log of the temperature-0 probability
};

// Ranked candidates for one generation step. At temperature 0 the entries are
// sorted by descending logprob with ties broken by ascending token id; at
// temperature > 0 the order is the seeded sampling order, while the logprobs
// stay the temperature-0 values.
struct CandidatePool {
  std::int64_t position = 0;
  std::vector<PoolEntry> entries;
  int depth = 0;  // requested depth k; entries.size() <= depth
};

}  // namespace sigmark
