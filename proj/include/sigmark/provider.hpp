#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sigmark/rng.hpp"
#include "sigmark/token.hpp"

namespace sigmark {

enum class ProviderKind { reference, remote };

struct RemoteSettings {
  std::string base_url = "http://localhost:8080";
  std::string model = "text-davinci-003";
  std::string auth_env = "SIGMARK_API_TOKEN";
  int timeout_ms = 30000;
  int max_retries = 3;
  int backoff_ms = 250;
  int max_concurrent = 4;
};

struct ProviderConfig {
  ProviderKind kind = ProviderKind::reference;
  int top_k = 5;
  double temperature = 0.0;
  std::uint64_t seed = 1;
  std::string corpus_path;  // reference model training text
  RemoteSettings remote;
};

// One pool fetch. The seed, mixed with a hash of the prefix, fixes the noise
// stream, so identical calls return identical pools at any temperature.
struct PoolRequest {
  int depth = 5;
  double temperature = 0.0;
  std::uint64_t seed = 1;
};

inline std::uint64_t hash_prefix(std::span<const Token> prefix) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const Token& t : prefix) {
    if (t.id >= 0) {
      h = (h ^ static_cast<std::uint64_t>(t.id)) * 0x100000001b3ULL;
    } else {
      for (unsigned char c : t.surface) h = (h ^ c) * 0x100000001b3ULL;
    }
  }
  return h;
}

class Provider {
 public:
  virtual ~Provider() = default;

  virtual std::vector<Token> tokenize(std::string_view text) const = 0;
  virtual std::string detokenize(std::span<const Token> tokens) const = 0;
  virtual std::int32_t vocab_size() const = 0;
  virtual std::optional<std::int32_t> eos_id() const = 0;

  virtual CandidatePool next_pool(std::span<const Token> prefix,
                                  const PoolRequest& req) const = 0;

  // Temperature-0 natural-log probability of `actual` after `prefix`.
  virtual double score_token(std::span<const Token> prefix, const Token& actual) const = 0;
};

// Out-of-vocabulary scoring floor; keeps perplexity finite.
inline constexpr double kLogprobFloor = -23.025850929940457;  // ln(1e-10)

// The pool pipeline shared by embedding and re-computation: when the EOS
// token is suppressed, one extra entry is fetched so the filtered pool still
// reaches the configured depth.
inline CandidatePool filtered_pool(const Provider& provider, std::span<const Token> prefix,
                                   const ProviderConfig& config, bool suppress_eos) {
  const auto eos = provider.eos_id();
  const bool filter = suppress_eos && eos.has_value();
  PoolRequest req{config.top_k + (filter ? 1 : 0), config.temperature, config.seed};
  CandidatePool pool = provider.next_pool(prefix, req);
  if (filter) {
    std::erase_if(pool.entries, [&](const PoolEntry& e) { return e.token.id == *eos; });
    if (pool.entries.size() > static_cast<std::size_t>(config.top_k))
      pool.entries.resize(static_cast<std::size_t>(config.top_k));
  }
  pool.depth = config.top_k;
  return pool;
}

}  // namespace sigmark
