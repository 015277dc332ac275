#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <numeric>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "sigmark/errors.hpp"
#include "sigmark/provider.hpp"
#include "sigmark/rng.hpp"
#include "sigmark/token.hpp"

namespace sigmark {

inline constexpr std::string_view kEosSurface = "</s>";

// Whitespace tokenization, lowercased, punctuation split off as separate
// tokens. Apostrophes stay inside words ("don't"); the literal EOS marker is
// preserved as one token.
inline std::vector<std::string> word_tokenize(std::string_view text) {
  std::vector<std::string> out;
  std::string word;
  const auto flush = [&] {
    if (!word.empty()) {
      out.push_back(word);
      word.clear();
    }
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    const unsigned char c = static_cast<unsigned char>(text[i]);
    if (text.substr(i, kEosSurface.size()) == kEosSurface) {
      flush();
      out.emplace_back(kEosSurface);
      i += kEosSurface.size() - 1;
      continue;
    }
    if (std::isalnum(c)) {
      word.push_back(static_cast<char>(std::tolower(c)));
    } else if (c == '\'' && !word.empty() && i + 1 < text.size() &&
               std::isalnum(static_cast<unsigned char>(text[i + 1]))) {
      word.push_back('\'');
    } else {
      flush();
      if (!std::isspace(c)) out.push_back(std::string(1, static_cast<char>(c)));
    }
  }
  flush();
  return out;
}

struct ReferenceModelConfig {
  std::string corpus_path;
  // Interpolation weights over add-1 smoothed trigram/bigram/unigram
  // estimates. Levels whose context is unseen contribute a uniform term, so
  // ranking falls back to the lower orders on its own.
  double trigram_weight = 0.55;
  double bigram_weight = 0.30;
  double unigram_weight = 0.15;
};

// Deterministic order-3 model over a fixed training text. Immutable after
// construction; all queries are const and thread-safe.
class ReferenceProvider final : public Provider {
 public:
  explicit ReferenceProvider(const ReferenceModelConfig& config) : config_(config) {
    std::ifstream in(config.corpus_path);
    if (!in) throw FileError("cannot open reference corpus: " + config.corpus_path);
    std::ostringstream buf;
    buf << in.rdbuf();
    build(buf.str());
  }

  static ReferenceProvider from_text(std::string_view text,
                                     ReferenceModelConfig config = {}) {
    return ReferenceProvider(text, config);
  }

  std::vector<Token> tokenize(std::string_view text) const override {
    std::vector<Token> out;
    for (auto& w : word_tokenize(text)) {
      Token t;
      t.id = lookup(w);
      t.surface = std::move(w);
      out.push_back(std::move(t));
    }
    return out;
  }

  std::string detokenize(std::span<const Token> tokens) const override {
    std::string out;
    for (const Token& t : tokens) {
      if (!out.empty()) out.push_back(' ');
      out += t.surface;
    }
    return out;
  }

  std::int32_t vocab_size() const override { return static_cast<std::int32_t>(vocab_.size()); }

  std::optional<std::int32_t> eos_id() const override {
    const std::int32_t id = lookup(std::string(kEosSurface));
    if (id < 0) return std::nullopt;
    return id;
  }

  Token token_from_id(std::int32_t id) const { return Token{id, vocab_[static_cast<std::size_t>(id)]}; }

  CandidatePool next_pool(std::span<const Token> prefix, const PoolRequest& req) const override {
    if (prefix.empty())
      throw ProviderError("reference model: prefix must be non-empty");
    if (req.depth < 1) throw ProviderError("reference model: pool depth must be >= 1");
    if (vocab_.empty()) throw EmptyVocabulary("reference model: empty vocabulary");

    const Context ctx = context_of(prefix);
    CandidatePool pool;
    pool.position = static_cast<std::int64_t>(prefix.size());
    pool.depth = req.depth;
    if (req.temperature > kMinSamplingTemperature) {
      pool.entries = sampled_entries(ctx, req, prefix);
    } else {
      // Below this the sampled order coincides with the raw order; keep the
      // t -> 0 limit exact instead of numerically approximate.
      pool.entries = top_entries(ctx, req.depth);
    }
    return pool;
  }

  static constexpr double kMinSamplingTemperature = 1e-3;

  double score_token(std::span<const Token> prefix, const Token& actual) const override {
    if (actual.id < 0 || actual.id >= vocab_size()) return kLogprobFloor;
    const Context ctx = context_of(prefix);
    return std::log(probability(ctx, actual.id));
  }

 private:
  struct ContextCounts {
    std::int64_t total = 0;
    std::vector<std::pair<std::int32_t, std::int32_t>> continuations;  // (token, count), id-sorted
  };

  struct Context {
    std::int32_t a = -1;  // second-to-last prefix token, -1 when absent
    std::int32_t b = -1;  // last prefix token
    const ContextCounts* tri = nullptr;
    const ContextCounts* bi = nullptr;
  };

  ReferenceProvider(std::string_view text, ReferenceModelConfig config) : config_(std::move(config)) {
    build(std::string(text));
  }

  void build(const std::string& text) {
    // Paragraphs separated by blank lines each end in the EOS marker.
    std::vector<std::int32_t> stream;
    std::vector<std::string> surfaces;
    {
      std::istringstream lines(text);
      std::string line, para;
      const auto flush_para = [&] {
        if (para.empty()) return;
        for (auto& w : word_tokenize(para)) surfaces.push_back(std::move(w));
        surfaces.emplace_back(kEosSurface);
        para.clear();
      };
      while (std::getline(lines, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
          flush_para();
        } else {
          para += line;
          para.push_back(' ');
        }
      }
      flush_para();
    }
    if (surfaces.empty()) throw EmptyVocabulary("reference model: empty training text");

    vocab_.assign(surfaces.begin(), surfaces.end());
    std::sort(vocab_.begin(), vocab_.end());
    vocab_.erase(std::unique(vocab_.begin(), vocab_.end()), vocab_.end());
    vocab_index_.reserve(vocab_.size() * 2);
    for (std::size_t i = 0; i < vocab_.size(); ++i)
      vocab_index_.emplace(vocab_[i], static_cast<std::int32_t>(i));

    stream.reserve(surfaces.size());
    for (const auto& s : surfaces) stream.push_back(vocab_index_.at(s));

    const std::size_t v = vocab_.size();
    unigram_.assign(v, 0);
    for (std::int32_t id : stream) ++unigram_[static_cast<std::size_t>(id)];
    unigram_total_ = static_cast<std::int64_t>(stream.size());

    std::unordered_map<std::uint64_t, std::int32_t> bi, tri;
    for (std::size_t i = 0; i + 1 < stream.size(); ++i)
      ++bi[pack2(stream[i], stream[i + 1])];
    for (std::size_t i = 0; i + 2 < stream.size(); ++i)
      ++tri[pack3(stream[i], stream[i + 1], stream[i + 2])];

    for (const auto& [key, count] : bi) {
      auto& ctx = bigram_[static_cast<std::int32_t>(key >> 32)];
      ctx.total += count;
      ctx.continuations.emplace_back(static_cast<std::int32_t>(key & 0xffffffffULL), count);
    }
    for (const auto& [key, count] : tri) {
      auto& ctx = trigram_[key / static_cast<std::uint64_t>(v)];
      ctx.total += count;
      ctx.continuations.emplace_back(static_cast<std::int32_t>(key % v), count);
    }
    for (auto& [_, ctx] : bigram_) std::sort(ctx.continuations.begin(), ctx.continuations.end());
    for (auto& [_, ctx] : trigram_) std::sort(ctx.continuations.begin(), ctx.continuations.end());

    // Tokens ordered by (unigram count desc, id asc): the exact ranking of
    // every token the sparse trigram/bigram terms do not touch.
    unigram_order_.resize(v);
    std::iota(unigram_order_.begin(), unigram_order_.end(), 0);
    std::sort(unigram_order_.begin(), unigram_order_.end(), [&](std::int32_t x, std::int32_t y) {
      const auto cx = unigram_[static_cast<std::size_t>(x)];
      const auto cy = unigram_[static_cast<std::size_t>(y)];
      return cx != cy ? cx > cy : x < y;
    });

    unigram_term_.resize(v);
    for (std::size_t i = 0; i < v; ++i)
      unigram_term_[i] = config_.unigram_weight * static_cast<double>(unigram_[i] + 1) /
                         static_cast<double>(unigram_total_ + static_cast<std::int64_t>(v));
  }

  std::int32_t lookup(const std::string& surface) const {
    const auto it = vocab_index_.find(surface);
    return it == vocab_index_.end() ? -1 : it->second;
  }

  std::uint64_t pack2(std::int32_t a, std::int32_t b) const {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
           static_cast<std::uint32_t>(b);
  }
  std::uint64_t pack3(std::int32_t a, std::int32_t b, std::int32_t c) const {
    const std::uint64_t v = vocab_.size();
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) * v +
            static_cast<std::uint32_t>(b)) *
               v +
           static_cast<std::uint32_t>(c);
  }

  Context context_of(std::span<const Token> prefix) const {
    Context ctx;
    if (!prefix.empty()) ctx.b = prefix.back().id;
    if (prefix.size() >= 2) ctx.a = prefix[prefix.size() - 2].id;
    if (ctx.b >= 0) {
      if (const auto it = bigram_.find(ctx.b); it != bigram_.end()) ctx.bi = &it->second;
      if (ctx.a >= 0) {
        const std::uint64_t key =
            static_cast<std::uint64_t>(static_cast<std::uint32_t>(ctx.a)) * vocab_.size() +
            static_cast<std::uint32_t>(ctx.b);
        if (const auto it = trigram_.find(key); it != trigram_.end()) ctx.tri = &it->second;
      }
    }
    return ctx;
  }

  static std::int32_t count_in(const ContextCounts* ctx, std::int32_t token) {
    if (!ctx) return 0;
    const auto it = std::lower_bound(ctx->continuations.begin(), ctx->continuations.end(),
                                     std::make_pair(token, std::int32_t{0}));
    return (it != ctx->continuations.end() && it->first == token) ? it->second : 0;
  }

  double probability(const Context& ctx, std::int32_t token) const {
    const double v = static_cast<double>(vocab_.size());
    const double tri_total = ctx.tri ? static_cast<double>(ctx.tri->total) : 0.0;
    const double bi_total = ctx.bi ? static_cast<double>(ctx.bi->total) : 0.0;
    return config_.trigram_weight * (count_in(ctx.tri, token) + 1) / (tri_total + v) +
           config_.bigram_weight * (count_in(ctx.bi, token) + 1) / (bi_total + v) +
           unigram_term_[static_cast<std::size_t>(token)];
  }

  std::vector<PoolEntry> top_entries(const Context& ctx, int depth) const {
    // Exact top-k: candidates are the sparse continuations plus enough of the
    // static unigram order to cover every untouched token that could place.
    std::vector<std::int32_t> candidates;
    if (ctx.tri)
      for (const auto& [tok, _] : ctx.tri->continuations) candidates.push_back(tok);
    if (ctx.bi)
      for (const auto& [tok, _] : ctx.bi->continuations) candidates.push_back(tok);
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

    const auto is_sparse = [&](std::int32_t id) {
      return std::binary_search(candidates.begin(), candidates.end(), id);
    };
    int untouched = 0;
    std::vector<std::int32_t> pool = candidates;
    for (std::int32_t id : unigram_order_) {
      if (untouched >= depth) break;
      if (is_sparse(id)) continue;
      pool.push_back(id);
      ++untouched;
    }

    std::vector<std::pair<double, std::int32_t>> scored;
    scored.reserve(pool.size());
    for (std::int32_t id : pool) scored.emplace_back(probability(ctx, id), id);
    const std::size_t take = std::min<std::size_t>(static_cast<std::size_t>(depth), scored.size());
    std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(take),
                      scored.end(), [](const auto& x, const auto& y) {
                        return x.first != y.first ? x.first > y.first : x.second < y.second;
                      });

    std::vector<PoolEntry> entries;
    entries.reserve(take);
    for (std::size_t i = 0; i < take; ++i)
      entries.push_back(PoolEntry{token_from_id(scored[i].second), std::log(scored[i].first)});
    return entries;
  }

  // Sampling without replacement from softmax(logits / t) over the whole
  // vocabulary; the sampled order is the pool order, logprobs stay raw.
  std::vector<PoolEntry> sampled_entries(const Context& ctx, const PoolRequest& req,
                                         std::span<const Token> prefix) const {
    const std::size_t v = vocab_.size();
    std::vector<double> weights(v);
    const double inv_t = 1.0 / req.temperature;
    std::vector<double> raw(v);
    {
      const double tri_total = ctx.tri ? static_cast<double>(ctx.tri->total) : 0.0;
      const double bi_total = ctx.bi ? static_cast<double>(ctx.bi->total) : 0.0;
      const double k = config_.trigram_weight / (tri_total + static_cast<double>(v)) +
                       config_.bigram_weight / (bi_total + static_cast<double>(v));
      for (std::size_t i = 0; i < v; ++i) raw[i] = unigram_term_[i] + k;
      if (ctx.tri)
        for (const auto& [tok, count] : ctx.tri->continuations)
          raw[static_cast<std::size_t>(tok)] +=
              config_.trigram_weight * count / (tri_total + static_cast<double>(v));
      if (ctx.bi)
        for (const auto& [tok, count] : ctx.bi->continuations)
          raw[static_cast<std::size_t>(tok)] +=
              config_.bigram_weight * count / (bi_total + static_cast<double>(v));
    }
    // Normalizing by the max before exponentiation keeps the weights in
    // range at low temperatures (1/t large would underflow everything).
    const double raw_max = *std::max_element(raw.begin(), raw.end());
    double total = 0.0;
    for (std::size_t i = 0; i < v; ++i) {
      weights[i] = std::pow(raw[i] / raw_max, inv_t);
      total += weights[i];
    }

    Rng rng(mix_seed(req.seed, hash_prefix(prefix)));
    const int take = std::min<int>(req.depth, static_cast<int>(v));
    std::vector<PoolEntry> entries;
    entries.reserve(static_cast<std::size_t>(take));
    for (int j = 0; j < take; ++j) {
      const double u = rng.next_double() * total;
      double acc = 0.0;
      std::size_t chosen = v;
      for (std::size_t i = 0; i < v; ++i) {
        if (weights[i] <= 0.0) continue;
        acc += weights[i];
        chosen = i;
        if (acc >= u) break;
      }
      if (chosen == v) break;  // all mass consumed (rounding)
      entries.push_back(
          PoolEntry{token_from_id(static_cast<std::int32_t>(chosen)), std::log(raw[chosen])});
      total -= weights[chosen];
      weights[chosen] = 0.0;
    }
    return entries;
  }

  ReferenceModelConfig config_;
  std::vector<std::string> vocab_;
  std::unordered_map<std::string, std::int32_t> vocab_index_;
  std::vector<std::int64_t> unigram_;
  std::int64_t unigram_total_ = 0;
  std::vector<double> unigram_term_;
  std::vector<std::int32_t> unigram_order_;
  std::unordered_map<std::int32_t, ContextCounts> bigram_;
  std::unordered_map<std::uint64_t, ContextCounts> trigram_;
};

}  // namespace sigmark
