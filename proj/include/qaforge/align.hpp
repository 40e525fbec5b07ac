#pragma once

// Unsupervised word alignment: IBM Model 1 lexical translation tables
// trained by EM (optionally by collapsed Gibbs sampling), Viterbi decoding
// of directional alignments, grow-diag-final-and symmetrization, and
// Pharaoh-format interchange with external aligners.

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <string_view>
#include <thread>
#include <unordered_map>
#include <vector>

#include "json.hpp"

#include "qaforge/errors.hpp"
#include "qaforge/ioutil.hpp"

namespace qaforge::align {

using Tokens = std::vector<std::string>;

struct SentencePair {
  Tokens src;
  Tokens tgt;
};

struct ParallelCorpus {
  std::vector<SentencePair> pairs;
};

struct Link {
  int src = 0;
  int tgt = 0;
  auto operator<=>(const Link&) const = default;
};

enum class Direction { forward, reverse, symmetrized };

// A set of alignment links over one sentence pair. Links are kept sorted and
// unique; indices are bounded by the recorded sentence dimensions.
struct AlignmentLinkSet {
  Direction dir = Direction::forward;
  int src_len = 0;
  int tgt_len = 0;
  std::vector<Link> links;

  void add(Link l) {
    auto it = std::lower_bound(links.begin(), links.end(), l);
    if (it == links.end() || *it != l) links.insert(it, l);
  }

  bool contains(Link l) const { return std::binary_search(links.begin(), links.end(), l); }

  void normalize() {
    std::sort(links.begin(), links.end());
    links.erase(std::unique(links.begin(), links.end()), links.end());
  }

  AlignmentLinkSet transposed() const {
    AlignmentLinkSet out;
    out.dir = dir;
    out.src_len = tgt_len;
    out.tgt_len = src_len;
    out.links.reserve(links.size());
    for (const Link& l : links) out.links.push_back({l.tgt, l.src});
    out.normalize();
    return out;
  }

  bool operator==(const AlignmentLinkSet& other) const { return links == other.links; }
};

inline constexpr std::string_view kNullWord = "<NULL>";

// Conditional lexical translation probabilities t(target | source) with a
// reserved NULL source word and add-alpha smoothing. Rows are normalized
// over the vocabulary observed to co-occur with the source word; lookups of
// unseen pairs fall back to the row's smoothing floor.
class LexiconTable {
public:
  static constexpr std::int32_t kNullId = 0;

  explicit LexiconTable(double alpha = 1e-3) : alpha_(alpha) {}

  double alpha() const { return alpha_; }

  std::int32_t src_id(std::string_view word) const {
    if (word == kNullWord) return kNullId;
    auto it = src_vocab_.find(std::string(word));
    return it == src_vocab_.end() ? -1 : it->second;
  }

  std::int32_t tgt_id(std::string_view word) const {
    auto it = tgt_vocab_.find(std::string(word));
    return it == tgt_vocab_.end() ? -1 : it->second;
  }

  double prob_ids(std::int32_t src, std::int32_t tgt) const {
    if (src < 0 || src >= static_cast<std::int32_t>(rows_.size()) || tgt < 0)
      return kUnknownProb;
    const auto& row = rows_[static_cast<std::size_t>(src)];
    auto it = row.find(tgt);
    if (it != row.end()) return it->second;
    return floors_[static_cast<std::size_t>(src)];
  }

  double prob(std::string_view src, std::string_view tgt) const {
    return prob_ids(src_id(src), tgt_id(tgt));
  }

  std::size_t src_vocab_size() const { return rows_.size(); } // includes NULL
  std::size_t tgt_vocab_size() const { return tgt_vocab_.size(); }

  double row_sum(std::int32_t src) const {
    double s = 0.0;
    for (const auto& [tgt, p] : rows_.at(static_cast<std::size_t>(src))) s += p;
    return s;
  }

  const std::unordered_map<std::int32_t, double>& row(std::int32_t src) const {
    return rows_.at(static_cast<std::size_t>(src));
  }

  // Builds a table from explicit (source, target, weight) entries; weights
  // are normalized per source row. Source kNullWord names the NULL row.
  static LexiconTable from_entries(
      double alpha, const std::vector<std::tuple<std::string, std::string, double>>& entries) {
    LexiconTable t(alpha);
    for (const auto& [src, tgt, w] : entries) {
      std::int32_t si = t.intern_src(src);
      std::int32_t ti = t.intern_tgt(tgt);
      t.rows_[static_cast<std::size_t>(si)][ti] += w;
    }
    t.floors_.assign(t.rows_.size(), kUnknownProb);
    for (std::size_t si = 0; si < t.rows_.size(); ++si) {
      double sum = 0.0;
      for (auto& [ti, w] : t.rows_[si]) sum += w;
      if (sum <= 0.0) continue;
      for (auto& [ti, w] : t.rows_[si]) w /= sum;
    }
    return t;
  }

private:
  friend class Ibm1Trainer;
  friend LexiconTable train_ibm1_gibbs(const ParallelCorpus&, int, double, std::uint64_t, int);

  static constexpr double kUnknownProb = 1e-12;

  std::int32_t intern_src(std::string_view word) {
    if (word == kNullWord) {
      ensure_null_row();
      return kNullId;
    }
    ensure_null_row();
    auto [it, inserted] = src_vocab_.try_emplace(std::string(word),
                                                 static_cast<std::int32_t>(rows_.size()));
    if (inserted) rows_.emplace_back();
    return it->second;
  }

  std::int32_t intern_tgt(std::string_view word) {
    auto [it, inserted] = tgt_vocab_.try_emplace(std::string(word),
                                                 static_cast<std::int32_t>(tgt_vocab_.size()));
    return it->second;
  }

  void ensure_null_row() {
    if (rows_.empty()) rows_.emplace_back(); // row 0 = NULL
  }

  double alpha_;
  std::unordered_map<std::string, std::int32_t> src_vocab_; // real words, ids >= 1
  std::unordered_map<std::string, std::int32_t> tgt_vocab_;
  std::vector<std::unordered_map<std::int32_t, double>> rows_;
  std::vector<double> floors_;
};

struct Ibm1Options {
  double alpha = 1e-3;
  // Pairs with more tokens than this on either side are excluded from
  // training (degenerate MT outputs would dominate runtime); they can still
  // be decoded.
  int token_cap = 200;
};

// EM trainer for IBM Model 1. E-step posteriors range over source positions
// plus NULL; the M-step renormalizes expected counts with add-alpha
// smoothing, so every row sums to 1 after each iteration.
class Ibm1Trainer {
public:
  Ibm1Trainer(const ParallelCorpus& corpus, Ibm1Options options = {})
      : table_(options.alpha), options_(options) {
    if (corpus.pairs.empty()) throw EmptyCorpus("parallel corpus has no sentence pairs");
    for (const SentencePair& pair : corpus.pairs) {
      if (pair.src.empty() || pair.tgt.empty())
        throw EmptyCorpus("sentence pair with an empty side");
      if (static_cast<int>(pair.src.size()) > options.token_cap ||
          static_cast<int>(pair.tgt.size()) > options.token_cap)
        continue;
      Encoded enc;
      enc.src.reserve(pair.src.size());
      enc.tgt.reserve(pair.tgt.size());
      for (const std::string& w : pair.src) enc.src.push_back(table_.intern_src(w));
      for (const std::string& w : pair.tgt) enc.tgt.push_back(table_.intern_tgt(w));
      encoded_.push_back(std::move(enc));
    }
    if (encoded_.empty())
      throw EmptyCorpus("no trainable sentence pairs within the token cap");
    init_uniform();
  }

  void iterate(int n = 1, int jobs = 1) {
    for (int k = 0; k < n; ++k) {
      auto counts = expected_counts(jobs);
      m_step(counts);
      ++iterations_done_;
    }
  }

  int iterations_done() const { return iterations_done_; }
  const LexiconTable& table() const { return table_; }

  // Corpus log-likelihood under the current table, with the uniform
  // 1/(l+1) alignment factor per target word.
  double log_likelihood() const {
    double ll = 0.0;
    for (const Encoded& enc : encoded_) {
      double log_norm = std::log(static_cast<double>(enc.src.size() + 1));
      for (std::int32_t f : enc.tgt) {
        double denom = table_.prob_ids(LexiconTable::kNullId, f);
        for (std::int32_t e : enc.src) denom += table_.prob_ids(e, f);
        ll += std::log(denom) - log_norm;
      }
    }
    return ll;
  }

private:
  struct Encoded {
    std::vector<std::int32_t> src;
    std::vector<std::int32_t> tgt;
  };

  using CountRows = std::vector<std::unordered_map<std::int32_t, double>>;

  void init_uniform() {
    for (const Encoded& enc : encoded_) {
      for (std::int32_t f : enc.tgt) {
        table_.rows_[LexiconTable::kNullId][f] = 1.0;
        for (std::int32_t e : enc.src) table_.rows_[static_cast<std::size_t>(e)][f] = 1.0;
      }
    }
    for (auto& row : table_.rows_) {
      if (row.empty()) continue;
      double p = 1.0 / static_cast<double>(row.size());
      for (auto& [f, v] : row) v = p;
    }
    table_.floors_.assign(table_.rows_.size(), LexiconTable::kUnknownProb);
  }

  void accumulate(const Encoded& enc, CountRows& counts) const {
    for (std::int32_t f : enc.tgt) {
      double null_p = table_.prob_ids(LexiconTable::kNullId, f);
      double denom = null_p;
      for (std::int32_t e : enc.src) denom += table_.prob_ids(e, f);
      if (denom <= 0.0) continue;
      counts[LexiconTable::kNullId][f] += null_p / denom;
      for (std::int32_t e : enc.src)
        counts[static_cast<std::size_t>(e)][f] += table_.prob_ids(e, f) / denom;
    }
  }

  // Data-parallel over sentence pairs with per-thread tables merged by
  // summation in thread order. Parallel merge order can perturb counts
  // within floating-point tolerance; use jobs=1 for bit-exact runs.
  CountRows expected_counts(int jobs) const {
    CountRows counts(table_.rows_.size());
    if (jobs <= 1 || encoded_.size() < 2) {
      for (const Encoded& enc : encoded_) accumulate(enc, counts);
      return counts;
    }
    int workers = std::min<int>(jobs, static_cast<int>(encoded_.size()));
    std::vector<CountRows> partial(static_cast<std::size_t>(workers),
                                   CountRows(table_.rows_.size()));
    std::vector<std::thread> threads;
    threads.reserve(static_cast<std::size_t>(workers));
    std::size_t chunk = (encoded_.size() + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
      threads.emplace_back([this, w, chunk, &partial] {
        std::size_t begin = static_cast<std::size_t>(w) * chunk;
        std::size_t end = std::min(begin + chunk, encoded_.size());
        for (std::size_t k = begin; k < end; ++k) accumulate(encoded_[k], partial[w]);
      });
    }
    for (auto& t : threads) t.join();
    for (const CountRows& part : partial)
      for (std::size_t e = 0; e < part.size(); ++e)
        for (const auto& [f, c] : part[e]) counts[e][f] += c;
    return counts;
  }

  void m_step(const CountRows& counts) {
    for (std::size_t e = 0; e < table_.rows_.size(); ++e) {
      auto& row = table_.rows_[e];
      if (row.empty()) continue;
      const auto& crow = counts[e];
      double total = 0.0;
      for (const auto& [f, c] : crow) total += c;
      double denom = total + table_.alpha_ * static_cast<double>(row.size());
      for (auto& [f, p] : row) {
        auto it = crow.find(f);
        double c = it == crow.end() ? 0.0 : it->second;
        p = (c + table_.alpha_) / denom;
      }
      table_.floors_[e] = table_.alpha_ / denom;
    }
  }

  LexiconTable table_;
  Ibm1Options options_;
  std::vector<Encoded> encoded_;
  int iterations_done_ = 0;
};

inline LexiconTable train_ibm1(const ParallelCorpus& corpus, int iterations, double alpha,
                               int jobs = 1) {
  if (iterations < 1) throw std::invalid_argument("train_ibm1: iterations must be >= 1");
  if (alpha <= 0.0) throw std::invalid_argument("train_ibm1: alpha must be > 0");
  Ibm1Trainer trainer(corpus, {alpha});
  trainer.iterate(iterations, jobs);
  return trainer.table();
}

// Collapsed Gibbs sampling alternative to EM, seeded and reproducible.
// Alignment variables are resampled sweep by sweep from leave-one-out
// count ratios; the returned table is the smoothed count estimate after the
// final sweep.
inline LexiconTable train_ibm1_gibbs(const ParallelCorpus& corpus, int sweeps, double alpha,
                                     std::uint64_t seed, int token_cap = 200) {
  if (sweeps < 1) throw std::invalid_argument("train_ibm1_gibbs: sweeps must be >= 1");
  if (alpha <= 0.0) throw std::invalid_argument("train_ibm1_gibbs: alpha must be > 0");
  LexiconTable table(alpha);
  struct Encoded {
    std::vector<std::int32_t> src, tgt;
    std::vector<std::int32_t> assign; // index into src, -1 = NULL
  };
  std::vector<Encoded> encoded;
  if (corpus.pairs.empty()) throw EmptyCorpus("parallel corpus has no sentence pairs");
  for (const SentencePair& pair : corpus.pairs) {
    if (pair.src.empty() || pair.tgt.empty())
      throw EmptyCorpus("sentence pair with an empty side");
    if (static_cast<int>(pair.src.size()) > token_cap ||
        static_cast<int>(pair.tgt.size()) > token_cap)
      continue;
    Encoded enc;
    for (const std::string& w : pair.src) enc.src.push_back(table.intern_src(w));
    for (const std::string& w : pair.tgt) enc.tgt.push_back(table.intern_tgt(w));
    enc.assign.assign(enc.tgt.size(), -1);
    encoded.push_back(std::move(enc));
  }
  if (encoded.empty()) throw EmptyCorpus("no trainable sentence pairs within the token cap");

  std::mt19937_64 rng(seed);
  const auto next_unit = [&rng]() { return (rng() >> 11) * 0x1.0p-53; };

  std::vector<std::unordered_map<std::int32_t, double>> n_ef(table.rows_.size());
  std::vector<double> n_e(table.rows_.size(), 0.0);
  const double vt = static_cast<double>(table.tgt_vocab_.size());

  const auto bump = [&](std::int32_t e, std::int32_t f, double d) {
    n_ef[static_cast<std::size_t>(e)][f] += d;
    n_e[static_cast<std::size_t>(e)] += d;
  };

  // Random initial assignment.
  for (Encoded& enc : encoded) {
    for (std::size_t j = 0; j < enc.tgt.size(); ++j) {
      std::size_t pick = static_cast<std::size_t>(next_unit() * static_cast<double>(enc.src.size() + 1));
      if (pick > enc.src.size()) pick = enc.src.size();
      enc.assign[j] = pick == enc.src.size() ? -1 : static_cast<std::int32_t>(pick);
      std::int32_t e = enc.assign[j] < 0 ? LexiconTable::kNullId
                                         : enc.src[static_cast<std::size_t>(enc.assign[j])];
      bump(e, enc.tgt[j], 1.0);
    }
  }

  std::vector<double> weights;
  for (int sweep = 0; sweep < sweeps; ++sweep) {
    for (Encoded& enc : encoded) {
      for (std::size_t j = 0; j < enc.tgt.size(); ++j) {
        std::int32_t f = enc.tgt[j];
        std::int32_t old_e = enc.assign[j] < 0 ? LexiconTable::kNullId
                                               : enc.src[static_cast<std::size_t>(enc.assign[j])];
        bump(old_e, f, -1.0);
        weights.assign(enc.src.size() + 1, 0.0);
        double total = 0.0;
        for (std::size_t i = 0; i <= enc.src.size(); ++i) {
          std::int32_t e = i == enc.src.size() ? LexiconTable::kNullId : enc.src[i];
          const auto& row = n_ef[static_cast<std::size_t>(e)];
          auto it = row.find(f);
          double cef = it == row.end() ? 0.0 : it->second;
          double w = (cef + alpha) / (n_e[static_cast<std::size_t>(e)] + alpha * vt);
          weights[i] = w;
          total += w;
        }
        double r = next_unit() * total;
        std::size_t pick = 0;
        for (; pick + 1 < weights.size(); ++pick) {
          r -= weights[pick];
          if (r <= 0.0) break;
        }
        enc.assign[j] = pick == enc.src.size() ? -1 : static_cast<std::int32_t>(pick);
        std::int32_t new_e = enc.assign[j] < 0 ? LexiconTable::kNullId
                                               : enc.src[static_cast<std::size_t>(enc.assign[j])];
        bump(new_e, f, 1.0);
      }
    }
  }

  // Row shapes follow observed co-occurrence, like the EM initializer.
  for (const Encoded& enc : encoded) {
    for (std::int32_t f : enc.tgt) {
      table.rows_[LexiconTable::kNullId][f] = 0.0;
      for (std::int32_t e : enc.src) table.rows_[static_cast<std::size_t>(e)][f] = 0.0;
    }
  }
  table.floors_.assign(table.rows_.size(), 1e-12);
  for (std::size_t e = 0; e < table.rows_.size(); ++e) {
    auto& row = table.rows_[e];
    if (row.empty()) continue;
    const auto& crow = n_ef[e];
    double total = 0.0;
    for (const auto& [f, c] : crow) total += c;
    double denom = total + alpha * static_cast<double>(row.size());
    for (auto& [f, p] : row) {
      auto it = crow.find(f);
      double c = it == crow.end() ? 0.0 : it->second;
      p = (c + alpha) / denom;
    }
    table.floors_[e] = alpha / denom;
  }
  return table;
}

// Viterbi decoding: each target word links to its argmax source word. Ties
// go to the smallest source index; NULL wins only when strictly better than
// every real source word, and NULL links are omitted from the result.
inline AlignmentLinkSet viterbi_align(const LexiconTable& lexicon, const SentencePair& pair,
                                      Direction direction = Direction::forward) {
  AlignmentLinkSet out;
  out.dir = direction;
  out.src_len = static_cast<int>(pair.src.size());
  out.tgt_len = static_cast<int>(pair.tgt.size());
  if (pair.src.empty() || pair.tgt.empty()) return out;

  std::vector<std::int32_t> src_ids;
  src_ids.reserve(pair.src.size());
  for (const std::string& w : pair.src) src_ids.push_back(lexicon.src_id(w));

  for (std::size_t j = 0; j < pair.tgt.size(); ++j) {
    std::int32_t f = lexicon.tgt_id(pair.tgt[j]);
    if (f < 0) continue; // word never seen in training: align to NULL
    double best = -1.0;
    int best_i = -1;
    for (std::size_t i = 0; i < src_ids.size(); ++i) {
      double p = lexicon.prob_ids(src_ids[i], f);
      if (p > best) {
        best = p;
        best_i = static_cast<int>(i);
      }
    }
    double null_p = lexicon.prob_ids(LexiconTable::kNullId, f);
    if (null_p > best) continue;
    out.add({best_i, static_cast<int>(j)});
  }
  return out;
}

// Grow-diag-final-and symmetrization. Starts from the intersection, grows
// along the 8-neighborhood within the union while one endpoint is still
// unaligned, then applies the final AND pass over forward and reverse links.
// Scan order is row-major ascending throughout.
inline AlignmentLinkSet symmetrize_gdfa(const AlignmentLinkSet& forward,
                                        const AlignmentLinkSet& reverse) {
  if (forward.src_len != reverse.src_len || forward.tgt_len != reverse.tgt_len)
    throw DimensionMismatch("symmetrize_gdfa: sentence dimensions differ");
  const int rows = forward.src_len;
  const int cols = forward.tgt_len;

  AlignmentLinkSet out;
  out.dir = Direction::symmetrized;
  out.src_len = rows;
  out.tgt_len = cols;
  if (rows == 0 || cols == 0) return out;

  const auto idx = [cols](int i, int j) { return static_cast<std::size_t>(i) * cols + j; };
  std::vector<char> fwd(static_cast<std::size_t>(rows) * cols, 0);
  std::vector<char> rev(fwd.size(), 0);
  std::vector<char> in_union(fwd.size(), 0);
  std::vector<char> aligned(fwd.size(), 0);
  std::vector<int> src_deg(static_cast<std::size_t>(rows), 0);
  std::vector<int> tgt_deg(static_cast<std::size_t>(cols), 0);

  for (const Link& l : forward.links) {
    if (l.src < 0 || l.src >= rows || l.tgt < 0 || l.tgt >= cols)
      throw DimensionMismatch("symmetrize_gdfa: link outside sentence dimensions");
    fwd[idx(l.src, l.tgt)] = 1;
    in_union[idx(l.src, l.tgt)] = 1;
  }
  for (const Link& l : reverse.links) {
    if (l.src < 0 || l.src >= rows || l.tgt < 0 || l.tgt >= cols)
      throw DimensionMismatch("symmetrize_gdfa: link outside sentence dimensions");
    rev[idx(l.src, l.tgt)] = 1;
    in_union[idx(l.src, l.tgt)] = 1;
  }

  const auto link = [&](int i, int j) {
    aligned[idx(i, j)] = 1;
    ++src_deg[static_cast<std::size_t>(i)];
    ++tgt_deg[static_cast<std::size_t>(j)];
  };

  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j)
      if (fwd[idx(i, j)] && rev[idx(i, j)]) link(i, j);

  static constexpr int kNeighbors[8][2] = {{-1, 0}, {0, -1}, {1, 0}, {0, 1},
                                           {-1, -1}, {-1, 1}, {1, -1}, {1, 1}};
  bool changed = true;
  while (changed) {
    changed = false;
    for (int i = 0; i < rows; ++i) {
      for (int j = 0; j < cols; ++j) {
        if (!aligned[idx(i, j)]) continue;
        for (const auto& d : kNeighbors) {
          int ni = i + d[0];
          int nj = j + d[1];
          if (ni < 0 || ni >= rows || nj < 0 || nj >= cols) continue;
          if (aligned[idx(ni, nj)] || !in_union[idx(ni, nj)]) continue;
          if (src_deg[static_cast<std::size_t>(ni)] == 0 ||
              tgt_deg[static_cast<std::size_t>(nj)] == 0) {
            link(ni, nj);
            changed = true;
          }
        }
      }
    }
  }

  const auto final_and = [&](const std::vector<char>& dirset) {
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j)
        if (dirset[idx(i, j)] && !aligned[idx(i, j)] &&
            src_deg[static_cast<std::size_t>(i)] == 0 &&
            tgt_deg[static_cast<std::size_t>(j)] == 0)
          link(i, j);
  };
  final_and(fwd);
  final_and(rev);

  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j)
      if (aligned[idx(i, j)]) out.links.push_back({i, j});
  return out;
}

// Pharaoh text format: line k holds space-separated "i-j" pairs for sentence
// pair k. Dimensions are inferred as max index + 1.
inline std::vector<AlignmentLinkSet> parse_pharaoh(std::string_view text,
                                                   Direction dir = Direction::symmetrized) {
  std::vector<AlignmentLinkSet> out;
  io::for_each_line(text, [&](std::string_view line, std::size_t lineno) {
    AlignmentLinkSet set;
    set.dir = dir;
    std::size_t pos = 0;
    while (pos < line.size()) {
      while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t')) ++pos;
      if (pos >= line.size()) break;
      std::size_t end = pos;
      while (end < line.size() && line[end] != ' ' && line[end] != '\t') ++end;
      std::string_view item = line.substr(pos, end - pos);
      pos = end;
      std::size_t dash = item.find('-');
      if (dash == std::string_view::npos || dash == 0 || dash + 1 >= item.size())
        throw ParseError("pharaoh line " + std::to_string(lineno + 1) + ": bad pair '" +
                         std::string(item) + "'");
      int i = 0, j = 0;
      for (char c : item.substr(0, dash)) {
        if (c < '0' || c > '9')
          throw ParseError("pharaoh line " + std::to_string(lineno + 1) + ": bad pair '" +
                           std::string(item) + "'");
        i = i * 10 + (c - '0');
      }
      for (char c : item.substr(dash + 1)) {
        if (c < '0' || c > '9')
          throw ParseError("pharaoh line " + std::to_string(lineno + 1) + ": bad pair '" +
                           std::string(item) + "'");
        j = j * 10 + (c - '0');
      }
      set.add({i, j});
      set.src_len = std::max(set.src_len, i + 1);
      set.tgt_len = std::max(set.tgt_len, j + 1);
    }
    out.push_back(std::move(set));
  });
  return out;
}

inline std::vector<AlignmentLinkSet> read_pharaoh(const std::filesystem::path& path,
                                                  Direction dir = Direction::symmetrized) {
  return parse_pharaoh(io::read_file(path), dir);
}

// One alignment as a pharaoh line, without the trailing newline.
inline std::string pharaoh_line(const AlignmentLinkSet& set) {
  std::string out;
  bool first = true;
  for (const Link& l : set.links) {
    if (!first) out.push_back(' ');
    first = false;
    out += std::to_string(l.src);
    out.push_back('-');
    out += std::to_string(l.tgt);
  }
  return out;
}

inline std::string format_pharaoh(const std::vector<AlignmentLinkSet>& alignments) {
  std::string out;
  for (const AlignmentLinkSet& set : alignments) {
    out += pharaoh_line(set);
    out.push_back('\n');
  }
  return out;
}

inline void write_pharaoh(const std::vector<AlignmentLinkSet>& alignments,
                          const std::filesystem::path& path) {
  io::write_file(path, format_pharaoh(alignments));
}

// Parallel corpus input: two text files of pre-tokenized, space-separated
// sentences, one sentence per line.
inline ParallelCorpus read_corpus(const std::filesystem::path& src_path,
                                  const std::filesystem::path& tgt_path) {
  std::vector<std::string> src_lines = io::read_lines(src_path);
  std::vector<std::string> tgt_lines = io::read_lines(tgt_path);
  if (src_lines.size() != tgt_lines.size())
    throw DimensionMismatch("corpus files differ in line count: " +
                            std::to_string(src_lines.size()) + " vs " +
                            std::to_string(tgt_lines.size()));
  const auto split_ws = [](const std::string& line) {
    Tokens toks;
    std::size_t pos = 0;
    while (pos < line.size()) {
      while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t')) ++pos;
      std::size_t end = pos;
      while (end < line.size() && line[end] != ' ' && line[end] != '\t') ++end;
      if (end > pos) toks.emplace_back(line.substr(pos, end - pos));
      pos = end;
    }
    return toks;
  };
  ParallelCorpus corpus;
  for (std::size_t k = 0; k < src_lines.size(); ++k) {
    SentencePair pair{split_ws(src_lines[k]), split_ws(tgt_lines[k])};
    if (pair.src.empty() || pair.tgt.empty())
      throw ParseError("corpus line " + std::to_string(k + 1) + ": empty sentence side");
    corpus.pairs.push_back(std::move(pair));
  }
  return corpus;
}

// JSONL corpus input: one {"src": [tokens], "tgt": [tokens]} object per line.
inline ParallelCorpus read_corpus_jsonl(const std::filesystem::path& path) {
  ParallelCorpus corpus;
  std::string data = io::read_file(path);
  io::for_each_line(data, [&](std::string_view line, std::size_t lineno) {
    if (line.empty()) return;
    nlohmann::json obj = nlohmann::json::parse(line, nullptr, false);
    if (obj.is_discarded() || !obj.is_object() || !obj.contains("src") || !obj.contains("tgt"))
      throw ParseError("corpus jsonl line " + std::to_string(lineno + 1) +
                       ": expected {\"src\": [...], \"tgt\": [...]}");
    SentencePair pair;
    for (const auto& t : obj.at("src")) pair.src.push_back(t.get<std::string>());
    for (const auto& t : obj.at("tgt")) pair.tgt.push_back(t.get<std::string>());
    if (pair.src.empty() || pair.tgt.empty())
      throw ParseError("corpus jsonl line " + std::to_string(lineno + 1) +
                       ": empty sentence side");
    corpus.pairs.push_back(std::move(pair));
  });
  return corpus;
}

} // namespace qaforge::align
