#pragma once

// SQuAD-style evaluation: answer normalization, exact match, token F1,
// question-type classification, per-type reports, and dataset statistics.
// Serbian defaults disable article removal; English compatibility mode
// reproduces the official SQuAD scorer arithmetic step for step.

#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "json.hpp"

#include "qaforge/errors.hpp"
#include "qaforge/squad.hpp"
#include "qaforge/unicode.hpp"

namespace qaforge::evalkit {

struct NormalizationOptions {
  bool lowercase = true;
  bool strip_punctuation = true;
  bool collapse_whitespace = true;
  bool article_removal = false; // Serbian has no articles

  static NormalizationOptions serbian() { return {}; }
  static NormalizationOptions english_compat() { return {true, true, true, true}; }
};

// Normalization mirrors the standard SQuAD scorer order: lowercase, strip
// punctuation, remove articles, collapse whitespace.
inline std::string normalize(std::string_view text, const NormalizationOptions& opts = {}) {
  std::u32string u = uni::decode_utf8(text);
  if (opts.lowercase)
    for (char32_t& cp : u) cp = uni::to_lower(cp);
  if (opts.strip_punctuation) {
    std::u32string kept;
    kept.reserve(u.size());
    for (char32_t cp : u)
      if (!uni::is_punct(cp)) kept.push_back(cp);
    u = std::move(kept);
  }
  if (opts.article_removal) {
    // \b(a|an|the)\b -> single space; word characters are letters, digits, _.
    const auto is_word = [](char32_t cp) {
      return uni::is_letter(cp) || uni::is_ascii_digit(cp) || cp == U'_';
    };
    std::u32string rebuilt;
    rebuilt.reserve(u.size());
    std::size_t i = 0;
    while (i < u.size()) {
      if (!is_word(u[i])) {
        rebuilt.push_back(u[i]);
        ++i;
        continue;
      }
      std::size_t j = i;
      while (j < u.size() && is_word(u[j])) ++j;
      std::u32string_view run(u.data() + i, j - i);
      if (run == U"a" || run == U"an" || run == U"the")
        rebuilt.push_back(U' ');
      else
        rebuilt.append(run);
      i = j;
    }
    u = std::move(rebuilt);
  }
  if (opts.collapse_whitespace) {
    std::u32string collapsed;
    collapsed.reserve(u.size());
    bool pending = false;
    for (char32_t cp : u) {
      if (uni::is_space(cp)) {
        if (!collapsed.empty()) pending = true;
      } else {
        if (pending) {
          collapsed.push_back(U' ');
          pending = false;
        }
        collapsed.push_back(cp);
      }
    }
    u = std::move(collapsed);
  }
  return uni::encode_utf8(u);
}

namespace detail {

inline std::vector<std::string> ws_tokens(std::string_view normalized) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos < normalized.size()) {
    while (pos < normalized.size() && normalized[pos] == ' ') ++pos;
    std::size_t end = pos;
    while (end < normalized.size() && normalized[end] != ' ') ++end;
    if (end > pos) out.emplace_back(normalized.substr(pos, end - pos));
    pos = end;
  }
  return out;
}

} // namespace detail

// 1 iff the normalized prediction equals any normalized gold.
inline int exact_match(std::string_view prediction, const std::vector<std::string>& golds,
                       const NormalizationOptions& opts = {}) {
  if (golds.empty()) throw std::invalid_argument("exact_match: at least one gold required");
  std::string pred = normalize(prediction, opts);
  for (const std::string& gold : golds)
    if (pred == normalize(gold, opts)) return 1;
  return 0;
}

// Token-multiset F1, maximized over golds. Both sides empty after
// normalization scores 1, exactly one empty scores 0.
inline double f1(std::string_view prediction, const std::vector<std::string>& golds,
                 const NormalizationOptions& opts = {}) {
  if (golds.empty()) throw std::invalid_argument("f1: at least one gold required");
  std::vector<std::string> pred_tokens = detail::ws_tokens(normalize(prediction, opts));
  double best = 0.0;
  for (const std::string& gold : golds) {
    std::vector<std::string> gold_tokens = detail::ws_tokens(normalize(gold, opts));
    double score = 0.0;
    if (pred_tokens.empty() && gold_tokens.empty()) {
      score = 1.0;
    } else if (pred_tokens.empty() || gold_tokens.empty()) {
      score = 0.0;
    } else {
      std::unordered_map<std::string_view, int> counts;
      for (const std::string& t : gold_tokens) ++counts[t];
      long long overlap = 0;
      for (const std::string& t : pred_tokens) {
        auto it = counts.find(t);
        if (it != counts.end() && it->second > 0) {
          --it->second;
          ++overlap;
        }
      }
      if (overlap > 0) {
        double precision = 1.0 * static_cast<double>(overlap) /
                           static_cast<double>(pred_tokens.size());
        double recall = 1.0 * static_cast<double>(overlap) /
                        static_cast<double>(gold_tokens.size());
        score = (2.0 * precision * recall) / (precision + recall);
      }
    }
    if (score > best) best = score;
  }
  return best;
}

enum class QuestionCategory { Who, What, How, When, Where, HowMany, Other };

inline constexpr const char* kCategoryNames[] = {"Who", "What", "How", "When",
                                                 "Where", "How many", "Other"};

inline const char* to_string(QuestionCategory c) {
  return kCategoryNames[static_cast<int>(c)];
}

// First token of the question matched case-insensitively against the fixed
// keyword sets, in precedence order; both scripts are accepted.
inline QuestionCategory classify_question(std::string_view question) {
  std::u32string u = uni::decode_utf8(question);
  std::size_t i = 0;
  while (i < u.size() && !(uni::is_letter(u[i]) || uni::is_ascii_digit(u[i]))) ++i;
  std::size_t j = i;
  while (j < u.size() && (uni::is_letter(u[j]) || uni::is_ascii_digit(u[j]))) ++j;
  if (i == j) return QuestionCategory::Other;
  std::u32string first = u.substr(i, j - i);
  for (char32_t& cp : first) cp = uni::to_lower(cp);
  const std::string tok = uni::encode_utf8(first);

  static const std::vector<std::pair<QuestionCategory, std::vector<std::string>>> kKeywords = {
      {QuestionCategory::Who, {"ko", "koji", "koje", "koja", "ко", "који", "које", "која"}},
      {QuestionCategory::What, {"šta", "шта"}},
      {QuestionCategory::How, {"kako", "како"}},
      {QuestionCategory::When, {"kad", "kada", "кад", "када"}},
      {QuestionCategory::Where, {"gde", "где"}},
      {QuestionCategory::HowMany,
       {"koliko", "koliki", "kolika", "колико", "колики", "колика"}},
  };
  for (const auto& [cat, words] : kKeywords)
    for (const std::string& w : words)
      if (tok == w) return cat;
  return QuestionCategory::Other;
}

struct CategoryRow {
  QuestionCategory category = QuestionCategory::Other;
  std::size_t count = 0;
  double em = 0.0;  // percent
  double f1 = 0.0;  // percent
  double cl = 0.0;  // mean context characters
  double ql = 0.0;  // mean question characters
  double pal = 0.0; // mean predicted answer characters
  double ral = 0.0; // mean target answer characters
};

struct EvalReport {
  double exact_match = 0.0; // percent
  double f1 = 0.0;          // percent
  std::size_t total = 0;
  std::vector<CategoryRow> rows; // fixed category order, all 7 rows

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json root;
    root["exact_match"] = exact_match;
    root["f1"] = f1;
    root["total"] = total;
    auto& jrows = root["by_question_type"] = nlohmann::ordered_json::array();
    for (const CategoryRow& r : rows) {
      nlohmann::ordered_json jr;
      jr["question_type"] = to_string(r.category);
      jr["count"] = r.count;
      jr["exact_match"] = r.em;
      jr["f1"] = r.f1;
      jr["CL"] = r.cl;
      jr["QL"] = r.ql;
      jr["PAL"] = r.pal;
      jr["RAL"] = r.ral;
      jrows.push_back(std::move(jr));
    }
    return root;
  }

  std::string to_table() const {
    char buf[160];
    std::string out;
    std::snprintf(buf, sizeof(buf), "%-14s %8s %8s %6s %5s %5s %5s %7s\n", "Question Type",
                  "EM[%]", "F1[%]", "CL", "QL", "PAL", "RAL", "Count");
    out += buf;
    out += std::string(62, '-') + "\n";
    for (const CategoryRow& r : rows) {
      std::snprintf(buf, sizeof(buf), "%-14s %8.2f %8.2f %6.0f %5.0f %5.0f %5.0f %7zu\n",
                    to_string(r.category), r.em, r.f1, r.cl, r.ql, r.pal, r.ral, r.count);
      out += buf;
    }
    out += std::string(62, '-') + "\n";
    std::snprintf(buf, sizeof(buf), "%-14s %8.2f %8.2f %*zu\n", "Overall", exact_match, f1, 34,
                  total);
    out += buf;
    return out;
  }
};

// Scores a predictions map (question id -> prediction string) against the
// dataset, aggregating overall and per question type with CL/QL/PAL/RAL
// means. Every question must have a prediction.
inline EvalReport evaluate(const std::unordered_map<std::string, std::string>& predictions,
                           const squad::Dataset& dataset,
                           const NormalizationOptions& opts = {}) {
  constexpr int kCategories = 7;
  struct Acc {
    std::size_t n = 0;
    double em = 0, f1 = 0, cl = 0, ql = 0, pal = 0, ral = 0;
  };
  Acc per_cat[kCategories];
  double em_sum = 0.0;
  double f1_sum = 0.0;
  std::size_t total = 0;

  for (const squad::Article& art : dataset.articles) {
    for (const squad::Paragraph& par : art.paragraphs) {
      const std::size_t ctx_len = uni::cp_length(par.context);
      for (const squad::Qa& qa : par.qas) {
        auto pit = predictions.find(qa.id);
        if (pit == predictions.end())
          throw MissingPrediction("no prediction for question id: " + qa.id);
        const std::string& pred = pit->second;
        std::vector<std::string> golds;
        golds.reserve(qa.answers.size());
        for (const squad::Answer& a : qa.answers) golds.push_back(a.text);
        if (golds.empty()) golds.emplace_back();

        const double em = exact_match(pred, golds, opts);
        const double f = f1(pred, golds, opts);
        em_sum += em;
        f1_sum += f;
        ++total;

        Acc& acc = per_cat[static_cast<int>(classify_question(qa.question))];
        ++acc.n;
        acc.em += em;
        acc.f1 += f;
        acc.cl += static_cast<double>(ctx_len);
        acc.ql += static_cast<double>(uni::cp_length(qa.question));
        acc.pal += static_cast<double>(uni::cp_length(pred));
        acc.ral += static_cast<double>(uni::cp_length(golds.front()));
      }
    }
  }

  EvalReport report;
  report.total = total;
  report.exact_match = total ? 100.0 * em_sum / static_cast<double>(total) : 0.0;
  report.f1 = total ? 100.0 * f1_sum / static_cast<double>(total) : 0.0;
  for (int c = 0; c < kCategories; ++c) {
    const Acc& acc = per_cat[c];
    CategoryRow row;
    row.category = static_cast<QuestionCategory>(c);
    row.count = acc.n;
    if (acc.n > 0) {
      const double n = static_cast<double>(acc.n);
      row.em = 100.0 * acc.em / n;
      row.f1 = 100.0 * acc.f1 / n;
      row.cl = acc.cl / n;
      row.ql = acc.ql / n;
      row.pal = acc.pal / n;
      row.ral = acc.ral / n;
    }
    report.rows.push_back(row);
  }
  return report;
}

inline std::unordered_map<std::string, std::string> load_predictions(
    const std::filesystem::path& path) {
  nlohmann::json root = nlohmann::json::parse(io::read_file(path), nullptr, false);
  if (root.is_discarded() || !root.is_object())
    throw ParseError("predictions: expected a JSON object of id -> string in " + path.string());
  std::unordered_map<std::string, std::string> out;
  for (const auto& [key, value] : root.items()) {
    if (!value.is_string())
      throw ParseError("predictions: value for id '" + key + "' is not a string");
    out[key] = value.get<std::string>();
  }
  return out;
}

struct DatasetStats {
  std::size_t samples = 0;
  std::int64_t context_length = 0;  // mean characters per unique context
  std::int64_t question_length = 0; // mean characters per sample
  std::int64_t answer_length = 0;   // mean characters of the first answer

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json root;
    root["samples"] = samples;
    root["context_length"] = context_length;
    root["question_length"] = question_length;
    root["answer_length"] = answer_length;
    return root;
  }
};

// Sample count plus mean character lengths, rounded to nearest integer.
// Context length averages over paragraphs (each unique context once);
// question and answer lengths average over samples.
inline DatasetStats dataset_stats(const squad::Dataset& dataset) {
  DatasetStats stats;
  double ctx_sum = 0.0;
  std::size_t ctx_n = 0;
  double q_sum = 0.0;
  double a_sum = 0.0;
  for (const squad::Article& art : dataset.articles) {
    for (const squad::Paragraph& par : art.paragraphs) {
      ctx_sum += static_cast<double>(uni::cp_length(par.context));
      ++ctx_n;
      for (const squad::Qa& qa : par.qas) {
        ++stats.samples;
        q_sum += static_cast<double>(uni::cp_length(qa.question));
        if (!qa.answers.empty())
          a_sum += static_cast<double>(uni::cp_length(qa.answers.front().text));
      }
    }
  }
  if (ctx_n > 0) stats.context_length = std::llround(ctx_sum / static_cast<double>(ctx_n));
  if (stats.samples > 0) {
    stats.question_length = std::llround(q_sum / static_cast<double>(stats.samples));
    stats.answer_length = std::llround(a_sum / static_cast<double>(stats.samples));
  }
  return stats;
}

} // namespace qaforge::evalkit
