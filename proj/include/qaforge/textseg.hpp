#pragma once

// Sentence segmentation, word tokenization and offset-map construction.
// Everything here is non-destructive: tokens and sentences are verbatim
// substrings of the input, addressed by exact codepoint spans, so later
// stages can do character arithmetic on the original string.

#include <cstddef>
#include <filesystem>
#include <initializer_list>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "qaforge/ioutil.hpp"
#include "qaforge/unicode.hpp"

namespace qaforge::textseg {

// Half-open character range, counted in Unicode scalar values.
struct Span {
  std::size_t start = 0;
  std::size_t end = 0;
  bool operator==(const Span&) const = default;
  std::size_t length() const { return end - start; }
};

struct Token {
  std::string text;
  Span span;
  bool operator==(const Token&) const = default;
};

struct TokenizedText {
  std::string raw;
  std::vector<Token> tokens;
};

// Maps the first character index of each word to its word index.
struct Char2Word {
  std::map<std::size_t, std::size_t> by_start;

  std::optional<std::size_t> at_start(std::size_t char_idx) const {
    auto it = by_start.find(char_idx);
    if (it == by_start.end()) return std::nullopt;
    return it->second;
  }
};

// Maps each word index to its character span.
struct Word2Char {
  std::vector<Span> spans;

  std::size_t size() const { return spans.size(); }
  const Span& at(std::size_t word_idx) const { return spans.at(word_idx); }
};

struct Sentence {
  std::string text;
  Span span;
  bool operator==(const Sentence&) const = default;
};

struct JoinedText {
  std::string text;
  std::vector<Span> sentence_spans;
};

// Substring by codepoint indices.
inline std::string cp_substr(std::string_view s, std::size_t start, std::size_t end) {
  std::u32string u = uni::decode_utf8(s);
  if (start > u.size()) start = u.size();
  if (end > u.size()) end = u.size();
  if (start >= end) return {};
  return uni::encode_utf8(std::u32string_view(u).substr(start, end - start));
}

inline std::string cp_substr(std::string_view s, Span span) {
  return cp_substr(s, span.start, span.end);
}

// Abbreviation lexicon; matching is case-insensitive. File format: one
// abbreviation per line, UTF-8, '#' starts a comment line.
class AbbrevLexicon {
public:
  AbbrevLexicon() = default;
  AbbrevLexicon(std::initializer_list<std::string_view> entries) {
    for (auto e : entries) add(e);
  }

  void add(std::string_view abbrev) {
    if (!abbrev.empty()) lower_.insert(uni::to_lower_utf8(abbrev));
  }

  bool contains(std::string_view word) const {
    return !lower_.empty() && lower_.count(uni::to_lower_utf8(word)) > 0;
  }

  std::size_t size() const { return lower_.size(); }

  static AbbrevLexicon load(const std::filesystem::path& path) {
    AbbrevLexicon lex;
    for (const std::string& line : io::read_lines(path)) {
      std::string_view v(line);
      while (!v.empty() && (v.back() == ' ' || v.back() == '\t')) v.remove_suffix(1);
      while (!v.empty() && (v.front() == ' ' || v.front() == '\t')) v.remove_prefix(1);
      if (v.empty() || v.front() == '#') continue;
      lex.add(v);
    }
    return lex;
  }

  static const AbbrevLexicon& english();
  static const AbbrevLexicon& serbian();
  static const AbbrevLexicon& empty();

private:
  std::unordered_set<std::string> lower_;
};

inline const AbbrevLexicon& AbbrevLexicon::english() {
  static const AbbrevLexicon lex = {
      "mr.", "mrs.", "ms.", "dr.", "prof.", "sr.", "jr.", "st.", "gen.", "rep.",
      "sen.", "gov.", "lt.", "col.", "capt.", "sgt.", "rev.", "hon.", "etc.",
      "e.g.", "i.e.", "cf.", "vs.", "inc.", "ltd.", "co.", "corp.", "u.s.",
      "u.k.", "u.n.", "no.", "fig.", "eq.", "ch.", "pp.", "vol.", "jan.",
      "feb.", "mar.", "apr.", "jun.", "jul.", "aug.", "sep.", "sept.", "oct.",
      "nov.", "dec.", "mt.", "ft.", "ave.", "blvd.", "dept.", "univ.", "est.",
      "approx.", "ca.", "al.", "ed.", "eds.", "trans.", "b.c.", "a.d.",
      "a.m.", "p.m.", "ph.d.", "m.d.", "b.a.", "m.a.", "d.c.",
  };
  return lex;
}

inline const AbbrevLexicon& AbbrevLexicon::serbian() {
  static const AbbrevLexicon lex = {
      // Latin
      "dr.", "mr.", "prof.", "inž.", "ing.", "itd.", "npr.", "tzv.", "tj.",
      "br.", "str.", "g.", "gđa.", "gđica.", "sv.", "čl.", "st.", "sl.",
      "ul.", "god.", "v.", "vv.", "n.e.", "pre n.e.", "o.š.", "š.", "min.",
      "maks.", "mln.", "mlrd.", "t.", "km.", "tzn.",
      // Cyrillic
      "др.", "мр.", "проф.", "инж.", "итд.", "нпр.", "тзв.", "тј.", "бр.",
      "стр.", "г.", "гђа.", "гђица.", "св.", "чл.", "ст.", "сл.", "ул.",
      "год.", "в.", "вв.", "н.е.", "пре н.е.", "о.ш.", "ш.", "мин.",
      "макс.", "млн.", "млрд.", "т.", "км.", "тзн.",
  };
  return lex;
}

inline const AbbrevLexicon& AbbrevLexicon::empty() {
  static const AbbrevLexicon lex;
  return lex;
}

// Strips leading/trailing whitespace and collapses interior whitespace runs
// to single spaces.
inline std::string trim(std::string_view text) {
  std::u32string u = uni::decode_utf8(text);
  std::u32string out;
  out.reserve(u.size());
  bool pending_space = false;
  for (char32_t cp : u) {
    if (uni::is_space(cp)) {
      if (!out.empty()) pending_space = true;
    } else {
      if (pending_space) {
        out.push_back(U' ');
        pending_space = false;
      }
      out.push_back(cp);
    }
  }
  return uni::encode_utf8(out);
}

namespace detail {

inline bool is_word_char(char32_t cp) {
  return uni::is_letter(cp) || uni::is_ascii_digit(cp) || cp == U'_';
}

// Connectors are kept inside a token when flanked by word characters on both
// sides: hyphenated words, decimals, thousands separators, clock times,
// apostrophes.
inline bool is_connector(char32_t cp) {
  return cp == U'-' || cp == U'.' || cp == U',' || cp == U':' || cp == U'\'' || cp == 0x2019;
}

inline bool is_open_quote(char32_t cp) {
  return cp == U'"' || cp == U'\'' || cp == 0x201C || cp == 0x2018 || cp == 0x201E ||
         cp == 0xAB || cp == U'(' || cp == U'[';
}

// 0x201C closes Serbian „...“ quotes but opens English “...” ones, so it
// appears in both sets; position decides which role applies.
inline bool is_close_follower(char32_t cp) {
  return cp == U'"' || cp == U'\'' || cp == 0x201D || cp == 0x201C || cp == 0x2019 ||
         cp == 0xBB || cp == U')' || cp == U']';
}

inline bool is_terminator(char32_t cp) {
  return cp == U'.' || cp == U'?' || cp == U'!';
}

} // namespace detail

// Non-destructive word tokenizer. Word runs may contain interior connectors;
// every other non-space codepoint becomes a single-character token. Token
// texts are verbatim substrings of the input and spans are exact.
inline TokenizedText tokenize(std::string_view text) {
  TokenizedText out;
  out.raw = std::string(text);
  std::u32string u = uni::decode_utf8(text);
  const std::size_t n = u.size();
  std::size_t i = 0;
  while (i < n) {
    if (uni::is_space(u[i])) {
      ++i;
      continue;
    }
    std::size_t start = i;
    if (detail::is_word_char(u[i])) {
      ++i;
      while (i < n) {
        if (detail::is_word_char(u[i])) {
          ++i;
        } else if (detail::is_connector(u[i]) && i + 1 < n && detail::is_word_char(u[i + 1])) {
          i += 2;
        } else {
          break;
        }
      }
    } else {
      ++i;
    }
    Token tok;
    tok.span = {start, i};
    tok.text = uni::encode_utf8(std::u32string_view(u).substr(start, i - start));
    out.tokens.push_back(std::move(tok));
  }
  return out;
}

// Rule-based sentence splitter. A boundary is a run of [.?!], optionally
// followed by closing quotes/brackets, followed by whitespace and an
// uppercase letter, opening quote, or digit. A single '.' is not a boundary
// when the word it terminates is in the abbreviation lexicon; periods inside
// numbers never qualify because they are not followed by whitespace.
inline std::vector<Sentence> split_sentences(std::string_view text,
                                             const AbbrevLexicon& abbrevs = AbbrevLexicon::empty()) {
  std::vector<Sentence> out;
  std::u32string u = uni::decode_utf8(text);
  const std::size_t n = u.size();

  const auto emit = [&](std::size_t seg_start, std::size_t seg_end) {
    std::size_t a = seg_start;
    while (a < seg_end && uni::is_space(u[a])) ++a;
    std::size_t b = seg_end;
    while (b > a && uni::is_space(u[b - 1])) --b;
    if (a >= b) return;
    Sentence s;
    s.span = {a, b};
    s.text = uni::encode_utf8(std::u32string_view(u).substr(a, b - a));
    out.push_back(std::move(s));
  };

  std::size_t seg_start = 0;
  std::size_t i = 0;
  while (i < n) {
    if (!detail::is_terminator(u[i])) {
      ++i;
      continue;
    }
    std::size_t run_start = i;
    while (i < n && detail::is_terminator(u[i])) ++i;
    std::size_t run_end = i; // one past the terminator run
    std::size_t after = run_end;
    while (after < n && detail::is_close_follower(u[after])) ++after;

    if (after >= n) break; // text ends here; trailing segment emitted below

    if (!uni::is_space(u[after])) continue;
    std::size_t next = after;
    while (next < n && uni::is_space(u[next])) ++next;
    if (next >= n) break;
    bool starts_sentence = uni::is_upper(u[next]) || uni::is_ascii_digit(u[next]) ||
                           detail::is_open_quote(u[next]);
    if (!starts_sentence) continue;

    // Abbreviation suppression applies to a lone '.' terminating a word.
    if (run_end - run_start == 1 && u[run_start] == U'.') {
      std::size_t w = run_start;
      while (w > 0 && (detail::is_word_char(u[w - 1]) || u[w - 1] == U'.')) --w;
      if (w < run_start) {
        std::string word = uni::encode_utf8(std::u32string_view(u).substr(w, run_end - w));
        if (abbrevs.contains(word)) continue;
      }
    }

    emit(seg_start, after);
    seg_start = next;
    i = next;
  }
  emit(seg_start, n);
  return out;
}

// Char2Word[t.span.start] = index of t; Word2Char[index] = t.span.
inline std::pair<Char2Word, Word2Char> build_offset_maps(const TokenizedText& tokenized) {
  Char2Word c2w;
  Word2Char w2c;
  w2c.spans.reserve(tokenized.tokens.size());
  for (std::size_t idx = 0; idx < tokenized.tokens.size(); ++idx) {
    const Token& t = tokenized.tokens[idx];
    c2w.by_start.emplace(t.span.start, idx);
    w2c.spans.push_back(t.span);
  }
  return {std::move(c2w), std::move(w2c)};
}

// Word whose span contains char_idx; floor lookup so mid-token character
// indices resolve to the containing token.
inline std::optional<std::size_t> word_containing(const Char2Word& c2w, const Word2Char& w2c,
                                                  std::size_t char_idx) {
  auto it = c2w.by_start.upper_bound(char_idx);
  if (it == c2w.by_start.begin()) return std::nullopt;
  --it;
  std::size_t word = it->second;
  if (char_idx < w2c.at(word).end) return word;
  return std::nullopt;
}

// Joins pre-trimmed sentences with single spaces, recording each sentence's
// span in the result.
inline JoinedText join_sentences(const std::vector<std::string>& sentences) {
  JoinedText out;
  out.sentence_spans.reserve(sentences.size());
  std::size_t pos = 0;
  for (std::size_t k = 0; k < sentences.size(); ++k) {
    if (k > 0) {
      out.text.push_back(' ');
      ++pos;
    }
    std::size_t len = uni::cp_length(sentences[k]);
    out.sentence_spans.push_back({pos, pos + len});
    out.text += sentences[k];
    pos += len;
  }
  return out;
}

} // namespace qaforge::textseg
