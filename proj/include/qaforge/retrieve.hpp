#pragma once

// The Retrieve step: assemble translated contexts, lift per-sentence word
// alignments to context level, and extract target-language answer spans.
// Also hosts the staged synthesis driver that chains split/translate/
// transliterate/align/retrieve over an in-memory document, so the CLI
// stages and the one-shot synthesize command share one code path.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <thread>
#include <variant>
#include <vector>

#include "qaforge/align.hpp"
#include "qaforge/errors.hpp"
#include "qaforge/squad.hpp"
#include "qaforge/textseg.hpp"
#include "qaforge/translate.hpp"
#include "qaforge/translit.hpp"

namespace qaforge::retrieve {

// Flat (context, question, answer) sample view.
struct QaSample {
  std::string id;
  std::string title;
  std::string context;
  std::string question;
  std::string answer_text;
  std::size_t answer_start = 0;

  // context[answer_start .. answer_start + len(answer_text)) == answer_text
  bool answer_embedded() const {
    return textseg::cp_substr(context, answer_start,
                              answer_start + uni::cp_length(answer_text)) == answer_text;
  }
};

inline std::vector<QaSample> flatten_samples(const squad::Dataset& ds) {
  std::vector<QaSample> out;
  for (const squad::Article& art : ds.articles)
    for (const squad::Paragraph& par : art.paragraphs)
      for (const squad::Qa& qa : par.qas) {
        QaSample s;
        s.id = qa.id;
        s.title = art.title;
        s.context = par.context;
        s.question = qa.question;
        if (!qa.answers.empty()) {
          s.answer_text = qa.answers.front().text;
          s.answer_start = static_cast<std::size_t>(qa.answers.front().answer_start);
        }
        out.push_back(std::move(s));
      }
  return out;
}

enum class DropReason { NoAlignment, TranslationFailed, EmptyAnswer, OffsetError };

inline const char* to_string(DropReason r) {
  switch (r) {
    case DropReason::NoAlignment: return "NoAlignment";
    case DropReason::TranslationFailed: return "TranslationFailed";
    case DropReason::EmptyAnswer: return "EmptyAnswer";
    case DropReason::OffsetError: return "OffsetError";
  }
  return "OffsetError";
}

struct DropRecord {
  std::string id;
  DropReason reason = DropReason::NoAlignment;
  std::string detail;
};

inline std::string format_drop_report(const std::vector<DropRecord>& drops) {
  std::string out;
  for (const DropRecord& d : drops) {
    nlohmann::ordered_json rec;
    rec["id"] = d.id;
    rec["reason"] = to_string(d.reason);
    if (!d.detail.empty()) rec["detail"] = d.detail;
    out += rec.dump();
    out.push_back('\n');
  }
  return out;
}

// Alignment over whole-context word indices, built by offsetting
// per-sentence alignments.
struct ContextAlignment {
  align::AlignmentLinkSet links; // dir = symmetrized, dims = context token counts

  std::vector<int> target_indices_for(int src_word) const {
    std::vector<int> out;
    auto lo = std::lower_bound(links.links.begin(), links.links.end(),
                               align::Link{src_word, 0});
    for (auto it = lo; it != links.links.end() && it->src == src_word; ++it)
      out.push_back(it->tgt);
    return out;
  }
};

// Link (i,j) of sentence k becomes (i + sum of previous source token counts,
// j + sum of previous target token counts); result is the union over k.
inline ContextAlignment build_context_alignment(
    const std::vector<align::AlignmentLinkSet>& sentence_alignments,
    const std::vector<int>& src_token_counts, const std::vector<int>& tgt_token_counts) {
  if (sentence_alignments.size() != src_token_counts.size() ||
      sentence_alignments.size() != tgt_token_counts.size())
    throw DimensionMismatch("build_context_alignment: sequence lengths differ");
  ContextAlignment out;
  out.links.dir = align::Direction::symmetrized;
  int src_off = 0;
  int tgt_off = 0;
  for (std::size_t k = 0; k < sentence_alignments.size(); ++k) {
    for (const align::Link& l : sentence_alignments[k].links) {
      if (l.src < 0 || l.src >= src_token_counts[k] || l.tgt < 0 || l.tgt >= tgt_token_counts[k])
        throw DimensionMismatch("build_context_alignment: link outside sentence " +
                                std::to_string(k));
      out.links.links.push_back({l.src + src_off, l.tgt + tgt_off});
    }
    src_off += src_token_counts[k];
    tgt_off += tgt_token_counts[k];
  }
  out.links.src_len = src_off;
  out.links.tgt_len = tgt_off;
  out.links.normalize();
  return out;
}

struct SourceAnswer {
  std::string text;
  std::size_t char_start = 0;
};

struct ExtractedAnswer {
  std::string text;
  std::size_t char_start = 0;
};

struct ExtractFailure {
  DropReason reason = DropReason::NoAlignment;
  std::string detail;
};

using ExtractResult = std::variant<ExtractedAnswer, ExtractFailure>;

// Answer span extraction: source word indices of the answer are looked up
// through Char2Word (mid-token starts resolve to the containing token),
// their aligned target indices are collected through the context alignment,
// and the target span runs from the smallest to the largest aligned word.
inline ExtractResult extract_answer(const SourceAnswer& answer,
                                    const textseg::Char2Word& src_c2w,
                                    const textseg::Word2Char& src_w2c,
                                    const ContextAlignment& ctx_alignment,
                                    const textseg::Word2Char& tgt_w2c,
                                    std::string_view tgt_context) {
  const std::size_t answer_len = uni::cp_length(answer.text);
  if (answer_len == 0) return ExtractFailure{DropReason::EmptyAnswer, "empty source answer"};
  const std::size_t a_begin = answer.char_start;
  const std::size_t a_end = answer.char_start + answer_len;

  // Every source word whose span intersects [a_begin, a_end).
  std::optional<std::size_t> first = textseg::word_containing(src_c2w, src_w2c, a_begin);
  if (!first) {
    auto it = src_c2w.by_start.lower_bound(a_begin);
    if (it != src_c2w.by_start.end() && it->first < a_end) first = it->second;
  }
  if (!first)
    return ExtractFailure{DropReason::EmptyAnswer, "answer span covers no source word"};

  std::set<int> target_words;
  for (std::size_t w = *first; w < src_w2c.size() && src_w2c.at(w).start < a_end; ++w)
    for (int j : ctx_alignment.target_indices_for(static_cast<int>(w))) target_words.insert(j);

  if (target_words.empty())
    return ExtractFailure{DropReason::NoAlignment, "no answer word is aligned"};

  const int jmin = *target_words.begin();
  const int jmax = *target_words.rbegin();
  if (jmin < 0 || static_cast<std::size_t>(jmax) >= tgt_w2c.size())
    return ExtractFailure{DropReason::OffsetError, "aligned index outside target maps"};

  const std::size_t start = tgt_w2c.at(static_cast<std::size_t>(jmin)).start;
  const std::size_t end = tgt_w2c.at(static_cast<std::size_t>(jmax)).end;
  const std::size_t ctx_len = uni::cp_length(tgt_context);
  if (start >= end || end > ctx_len)
    return ExtractFailure{DropReason::OffsetError, "computed span escapes the context"};

  ExtractedAnswer out;
  out.char_start = start;
  out.text = textseg::cp_substr(tgt_context, start, end);
  return out;
}

// ---------------------------------------------------------------------------
// Staged synthesis document and transforms.

enum class TranslitMode { off, latin, cyrillic };
enum class AlignerMode { ibm1, gibbs, diagonal, external };

inline const char* to_string(TranslitMode m) {
  switch (m) {
    case TranslitMode::off: return "off";
    case TranslitMode::latin: return "latin";
    case TranslitMode::cyrillic: return "cyrillic";
  }
  return "off";
}

inline const char* to_string(AlignerMode m) {
  switch (m) {
    case AlignerMode::ibm1: return "ibm1";
    case AlignerMode::gibbs: return "gibbs";
    case AlignerMode::diagonal: return "diagonal";
    case AlignerMode::external: return "external";
  }
  return "ibm1";
}

struct AlignerConfig {
  AlignerMode mode = AlignerMode::ibm1;
  int iterations = 5;
  double alpha = 1e-3;
  std::uint64_t seed = 42;
  std::filesystem::path external_alignments; // pharaoh file for mode external
  int token_cap = 200;
};

struct SynthesisConfig {
  translate::ProviderHandle provider;
  translate::TranslationCache* cache = nullptr;
  std::string src_lang = "eng_Latn";
  std::string tgt_lang = "srp_Cyrl";
  TranslitMode translit = TranslitMode::off;
  AlignerConfig aligner;
  const textseg::AbbrevLexicon* abbrevs = &textseg::AbbrevLexicon::english();
  int jobs = 1;
  // Post-filter for answers that are pure punctuation after extraction.
  // Off by default: the reference pipeline shipped such samples.
  bool drop_punct_only_answers = false;
};

struct StageSentence {
  std::string text; // verbatim substring of the source context
  textseg::Span span;
  std::string tgt; // trimmed translation; empty = failed
};

struct StageQa {
  squad::Qa qa;
  std::string question_tgt;
};

struct StageParagraph {
  std::string context;
  std::vector<StageSentence> sentences;
  std::vector<StageQa> qas;
  std::vector<std::string> alignments; // pharaoh line per sentence pair
};

struct StageArticle {
  std::string title;
  std::string title_tgt;
  std::vector<StageParagraph> paragraphs;
};

struct StageDoc {
  std::string version;
  std::string src_lang;
  std::string tgt_lang;
  std::vector<StageArticle> articles;
};

inline StageDoc split_stage(const squad::Dataset& ds,
                            const textseg::AbbrevLexicon& abbrevs,
                            std::string src_lang = {}, std::string tgt_lang = {}) {
  StageDoc doc;
  doc.version = ds.version;
  doc.src_lang = std::move(src_lang);
  doc.tgt_lang = std::move(tgt_lang);
  doc.articles.reserve(ds.articles.size());
  for (const squad::Article& art : ds.articles) {
    StageArticle sa;
    sa.title = art.title;
    for (const squad::Paragraph& par : art.paragraphs) {
      StageParagraph sp;
      sp.context = par.context;
      for (const textseg::Sentence& sen : textseg::split_sentences(par.context, abbrevs))
        sp.sentences.push_back({sen.text, sen.span, {}});
      for (const squad::Qa& qa : par.qas) sp.qas.push_back({qa, {}});
      sa.paragraphs.push_back(std::move(sp));
    }
    doc.articles.push_back(std::move(sa));
  }
  return doc;
}

// Translates titles, context sentences and questions in one deduplicated
// batch. Targets are stored trimmed; an empty target marks a failure that
// the retrieve stage turns into TranslationFailed drops.
inline void translate_stage(StageDoc& doc, const translate::ProviderHandle& provider,
                            translate::TranslationCache* cache = nullptr, int jobs = 1) {
  std::vector<translate::TranslationUnit> units;
  const auto unit = [&](std::string id, const std::string& text) {
    units.push_back({std::move(id), textseg::trim(text), doc.src_lang, doc.tgt_lang});
  };
  for (std::size_t a = 0; a < doc.articles.size(); ++a) {
    StageArticle& art = doc.articles[a];
    if (!art.title.empty()) unit("t:" + std::to_string(a), art.title);
    for (std::size_t p = 0; p < art.paragraphs.size(); ++p) {
      StageParagraph& par = art.paragraphs[p];
      for (std::size_t s = 0; s < par.sentences.size(); ++s)
        unit("s:" + std::to_string(a) + ":" + std::to_string(p) + ":" + std::to_string(s),
             par.sentences[s].text);
      for (const StageQa& q : par.qas) unit("q:" + q.qa.id, q.qa.question);
    }
  }

  std::vector<translate::TranslationResult> results =
      translate::translate_batch(units, provider, cache, jobs);
  std::unordered_map<std::string_view, std::string_view> by_id;
  by_id.reserve(results.size());
  for (const translate::TranslationResult& r : results) by_id.emplace(r.id, r.target_text);

  const auto target = [&](const std::string& id) -> std::string {
    auto it = by_id.find(id);
    if (it == by_id.end()) return {};
    return textseg::trim(it->second);
  };
  for (std::size_t a = 0; a < doc.articles.size(); ++a) {
    StageArticle& art = doc.articles[a];
    art.title_tgt = target("t:" + std::to_string(a));
    for (std::size_t p = 0; p < art.paragraphs.size(); ++p) {
      StageParagraph& par = art.paragraphs[p];
      for (std::size_t s = 0; s < par.sentences.size(); ++s)
        par.sentences[s].tgt =
            target("s:" + std::to_string(a) + ":" + std::to_string(p) + ":" + std::to_string(s));
      for (StageQa& q : par.qas) q.question_tgt = target("q:" + q.qa.id);
    }
  }
}

inline void transliterate_stage(StageDoc& doc, TranslitMode mode) {
  if (mode == TranslitMode::off) return;
  const auto convert = [&](std::string& text) {
    if (text.empty()) return;
    if (mode == TranslitMode::latin) text = translit::cyr_to_lat(text);
    else text = translit::lat_to_cyr(text).first;
  };
  for (StageArticle& art : doc.articles) {
    convert(art.title_tgt);
    for (StageParagraph& par : art.paragraphs) {
      for (StageSentence& sen : par.sentences) convert(sen.tgt);
      for (StageQa& q : par.qas) convert(q.question_tgt);
    }
  }
}

// Trains the aligner over every valid sentence pair of the document, decodes
// both directions, symmetrizes, and stores one pharaoh line per sentence
// pair. Pairs with an untranslated side keep an empty alignment.
inline void align_stage(StageDoc& doc, const AlignerConfig& config, int jobs = 1) {
  struct PairRef {
    StageParagraph* par;
    std::size_t sentence;
    align::SentencePair tokens;
  };
  std::vector<PairRef> refs;
  for (StageArticle& art : doc.articles) {
    for (StageParagraph& par : art.paragraphs) {
      par.alignments.assign(par.sentences.size(), std::string());
      for (std::size_t s = 0; s < par.sentences.size(); ++s) {
        const StageSentence& sen = par.sentences[s];
        if (sen.tgt.empty()) continue;
        align::SentencePair pair;
        for (const textseg::Token& t : textseg::tokenize(sen.text).tokens)
          pair.src.push_back(t.text);
        for (const textseg::Token& t : textseg::tokenize(sen.tgt).tokens)
          pair.tgt.push_back(t.text);
        if (pair.src.empty() || pair.tgt.empty()) continue;
        refs.push_back({&par, s, std::move(pair)});
      }
    }
  }
  if (refs.empty()) return;

  if (config.mode == AlignerMode::external) {
    std::vector<align::AlignmentLinkSet> sets = align::read_pharaoh(config.external_alignments);
    if (sets.size() != refs.size())
      throw DimensionMismatch("external alignments: " + std::to_string(sets.size()) +
                              " lines for " + std::to_string(refs.size()) + " sentence pairs");
    for (std::size_t k = 0; k < refs.size(); ++k)
      refs[k].par->alignments[refs[k].sentence] = align::pharaoh_line(sets[k]);
    return;
  }

  if (config.mode == AlignerMode::diagonal) {
    for (PairRef& ref : refs) {
      align::AlignmentLinkSet set;
      set.dir = align::Direction::symmetrized;
      set.src_len = static_cast<int>(ref.tokens.src.size());
      set.tgt_len = static_cast<int>(ref.tokens.tgt.size());
      int n = std::min(set.src_len, set.tgt_len);
      for (int k = 0; k < n; ++k) set.links.push_back({k, k});
      ref.par->alignments[ref.sentence] = align::pharaoh_line(set);
    }
    return;
  }

  align::ParallelCorpus fwd_corpus;
  align::ParallelCorpus rev_corpus;
  fwd_corpus.pairs.reserve(refs.size());
  rev_corpus.pairs.reserve(refs.size());
  for (const PairRef& ref : refs) {
    fwd_corpus.pairs.push_back(ref.tokens);
    rev_corpus.pairs.push_back({ref.tokens.tgt, ref.tokens.src});
  }

  align::LexiconTable fwd_lex(config.alpha);
  align::LexiconTable rev_lex(config.alpha);
  if (config.mode == AlignerMode::gibbs) {
    fwd_lex = align::train_ibm1_gibbs(fwd_corpus, config.iterations, config.alpha, config.seed,
                                      config.token_cap);
    rev_lex = align::train_ibm1_gibbs(rev_corpus, config.iterations, config.alpha,
                                      config.seed + 1, config.token_cap);
  } else {
    align::Ibm1Trainer fwd_trainer(fwd_corpus, {config.alpha, config.token_cap});
    fwd_trainer.iterate(config.iterations, jobs);
    fwd_lex = fwd_trainer.table();
    align::Ibm1Trainer rev_trainer(rev_corpus, {config.alpha, config.token_cap});
    rev_trainer.iterate(config.iterations, jobs);
    rev_lex = rev_trainer.table();
  }

  const auto decode = [&](std::size_t begin, std::size_t end) {
    for (std::size_t k = begin; k < end; ++k) {
      PairRef& ref = refs[k];
      align::AlignmentLinkSet fwd = align::viterbi_align(fwd_lex, ref.tokens,
                                                         align::Direction::forward);
      align::AlignmentLinkSet rev =
          align::viterbi_align(rev_lex, {ref.tokens.tgt, ref.tokens.src},
                               align::Direction::reverse)
              .transposed();
      align::AlignmentLinkSet sym = align::symmetrize_gdfa(fwd, rev);
      ref.par->alignments[ref.sentence] = align::pharaoh_line(sym);
    }
  };

  if (jobs <= 1 || refs.size() < 2) {
    decode(0, refs.size());
  } else {
    int workers = std::min<int>(jobs, static_cast<int>(refs.size()));
    std::size_t chunk = (refs.size() + workers - 1) / workers;
    std::vector<std::thread> threads;
    for (int w = 0; w < workers; ++w) {
      std::size_t begin = static_cast<std::size_t>(w) * chunk;
      std::size_t end = std::min(begin + chunk, refs.size());
      if (begin < end) threads.emplace_back(decode, begin, end);
    }
    for (auto& t : threads) t.join();
  }
}

struct SynthesisResult {
  squad::Dataset dataset;
  std::vector<DropRecord> drops;
};

namespace detail {

inline bool punct_only(std::string_view text) {
  bool saw = false;
  for (char32_t cp : uni::decode_utf8(text)) {
    if (uni::is_space(cp)) continue;
    if (!uni::is_punct(cp)) return false;
    saw = true;
  }
  return saw;
}

struct ParagraphOutput {
  std::optional<squad::Paragraph> paragraph;
  std::vector<DropRecord> drops;
};

inline ParagraphOutput retrieve_paragraph(const StageParagraph& par, bool drop_punct_only) {
  ParagraphOutput out;
  const auto drop_all = [&](DropReason reason, const std::string& detail) {
    for (const StageQa& q : par.qas) out.drops.push_back({q.qa.id, reason, detail});
  };

  for (const StageSentence& sen : par.sentences) {
    if (sen.tgt.empty()) {
      drop_all(DropReason::TranslationFailed, "untranslated context sentence");
      return out;
    }
  }
  if (par.sentences.empty()) {
    drop_all(DropReason::TranslationFailed, "context produced no sentences");
    return out;
  }

  // Source context tokens, in original context coordinates.
  textseg::Char2Word src_c2w;
  textseg::Word2Char src_w2c;
  std::vector<int> src_counts;
  {
    std::size_t word = 0;
    for (const StageSentence& sen : par.sentences) {
      textseg::TokenizedText toks = textseg::tokenize(sen.text);
      src_counts.push_back(static_cast<int>(toks.tokens.size()));
      for (const textseg::Token& t : toks.tokens) {
        textseg::Span span{t.span.start + sen.span.start, t.span.end + sen.span.start};
        src_c2w.by_start.emplace(span.start, word++);
        src_w2c.spans.push_back(span);
      }
    }
  }

  // Target context = translated sentences joined with single spaces.
  std::vector<std::string> tgt_sentences;
  tgt_sentences.reserve(par.sentences.size());
  for (const StageSentence& sen : par.sentences) tgt_sentences.push_back(sen.tgt);
  textseg::JoinedText joined = textseg::join_sentences(tgt_sentences);

  textseg::Word2Char tgt_w2c;
  std::vector<int> tgt_counts;
  for (std::size_t s = 0; s < par.sentences.size(); ++s) {
    textseg::TokenizedText toks = textseg::tokenize(par.sentences[s].tgt);
    tgt_counts.push_back(static_cast<int>(toks.tokens.size()));
    std::size_t off = joined.sentence_spans[s].start;
    for (const textseg::Token& t : toks.tokens)
      tgt_w2c.spans.push_back({t.span.start + off, t.span.end + off});
  }

  ContextAlignment ctx;
  try {
    std::vector<align::AlignmentLinkSet> sets;
    sets.reserve(par.alignments.size());
    for (const std::string& line : par.alignments) {
      std::vector<align::AlignmentLinkSet> parsed = align::parse_pharaoh(line + "\n");
      sets.push_back(parsed.empty() ? align::AlignmentLinkSet{} : std::move(parsed.front()));
    }
    ctx = build_context_alignment(sets, src_counts, tgt_counts);
  } catch (const Error& e) {
    drop_all(DropReason::OffsetError, e.what());
    return out;
  }

  squad::Paragraph out_par;
  out_par.context = joined.text;
  for (const StageQa& q : par.qas) {
    if (q.question_tgt.empty()) {
      out.drops.push_back({q.qa.id, DropReason::TranslationFailed, "untranslated question"});
      continue;
    }
    if (q.qa.answers.empty() || q.qa.answers.front().text.empty()) {
      out.drops.push_back({q.qa.id, DropReason::EmptyAnswer, "source answer is empty"});
      continue;
    }
    const squad::Answer& src_ans = q.qa.answers.front();
    if (src_ans.answer_start < 0 ||
        textseg::cp_substr(par.context, static_cast<std::size_t>(src_ans.answer_start),
                           static_cast<std::size_t>(src_ans.answer_start) +
                               uni::cp_length(src_ans.text)) != src_ans.text) {
      out.drops.push_back({q.qa.id, DropReason::OffsetError,
                           "source answer offset does not match context"});
      continue;
    }
    ExtractResult res =
        extract_answer({src_ans.text, static_cast<std::size_t>(src_ans.answer_start)}, src_c2w,
                       src_w2c, ctx, tgt_w2c, joined.text);
    if (std::holds_alternative<ExtractFailure>(res)) {
      const ExtractFailure& f = std::get<ExtractFailure>(res);
      out.drops.push_back({q.qa.id, f.reason, f.detail});
      continue;
    }
    ExtractedAnswer ans = std::get<ExtractedAnswer>(res);
    if (drop_punct_only && punct_only(ans.text)) {
      out.drops.push_back({q.qa.id, DropReason::EmptyAnswer, "punctuation-only answer"});
      continue;
    }
    squad::Qa out_qa;
    out_qa.id = q.qa.id;
    out_qa.question = q.question_tgt;
    out_qa.answers.push_back({ans.text, static_cast<std::int64_t>(ans.char_start)});
    out_par.qas.push_back(std::move(out_qa));
  }
  if (!out_par.qas.empty()) out.paragraph = std::move(out_par);
  return out;
}

} // namespace detail

// Final stage: join contexts, rebuild offset maps, extract answers. Outputs
// and drops partition the input samples; paragraphs whose samples all
// dropped are omitted from the output dataset.
inline SynthesisResult retrieve_stage(const StageDoc& doc, bool drop_punct_only = false,
                                      int jobs = 1) {
  SynthesisResult result;
  result.dataset.version = doc.version;

  std::vector<const StageParagraph*> paragraphs;
  for (const StageArticle& art : doc.articles)
    for (const StageParagraph& par : art.paragraphs) paragraphs.push_back(&par);

  std::vector<detail::ParagraphOutput> outputs(paragraphs.size());
  const auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t k = begin; k < end; ++k)
      outputs[k] = detail::retrieve_paragraph(*paragraphs[k], drop_punct_only);
  };
  if (jobs <= 1 || paragraphs.size() < 2) {
    work(0, paragraphs.size());
  } else {
    int workers = std::min<int>(jobs, static_cast<int>(paragraphs.size()));
    std::size_t chunk = (paragraphs.size() + workers - 1) / workers;
    std::vector<std::thread> threads;
    for (int w = 0; w < workers; ++w) {
      std::size_t begin = static_cast<std::size_t>(w) * chunk;
      std::size_t end = std::min(begin + chunk, paragraphs.size());
      if (begin < end) threads.emplace_back(work, begin, end);
    }
    for (auto& t : threads) t.join();
  }

  // Merge in input order so the output is deterministic at any job count.
  std::size_t k = 0;
  for (const StageArticle& art : doc.articles) {
    squad::Article out_art;
    out_art.title = art.title_tgt.empty() ? art.title : art.title_tgt;
    for (std::size_t p = 0; p < art.paragraphs.size(); ++p, ++k) {
      detail::ParagraphOutput& po = outputs[k];
      if (po.paragraph) out_art.paragraphs.push_back(std::move(*po.paragraph));
      for (DropRecord& d : po.drops) result.drops.push_back(std::move(d));
    }
    if (!out_art.paragraphs.empty()) result.dataset.articles.push_back(std::move(out_art));
  }
  return result;
}

// One-shot pipeline: split -> trim -> translate -> optional transliterate ->
// tokenize -> align -> retrieve. Questions are used without alteration;
// answers are extracted from the translated contexts.
inline SynthesisResult synthesize_dataset(const squad::Dataset& source,
                                          const SynthesisConfig& config) {
  if (!config.provider) throw std::invalid_argument("synthesize_dataset: provider required");
  StageDoc doc = split_stage(source, *config.abbrevs, config.src_lang, config.tgt_lang);
  translate_stage(doc, config.provider, config.cache, config.jobs);
  transliterate_stage(doc, config.translit);
  align_stage(doc, config.aligner, config.jobs);
  return retrieve_stage(doc, config.drop_punct_only_answers, config.jobs);
}

} // namespace qaforge::retrieve
