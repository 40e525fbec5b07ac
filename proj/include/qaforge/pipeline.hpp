#pragma once

// File-level pipeline stages and orchestration. Every stage reads the
// previous stage's artifact, writes its own, and records a manifest with
// content hashes of inputs, outputs and config so completed stages are
// skipped on rerun. The one-shot synthesize command chains the same stage
// functions over an intermediate directory, which keeps its output
// bit-identical to running the subcommands by hand.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "qaforge/errors.hpp"
#include "qaforge/evalkit.hpp"
#include "qaforge/ioutil.hpp"
#include "qaforge/retrieve.hpp"
#include "qaforge/squad.hpp"
#include "qaforge/translate.hpp"
#include "qaforge/translate_http.hpp"

namespace qaforge::pipeline {

namespace fs = std::filesystem;

// ---------------------------------------------------------------------------
// Stage document (de)serialization.

inline nlohmann::ordered_json stage_to_json(const retrieve::StageDoc& doc) {
  nlohmann::ordered_json root;
  root["version"] = doc.version;
  root["src_lang"] = doc.src_lang;
  root["tgt_lang"] = doc.tgt_lang;
  auto& jarts = root["articles"] = nlohmann::ordered_json::array();
  for (const retrieve::StageArticle& art : doc.articles) {
    nlohmann::ordered_json ja;
    ja["title"] = art.title;
    ja["title_tgt"] = art.title_tgt;
    auto& jps = ja["paragraphs"] = nlohmann::ordered_json::array();
    for (const retrieve::StageParagraph& par : art.paragraphs) {
      nlohmann::ordered_json jp;
      jp["context"] = par.context;
      auto& jss = jp["sentences"] = nlohmann::ordered_json::array();
      for (const retrieve::StageSentence& sen : par.sentences) {
        nlohmann::ordered_json js;
        js["text"] = sen.text;
        js["start"] = sen.span.start;
        js["end"] = sen.span.end;
        js["tgt"] = sen.tgt;
        jss.push_back(std::move(js));
      }
      auto& jqs = jp["qas"] = nlohmann::ordered_json::array();
      for (const retrieve::StageQa& q : par.qas) {
        nlohmann::ordered_json jq;
        jq["id"] = q.qa.id;
        jq["question"] = q.qa.question;
        jq["question_tgt"] = q.question_tgt;
        auto& jas = jq["answers"] = nlohmann::ordered_json::array();
        for (const squad::Answer& a : q.qa.answers) {
          nlohmann::ordered_json jans;
          jans["text"] = a.text;
          jans["answer_start"] = a.answer_start;
          jas.push_back(std::move(jans));
        }
        jqs.push_back(std::move(jq));
      }
      jp["alignments"] = par.alignments;
      jps.push_back(std::move(jp));
    }
    jarts.push_back(std::move(ja));
  }
  return root;
}

inline retrieve::StageDoc stage_from_json(const nlohmann::json& root) {
  retrieve::StageDoc doc;
  try {
    doc.version = root.value("version", std::string("1.1"));
    doc.src_lang = root.value("src_lang", std::string());
    doc.tgt_lang = root.value("tgt_lang", std::string());
    for (const auto& ja : root.at("articles")) {
      retrieve::StageArticle art;
      art.title = ja.value("title", std::string());
      art.title_tgt = ja.value("title_tgt", std::string());
      for (const auto& jp : ja.at("paragraphs")) {
        retrieve::StageParagraph par;
        par.context = jp.at("context").get<std::string>();
        for (const auto& js : jp.at("sentences")) {
          retrieve::StageSentence sen;
          sen.text = js.at("text").get<std::string>();
          sen.span.start = js.at("start").get<std::size_t>();
          sen.span.end = js.at("end").get<std::size_t>();
          sen.tgt = js.value("tgt", std::string());
          par.sentences.push_back(std::move(sen));
        }
        for (const auto& jq : jp.at("qas")) {
          retrieve::StageQa q;
          q.qa.id = jq.at("id").get<std::string>();
          q.qa.question = jq.at("question").get<std::string>();
          q.question_tgt = jq.value("question_tgt", std::string());
          for (const auto& jans : jq.at("answers"))
            q.qa.answers.push_back({jans.at("text").get<std::string>(),
                                    jans.at("answer_start").get<std::int64_t>()});
          par.qas.push_back(std::move(q));
        }
        if (jp.contains("alignments"))
          for (const auto& jl : jp.at("alignments"))
            par.alignments.push_back(jl.get<std::string>());
        art.paragraphs.push_back(std::move(par));
      }
      doc.articles.push_back(std::move(art));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("stage document: ") + e.what());
  }
  return doc;
}

inline retrieve::StageDoc load_stage(const fs::path& path) {
  nlohmann::json root = nlohmann::json::parse(io::read_file(path), nullptr, false);
  if (root.is_discarded()) throw ParseError("stage document: invalid JSON in " + path.string());
  return stage_from_json(root);
}

inline void save_stage(const retrieve::StageDoc& doc, const fs::path& path) {
  io::write_file(path, stage_to_json(doc).dump() + "\n");
}

// ---------------------------------------------------------------------------
// Config file: flat TOML-style `key = value` lines, '#' comments. Values may
// be bare or double-quoted. Precedence is handled by the CLI: flags beat
// config file entries beat defaults.

inline std::map<std::string, std::string> parse_config_file(const fs::path& path) {
  std::map<std::string, std::string> out;
  std::string data = io::read_file(path);
  io::for_each_line(data, [&](std::string_view line, std::size_t lineno) {
    std::size_t begin = line.find_first_not_of(" \t");
    if (begin == std::string_view::npos) return;
    if (line[begin] == '#' || line[begin] == '[') return;
    std::size_t eq = line.find('=', begin);
    if (eq == std::string_view::npos)
      throw ConfigError("config line " + std::to_string(lineno + 1) + ": expected key = value");
    std::string_view key = line.substr(begin, eq - begin);
    std::string_view value = line.substr(eq + 1);
    const auto strip = [](std::string_view v) {
      while (!v.empty() && (v.front() == ' ' || v.front() == '\t')) v.remove_prefix(1);
      while (!v.empty() && (v.back() == ' ' || v.back() == '\t' || v.back() == '\r'))
        v.remove_suffix(1);
      return v;
    };
    key = strip(key);
    value = strip(value);
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"')
      value = value.substr(1, value.size() - 2);
    if (key.empty())
      throw ConfigError("config line " + std::to_string(lineno + 1) + ": empty key");
    out[std::string(key)] = std::string(value);
  });
  return out;
}

// ---------------------------------------------------------------------------
// Stage manifests and resume.

struct StageIo {
  std::string stage;
  std::map<std::string, std::string> config;
  std::vector<fs::path> inputs;
  std::vector<fs::path> outputs;
};

inline fs::path manifest_path(const StageIo& io) {
  return fs::path(io.outputs.front().string() + ".manifest.json");
}

inline bool stage_up_to_date(const StageIo& stage_io) {
  const fs::path mpath = manifest_path(stage_io);
  if (!fs::exists(mpath)) return false;
  nlohmann::json m = nlohmann::json::parse(io::read_file(mpath), nullptr, false);
  if (m.is_discarded() || !m.is_object()) return false;
  if (m.value("stage", std::string()) != stage_io.stage) return false;
  nlohmann::json cfg = nlohmann::json::object();
  for (const auto& [k, v] : stage_io.config) cfg[k] = v;
  if (!m.contains("config") || m.at("config") != cfg) return false;
  const auto check = [&](const char* section, const std::vector<fs::path>& paths) {
    if (!m.contains(section) || !m.at(section).is_object()) return false;
    const auto& obj = m.at(section);
    if (obj.size() != paths.size()) return false;
    for (const fs::path& p : paths) {
      if (!fs::exists(p)) return false;
      auto it = obj.find(p.string());
      if (it == obj.end() || *it != io::hash_file_hex(p)) return false;
    }
    return true;
  };
  return check("inputs", stage_io.inputs) && check("outputs", stage_io.outputs);
}

inline void write_manifest(const StageIo& stage_io, double elapsed_ms) {
  nlohmann::ordered_json m;
  m["stage"] = stage_io.stage;
  nlohmann::ordered_json cfg = nlohmann::ordered_json::object();
  for (const auto& [k, v] : stage_io.config) cfg[k] = v;
  m["config"] = std::move(cfg);
  nlohmann::ordered_json ins = nlohmann::ordered_json::object();
  for (const fs::path& p : stage_io.inputs) ins[p.string()] = io::hash_file_hex(p);
  m["inputs"] = std::move(ins);
  nlohmann::ordered_json outs = nlohmann::ordered_json::object();
  for (const fs::path& p : stage_io.outputs) outs[p.string()] = io::hash_file_hex(p);
  m["outputs"] = std::move(outs);
  m["elapsed_ms"] = elapsed_ms;
  io::write_file(manifest_path(stage_io), m.dump(1) + "\n");
}

// Runs the stage unless its manifest proves it already ran with identical
// inputs and config. Returns true when the stage body executed.
template <typename Fn>
bool run_stage(const StageIo& stage_io, Fn&& fn) {
  if (stage_up_to_date(stage_io)) return false;
  auto t0 = std::chrono::steady_clock::now();
  fn();
  auto t1 = std::chrono::steady_clock::now();
  write_manifest(stage_io, std::chrono::duration<double, std::milli>(t1 - t0).count());
  return true;
}

// ---------------------------------------------------------------------------
// Providers and caches from CLI specs.

inline translate::ProviderHandle make_provider(const std::string& spec) {
  if (spec == "identity") return translate::identity_provider();
  if (spec.rfind("file:", 0) == 0) return translate::file_provider(spec.substr(5));
  if (spec.rfind("http:", 0) == 0) {
    std::string url = spec.substr(5);
    if (url.rfind("//", 0) == 0) url = "http:" + url; // accept http://host form
    return translate::http_provider(url);
  }
  throw ConfigError("unknown provider spec: " + spec +
                    " (expected identity | file:<path> | http:<url>)");
}

inline std::optional<fs::path> cache_file_from_env() {
  if (const char* dir = std::getenv("QAFORGE_CACHE_DIR"); dir && *dir)
    return fs::path(dir) / "translations.jsonl";
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Pipeline configuration shared by the CLI subcommands.

struct PipelineConfig {
  fs::path input;
  fs::path output;
  std::string provider_spec = "identity";
  std::string src_lang = "eng_Latn";
  std::string tgt_lang = "srp_Cyrl";
  retrieve::TranslitMode translit = retrieve::TranslitMode::off;
  std::string aligner_mode = "ibm1"; // ibm1 | gibbs | diagonal | external
  int iterations = 5;
  double alpha = 1e-3;
  std::uint64_t seed = 42;
  fs::path alignments; // external pharaoh alignments
  fs::path drop_report;
  int jobs = 1;
  bool drop_punct_only = false;

  retrieve::AlignerConfig aligner_config() const {
    retrieve::AlignerConfig cfg;
    if (aligner_mode == "ibm1") cfg.mode = retrieve::AlignerMode::ibm1;
    else if (aligner_mode == "gibbs") cfg.mode = retrieve::AlignerMode::gibbs;
    else if (aligner_mode == "diagonal") cfg.mode = retrieve::AlignerMode::diagonal;
    else if (aligner_mode == "external") cfg.mode = retrieve::AlignerMode::external;
    else throw ConfigError("unknown aligner mode: " + aligner_mode);
    if (!alignments.empty()) cfg.mode = retrieve::AlignerMode::external;
    cfg.iterations = iterations;
    cfg.alpha = alpha;
    cfg.seed = seed;
    cfg.external_alignments = alignments;
    return cfg;
  }

  const textseg::AbbrevLexicon& abbrevs_for_source() const {
    if (src_lang.rfind("eng", 0) == 0) return textseg::AbbrevLexicon::english();
    if (src_lang.rfind("srp", 0) == 0) return textseg::AbbrevLexicon::serbian();
    return textseg::AbbrevLexicon::empty();
  }

  std::map<std::string, std::string> fingerprint(std::string_view stage) const {
    std::map<std::string, std::string> m;
    m["src_lang"] = src_lang;
    m["tgt_lang"] = tgt_lang;
    if (stage == "translate") m["provider"] = provider_spec;
    if (stage == "transliterate") m["translit"] = retrieve::to_string(translit);
    if (stage == "align") {
      m["aligner"] = aligner_mode;
      m["iterations"] = std::to_string(iterations);
      m["alpha"] = std::to_string(alpha);
      m["seed"] = std::to_string(seed);
      if (!alignments.empty()) m["alignments"] = alignments.string();
    }
    if (stage == "retrieve")
      m["drop_punct_only"] = drop_punct_only ? "true" : "false";
    return m;
  }
};

// ---------------------------------------------------------------------------
// Stage runners. Each returns true when work was actually performed.

inline bool run_split(const PipelineConfig& cfg) {
  StageIo io_desc{"split", cfg.fingerprint("split"), {cfg.input}, {cfg.output}};
  return run_stage(io_desc, [&] {
    squad::Dataset ds = squad::load_dataset(cfg.input);
    retrieve::StageDoc doc =
        retrieve::split_stage(ds, cfg.abbrevs_for_source(), cfg.src_lang, cfg.tgt_lang);
    save_stage(doc, cfg.output);
  });
}

inline bool run_translate(const PipelineConfig& cfg) {
  StageIo io_desc{"translate", cfg.fingerprint("translate"), {cfg.input}, {cfg.output}};
  return run_stage(io_desc, [&] {
    retrieve::StageDoc doc = load_stage(cfg.input);
    doc.src_lang = cfg.src_lang;
    doc.tgt_lang = cfg.tgt_lang;
    translate::ProviderHandle provider = make_provider(cfg.provider_spec);
    std::optional<translate::TranslationCache> cache;
    if (auto file = cache_file_from_env()) cache.emplace(*file);
    translate_stage(doc, provider, cache ? &*cache : nullptr, cfg.jobs);
    save_stage(doc, cfg.output);
  });
}

inline bool run_transliterate(const PipelineConfig& cfg) {
  StageIo io_desc{"transliterate", cfg.fingerprint("transliterate"), {cfg.input}, {cfg.output}};
  return run_stage(io_desc, [&] {
    retrieve::StageDoc doc = load_stage(cfg.input);
    transliterate_stage(doc, cfg.translit);
    save_stage(doc, cfg.output);
  });
}

inline bool run_align_stage(const PipelineConfig& cfg) {
  StageIo io_desc{"align", cfg.fingerprint("align"), {cfg.input}, {cfg.output}};
  if (!cfg.alignments.empty()) io_desc.inputs.push_back(cfg.alignments);
  return run_stage(io_desc, [&] {
    retrieve::StageDoc doc = load_stage(cfg.input);
    align_stage(doc, cfg.aligner_config(), cfg.jobs);
    save_stage(doc, cfg.output);
  });
}

inline bool run_retrieve(const PipelineConfig& cfg) {
  fs::path drop_path = cfg.drop_report.empty()
                           ? fs::path(cfg.output.string() + ".drops.jsonl")
                           : cfg.drop_report;
  StageIo io_desc{"retrieve", cfg.fingerprint("retrieve"), {cfg.input}, {cfg.output, drop_path}};
  return run_stage(io_desc, [&] {
    retrieve::StageDoc doc = load_stage(cfg.input);
    retrieve::SynthesisResult result =
        retrieve::retrieve_stage(doc, cfg.drop_punct_only, cfg.jobs);
    squad::save_dataset(result.dataset, cfg.output);
    io::write_file(drop_path, retrieve::format_drop_report(result.drops));
  });
}

// Chains split -> translate -> transliterate -> align -> retrieve through an
// intermediate directory next to the output file.
inline void run_synthesize(const PipelineConfig& cfg) {
  const fs::path stages_dir = fs::path(cfg.output.string() + ".stages");
  std::error_code ec;
  fs::create_directories(stages_dir, ec);

  PipelineConfig step = cfg;
  step.input = cfg.input;
  step.output = stages_dir / "01_split.json";
  run_split(step);

  step.input = step.output;
  step.output = stages_dir / "02_translated.json";
  run_translate(step);

  step.input = step.output;
  step.output = stages_dir / "03_transliterated.json";
  run_transliterate(step);

  step.input = step.output;
  step.output = stages_dir / "04_aligned.json";
  run_align_stage(step);

  step.input = step.output;
  step.output = cfg.output;
  step.drop_report = cfg.drop_report.empty()
                         ? fs::path(cfg.output.string() + ".drops.jsonl")
                         : cfg.drop_report;
  run_retrieve(step);
}

} // namespace qaforge::pipeline
