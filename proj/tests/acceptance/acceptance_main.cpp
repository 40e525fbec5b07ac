// Acceptance suite: one check per criterion, each printing a single
// [PASS]/[FAIL] line. Run all with no arguments or one with --criterion N.
// --dump-eval-fixture <dir> writes the English scoring fixture for the
// reference scorer script (tests/tools/squad_v11_reference.py) that the
// frozen expected values in criterion 5 come from.

#include <chrono>
#include <cstdio>
#include <cstring>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "qaforge/align.hpp"
#include "qaforge/evalkit.hpp"
#include "qaforge/ioutil.hpp"
#include "qaforge/pipeline.hpp"
#include "qaforge/retrieve.hpp"
#include "qaforge/squad.hpp"
#include "qaforge/translit.hpp"

#include "../testutil.hpp"

namespace {

using namespace qaforge;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

struct CheckFailure {
  std::string message;
};

void require(bool condition, const std::string& message) {
  if (!condition) throw CheckFailure{message};
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// --- criterion 1 -----------------------------------------------------------

void criterion_identity_round_trip() {
  auto t0 = Clock::now();
  squad::Dataset source = testutil::make_identity_fixture(1, 10, 2, 5);
  require(source.sample_count() == 100, "fixture must hold 100 samples");

  retrieve::SynthesisConfig cfg;
  cfg.provider = translate::identity_provider();
  cfg.aligner.mode = retrieve::AlignerMode::diagonal;
  retrieve::SynthesisResult result = retrieve::synthesize_dataset(source, cfg);

  require(result.drops.empty(),
          "expected 0 drops, got " + std::to_string(result.drops.size()));
  auto in = retrieve::flatten_samples(source);
  auto out = retrieve::flatten_samples(result.dataset);
  require(in.size() == out.size(), "sample count changed");
  for (std::size_t k = 0; k < in.size(); ++k) {
    require(out[k].answer_text == in[k].answer_text,
            "answer text diverged for " + in[k].id);
    require(out[k].answer_start == in[k].answer_start,
            "answer offset diverged for " + in[k].id);
  }

  std::unordered_map<std::string, std::string> preds;
  for (const auto& s : out) preds[s.id] = s.answer_text;
  evalkit::EvalReport report = evalkit::evaluate(preds, source);
  require(report.exact_match == 100.0, "EM vs source answers must be 100");

  double elapsed = seconds_since(t0);
  require(elapsed < 5.0, "runtime " + std::to_string(elapsed) + "s exceeds 5s");
}

// --- criterion 2 -----------------------------------------------------------

void criterion_aligner_accuracy() {
  auto t0 = Clock::now();
  auto synthetic = testutil::make_bijective_corpus(20260809, 500, 200, 3, 10);
  align::LexiconTable table = align::train_ibm1(synthetic.corpus, 5, 1e-3);
  std::vector<align::AlignmentLinkSet> decoded;
  decoded.reserve(synthetic.corpus.pairs.size());
  for (const auto& pair : synthetic.corpus.pairs)
    decoded.push_back(align::viterbi_align(table, pair));
  auto pr = testutil::score_alignments(decoded, synthetic.truth);
  require(pr.precision >= 0.95,
          "precision " + std::to_string(pr.precision) + " below 0.95");
  require(pr.recall >= 0.95, "recall " + std::to_string(pr.recall) + " below 0.95");
  double elapsed = seconds_since(t0);
  require(elapsed < 30.0, "runtime " + std::to_string(elapsed) + "s exceeds 30s");
}

// --- criterion 3 -----------------------------------------------------------

void criterion_em_monotonicity() {
  auto synthetic = testutil::make_bijective_corpus(20260809, 500, 200, 3, 10);
  align::Ibm1Trainer trainer(synthetic.corpus, {1e-3, 200});
  double prev = trainer.log_likelihood();
  for (int it = 1; it <= 10; ++it) {
    trainer.iterate(1);
    for (std::size_t e = 0; e < trainer.table().src_vocab_size(); ++e) {
      auto id = static_cast<std::int32_t>(e);
      if (trainer.table().row(id).empty()) continue;
      double sum = trainer.table().row_sum(id);
      require(std::abs(sum - 1.0) <= 1e-9,
              "row sum " + std::to_string(sum) + " after iteration " + std::to_string(it));
    }
    double ll = trainer.log_likelihood();
    require(ll >= prev - 1e-6, "log-likelihood decreased at iteration " + std::to_string(it) +
                                   ": " + std::to_string(prev) + " -> " + std::to_string(ll));
    prev = ll;
  }
}

// --- criterion 4 -----------------------------------------------------------

void criterion_symmetrization_oracle() {
  std::mt19937_64 rng(424242);
  for (int trial = 0; trial < 1000; ++trial) {
    const int s = 8, t = 8;
    auto fwd = testutil::random_links(rng, s, t, 0.2);
    auto rev = testutil::random_links(rng, s, t, 0.2);
    auto expected = testutil::gdfa_reference(fwd, rev, s, t);
    auto got = testutil::to_pair_set(align::symmetrize_gdfa(
        testutil::from_pair_set(fwd, s, t, align::Direction::forward),
        testutil::from_pair_set(rev, s, t, align::Direction::reverse)));
    require(got == expected, "transcription mismatch at trial " + std::to_string(trial));

    for (const auto& l : fwd)
      if (rev.count(l))
        require(got.count(l) > 0, "intersection link missing from output");
    for (const auto& l : got)
      require(fwd.count(l) || rev.count(l), "output link outside the union");
  }
}

// --- criterion 5 -----------------------------------------------------------

// Frozen output of tests/tools/squad_v11_reference.py on the fixture from
// make_english_eval_fixture (see --dump-eval-fixture).
constexpr double kExpectedCompatEm = 40.0;
constexpr double kExpectedCompatF1 = 68.23809523809524;

void criterion_metric_fidelity() {
  require(evalkit::f1("u Smiljanu", {"Smiljanu"}) == 2.0 / 3.0,
          "hand-computed F1 2/3 case failed");
  require(evalkit::exact_match("u Smiljanu", {"Smiljanu"}) == 0, "EM strictness case failed");
  require(evalkit::exact_match("smiljanu.", {"Smiljanu"}) == 1,
          "EM normalization case failed");
  require(evalkit::exact_match("Никола Тесла", {"Никола Тесла"}) == 1, "EM identity failed");

  auto fixture = testutil::make_english_eval_fixture();
  require(fixture.dataset.sample_count() == 50, "english fixture must hold 50 samples");
  evalkit::EvalReport report = evalkit::evaluate(
      fixture.predictions, fixture.dataset, evalkit::NormalizationOptions::english_compat());
  {
    std::ostringstream msg;
    msg.precision(17);
    msg << "english-compat scores (" << report.exact_match << ", " << report.f1
        << ") differ from official scorer (" << kExpectedCompatEm << ", " << kExpectedCompatF1
        << ")";
    require(report.exact_match == kExpectedCompatEm && report.f1 == kExpectedCompatF1,
            msg.str());
  }
}

// --- criterion 6 -----------------------------------------------------------

fs::path squad_train_path() {
  if (const char* p = std::getenv("QAFORGE_SQUAD_TRAIN"); p && *p) return fs::path(p);
  return testutil::fixture_dir() / "train-v1.1.json";
}

void criterion_statistics_engine() {
  fs::path path = squad_train_path();
  require(fs::exists(path),
          "SQuAD v1.1 train file not found at " + path.string() +
              " (set QAFORGE_SQUAD_TRAIN; see README for the download location)");
  auto t0 = Clock::now();
  squad::Dataset ds = squad::load_dataset(path);
  evalkit::DatasetStats stats = evalkit::dataset_stats(ds);
  double elapsed = seconds_since(t0);

  require(stats.samples == 87599,
          "sample count " + std::to_string(stats.samples) + " != 87599");
  require(std::llabs(stats.context_length - 736) <= 1,
          "context length " + std::to_string(stats.context_length) + " not within 736 +/- 1");
  require(std::llabs(stats.question_length - 60) <= 1,
          "question length " + std::to_string(stats.question_length) + " not within 60 +/- 1");
  require(std::llabs(stats.answer_length - 20) <= 1,
          "answer length " + std::to_string(stats.answer_length) + " not within 20 +/- 1");
  require(elapsed < 10.0, "runtime " + std::to_string(elapsed) + "s exceeds 10s");
}

// --- criterion 7 -----------------------------------------------------------

void criterion_transliteration() {
  auto lines = io::read_lines(testutil::fixture_dir() / "translit_golden.tsv");
  require(lines.size() == 60, "golden table must list 60 letters");
  for (const std::string& line : lines) {
    auto tab = line.find('\t');
    require(tab != std::string::npos, "golden line without tab: " + line);
    std::string cyr = line.substr(0, tab);
    std::string lat = line.substr(tab + 1);
    require(translit::cyr_to_lat(cyr) == lat, "table mismatch for " + cyr);
  }
  require(translit::cyr_to_lat("ЉУБАВ") == "LJUBAV", "all-caps digraph casing failed");
  require(translit::cyr_to_lat("Његош") == "Njegoš", "mixed-case digraph casing failed");

  auto words = io::read_lines(testutil::fixture_dir() / "sr_words_unambiguous.txt");
  require(words.size() == 200, "curated corpus must hold 200 words");
  for (const std::string& word : words) {
    auto [back, ambiguous] = translit::lat_to_cyr(translit::cyr_to_lat(word));
    require(back == word, "round trip diverged for " + word);
  }
}

// --- criterion 8 -----------------------------------------------------------

void criterion_conservation() {
  // run A: clean identity pipeline; run B: injected alignments with gaps and
  // an empty translation, forcing every drop reason through the books.
  {
    squad::Dataset ds = testutil::make_identity_fixture(21, 5, 2, 5);
    retrieve::SynthesisConfig cfg;
    cfg.provider = translate::identity_provider();
    cfg.aligner.mode = retrieve::AlignerMode::ibm1;
    retrieve::SynthesisResult result = retrieve::synthesize_dataset(ds, cfg);
    require(result.dataset.sample_count() + result.drops.size() == ds.sample_count(),
            "conservation violated in identity+ibm1 run");
    for (const auto& s : retrieve::flatten_samples(result.dataset))
      require(s.answer_embedded(), "embedded-answer invariant violated for " + s.id);
  }
  {
    testutil::TempDir tmp("accept_cons");
    squad::Dataset ds;
    ds.version = "1.1";
    squad::Article art;
    art.title = "A";
    squad::Paragraph par;
    par.context = "aa bb. Cc dd.";
    par.qas.push_back({"k1", "Prvo?", {{"aa", 0}}});
    par.qas.push_back({"k2", "Drugo?", {{"Cc", 7}}});
    art.paragraphs.push_back(par);
    ds.articles.push_back(art);
    io::write_file(tmp / "ext.pharaoh", "0-0 1-1 2-2\n1-1\n"); // k2's answer unaligned

    retrieve::SynthesisConfig cfg;
    cfg.provider = translate::identity_provider();
    cfg.aligner.mode = retrieve::AlignerMode::external;
    cfg.aligner.external_alignments = tmp / "ext.pharaoh";
    retrieve::SynthesisResult result = retrieve::synthesize_dataset(ds, cfg);
    require(result.dataset.sample_count() + result.drops.size() == ds.sample_count(),
            "conservation violated in drop run");
    require(result.drops.size() == 1 &&
                result.drops[0].reason == retrieve::DropReason::NoAlignment,
            "expected exactly one NoAlignment drop");
    for (const auto& s : retrieve::flatten_samples(result.dataset))
      require(s.answer_embedded(), "embedded-answer invariant violated for " + s.id);
  }
}

// --- criterion 9 -----------------------------------------------------------

void criterion_determinism() {
  testutil::TempDir tmp("accept_det");
  squad::Dataset ds = testutil::make_identity_fixture(33, 6, 2, 5);
  squad::save_dataset(ds, tmp / "input.json");

  const auto run = [&](const std::string& tag) {
    pipeline::PipelineConfig cfg;
    cfg.input = tmp / "input.json";
    cfg.output = tmp / (tag + ".json");
    cfg.drop_report = tmp / (tag + ".drops.jsonl");
    cfg.provider_spec = "identity";
    cfg.aligner_mode = "ibm1";
    cfg.iterations = 3;
    cfg.seed = 7;
    cfg.jobs = 1; // serial mode
    pipeline::run_synthesize(cfg);
    return std::pair(io::read_file(cfg.output), io::read_file(cfg.drop_report));
  };

  auto [data_a, drops_a] = run("a");
  auto [data_b, drops_b] = run("b");
  require(data_a == data_b, "dataset bytes differ between serial runs");
  require(drops_a == drops_b, "drop report bytes differ between serial runs");
  require(!data_a.empty(), "dataset output is empty");
}

// ---------------------------------------------------------------------------

struct Criterion {
  int number;
  const char* description;
  std::function<void()> check;
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> list = {
      {1, "identity round-trip: 0 drops, EM 100, identical offsets, < 5 s",
       criterion_identity_round_trip},
      {2, "aligner accuracy: precision/recall >= 0.95 on synthetic corpus, < 30 s",
       criterion_aligner_accuracy},
      {3, "EM monotonicity and lexicon row normalization over 10 iterations",
       criterion_em_monotonicity},
      {4, "grow-diag-final-and equals independent transcription on 1000 seeded pairs",
       criterion_symmetrization_oracle},
      {5, "metric fidelity: hand cases and official-scorer agreement",
       criterion_metric_fidelity},
      {6, "statistics engine matches SQuAD v1.1 train reference numbers, < 10 s",
       criterion_statistics_engine},
      {7, "transliteration golden table and unambiguous round-trip",
       criterion_transliteration},
      {8, "conservation: outputs + drops partition inputs, answers embedded",
       criterion_conservation},
      {9, "determinism: serial synthesize runs are byte-identical",
       criterion_determinism},
  };
  return list;
}

int dump_eval_fixture(const fs::path& dir) {
  auto fixture = testutil::make_english_eval_fixture();
  squad::save_dataset(fixture.dataset, dir / "eval_fixture_dataset.json");
  nlohmann::ordered_json preds;
  std::vector<std::string> ids;
  for (const auto& [id, text] : fixture.predictions) ids.push_back(id);
  std::sort(ids.begin(), ids.end());
  for (const auto& id : ids) preds[id] = fixture.predictions.at(id);
  io::write_file(dir / "eval_fixture_predictions.json", preds.dump(1) + "\n");
  std::cout << "wrote fixture to " << dir.string() << "\n";
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int k = 1; k < argc; ++k) {
    if (std::strcmp(argv[k], "--criterion") == 0 && k + 1 < argc) {
      only = std::atoi(argv[k + 1]);
      ++k;
    } else if (std::strcmp(argv[k], "--dump-eval-fixture") == 0 && k + 1 < argc) {
      return dump_eval_fixture(argv[k + 1]);
    } else {
      std::fprintf(stderr, "usage: %s [--criterion N]\n", argv[0]);
      return 2;
    }
  }

  int failures = 0;
  int ran = 0;
  for (const Criterion& c : criteria()) {
    if (only != 0 && c.number != only) continue;
    ++ran;
    try {
      c.check();
      std::printf("[PASS] criterion %d: %s\n", c.number, c.description);
    } catch (const CheckFailure& f) {
      ++failures;
      std::printf("[FAIL] criterion %d: %s — %s\n", c.number, c.description,
                  f.message.c_str());
    } catch (const std::exception& e) {
      ++failures;
      std::printf("[FAIL] criterion %d: %s — unexpected error: %s\n", c.number, c.description,
                  e.what());
    }
  }
  if (ran == 0) {
    std::fprintf(stderr, "no such criterion: %d\n", only);
    return 2;
  }
  return failures == 0 ? 0 : 1;
}
