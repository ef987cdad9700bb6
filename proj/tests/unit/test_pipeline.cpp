#include <doctest.h>

#include <atomic>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "fixtures.hpp"
#include "reviewminer/diagnostics.hpp"
#include "reviewminer/errors.hpp"
#include "reviewminer/pipeline.hpp"

using namespace reviewminer;
namespace fs = std::filesystem;

namespace {

// Fresh directory under the system temp dir, removed on scope exit.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = fs::temp_directory_path() /
            ("rm_pipeline_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

PipelineConfig small_config(const fs::path& input) {
  PipelineConfig cfg;
  cfg.input = input;
  cfg.orders = {1, 2};
  cfg.k_min = 2;
  cfg.k_max = 3;
  cfg.iterations = 15;
  cfg.top_terms = 5;
  cfg.fill_default_data_paths(RM_SHIPPED_DATA_DIR);
  return cfg;
}

fs::path write_fixture(const fs::path& dir, int reviews = 120, std::uint64_t seed = 7) {
  const auto p = dir / "reviews.csv";
  std::ofstream out(p, std::ios::binary);
  write_csv(rmtest::make_review_fixture(seed, reviews), out);
  return p;
}

Report quiet_run(const PipelineConfig& cfg) {
  ScopedWarningSink quiet([](std::string_view) {});
  return run_pipeline(cfg);
}

}  // namespace

TEST_CASE("config file entries and overrides") {
  TempDir tmp;
  write_file(tmp.path() / "run.conf",
             "# sample\n\nseed = 7\norders = 1,3\ntopics-min = 4\ntopics_max = 6\nalpha = 0.5\n"
             "method = nb\ninput = data/reviews.csv\nformat = jsonl\n");
  PipelineConfig cfg;
  apply_config_file(cfg, tmp.path() / "run.conf");
  CHECK(cfg.seed == 7);
  CHECK(cfg.orders == std::vector<int>{1, 3});
  CHECK(cfg.k_min == 4);
  CHECK(cfg.k_max == 6);
  CHECK(cfg.alpha == 0.5);
  CHECK(cfg.sentiment_method == SentimentMethod::nb);
  CHECK(cfg.format == InputFormat::jsonl);
  CHECK(cfg.input == tmp.path() / "data/reviews.csv");

  apply_config_entry(cfg, "seed", "9");
  CHECK(cfg.seed == 9);
  apply_config_entry(cfg, "ngram", "all");
  CHECK(cfg.orders == std::vector<int>{1, 2, 3});

  CHECK_THROWS_AS(apply_config_entry(cfg, "colour", "blue"), ValidationError);
  CHECK_THROWS_AS(apply_config_entry(cfg, "seed", "x"), ValidationError);
  CHECK_THROWS_AS(apply_config_entry(cfg, "method", "lstm"), ValidationError);
  write_file(tmp.path() / "bad.conf", "seed 7\n");
  CHECK_THROWS_AS(apply_config_file(cfg, tmp.path() / "bad.conf"), ValidationError);
  CHECK_THROWS_AS(apply_config_file(cfg, tmp.path() / "absent.conf"), ValidationError);
}

TEST_CASE("config validation") {
  TempDir tmp;
  auto cfg = small_config(write_fixture(tmp.path()));
  CHECK_NOTHROW(cfg.validate());
  auto bad = cfg;
  bad.k_min = 1;
  CHECK_THROWS_AS(bad.validate(), ValidationError);
  bad = cfg;
  bad.orders = {1, 1};
  CHECK_THROWS_AS(bad.validate(), ValidationError);
  bad = cfg;
  bad.input = tmp.path() / "missing.csv";
  CHECK_THROWS_AS(bad.validate(), ValidationError);
  bad = cfg;
  bad.split = 1.0;
  CHECK_THROWS_AS(bad.validate(), ValidationError);
}

TEST_CASE("pipeline run is deterministic and round-trips through JSON") {
  TempDir tmp;
  const auto cfg = small_config(write_fixture(tmp.path()));
  const auto a = quiet_run(cfg);
  const auto b = quiet_run(cfg);
  CHECK(dump_report(a) == dump_report(b));

  CHECK(a.status == "ok");
  CHECK(a.corpus.kept + a.corpus.removed_non_english + a.corpus.malformed == a.corpus.ingested_rows);
  REQUIRE(a.sweeps.size() == 4);
  CHECK(a.sweeps[0].subset == "global");
  CHECK(a.sweeps[0].entries.size() == 4);
  CHECK(a.sweeps[3].excluded_from_interpretation);
  CHECK(a.labels.size() == a.corpus.kept);
  std::size_t total = 0;
  for (const auto n : a.sentiment.label_counts) total += n;
  CHECK(total == a.corpus.kept);

  const auto back = report_from_json(nlohmann::json::parse(dump_report(a)));
  CHECK(dump_report(back) == dump_report(a));

  auto threaded = cfg;
  threaded.threads = 3;
  auto t = quiet_run(threaded);
  CHECK(dump_report(t) == dump_report(a));
}

TEST_CASE("changing the seed only changes seeded sections") {
  TempDir tmp;
  auto cfg = small_config(write_fixture(tmp.path()));
  const auto a = report_to_json(quiet_run(cfg));
  cfg.seed = 43;
  const auto b = report_to_json(quiet_run(cfg));
  for (const auto& [key, value] : a.items()) {
    if (key == "sweeps" || key == "sentiment" || key == "labels") continue;
    if (key == "config") {
      auto ca = value, cb = b.at("config");
      CHECK(ca.at("seed") != cb.at("seed"));
      ca.erase("seed");
      cb.erase("seed");
      CHECK(ca == cb);
      continue;
    }
    CHECK_MESSAGE(value == b.at(key), key);
  }
  CHECK(a.at("sweeps") != b.at("sweeps"));
}

TEST_CASE("constant ratings label everything neutral") {
  TempDir tmp;
  auto corpus = rmtest::make_review_fixture(3, 60);
  for (auto& r : corpus.reviews) r.rating = 4;
  const auto p = tmp.path() / "flat.csv";
  {
    std::ofstream out(p, std::ios::binary);
    write_csv(corpus, out);
  }
  auto cfg = small_config(p);
  std::vector<std::string> warnings;
  ScopedWarningSink sink([&](std::string_view w) { warnings.emplace_back(w); });
  const auto r = run_pipeline(cfg);
  CHECK(r.corpus.rating_sd == 0.0);
  CHECK(r.sentiment.auto_counts[label_index(SentimentLabel::neutral)] == r.corpus.kept);
  CHECK(std::any_of(r.warnings.begin(), r.warnings.end(),
                    [](const std::string& w) { return w.find("standard deviation is 0") != std::string::npos; }));
  for (const auto& s : r.sweeps) {
    if (s.subset == "negative" || s.subset == "positive") {
      CHECK(s.skipped_reason == std::optional<std::string>("no documents"));
      CHECK(s.entries.empty());
    }
  }
}

TEST_CASE("a failing stage carries a partial report") {
  TempDir tmp;
  const auto p = tmp.path() / "foreign.csv";
  write_file(p,
             "id,app,platform,rating,body,language\n"
             "1,x,ios,3,Das ist eine sehr gute Anwendung,de\n"
             "2,x,ios,4,Une application vraiment utile,fr\n");
  auto cfg = small_config(p);
  try {
    (void)quiet_run(cfg);
    FAIL("expected a stage failure");
  } catch (const StageError& e) {
    CHECK(e.stage() == "filter");
    CHECK_FALSE(e.invalid_input());
    const auto& partial = e.partial();
    CHECK(partial.status == "failed");
    CHECK(partial.failed_stage == std::optional<std::string>("filter"));
    CHECK(partial.corpus.ingested_rows == 2);
    CHECK(partial.corpus.removed_non_english == 2);
    CHECK(partial.sweeps.empty());

    const auto out = tmp.path() / "out";
    emit_report(partial, out);
    CHECK(fs::exists(out / "FAILED"));
    CHECK(read_file(out / "FAILED").rfind("filter: ", 0) == 0);
    const auto j = nlohmann::json::parse(read_file(out / "report.json"));
    CHECK(j.at("status") == "failed");
  }

  write_file(p, "id,rating\n1,3\n");
  try {
    (void)quiet_run(cfg);
    FAIL("expected a stage failure");
  } catch (const StageError& e) {
    CHECK(e.stage() == "ingest");
    CHECK(e.invalid_input());
  }
}

TEST_CASE("emitted files") {
  TempDir tmp;
  const auto r = quiet_run(small_config(write_fixture(tmp.path(), 80)));
  const auto out = tmp.path() / "out";
  fs::create_directories(out);
  write_file(out / "FAILED", "stale\n");
  emit_report(r, out);
  for (const char* f : {"report.json", "top_terms.tsv", "sweep_global.tsv", "sweep_neg.tsv", "sweep_pos.tsv",
                        "sweep_neu.tsv", "topics_global.tsv", "topics_neg.tsv", "topics_pos.tsv", "topics_neu.tsv",
                        "labels.csv"})
    CHECK_MESSAGE(fs::exists(out / f), f);
  CHECK_FALSE(fs::exists(out / "FAILED"));
  CHECK(read_file(out / "report.json") == dump_report(r));

  std::istringstream sweep(read_file(out / "sweep_global.tsv"));
  std::string line;
  std::size_t rows = 0;
  std::getline(sweep, line);
  while (std::getline(sweep, line)) ++rows;
  CHECK(rows == r.sweeps[0].entries.size());

  std::istringstream labels(read_file(out / "labels.csv"));
  rows = 0;
  std::getline(labels, line);
  CHECK(line.rfind("id,rating,auto_label,", 0) == 0);
  while (std::getline(labels, line)) ++rows;
  CHECK(rows == r.labels.size());
}

TEST_CASE("method selection") {
  CHECK(parse_method("auto") == SentimentMethod::automatic);
  CHECK(parse_method("all") == SentimentMethod::all);
  CHECK_FALSE(parse_method("lstm"));
  CHECK(to_string(SentimentMethod::compound) == "compound");

  TempDir tmp;
  auto cfg = small_config(write_fixture(tmp.path(), 80));
  cfg.sentiment_method = SentimentMethod::automatic;
  const auto r = quiet_run(cfg);
  CHECK(r.sentiment.evaluations.empty());
  CHECK(r.sentiment.auto_label_disagreements == 0);
  for (const auto& row : r.labels) CHECK(row.auto_label == row.method_label);

  cfg.sentiment_method = SentimentMethod::all;
  const auto all = quiet_run(cfg);
  REQUIRE(all.sentiment.evaluations.size() == 3);
  double best = -1.0;
  for (const auto& e : all.sentiment.evaluations) best = std::max(best, e.evaluation.accuracy);
  for (const auto& e : all.sentiment.evaluations)
    if (e.method == all.sentiment.applied_method) CHECK(e.evaluation.accuracy == best);
}
