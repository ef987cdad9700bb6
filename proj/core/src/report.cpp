#include "reviewminer/report.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>

#include "reviewminer/errors.hpp"

namespace reviewminer {
namespace {

using nlohmann::json;

constexpr std::array<std::pair<std::string_view, std::string_view>, 4> kSubsetFiles = {
    {{"global", "global"}, {"negative", "neg"}, {"positive", "pos"}, {"neutral", "neu"}}};

json optional_string(const std::optional<std::string>& s) { return s ? json(*s) : json(nullptr); }

std::optional<std::string> read_optional_string(const json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  return it->get<std::string>();
}

double read_double(const json& j) {
  return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

json counts_json(const LabelCounts& c) {
  return {{"negative", c[0]}, {"neutral", c[1]}, {"positive", c[2]}};
}

LabelCounts counts_from(const json& j) {
  return {j.at("negative").get<std::size_t>(), j.at("neutral").get<std::size_t>(), j.at("positive").get<std::size_t>()};
}

SentimentLabel label_from(const json& j) {
  const auto s = j.get<std::string>();
  const auto l = parse_label(s);
  if (!l) throw ValidationError("unknown sentiment label '" + s + "'");
  return *l;
}

json topics_json(const TopicSummary& topics) {
  json out = json::array();
  for (const auto& topic : topics) {
    json words = json::array();
    for (const auto& w : topic) words.push_back({{"token", w.token}, {"probability", w.probability}});
    out.push_back(std::move(words));
  }
  return out;
}

TopicSummary topics_from(const json& j) {
  TopicSummary out;
  for (const auto& topic : j) {
    std::vector<TopicWord> words;
    for (const auto& w : topic) words.push_back({w.at("token").get<std::string>(), read_double(w.at("probability"))});
    out.push_back(std::move(words));
  }
  return out;
}

json terms_json(const std::vector<TopTermRow>& rows) {
  json out = json::array();
  for (const auto& r : rows) out.push_back({{"token", r.token}, {"count", r.count}, {"tfidf_total", r.tfidf_total}});
  return out;
}

std::vector<TopTermRow> terms_from(const json& j) {
  std::vector<TopTermRow> out;
  for (const auto& r : j)
    out.push_back({r.at("token").get<std::string>(), r.at("count").get<std::uint64_t>(), read_double(r.at("tfidf_total"))});
  return out;
}

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  return out + "\"";
}

std::ofstream open_for_write(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ValidationError("cannot write '" + path.string() + "'");
  out << std::setprecision(10);
  return out;
}

}  // namespace

json report_to_json(const Report& r) {
  const auto& c = r.config;
  json config = {{"input", c.input},
                 {"format", c.format},
                 {"orders", c.orders},
                 {"k_min", c.k_min},
                 {"k_max", c.k_max},
                 {"alpha", c.alpha ? json(*c.alpha) : json(nullptr)},
                 {"beta", c.beta},
                 {"iterations", c.iterations},
                 {"top_n", c.top_n},
                 {"sentiment_method", c.sentiment_method},
                 {"compound_threshold", c.compound_threshold},
                 {"split", c.split},
                 {"nb_alpha", c.nb_alpha},
                 {"language_threshold", c.language_threshold},
                 {"seed", c.seed}};

  json orders = json::array();
  for (const auto& o : r.corpus.orders)
    orders.push_back({{"order", o.order},
                      {"documents", o.documents},
                      {"non_empty", o.non_empty},
                      {"vocab_size", o.vocab_size},
                      {"tokens", o.tokens}});
  json corpus = {{"ingested_rows", r.corpus.ingested_rows},
                 {"malformed", r.corpus.malformed},
                 {"kept", r.corpus.kept},
                 {"removed_non_english", r.corpus.removed_non_english},
                 {"rating_mean", r.corpus.rating_mean},
                 {"rating_sd", r.corpus.rating_sd},
                 {"orders", std::move(orders)}};

  json sweeps = json::array();
  for (const auto& s : r.sweeps) {
    json entries = json::array();
    for (std::size_t i = 0; i < s.entries.size(); ++i) {
      const auto& e = s.entries[i];
      entries.push_back({{"order", e.order},
                         {"num_topics", e.num_topics},
                         {"perplexity", e.perplexity},
                         {"coherence", e.coherence},
                         {"score", e.score},
                         {"chosen", s.best && *s.best == i}});
    }
    sweeps.push_back({{"subset", s.subset},
                      {"documents", s.documents},
                      {"excluded_from_interpretation", s.excluded_from_interpretation},
                      {"skipped_reason", optional_string(s.skipped_reason)},
                      {"entries", std::move(entries)},
                      {"best", s.best ? json(*s.best) : json(nullptr)},
                      {"topics", topics_json(s.topics)}});
  }

  const auto& st = r.sentiment;
  json evaluations = json::array();
  for (const auto& m : st.evaluations)
    evaluations.push_back(
        {{"method", m.method}, {"accuracy", m.evaluation.accuracy}, {"confusion", m.evaluation.confusion}});
  json sentiment = {{"requested_method", st.requested_method},
                    {"applied_method", st.applied_method},
                    {"train_size", st.train_size},
                    {"test_size", st.test_size},
                    {"train_counts", counts_json(st.train_counts)},
                    {"test_counts", counts_json(st.test_counts)},
                    {"evaluations", std::move(evaluations)},
                    {"auto_counts", counts_json(st.auto_counts)},
                    {"label_counts", counts_json(st.label_counts)},
                    {"auto_label_disagreements", st.auto_label_disagreements}};

  json labels = json::array();
  for (const auto& l : r.labels)
    labels.push_back({{"id", l.id},
                      {"rating", l.rating},
                      {"auto_label", to_string(l.auto_label)},
                      {"method_label", to_string(l.method_label)}});

  return {{"schema", r.schema},
          {"status", r.status},
          {"failed_stage", optional_string(r.failed_stage)},
          {"failure", optional_string(r.failure)},
          {"config", std::move(config)},
          {"corpus", std::move(corpus)},
          {"top_terms", {{"by_count", terms_json(r.top_terms.by_count)}, {"by_tfidf", terms_json(r.top_terms.by_tfidf)}}},
          {"sweeps", std::move(sweeps)},
          {"sentiment", std::move(sentiment)},
          {"labels", std::move(labels)},
          {"warnings", r.warnings}};
}

Report report_from_json(const json& j) {
  try {
    Report r;
    r.schema = j.at("schema").get<std::string>();
    if (r.schema != kReportSchema) throw ValidationError("unsupported report schema '" + r.schema + "'");
    r.status = j.at("status").get<std::string>();
    r.failed_stage = read_optional_string(j, "failed_stage");
    r.failure = read_optional_string(j, "failure");

    const auto& c = j.at("config");
    r.config.input = c.at("input").get<std::string>();
    r.config.format = c.at("format").get<std::string>();
    c.at("orders").get_to(r.config.orders);
    r.config.k_min = c.at("k_min").get<int>();
    r.config.k_max = c.at("k_max").get<int>();
    if (!c.at("alpha").is_null()) r.config.alpha = c.at("alpha").get<double>();
    r.config.beta = c.at("beta").get<double>();
    r.config.iterations = c.at("iterations").get<int>();
    r.config.top_n = c.at("top_n").get<int>();
    r.config.sentiment_method = c.at("sentiment_method").get<std::string>();
    r.config.compound_threshold = c.at("compound_threshold").get<double>();
    r.config.split = c.at("split").get<double>();
    r.config.nb_alpha = c.at("nb_alpha").get<double>();
    r.config.language_threshold = c.at("language_threshold").get<double>();
    r.config.seed = c.at("seed").get<std::uint64_t>();

    const auto& corpus = j.at("corpus");
    r.corpus.ingested_rows = corpus.at("ingested_rows").get<std::size_t>();
    r.corpus.malformed = corpus.at("malformed").get<std::size_t>();
    r.corpus.kept = corpus.at("kept").get<std::size_t>();
    r.corpus.removed_non_english = corpus.at("removed_non_english").get<std::size_t>();
    r.corpus.rating_mean = read_double(corpus.at("rating_mean"));
    r.corpus.rating_sd = read_double(corpus.at("rating_sd"));
    for (const auto& o : corpus.at("orders"))
      r.corpus.orders.push_back({o.at("order").get<int>(), o.at("documents").get<std::size_t>(),
                                 o.at("non_empty").get<std::size_t>(), o.at("vocab_size").get<std::size_t>(),
                                 o.at("tokens").get<std::size_t>()});

    r.top_terms.by_count = terms_from(j.at("top_terms").at("by_count"));
    r.top_terms.by_tfidf = terms_from(j.at("top_terms").at("by_tfidf"));

    for (const auto& s : j.at("sweeps")) {
      SweepSection section;
      section.subset = s.at("subset").get<std::string>();
      section.documents = s.at("documents").get<std::size_t>();
      section.excluded_from_interpretation = s.at("excluded_from_interpretation").get<bool>();
      section.skipped_reason = read_optional_string(s, "skipped_reason");
      for (const auto& e : s.at("entries"))
        section.entries.push_back({e.at("order").get<int>(), e.at("num_topics").get<int>(),
                                   read_double(e.at("perplexity")), read_double(e.at("coherence")),
                                   read_double(e.at("score"))});
      if (!s.at("best").is_null()) section.best = s.at("best").get<std::size_t>();
      section.topics = topics_from(s.at("topics"));
      r.sweeps.push_back(std::move(section));
    }

    const auto& st = j.at("sentiment");
    r.sentiment.requested_method = st.at("requested_method").get<std::string>();
    r.sentiment.applied_method = st.at("applied_method").get<std::string>();
    r.sentiment.train_size = st.at("train_size").get<std::size_t>();
    r.sentiment.test_size = st.at("test_size").get<std::size_t>();
    r.sentiment.train_counts = counts_from(st.at("train_counts"));
    r.sentiment.test_counts = counts_from(st.at("test_counts"));
    for (const auto& m : st.at("evaluations")) {
      MethodEvaluation me;
      me.method = m.at("method").get<std::string>();
      me.evaluation.accuracy = read_double(m.at("accuracy"));
      m.at("confusion").get_to(me.evaluation.confusion);
      r.sentiment.evaluations.push_back(std::move(me));
    }
    r.sentiment.auto_counts = counts_from(st.at("auto_counts"));
    r.sentiment.label_counts = counts_from(st.at("label_counts"));
    r.sentiment.auto_label_disagreements = st.at("auto_label_disagreements").get<std::size_t>();

    for (const auto& l : j.at("labels"))
      r.labels.push_back({l.at("id").get<std::string>(), l.at("rating").get<int>(), label_from(l.at("auto_label")),
                          label_from(l.at("method_label"))});
    j.at("warnings").get_to(r.warnings);
    return r;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed report JSON: ") + e.what());
  }
}

std::string dump_report(const Report& report) { return report_to_json(report).dump(2) + "\n"; }

void write_sweep_tsv(const SweepSection& section, std::ostream& out) {
  out << "order\tK\tperplexity\tcoherence\tscore\tchosen\n";
  for (std::size_t i = 0; i < section.entries.size(); ++i) {
    const auto& e = section.entries[i];
    out << e.order << '\t' << e.num_topics << '\t' << e.perplexity << '\t' << e.coherence << '\t' << e.score << '\t'
        << ((section.best && *section.best == i) ? 1 : 0) << '\n';
  }
}

void write_topics_tsv(const TopicSummary& topics, std::ostream& out) {
  out << "topic\trank\ttoken\tprobability\n";
  for (std::size_t t = 0; t < topics.size(); ++t)
    for (std::size_t r = 0; r < topics[t].size(); ++r)
      out << (t + 1) << '\t' << (r + 1) << '\t' << topics[t][r].token << '\t' << topics[t][r].probability << '\n';
}

void write_labels_csv(const std::vector<LabelRow>& labels, std::ostream& out) {
  out << "id,rating,auto_label,method_label\n";
  for (const auto& l : labels)
    out << csv_field(l.id) << ',' << l.rating << ',' << to_string(l.auto_label) << ',' << to_string(l.method_label)
        << '\n';
}

void emit_report(const Report& report, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir))
    throw ValidationError("cannot create output directory '" + dir.string() + "'");

  {
    auto out = open_for_write(dir / "report.json");
    out << dump_report(report);
  }
  {
    auto out = open_for_write(dir / "top_terms.tsv");
    out << "rank\ttoken\tcount\ttfidf_total\n";
    for (std::size_t i = 0; i < report.top_terms.by_count.size(); ++i) {
      const auto& t = report.top_terms.by_count[i];
      out << (i + 1) << '\t' << t.token << '\t' << t.count << '\t' << t.tfidf_total << '\n';
    }
  }
  for (const auto& [subset, suffix] : kSubsetFiles) {
    const SweepSection* section = nullptr;
    for (const auto& s : report.sweeps)
      if (s.subset == subset) section = &s;
    const SweepSection empty;
    auto sweep_out = open_for_write(dir / ("sweep_" + std::string(suffix) + ".tsv"));
    write_sweep_tsv(section ? *section : empty, sweep_out);
    auto topics_out = open_for_write(dir / ("topics_" + std::string(suffix) + ".tsv"));
    write_topics_tsv(section ? section->topics : empty.topics, topics_out);
  }
  {
    auto out = open_for_write(dir / "labels.csv");
    write_labels_csv(report.labels, out);
  }

  const auto marker = dir / "FAILED";
  if (report.status != "ok") {
    auto out = open_for_write(marker);
    out << report.failed_stage.value_or("unknown") << ": " << report.failure.value_or("") << '\n';
  } else {
    std::filesystem::remove(marker, ec);
  }
}

}  // namespace reviewminer
