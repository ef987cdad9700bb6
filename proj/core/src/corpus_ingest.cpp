#include "reviewminer/corpus_ingest.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "reviewminer/errors.hpp"
#include "reviewminer/text_prep.hpp"

namespace reviewminer {
namespace {

using nlohmann::json;

constexpr std::array<std::string_view, 8> kColumns = {"id",    "app",  "platform", "rating",
                                                      "title", "body", "date",     "language"};
constexpr std::array<std::string_view, 5> kRequired = {"id", "app", "platform", "rating", "body"};

std::string_view trim(std::string_view s) {
  const auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

bool is_iso_date(std::string_view s) {
  // YYYY-MM-DD, optionally followed by a time part starting with 'T'.
  if (s.size() < 10) return false;
  for (std::size_t i : {0u, 1u, 2u, 3u, 5u, 6u, 8u, 9u})
    if (s[i] < '0' || s[i] > '9') return false;
  if (s[4] != '-' || s[7] != '-') return false;
  const int month = (s[5] - '0') * 10 + (s[6] - '0');
  const int day = (s[8] - '0') * 10 + (s[9] - '0');
  if (month < 1 || month > 12 || day < 1 || day > 31) return false;
  return s.size() == 10 || s[10] == 'T';
}

std::optional<int> parse_int(std::string_view s) {
  s = trim(s);
  int value = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return value;
}

// Field values of one input record, keyed by column name. Absent optional
// fields are std::nullopt.
struct RecordFields {
  std::map<std::string, std::optional<std::string>, std::less<>> values;
  std::optional<std::string> rating_error;  // set when a JSON rating has a bad type
};

// One error record per row: fields joined with ',', messages with "; ".
RowError merge(const std::vector<RowError>& problems) {
  RowError e = problems.front();
  for (std::size_t i = 1; i < problems.size(); ++i) {
    if (e.field.find(problems[i].field) == std::string::npos) e.field += "," + problems[i].field;
    e.message += "; " + problems[i].message;
  }
  return e;
}

// Validates one record; on success appends to the corpus, otherwise appends
// a single RowError describing every problem found.
void accept_record(const RecordFields& rec, std::size_t line, std::unordered_set<std::string>& seen_ids,
                   IngestResult& out) {
  std::vector<RowError> problems;
  const auto get = [&](std::string_view key) -> std::optional<std::string> {
    const auto it = rec.values.find(key);
    return it == rec.values.end() ? std::nullopt : it->second;
  };

  for (const auto key : kRequired) {
    const auto v = get(key);
    if (!v || trim(*v).empty()) problems.push_back({line, std::string(key), "missing required field"});
  }

  Review r;
  if (const auto id = get("id"); id && !trim(*id).empty()) {
    r.id = std::string(trim(*id));
    if (seen_ids.contains(r.id)) problems.push_back({line, "id", "duplicate id '" + r.id + "'"});
  }
  if (const auto app = get("app")) r.app = *app;
  if (const auto platform = get("platform"); platform && !trim(*platform).empty()) {
    if (const auto p = parse_platform(trim(*platform))) {
      r.platform = *p;
    } else {
      problems.push_back({line, "platform", "unknown platform '" + *platform + "' (expected ios or google)"});
    }
  }
  if (rec.rating_error) {
    problems.push_back({line, "rating", *rec.rating_error});
  } else if (const auto rating = get("rating"); rating && !trim(*rating).empty()) {
    const auto v = parse_int(*rating);
    if (!v) {
      problems.push_back({line, "rating", "rating '" + *rating + "' is not an integer"});
    } else if (*v < 1 || *v > 5) {
      problems.push_back({line, "rating", "rating " + std::to_string(*v) + " outside 1..5"});
    } else {
      r.rating = *v;
    }
  }
  if (const auto body = get("body")) r.body = *body;

  const auto optional_text = [&](std::string_view key) -> std::optional<std::string> {
    auto v = get(key);
    if (v && v->empty()) return std::nullopt;
    return v;
  };
  r.title = optional_text("title");
  r.date = optional_text("date");
  r.language = optional_text("language");
  if (r.date && !is_iso_date(*r.date)) problems.push_back({line, "date", "date '" + *r.date + "' is not ISO-8601"});

  if (!problems.empty()) {
    out.errors.push_back(merge(problems));
    return;
  }
  seen_ids.insert(r.id);
  out.corpus.reviews.push_back(std::move(r));
}

// RFC-4180 record reader. Returns false at end of input.
class CsvReader {
 public:
  explicit CsvReader(std::istream& in) : in_(in) {}

  bool next(std::vector<std::string>& fields, std::size_t& start_line, bool& well_formed) {
    fields.clear();
    well_formed = true;
    int c = in_.get();
    // Skip blank lines between records.
    while (c == '\n' || c == '\r') {
      if (c == '\n') ++line_;
      c = in_.get();
    }
    if (c == std::char_traits<char>::eof()) return false;
    start_line = line_;

    std::string field;
    bool quoted = false;
    bool after_quote = false;
    for (;; c = in_.get()) {
      if (c == std::char_traits<char>::eof()) {
        if (quoted) well_formed = false;
        fields.push_back(std::move(field));
        return true;
      }
      const char ch = static_cast<char>(c);
      if (quoted) {
        if (ch == '"') {
          if (in_.peek() == '"') {
            in_.get();
            field.push_back('"');
          } else {
            quoted = false;
            after_quote = true;
          }
        } else {
          if (ch == '\n') ++line_;
          field.push_back(ch);
        }
        continue;
      }
      if (ch == ',') {
        fields.push_back(std::move(field));
        field.clear();
        after_quote = false;
      } else if (ch == '\n' || ch == '\r') {
        if (ch == '\r' && in_.peek() == '\n') in_.get();
        ++line_;
        fields.push_back(std::move(field));
        return true;
      } else if (ch == '"' && field.empty() && !after_quote) {
        quoted = true;
      } else {
        if (after_quote) well_formed = false;  // text after a closing quote
        field.push_back(ch);
      }
    }
  }

 private:
  std::istream& in_;
  std::size_t line_ = 1;
};

std::string csv_escape(std::string_view s) {
  const bool needs_quotes = s.find_first_of(",\"\r\n") != std::string_view::npos ||
                            (!s.empty() && (s.front() == ' ' || s.back() == ' '));
  if (!needs_quotes) return std::string(s);
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace

std::string_view to_string(Platform p) { return p == Platform::ios ? "ios" : "google"; }

std::optional<Platform> parse_platform(std::string_view s) {
  if (s == "ios") return Platform::ios;
  if (s == "google") return Platform::google;
  return std::nullopt;
}

std::string_view to_string(InputFormat f) { return f == InputFormat::csv ? "csv" : "jsonl"; }

std::optional<InputFormat> parse_format(std::string_view s) {
  if (s == "csv") return InputFormat::csv;
  if (s == "jsonl") return InputFormat::jsonl;
  return std::nullopt;
}

std::string Review::text() const {
  if (!title || title->empty()) return body;
  return *title + " " + body;
}

IngestResult ingest(const std::filesystem::path& path, InputFormat format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read input file '" + path.string() + "'");
  auto result = format == InputFormat::csv ? ingest_csv(in) : ingest_jsonl(in);
  result.corpus.source_meta["path"] = path.string();
  result.corpus.source_meta["format"] = std::string(to_string(format));
  return result;
}

IngestResult ingest_csv(std::istream& in) {
  IngestResult result;
  CsvReader reader(in);
  std::vector<std::string> fields;
  std::size_t line = 0;
  bool well_formed = true;

  if (!reader.next(fields, line, well_formed)) throw ValidationError("CSV input has no header row");
  if (!fields.empty() && fields[0].starts_with("\xEF\xBB\xBF")) fields[0].erase(0, 3);  // BOM

  std::map<std::string, std::size_t, std::less<>> column_of;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    const auto name = std::string(trim(fields[i]));
    if (std::find(kColumns.begin(), kColumns.end(), name) == kColumns.end())
      throw ValidationError("CSV header has unknown column '" + name + "'");
    if (!column_of.emplace(name, i).second) throw ValidationError("CSV header repeats column '" + name + "'");
  }
  for (const auto key : kRequired)
    if (!column_of.contains(key)) throw ValidationError("CSV header lacks required column '" + std::string(key) + "'");

  std::unordered_set<std::string> seen_ids;
  while (reader.next(fields, line, well_formed)) {
    ++result.row_count;
    if (!well_formed) {
      result.errors.push_back({line, "*", "malformed quoting"});
      continue;
    }
    if (fields.size() != column_of.size()) {
      result.errors.push_back({line, "*",
                               "expected " + std::to_string(column_of.size()) + " fields, found " +
                                   std::to_string(fields.size())});
      continue;
    }
    RecordFields rec;
    for (const auto& [name, idx] : column_of) rec.values[name] = fields[idx];
    accept_record(rec, line, seen_ids, result);
  }
  return result;
}

IngestResult ingest_jsonl(std::istream& in) {
  IngestResult result;
  std::unordered_set<std::string> seen_ids;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (trim(text).empty()) continue;
    ++result.row_count;

    json obj;
    try {
      obj = json::parse(text);
    } catch (const json::parse_error& e) {
      result.errors.push_back({line, "*", std::string("invalid JSON: ") + e.what()});
      continue;
    }
    if (!obj.is_object()) {
      result.errors.push_back({line, "*", "line is not a JSON object"});
      continue;
    }

    RecordFields rec;
    std::vector<RowError> type_errors;
    for (const auto name : kColumns) {
      const auto it = obj.find(name);
      if (it == obj.end() || it->is_null()) continue;
      if (name == "rating") {
        if (it->is_number_integer()) {
          rec.values["rating"] = std::to_string(it->get<long long>());
        } else if (it->is_string()) {
          rec.values["rating"] = it->get<std::string>();
        } else if (it->is_number_float()) {
          rec.rating_error = "rating " + it->dump() + " is not an integer";
        } else {
          rec.rating_error = "rating has non-numeric type";
        }
      } else if (it->is_string()) {
        rec.values[std::string(name)] = it->get<std::string>();
      } else {
        type_errors.push_back({line, std::string(name), "expected a string"});
      }
    }
    if (!type_errors.empty()) {
      result.errors.push_back(merge(type_errors));
      continue;
    }
    accept_record(rec, line, seen_ids, result);
  }
  return result;
}

void write_csv(const RawCorpus& corpus, std::ostream& out) {
  out << "id,app,platform,rating,title,body,date,language\n";
  for (const auto& r : corpus.reviews) {
    out << csv_escape(r.id) << ',' << csv_escape(r.app) << ',' << to_string(r.platform) << ',' << r.rating << ','
        << csv_escape(r.title.value_or("")) << ',' << csv_escape(r.body) << ',' << csv_escape(r.date.value_or(""))
        << ',' << csv_escape(r.language.value_or("")) << '\n';
  }
}

void write_jsonl(const RawCorpus& corpus, std::ostream& out) {
  for (const auto& r : corpus.reviews) {
    json j = {{"id", r.id},
              {"app", r.app},
              {"platform", to_string(r.platform)},
              {"rating", r.rating},
              {"body", r.body}};
    if (r.title) j["title"] = *r.title;
    if (r.date) j["date"] = *r.date;
    if (r.language) j["language"] = *r.language;
    out << j.dump() << '\n';
  }
}

void write_error_report(std::span<const RowError> errors, std::ostream& out) {
  for (const auto& e : errors) {
    out << json{{"line", e.line}, {"field", e.field}, {"message", e.message}}.dump() << '\n';
  }
}

double english_stopword_ratio(std::string_view text, const StopList& stop) {
  const auto tokens = tokenize_words(normalize(text));
  if (tokens.empty()) return 0.0;
  const auto hits = std::count_if(tokens.begin(), tokens.end(),
                                  [&](const std::string& t) { return stop.tokens.contains(t); });
  return static_cast<double>(hits) / static_cast<double>(tokens.size());
}

LanguageFilterResult filter_language(const RawCorpus& corpus, const StopList& stop, double threshold) {
  if (!(threshold >= 0.0 && threshold <= 1.0)) throw ValidationError("language threshold must lie in [0, 1]");
  LanguageFilterResult result;
  result.kept.source_meta = corpus.source_meta;
  for (const auto& r : corpus.reviews) {
    bool keep = false;
    if (r.language) {
      std::string tag = *r.language;
      std::transform(tag.begin(), tag.end(), tag.begin(), [](unsigned char c) { return std::tolower(c); });
      keep = tag == "en" || tag.starts_with("en-") || tag.starts_with("en_");
    } else {
      keep = english_stopword_ratio(r.text(), stop) >= threshold;
    }
    if (keep) {
      result.kept.reviews.push_back(r);
    } else {
      ++result.removed_count;
    }
  }
  return result;
}

}  // namespace reviewminer
