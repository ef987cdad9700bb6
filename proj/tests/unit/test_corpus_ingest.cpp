#include <doctest.h>

#include <sstream>

#include <nlohmann/json.hpp>

#include "fixtures.hpp"
#include "reviewminer/corpus_ingest.hpp"
#include "reviewminer/errors.hpp"

using namespace reviewminer;

namespace {

const char* kHeader = "id,app,platform,rating,title,body,date,language\n";

IngestResult csv(const std::string& text) {
  std::istringstream in(text);
  return ingest_csv(in);
}

IngestResult jsonl(const std::string& text) {
  std::istringstream in(text);
  return ingest_jsonl(in);
}

StopList default_stops() { return StopList::load(std::string(RM_SHIPPED_DATA_DIR) + "/stopwords_en.txt"); }

}  // namespace

TEST_CASE("empty file with a valid header gives an empty corpus") {
  const auto r = csv(kHeader);
  CHECK(r.corpus.reviews.empty());
  CHECK(r.errors.empty());
  CHECK(r.row_count == 0);
}

TEST_CASE("rating 6 becomes a row error naming the row") {
  const auto r = csv(std::string(kHeader) +
                     "a,bank,ios,5,,fine app,,\n"
                     "b,bank,ios,6,,too good,,\n"
                     "c,bank,google,1,,awful,,\n");
  REQUIRE(r.corpus.reviews.size() == 2);
  CHECK(r.corpus.reviews[0].id == "a");
  CHECK(r.corpus.reviews[1].id == "c");
  REQUIRE(r.errors.size() == 1);
  CHECK(r.errors[0].line == 3);
  CHECK(r.errors[0].field == "rating");
  CHECK(r.row_count == 3);
}

TEST_CASE("row-level problems") {
  const auto r = csv(std::string(kHeader) +
                     "a,bank,ios,3,,   ,,\n"        // blank body
                     "b,bank,windows,3,,ok,,\n"     // platform
                     "c,bank,ios,3.5,,ok,,\n"       // non-integer
                     "d,bank,ios,4,,ok,12/01/2023,\n"  // date
                     "e,bank,ios,4,,ok\n"           // short row
                     ",bank,ios,,,,,\n"             // several missing fields, one record
                     "f,bank,ios,2,,\"unterminated\n");
  CHECK(r.corpus.reviews.empty());
  REQUIRE(r.errors.size() == 7);
  CHECK(r.errors[0].field == "body");
  CHECK(r.errors[1].field == "platform");
  CHECK(r.errors[2].field == "rating");
  CHECK(r.errors[3].field == "date");
  CHECK(r.errors[4].field == "*");
  CHECK(r.errors[5].field == "id,rating,body");
  CHECK(r.errors[6].field == "*");
  CHECK(r.row_count == 7);
}

TEST_CASE("duplicate ids are rejected after the first") {
  const auto r = csv(std::string(kHeader) + "a,x,ios,1,,one,,\na,x,ios,2,,two,,\n");
  REQUIRE(r.corpus.reviews.size() == 1);
  CHECK(r.corpus.reviews[0].body == "one");
  REQUIRE(r.errors.size() == 1);
  CHECK(r.errors[0].field == "id");
}

TEST_CASE("header problems are fatal") {
  CHECK_THROWS_AS(csv(""), ValidationError);
  CHECK_THROWS_AS(csv("id,app,platform,rating\n"), ValidationError);
  CHECK_THROWS_AS(csv("id,app,platform,rating,body,stars\n"), ValidationError);
  CHECK_THROWS_AS(csv("id,app,platform,rating,body,body\n"), ValidationError);
  CHECK_THROWS_AS(ingest("/nonexistent/reviews.csv", InputFormat::csv), ValidationError);
}

TEST_CASE("quoted CSV fields, CRLF and column order") {
  const auto r = csv("body,rating,platform,app,id\r\n\"multi\nline, with \"\"quotes\"\"\",4,google,bank,z\r\n");
  REQUIRE(r.corpus.reviews.size() == 1);
  const auto& rev = r.corpus.reviews[0];
  CHECK(rev.body == "multi\nline, with \"quotes\"");
  CHECK(rev.rating == 4);
  CHECK(rev.platform == Platform::google);
  CHECK_FALSE(rev.title);
  CHECK_FALSE(rev.language);
}

TEST_CASE("error line numbers count physical lines") {
  const auto r = csv(std::string(kHeader) + "a,x,ios,1,,\"two\nlines\",,\nb,x,ios,9,,bad,,\n");
  REQUIRE(r.errors.size() == 1);
  CHECK(r.errors[0].line == 4);
}

TEST_CASE("JSONL fixture matches a line-by-line reference parse") {
  std::ostringstream text;
  for (int i = 0; i < 10; ++i) {
    nlohmann::json j = {{"id", "r" + std::to_string(i)},
                        {"app", i % 2 ? "alpha" : "beta"},
                        {"platform", i % 3 ? "ios" : "google"},
                        {"rating", 1 + i % 5},
                        {"body", "body number " + std::to_string(i)}};
    if (i % 4 == 0) j["title"] = "title " + std::to_string(i);
    if (i % 5 == 0) j["language"] = "en-GB";
    text << j.dump() << '\n';
  }
  const auto r = jsonl(text.str());
  REQUIRE(r.errors.empty());
  REQUIRE(r.corpus.reviews.size() == 10);

  std::istringstream lines(text.str());
  std::string line;
  std::size_t i = 0;
  while (std::getline(lines, line)) {
    const auto j = nlohmann::json::parse(line);
    const auto& rev = r.corpus.reviews[i++];
    CHECK(rev.id == j["id"].get<std::string>());
    CHECK(rev.app == j["app"].get<std::string>());
    CHECK(std::string(to_string(rev.platform)) == j["platform"].get<std::string>());
    CHECK(rev.rating == j["rating"].get<int>());
    CHECK(rev.body == j["body"].get<std::string>());
    CHECK(rev.title.has_value() == j.contains("title"));
    CHECK(rev.language.has_value() == j.contains("language"));
  }
}

TEST_CASE("JSONL row errors") {
  const auto r = jsonl(
      "{\"id\":\"a\",\"app\":\"x\",\"platform\":\"ios\",\"rating\":2.5,\"body\":\"b\"}\n"
      "\n"
      "not json\n"
      "[1,2]\n"
      "{\"id\":\"b\",\"app\":\"x\",\"platform\":\"ios\",\"rating\":\"3\",\"body\":\"ok\"}\n"
      "{\"id\":7,\"app\":\"x\",\"platform\":\"ios\",\"rating\":3,\"body\":\"ok\"}\n"
      "{\"id\":\"c\",\"app\":\"x\",\"platform\":\"ios\",\"rating\":true,\"body\":\"ok\"}\n");
  CHECK(r.row_count == 6);
  REQUIRE(r.corpus.reviews.size() == 1);
  CHECK(r.corpus.reviews[0].rating == 3);
  REQUIRE(r.errors.size() == 5);
  CHECK(r.errors[0].line == 1);
  CHECK(r.errors[1].line == 3);
  CHECK(r.errors[2].line == 4);
  CHECK(r.errors[3].field == "id");
  CHECK(r.errors[4].field == "rating");
}

TEST_CASE("serialize then ingest is lossless") {
  auto corpus = rmtest::make_review_fixture(11, 60);
  corpus.reviews[0].body = "  leading, \"quoted\" and\nnewline ";
  corpus.reviews[1].title = "t,itle";
  corpus.reviews[2].body = "ünïcödé ✓ body";
  SUBCASE("csv") {
    std::stringstream s;
    write_csv(corpus, s);
    const auto back = ingest_csv(s);
    CHECK(back.errors.empty());
    CHECK(back.corpus.reviews == corpus.reviews);
  }
  SUBCASE("jsonl") {
    std::stringstream s;
    write_jsonl(corpus, s);
    const auto back = ingest_jsonl(s);
    CHECK(back.errors.empty());
    CHECK(back.corpus.reviews == corpus.reviews);
  }
}

TEST_CASE("error report is JSONL of line, field, message") {
  std::vector<RowError> errors = {{3, "rating", "rating 6 outside 1..5"}, {9, "*", "malformed quoting"}};
  std::ostringstream out;
  write_error_report(errors, out);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  const auto j = nlohmann::json::parse(line);
  CHECK(j["line"] == 3);
  CHECK(j["field"] == "rating");
  CHECK(j["message"] == "rating 6 outside 1..5");
}

TEST_CASE("language filter") {
  const auto stop = default_stops();
  const auto review = [](std::string body, std::optional<std::string> lang) {
    Review r;
    r.id = body.substr(0, 6);
    r.app = "x";
    r.rating = 3;
    r.body = std::move(body);
    r.language = std::move(lang);
    return r;
  };
  RawCorpus c;
  c.reviews.push_back(review("zzz qqq xxx", "en-CA"));
  c.reviews.push_back(review("the and of it was good", std::nullopt));
  c.reviews.push_back(review("uno dos tres cuatro cinco seis siete ocho nueve diez once doce trece catorce quince "
                             "dieciseis diecisiete dieciocho diecinueve veinte",
                             std::nullopt));
  c.reviews.push_back(review("the app works", "fr"));

  const auto r = filter_language(c, stop);
  REQUIRE(r.kept.reviews.size() == 2);
  CHECK(r.kept.reviews[0].language == "en-CA");
  CHECK(r.kept.reviews[1].body == "the and of it was good");
  CHECK(r.removed_count == 2);
  CHECK(english_stopword_ratio("the and of it was good", stop) == doctest::Approx(5.0 / 6.0));

  SUBCASE("idempotent") {
    const auto twice = filter_language(r.kept, stop);
    CHECK(twice.kept.reviews == r.kept.reviews);
    CHECK(twice.removed_count == 0);
  }
  SUBCASE("empty corpus passes through") {
    const auto e = filter_language(RawCorpus{}, stop);
    CHECK(e.kept.reviews.empty());
    CHECK(e.removed_count == 0);
  }
  SUBCASE("threshold is inclusive and validated") {
    RawCorpus one;
    one.reviews.push_back(review("the qx qy qz", std::nullopt));  // ratio 0.25
    CHECK(filter_language(one, stop, 0.25).kept.reviews.size() == 1);
    CHECK(filter_language(one, stop, 0.26).kept.reviews.empty());
    CHECK_THROWS_AS(filter_language(one, stop, 1.5), ValidationError);
  }
}

TEST_CASE("kept + removed + malformed reconciles with rows") {
  std::stringstream s;
  auto corpus = rmtest::make_review_fixture(3, 40);
  write_csv(corpus, s);
  std::string text = s.str() + "bad,x,ios,0,,zero,,\nbad2,x,ios,2,,\n" + "es,x,ios,2,,hola amigos buenos dias,,\n";
  std::istringstream in(text);
  const auto r = ingest_csv(in);
  const auto f = filter_language(r.corpus, default_stops());
  CHECK(f.kept.reviews.size() + f.removed_count + r.errors.size() == r.row_count);
}
