#include <string>
#include <vector>

#include "doctest.h"

#include "cooc/dictionary.hpp"
#include "cooc/error.hpp"

using namespace cooc;

namespace {

EntityDictionary build(std::vector<std::string> subjects, std::vector<std::string> vocab,
                       std::vector<Exclusion>* report_out = nullptr) {
  std::vector<Exclusion> report;
  auto d = EntityDictionary::build(subjects, vocab, report);
  if (report_out) *report_out = report;
  return d;
}

}  // namespace

TEST_CASE("subjects are normalized and filtered") {
  std::vector<Exclusion> report;
  auto d = build({"United States of America", "of the", "alpha beta gamma delta epsilon", "Canada", "canada"},
                 {"ottawa"}, &report);
  CHECK(d.subject_count() == 2);
  CHECK(d.lookup_subject("United States of America").has_value());
  CHECK(d.subject_key(*d.lookup_subject("United States of America")) == "united states america");
  REQUIRE(report.size() == 2);
  CHECK(report[0].kind == "subject");
  CHECK(report[0].item == "of the");
  CHECK(report[0].reason == "normalizes to zero tokens");
  CHECK(report[1].item == "alpha beta gamma delta epsilon");
  CHECK(report[1].reason == "more than three tokens");
}

TEST_CASE("vocab entries must normalize to one token") {
  std::vector<Exclusion> report;
  auto d = build({"Canada"}, {"Ottawa", "the", "New York", "paris", "paris"}, &report);
  CHECK(d.word_count() == 2);
  CHECK(d.lookup_word("OTTAWA").has_value());
  CHECK_FALSE(d.find_word("the").has_value());
  REQUIRE(report.size() == 2);
  CHECK(report[0].reason == "normalizes to zero tokens");
  CHECK(report[1].reason == "normalizes to more than one token");
}

TEST_CASE("ids follow byte order of the normalized form") {
  auto d = build({"Zeta", "alpha", "Mid Term"}, {"bb", "aa", "cc"});
  CHECK(d.subject_key(0) == "alpha");
  CHECK(d.subject_key(1) == "mid term");
  CHECK(d.subject_key(2) == "zeta");
  CHECK(d.word(0) == "aa");
  CHECK(d.word(2) == "cc");
}

TEST_CASE("both inputs empty is an error") {
  std::vector<Exclusion> report;
  CHECK_THROWS_AS(EntityDictionary::build(std::vector<std::string>{}, std::vector<std::string>{}, report), DataError);
}

TEST_CASE("serialization round-trip keeps the hash") {
  auto d = build({"Canada", "France", "United States of America"}, {"ottawa", "paris"});
  auto back = EntityDictionary::parse(d.serialize());
  CHECK(back.hash() == d.hash());
  CHECK(back.serialize() == d.serialize());
  CHECK(back.hash().size() == 64);
  auto other = build({"Canada"}, {"ottawa", "paris"});
  CHECK(other.hash() != d.hash());
}

TEST_CASE("matcher finds overlapping contiguous subjects as sets") {
  auto d = build({"new york", "york city", "new york city", "york"}, {"city", "new"});
  DocumentMatcher m(d);
  std::vector<SubjectId> subjects;
  std::vector<WordId> words;
  std::vector<std::string> toks{"new", "york", "city", "new", "york"};
  m.match(toks, subjects, words);
  CHECK(subjects.size() == 4);
  CHECK(words.size() == 2);
  toks = {"york", "new", "city"};
  m.match(toks, subjects, words);
  REQUIRE(subjects.size() == 1);
  CHECK(d.subject_key(subjects[0]) == "york");
}
