#include <algorithm>
#include <fstream>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"

#include "cooc/error.hpp"
#include "cooc/probe_dataset.hpp"
#include "cooc/text.hpp"
#include "test_support.hpp"

using namespace cooc;
using namespace cooc::testing;

TEST_CASE("builtin templates") {
  const auto all = builtin_templates();
  CHECK(all.size() == 41);
  std::size_t train = 0, test = 0;
  std::set<std::string> ids;
  for (const auto& t : all) {
    train += t.reference_train;
    test += t.reference_test;
    ids.insert(t.relation_id);
    CHECK_NOTHROW(validate_template(t.pattern));
  }
  CHECK(ids.size() == 41);
  CHECK(train == 20662);
  CHECK(test == 8856);
  const auto table = TemplateTable::builtin();
  const auto* p36 = table.find("P36");
  REQUIRE(p36 != nullptr);
  CHECK(p36->pattern == "The capital of [X] is [Y] .");
  CHECK(p36->reference_train == 330);
  CHECK(p36->reference_test == 141);
  CHECK(table.find("P47")->type == RelationType::many_to_many);
  CHECK(table.find("P9999") == nullptr);
}

TEST_CASE("fact uid is a content hash") {
  CHECK(fact_uid("Canada", "P36", "Ottawa") == "d142a05cfa94f1fc");
  CHECK(fact_uid("Canada", "P36", "Ottawa") != fact_uid("Canada", "P36", "Toronto"));
}

TEST_CASE("render examples") {
  const auto fact = make_fact("Canada", "P36", "Ottawa");
  const auto table = TemplateTable::builtin();
  const auto& tmpl = *table.find("P36");
  CHECK(render(fact, tmpl, RenderMode::masked) == "The capital of Canada is [MASK] .");
  CHECK(render(fact, tmpl, RenderMode::zero_shot_prefix) == "The capital of Canada is");
  CHECK(render(fact, tmpl, RenderMode::finetune_prompt) ==
        "### Input:\n The capital of Canada is [MASK] .\n\n### Response:");
}

TEST_CASE("templates must carry both placeholders once") {
  CHECK_THROWS_AS(validate_template("no placeholders"), DataError);
  CHECK_THROWS_AS(validate_template("[X] only"), DataError);
  CHECK_THROWS_AS(validate_template("[X] and [X] are [Y]"), DataError);
  CHECK_NOTHROW(validate_template("[Y] before [X]"));
}

TEST_CASE("property: rendering round-trip") {
  const auto table = TemplateTable::builtin();
  std::mt19937_64 rng(1);
  const std::vector<std::string> subjects{"Canada", "Tim Mitchell", "La Promesse", "X", "A [Y] B", "[MASK]er"};
  for (const auto& t : table.all()) {
    for (const auto& s : subjects) {
      if (s.find("[MASK]") != std::string::npos) continue;
      const auto fact = make_fact(s, t.relation_id, "obj");
      const auto masked = render(fact, t, RenderMode::masked);
      const auto prefix = render(fact, t, RenderMode::zero_shot_prefix);
      CHECK(masked.find(s) != std::string::npos);
      const auto first = masked.find("[MASK]");
      REQUIRE(first != std::string::npos);
      CHECK(masked.find("[MASK]", first + 1) == std::string::npos);
      CHECK(prefix.size() < masked.size());
      CHECK(masked.compare(0, prefix.size(), prefix) == 0);
    }
  }
}

TEST_CASE("preprocess exclusions") {
  const std::vector<std::string> vocab{"Ottawa", "Paris", "Toronto"};
  const std::vector<RawFact> raw{
      {"Canada", "P36", "Ottawa", std::nullopt},
      {"France", "P36", "Paris", std::nullopt},
      {"Canada", "P36", "Ottawa", std::nullopt},
      {"Mars", "P9999", "Ottawa", std::nullopt},
      {"Germany", "P36", "Berlin", std::nullopt},
      {"", "P36", "Paris", std::nullopt},
  };
  const auto r = preprocess(raw, TemplateTable::builtin(), vocab, false);
  CHECK(r.facts.size() == 2);
  REQUIRE(r.excluded.size() == 4);
  CHECK(r.excluded[0].reason == "duplicate triple");
  CHECK(r.excluded[1].reason == "unknown relation id");
  CHECK(r.excluded[2].reason == "object not in vocabulary intersection");
  CHECK(r.excluded[3].reason == "empty field");
  CHECK(std::is_sorted(r.facts.begin(), r.facts.end(), [](const auto& a, const auto& b) { return a.uid < b.uid; }));
}

TEST_CASE("vocabulary intersection") {
  const auto dir = fresh_dir("vocab");
  std::ofstream(dir / "a.txt") << "Ottawa\nParis\nBerlin\n";
  std::ofstream(dir / "b.txt") << "Paris\nOttawa\nRome\n";
  const std::vector<std::filesystem::path> paths{dir / "a.txt", dir / "b.txt"};
  CHECK(load_vocabulary_intersection(paths) == std::vector<std::string>{"Ottawa", "Paris"});
  std::filesystem::remove_all(dir);
}

namespace {

std::vector<FactTriple> synthetic_facts(const std::map<std::string, std::size_t>& sizes) {
  std::vector<FactTriple> out;
  for (const auto& [rel, n] : sizes)
    for (std::size_t i = 0; i < n; ++i) out.push_back(make_fact("s" + std::to_string(i), rel, "o" + std::to_string(i % 7)));
  return out;
}

}  // namespace

TEST_CASE("split examples") {
  auto facts = synthetic_facts({{"P36", 100}});
  assign_splits(facts, SplitConfig{0});
  const auto counts = split_counts(facts);
  CHECK(counts.at("P36") == std::pair<std::size_t, std::size_t>{70, 30});

  auto again = synthetic_facts({{"P36", 100}});
  assign_splits(again, SplitConfig{0});
  CHECK(again == facts);

  auto other_seed = synthetic_facts({{"P36", 100}});
  assign_splits(other_seed, SplitConfig{1});
  CHECK(other_seed != facts);
}

TEST_CASE("property: split counts per relation") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    std::map<std::string, std::size_t> sizes;
    for (int r = 0; r < 5; ++r) sizes["P" + std::to_string(r)] = rng() % 60;
    auto facts = synthetic_facts(sizes);
    std::shuffle(facts.begin(), facts.end(), rng);
    assign_splits(facts, SplitConfig{rng()});
    const auto counts = split_counts(facts);
    for (const auto& [rel, n] : sizes) {
      if (n == 0) continue;
      const auto [train, test] = counts.at(rel);
      CHECK(train == n * 7 / 10);
      CHECK(train + test == n);
    }
  }
}

TEST_CASE("input splits are kept when asked") {
  const std::vector<std::string> vocab{"a", "b", "c"};
  const std::vector<RawFact> raw{
      {"s1", "P36", "a", Split::test}, {"s2", "P36", "b", Split::test}, {"s3", "P36", "c", std::nullopt}};
  auto r = preprocess(raw, TemplateTable::builtin(), vocab, true);
  assign_splits(r.facts, SplitConfig{0, 70, true}, r.split_fixed);
  std::size_t n_test = 0;
  for (const auto& f : r.facts) n_test += f.split == Split::test;
  CHECK(n_test == 3);  // two kept, the unfixed singleton gets floor(0.7) = 0 train
}

TEST_CASE("dataset file round-trip") {
  const auto dir = fresh_dir("dataset");
  auto facts = synthetic_facts({{"P36", 10}, {"P19", 5}});
  assign_splits(facts, SplitConfig{3});
  write_dataset(dir / "d.jsonl", facts);
  CHECK(read_dataset(dir / "d.jsonl") == facts);
  CHECK(select_split(facts, Split::train).size() == 7 + 3);
  CHECK(select_split(facts, std::nullopt).size() == 15);

  std::ofstream(dir / "bad.jsonl") << R"({"uid":"0000000000000000","subject":"a","relation_id":"P36","object":"b","split":"train"})"
                                   << "\n";
  CHECK_THROWS_AS(read_dataset(dir / "bad.jsonl"), DataError);
  std::filesystem::remove_all(dir);
}

TEST_CASE("candidate sets") {
  const std::vector<FactTriple> data{make_fact("Canada", "P36", "ottawa"), make_fact("France", "P36", "paris"),
                                     make_fact("Tim", "P19", "london")};
  const std::vector<std::string> vocab{"london", "ottawa", "paris", "the", "of", "zebra"};

  const auto gold = build_candidate_set(data, CandidateMode::gold_objects, vocab);
  CHECK(std::vector<std::string>(gold.for_relation("P36").begin(), gold.for_relation("P36").end()) ==
        std::vector<std::string>{"london", "ottawa", "paris"});

  const auto rel = build_candidate_set(data, CandidateMode::gold_objects_relation_wise, vocab);
  CHECK(std::vector<std::string>(rel.for_relation("P36").begin(), rel.for_relation("P36").end()) ==
        std::vector<std::string>{"ottawa", "paris"});
  CHECK_FALSE(rel.contains("P36", "london"));

  const auto nostop = build_candidate_set(data, CandidateMode::remove_stopwords, vocab);
  CHECK_FALSE(nostop.contains("P36", "the"));
  CHECK(nostop.contains("P36", "zebra"));

  for (const auto* r : {"P36", "P19"}) {
    for (const auto& t : rel.for_relation(r)) CHECK(gold.contains(r, t));
    for (const auto& t : gold.for_relation(r)) CHECK(nostop.contains(r, t));
  }
  CHECK(parse_candidate_mode("gold-objects-relation-wise") == CandidateMode::gold_objects_relation_wise);
  CHECK_THROWS(parse_candidate_mode("bogus"));
}

TEST_CASE("alternate gold index") {
  const std::vector<FactTriple> data{make_fact("s", "P47", "o1"), make_fact("s", "P47", "o2", Split::train),
                                     make_fact("t", "P36", "o")};
  const AlternateGoldIndex idx(data);
  CHECK(std::vector<std::string>(idx.objects("s", "P47").begin(), idx.objects("s", "P47").end()) ==
        std::vector<std::string>{"o1", "o2"});
  CHECK(idx.objects("t", "P36").size() == 1);
  CHECK(idx.objects("u", "P36").empty());
  for (const auto& f : data) {
    const auto objs = idx.objects(f.subject, f.relation_id);
    CHECK(std::find(objs.begin(), objs.end(), f.object) != objs.end());
  }
}
