#include <algorithm>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"

#include "cooc/error.hpp"
#include "cooc/store.hpp"
#include "test_support.hpp"

using namespace cooc;
using namespace cooc::testing;

namespace {

EntityDictionary toy_dictionary() {
  std::vector<Exclusion> report;
  return EntityDictionary::build(std::vector<std::string>{"Canada", "France"},
                                 std::vector<std::string>{"ottawa", "toronto", "paris", "capital"}, report);
}

/// Counts `docs` split into contiguous groups of the given sizes, then merges.
CooccurrenceStore count_in_groups(const std::vector<std::string>& docs, const EntityDictionary& dict,
                                  std::size_t n_groups) {
  std::vector<CooccurrenceStore> parts;
  const std::size_t per = n_groups ? (docs.size() + n_groups - 1) / n_groups : docs.size();
  for (std::size_t g = 0; g < n_groups; ++g) {
    const std::size_t b = std::min(docs.size(), g * per), e = std::min(docs.size(), b + per);
    std::vector<std::string> chunk(docs.begin() + static_cast<std::ptrdiff_t>(b),
                                   docs.begin() + static_cast<std::ptrdiff_t>(e));
    parts.push_back(count_documents(chunk, dict));
  }
  return merge(parts);
}

}  // namespace

TEST_CASE("three-document example") {
  const auto dict = toy_dictionary();
  const auto st = count_documents(toy_documents(), dict);
  const auto canada = *dict.lookup_subject("canada");
  const auto france = *dict.lookup_subject("france");
  CHECK(st.n_docs() == 3);
  CHECK(st.subject_df(canada) == 2);
  CHECK(st.subject_df(france) == 1);
  CHECK(st.pair_df(canada, *dict.find_word("ottawa")) == 1);
  CHECK(st.pair_df(canada, *dict.find_word("toronto")) == 1);
  CHECK(st.pair_df(canada, *dict.find_word("capital")) == 1);
  CHECK(st.pair_df(france, *dict.find_word("paris")) == 1);
  CHECK(st.pair_df(france, *dict.find_word("ottawa")) == 0);
  CHECK(st.word_df(*dict.find_word("capital")) == 2);

  // The independent oracle agrees on every entry.
  const auto oracle = brute_force_counts(toy_documents(), {{"canada"}, {"france"}},
                                         {"ottawa", "toronto", "paris", "capital"});
  CHECK(as_oracle(st, dict) == oracle);
}

TEST_CASE("repetition inside a document counts once") {
  const auto dict = toy_dictionary();
  const auto st = count_documents(std::vector<std::string>{"canada canada canada capital capital"}, dict);
  CHECK(st.subject_df(*dict.lookup_subject("canada")) == 1);
  CHECK(st.pair_df(*dict.lookup_subject("canada"), *dict.find_word("capital")) == 1);
}

TEST_CASE("empty stream") {
  const auto dict = toy_dictionary();
  const auto st = count_documents(std::vector<std::string>{}, dict);
  CHECK(st.n_docs() == 0);
  CHECK(st.pair_count() == 0);
  for (WordId w = 0; w < st.word_count(); ++w) CHECK(st.word_df(w) == 0);
  for (SubjectId s = 0; s < st.subject_count(); ++s) CHECK(st.subject_df(s) == 0);
}

TEST_CASE("query examples") {
  const auto dict = toy_dictionary();
  const auto st = count_documents(toy_documents(), dict);
  const auto q = query(st, dict.lookup_subject("canada"), *dict.find_word("ottawa"));
  REQUIRE(q.has_value());
  CHECK(q->pair_count == 1);
  CHECK(q->conditional == Ratio(1, 2));
  CHECK(q->marginal == Ratio(1, 3));

  const auto never = query(st, dict.lookup_subject("france"), *dict.find_word("toronto"));
  REQUIRE(never.has_value());
  CHECK(never->pair_count == 0);
  CHECK(never->conditional.is_zero());

  CHECK_FALSE(query(st, std::nullopt, 0).has_value());
  const auto unseen = count_documents(std::vector<std::string>{"ottawa"}, dict);
  CHECK_FALSE(query(unseen, dict.lookup_subject("canada"), 0).has_value());
  CHECK_THROWS_AS(query(st, dict.lookup_subject("canada"), 99), InvariantError);
}

TEST_CASE("property: counts equal the brute-force oracle") {
  for (std::uint64_t seed = 0; seed < 150; ++seed) {
    CAPTURE(seed);
    const auto corpus = random_corpus(seed);
    const auto dict = dictionary_for(corpus);
    const auto st = count_in_groups(corpus.documents, dict, 1 + seed % 5);
    const auto oracle = brute_force_counts(corpus.documents, corpus.subjects, corpus.candidate_words);
    CHECK(as_oracle(st, dict) == oracle);
  }
}

TEST_CASE("property: bound invariant") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto corpus = random_corpus(seed + 1000);
    const auto dict = dictionary_for(corpus);
    const auto st = count_documents(corpus.documents, dict);
    for (SubjectId s = 0; s < st.subject_count(); ++s) {
      CHECK(st.subject_df(s) <= st.n_docs());
      for (const auto& e : st.row(s)) {
        CHECK(e.count > 0);
        CHECK(e.count <= std::min(st.subject_df(s), st.word_df(e.word)));
      }
    }
  }
}

TEST_CASE("merge algebra") {
  const auto corpus = random_corpus(42);
  const auto dict = dictionary_for(corpus);
  std::mt19937_64 rng(3);
  auto docs_a = corpus.documents;
  auto docs_b = random_corpus(43).documents;
  const auto a = count_documents(docs_a, dict);
  const auto b = count_documents(docs_b, dict);
  const auto empty = count_documents(std::vector<std::string>{}, dict);

  CHECK(merge(std::vector{a, b}) == merge(std::vector{b, a}));
  CHECK(merge(std::vector{empty, a}) == a);
  CHECK(merge(std::vector{a}) == a);

  const auto c = count_documents(random_corpus(44).documents, dict);
  const auto ab_c = merge(std::vector{merge(std::vector{a, b}), c});
  const auto a_bc = merge(std::vector{a, merge(std::vector{b, c})});
  CHECK(ab_c.to_bytes() == a_bc.to_bytes());
  CHECK(ab_c.to_bytes() == merge(std::vector{c, a, b}).to_bytes());
}

TEST_CASE("one shard vs seven shards yields identical bytes") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto corpus = random_corpus(seed + 500);
    const auto dict = dictionary_for(corpus);
    const auto one = count_in_groups(corpus.documents, dict, 1).to_bytes();
    CHECK(count_in_groups(corpus.documents, dict, 7).to_bytes() == one);
    std::mt19937_64 rng(seed);
    std::shuffle(corpus.documents.begin(), corpus.documents.end(), rng);
    CHECK(count_in_groups(corpus.documents, dict, 3).to_bytes() == one);
  }
}

TEST_CASE("merge refuses stores over different dictionaries") {
  const auto dict = toy_dictionary();
  std::vector<Exclusion> report;
  const auto other = EntityDictionary::build(std::vector<std::string>{"Canada"},
                                             std::vector<std::string>{"ottawa"}, report);
  const auto a = count_documents(toy_documents(), dict);
  const auto b = count_documents(toy_documents(), other);
  CHECK_THROWS_AS(merge(std::vector{a, b}), DataError);
}

TEST_CASE("binary round-trip and corruption") {
  const auto corpus = random_corpus(9);
  const auto dict = dictionary_for(corpus);
  const auto st = count_documents(corpus.documents, dict);
  const auto bytes = st.to_bytes();
  CHECK(CooccurrenceStore::from_bytes(bytes) == st);
  CHECK_THROWS_AS(CooccurrenceStore::from_bytes(bytes.substr(0, bytes.size() - 1)), DataError);
  auto bad = bytes;
  bad[0] = 'X';
  CHECK_THROWS_AS(CooccurrenceStore::from_bytes(bad), DataError);

  const auto dir = fresh_dir("store_rt");
  st.write(dir / "s.bin");
  CHECK(CooccurrenceStore::read(dir / "s.bin") == st);
  std::filesystem::remove_all(dir);
}

TEST_CASE("tsv export") {
  const auto dict = toy_dictionary();
  const auto st = count_documents(toy_documents(), dict);
  std::ostringstream out;
  st.export_tsv(out, dict);
  CHECK(out.str() ==
        "canada\tcapital\t1\n"
        "canada\tottawa\t1\n"
        "canada\ttoronto\t1\n"
        "france\tcapital\t1\n"
        "france\tparis\t1\n");
}
