#pragma once

// Shared helpers for the unit and acceptance suites: the brute-force
// co-occurrence oracle, random corpus generators and small store builders.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <unistd.h>

#include "cooc/corpus_stats.hpp"
#include "cooc/dictionary.hpp"
#include "cooc/probe_dataset.hpp"
#include "cooc/store.hpp"
#include "cooc/text.hpp"

namespace cooc::testing {

/// Counts keyed by normalized strings, computed without the matcher, the
/// hash maps or the CSR layout of the real implementation.
struct OracleCounts {
  std::uint64_t n_docs = 0;
  std::map<std::string, std::uint64_t> subject_df;
  std::map<std::string, std::uint64_t> word_df;
  std::map<std::pair<std::string, std::string>, std::uint64_t> pair_df;
  friend bool operator==(const OracleCounts&, const OracleCounts&) = default;
};

inline OracleCounts brute_force_counts(const std::vector<std::string>& docs,
                                       const std::vector<std::vector<std::string>>& subjects,
                                       const std::vector<std::string>& words) {
  OracleCounts out;
  for (const auto& doc : docs) {
    ++out.n_docs;
    const auto toks = text::normalize(doc);
    std::vector<std::string> present_s, present_w;
    for (const auto& s : subjects) {
      if (std::search(toks.begin(), toks.end(), s.begin(), s.end()) != toks.end()) present_s.push_back(text::join(s));
    }
    for (const auto& w : words)
      if (std::find(toks.begin(), toks.end(), w) != toks.end()) present_w.push_back(w);
    std::sort(present_s.begin(), present_s.end());
    present_s.erase(std::unique(present_s.begin(), present_s.end()), present_s.end());
    std::sort(present_w.begin(), present_w.end());
    present_w.erase(std::unique(present_w.begin(), present_w.end()), present_w.end());
    for (const auto& s : present_s) ++out.subject_df[s];
    for (const auto& w : present_w) ++out.word_df[w];
    for (const auto& s : present_s)
      for (const auto& w : present_w) ++out.pair_df[{s, w}];
  }
  return out;
}

/// The store re-keyed by strings, zero entries dropped.
inline OracleCounts as_oracle(const CooccurrenceStore& st, const EntityDictionary& dict) {
  OracleCounts out;
  out.n_docs = st.n_docs();
  for (SubjectId s = 0; s < st.subject_count(); ++s) {
    if (st.subject_df(s)) out.subject_df[dict.subject_key(s)] = st.subject_df(s);
    for (const auto& e : st.row(s)) out.pair_df[{dict.subject_key(s), dict.word(e.word)}] = e.count;
  }
  for (WordId w = 0; w < st.word_count(); ++w)
    if (st.word_df(w)) out.word_df[dict.word(w)] = st.word_df(w);
  return out;
}

/// A random corpus over a small content vocabulary, salted with stopwords,
/// punctuation and mixed case so normalization is exercised.
struct RandomCorpus {
  std::vector<std::string> vocabulary;                  // content words
  std::vector<std::vector<std::string>> subjects;       // 1-3 content words each
  std::vector<std::string> subject_surfaces;            // what the dictionary is built from
  std::vector<std::string> candidate_words;
  std::vector<std::string> documents;
};

inline RandomCorpus random_corpus(std::uint64_t seed, std::size_t max_docs = 100, std::size_t max_vocab = 50) {
  std::mt19937_64 rng(seed);
  auto below = [&rng](std::size_t n) { return static_cast<std::size_t>(rng() % n); };
  RandomCorpus c;
  const std::size_t vocab_size = 5 + below(max_vocab - 4);
  for (std::size_t i = 0; i < vocab_size; ++i) c.vocabulary.push_back("w" + std::to_string(i));

  const std::size_t n_subjects = 1 + below(12);
  for (std::size_t i = 0; i < n_subjects; ++i) {
    std::vector<std::string> ent;
    const std::size_t len = 1 + below(3);
    for (std::size_t k = 0; k < len; ++k) ent.push_back(c.vocabulary[below(vocab_size)]);
    std::string surface;
    for (std::size_t k = 0; k < ent.size(); ++k) {
      if (k) surface += below(4) == 0 ? " of the " : " ";
      std::string t = ent[k];
      if (below(2)) t[0] = static_cast<char>(std::toupper(t[0]));
      surface += t;
    }
    c.subjects.push_back(ent);
    c.subject_surfaces.push_back(surface);
  }
  for (const auto& w : c.vocabulary)
    if (below(2)) c.candidate_words.push_back(w);
  if (c.candidate_words.empty()) c.candidate_words.push_back(c.vocabulary.front());

  static const std::vector<std::string> kNoise{"the", "of", "is", ",", ".", "and", "(", ")", "a", "'s"};
  const std::size_t n_docs = below(max_docs + 1);
  for (std::size_t d = 0; d < n_docs; ++d) {
    std::string doc;
    const std::size_t len = below(40);
    for (std::size_t k = 0; k < len; ++k) {
      if (k) doc += ' ';
      if (below(5) == 0) {
        doc += kNoise[below(kNoise.size())];
      } else {
        std::string t = c.vocabulary[below(vocab_size)];
        if (below(3) == 0) t[0] = static_cast<char>(std::toupper(t[0]));
        doc += t;
      }
    }
    c.documents.push_back(std::move(doc));
  }
  return c;
}

inline EntityDictionary dictionary_for(const RandomCorpus& c) {
  std::vector<Exclusion> report;
  return EntityDictionary::build(c.subject_surfaces, c.candidate_words, report);
}

/// Builds statistics whose counts are exactly those given: for each
/// (subject, word, n) triple, n documents contain both; `word_only` adds
/// documents containing just the word; `filler` adds empty documents.
struct PlannedCounts {
  std::vector<std::tuple<std::string, std::string, std::uint64_t>> pairs;
  std::vector<std::pair<std::string, std::uint64_t>> word_only;
  std::vector<std::pair<std::string, std::uint64_t>> subject_only;
  std::uint64_t filler = 0;
};

inline CorpusStats stats_from_plan(const std::vector<std::string>& subjects, const std::vector<std::string>& words,
                                   const PlannedCounts& plan, std::uint64_t scale = 1) {
  std::vector<std::string> docs;
  for (std::uint64_t rep = 0; rep < scale; ++rep) {
    for (const auto& [s, w, n] : plan.pairs)
      for (std::uint64_t i = 0; i < n; ++i) docs.push_back(s + " zzfiller " + w);
    for (const auto& [w, n] : plan.word_only)
      for (std::uint64_t i = 0; i < n; ++i) docs.push_back(w);
    for (const auto& [s, n] : plan.subject_only)
      for (std::uint64_t i = 0; i < n; ++i) docs.push_back(s);
    for (std::uint64_t i = 0; i < plan.filler; ++i) docs.push_back("zzfiller");
  }
  std::vector<Exclusion> report;
  auto dict = EntityDictionary::build(subjects, words, report);
  auto store = count_documents(docs, dict);
  return CorpusStats(std::move(dict), std::move(store));
}

/// The three-document corpus used throughout the examples.
inline const std::vector<std::string>& toy_documents() {
  static const std::vector<std::string> docs{
      "Ottawa is the capital of Canada", "Toronto is in Canada", "Paris is the capital of France"};
  return docs;
}

inline CorpusStats toy_stats() {
  std::vector<Exclusion> report;
  auto dict = EntityDictionary::build(std::vector<std::string>{"Canada", "France"},
                                      std::vector<std::string>{"ottawa", "toronto", "paris", "capital"}, report);
  auto store = count_documents(toy_documents(), dict);
  return CorpusStats(std::move(dict), std::move(store));
}

inline FactTriple make_fact(std::string subject, std::string relation, std::string object, Split split = Split::test) {
  auto uid = fact_uid(subject, relation, object);
  return FactTriple{std::move(uid), std::move(subject), std::move(relation), std::move(object), split};
}

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline std::filesystem::path fresh_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("cooc_test_" + name + "_" + std::to_string(::getpid()));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace cooc::testing
