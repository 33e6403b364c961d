#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "cooc/dictionary.hpp"
#include "cooc/ratio.hpp"
#include "cooc/text.hpp"

namespace cooc {

/// Document-frequency counts over an EntityDictionary.
///
/// Invariant: pair_df(s, w) <= min(subject_df(s), word_df(w)) <= n_docs.
/// A finished store is immutable; concurrent reads need no locking.
class CooccurrenceStore {
 public:
  struct PairEntry {
    WordId word;
    std::uint64_t count;
    friend bool operator==(const PairEntry&, const PairEntry&) = default;
  };

  CooccurrenceStore() = default;
  /// Empty store over a dictionary.
  explicit CooccurrenceStore(const EntityDictionary& dict);

  [[nodiscard]] const std::string& dictionary_hash() const { return dictionary_hash_; }
  [[nodiscard]] std::size_t subject_count() const { return subject_df_.size(); }
  [[nodiscard]] std::size_t word_count() const { return word_df_.size(); }
  [[nodiscard]] std::size_t pair_count() const { return pairs_.size(); }

  [[nodiscard]] std::uint64_t n_docs() const { return n_docs_; }
  /// Malformed corpus records passed over while counting.
  [[nodiscard]] std::uint64_t n_skipped() const { return n_skipped_; }

  [[nodiscard]] std::uint64_t word_df(WordId w) const { return word_df_.at(w); }
  [[nodiscard]] std::uint64_t subject_df(SubjectId s) const { return subject_df_.at(s); }
  [[nodiscard]] std::uint64_t pair_df(SubjectId s, WordId w) const;

  /// Co-occurring words of one subject, ascending by word id.
  [[nodiscard]] std::span<const PairEntry> row(SubjectId s) const;

  [[nodiscard]] std::string to_bytes() const;
  static CooccurrenceStore from_bytes(std::string_view bytes);
  void write(const std::filesystem::path& path) const;
  static CooccurrenceStore read(const std::filesystem::path& path);

  /// subject<TAB>word<TAB>count, one line per stored pair.
  void export_tsv(std::ostream& out, const EntityDictionary& dict) const;

  friend bool operator==(const CooccurrenceStore&, const CooccurrenceStore&) = default;

 private:
  friend class ShardCounter;
  friend CooccurrenceStore merge(std::span<const CooccurrenceStore> stores);

  std::string dictionary_hash_;
  std::uint64_t n_docs_ = 0;
  std::uint64_t n_skipped_ = 0;
  std::vector<std::uint64_t> word_df_;
  std::vector<std::uint64_t> subject_df_;
  std::vector<std::uint64_t> row_begin_;  // subject_count + 1 offsets into pairs_
  std::vector<PairEntry> pairs_;
};

/// Field-wise sum. Exact, and independent of order and grouping.
/// Throws DataError when the stores were built against different dictionaries.
CooccurrenceStore merge(std::span<const CooccurrenceStore> stores);

/// Single-owner counter for one shard of documents.
class ShardCounter {
 public:
  explicit ShardCounter(const EntityDictionary& dict);

  /// Counts each matched subject, word and (subject, word) pair at most once.
  void add_document(std::string_view text);
  void add_skipped() { ++n_skipped_; }

  [[nodiscard]] CooccurrenceStore finish() const;

 private:
  const EntityDictionary* dict_;
  DocumentMatcher matcher_;
  text::Normalizer normalizer_;
  std::vector<std::string> tokens_;
  std::vector<SubjectId> subjects_;
  std::vector<WordId> words_;

  std::uint64_t n_docs_ = 0;
  std::uint64_t n_skipped_ = 0;
  std::vector<std::uint64_t> word_df_;
  std::vector<std::uint64_t> subject_df_;
  std::unordered_map<std::uint64_t, std::uint64_t> pairs_;  // (subject << 32 | word) -> count
};

/// Counts a sequence of raw document texts.
CooccurrenceStore count_documents(std::span<const std::string> documents, const EntityDictionary& dict);

struct PairStatistics {
  std::uint64_t pair_count = 0;
  Ratio conditional;  // P(obj | subj) = pair_df / subject_df
  Ratio marginal;     // P(obj) = word_df / n_docs
};

/// nullopt ("unknown") when the subject is outside the store or never
/// occurred. A word id outside the dictionary is a caller bug and throws
/// InvariantError.
std::optional<PairStatistics> query(const CooccurrenceStore& store, std::optional<SubjectId> subject, WordId word);

}  // namespace cooc
