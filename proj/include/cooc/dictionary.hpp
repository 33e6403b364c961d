#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace cooc {

using SubjectId = std::uint32_t;
using WordId = std::uint32_t;

/// One dropped input line with the reason it was dropped.
struct Exclusion {
  std::string kind;  // "subject", "vocab", "fact", ...
  std::string item;
  std::string reason;
};

/// The minimal sufficient set: subject entities (1-3 normalized tokens) and
/// single-token candidate words. Ids are dense and assigned in byte order of
/// the normalized form, so a fixed input always yields the same ids.
class EntityDictionary {
 public:
  static constexpr std::size_t kMaxSubjectTokens = 3;

  EntityDictionary() = default;

  /// Normalizes every entry. Subjects that normalize to zero or more than
  /// three tokens, and vocab entries that do not normalize to exactly one
  /// token, are appended to `report`. Throws DataError if both lists are empty.
  static EntityDictionary build(std::span<const std::string> subject_surface_forms,
                                std::span<const std::string> vocab_words,
                                std::vector<Exclusion>& report);

  [[nodiscard]] std::size_t subject_count() const { return subjects_.size(); }
  [[nodiscard]] std::size_t word_count() const { return words_.size(); }

  /// Normalized tokens joined by single spaces.
  [[nodiscard]] const std::string& subject_key(SubjectId id) const { return subjects_.at(id); }
  [[nodiscard]] const std::string& word(WordId id) const { return words_.at(id); }

  [[nodiscard]] std::optional<SubjectId> find_subject(std::span<const std::string> tokens) const;
  [[nodiscard]] std::optional<WordId> find_word(std::string_view token) const;

  /// Normalize a surface form, then look it up.
  [[nodiscard]] std::optional<SubjectId> lookup_subject(std::string_view surface) const;
  [[nodiscard]] std::optional<WordId> lookup_word(std::string_view surface) const;

  /// SHA-256 of serialize(); stores record it to refuse cross-dictionary merges.
  [[nodiscard]] const std::string& hash() const { return hash_; }

  /// Canonical text form: "S\t<key>" lines in id order, then "W\t<word>" lines.
  [[nodiscard]] std::string serialize() const;
  static EntityDictionary parse(std::string_view text);

  void save(const std::filesystem::path& path) const;
  static EntityDictionary load(const std::filesystem::path& path);

 private:
  EntityDictionary(std::vector<std::string> subjects, std::vector<std::string> words);

  std::vector<std::string> subjects_;
  std::vector<std::string> words_;
  std::unordered_map<std::string, SubjectId> subject_index_;
  std::unordered_map<std::string, WordId> word_index_;
  std::string hash_;
};

/// Token-level matcher compiled from a dictionary.
class DocumentMatcher {
 public:
  explicit DocumentMatcher(const EntityDictionary& dict);

  /// Fills `subjects` and `words` with the sorted, de-duplicated sets of
  /// dictionary entries occurring in a normalized token stream. Subjects
  /// match as contiguous token subsequences; overlapping matches all count.
  void match(std::span<const std::string> tokens, std::vector<SubjectId>& subjects,
             std::vector<WordId>& words) const;

 private:
  static constexpr std::uint32_t kNoToken = 0;
  static constexpr std::uint32_t kNoWord = UINT32_MAX;

  std::unordered_map<std::string, std::uint32_t> token_ids_;  // 1-based
  std::vector<std::uint32_t> word_of_token_;
  std::unordered_map<std::uint64_t, SubjectId> ngrams_;
  mutable std::vector<std::uint32_t> ids_;
};

}  // namespace cooc
