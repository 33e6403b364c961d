#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cooc/dictionary.hpp"
#include "cooc/ratio.hpp"
#include "cooc/store.hpp"

namespace cooc {

/// A finished store together with its dictionary, queried by surface form.
class CorpusStats {
 public:
  /// Throws DataError if the store was not built against `dict`.
  CorpusStats(EntityDictionary dict, CooccurrenceStore store);

  /// Reads dictionary.tsv and store.bin from a `count` output directory.
  static CorpusStats load(const std::filesystem::path& store_dir);

  [[nodiscard]] const EntityDictionary& dictionary() const { return dict_; }
  [[nodiscard]] const CooccurrenceStore& store() const { return store_; }

  /// The subject's id if it is in the dictionary and occurred at least once.
  [[nodiscard]] std::optional<SubjectId> usable_subject(std::string_view surface) const;
  [[nodiscard]] std::optional<WordId> word(std::string_view token) const { return dict_.lookup_word(token); }
  [[nodiscard]] std::vector<std::optional<WordId>> words(std::span<const std::string> tokens) const;

  [[nodiscard]] std::uint64_t pair_count(std::optional<SubjectId> s, std::optional<WordId> w) const;
  [[nodiscard]] std::uint64_t word_df(std::optional<WordId> w) const { return w ? store_.word_df(*w) : 0; }
  /// P(obj | subj); zero when either side is missing.
  [[nodiscard]] Ratio conditional(std::optional<SubjectId> s, std::optional<WordId> w) const;

 private:
  EntityDictionary dict_;
  CooccurrenceStore store_;
};

}  // namespace cooc
