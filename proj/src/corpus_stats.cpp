#include "cooc/corpus_stats.hpp"

#include "cooc/error.hpp"

namespace cooc {

CorpusStats::CorpusStats(EntityDictionary dict, CooccurrenceStore store)
    : dict_(std::move(dict)), store_(std::move(store)) {
  if (store_.dictionary_hash() != dict_.hash() || store_.subject_count() != dict_.subject_count() ||
      store_.word_count() != dict_.word_count())
    throw DataError("store was built against a different dictionary (" + store_.dictionary_hash() + " vs " +
                    dict_.hash() + ")");
}

CorpusStats CorpusStats::load(const std::filesystem::path& store_dir) {
  return CorpusStats(EntityDictionary::load(store_dir / "dictionary.tsv"),
                     CooccurrenceStore::read(store_dir / "store.bin"));
}

std::optional<SubjectId> CorpusStats::usable_subject(std::string_view surface) const {
  const auto id = dict_.lookup_subject(surface);
  if (!id || store_.subject_df(*id) == 0) return std::nullopt;
  return id;
}

std::vector<std::optional<WordId>> CorpusStats::words(std::span<const std::string> tokens) const {
  std::vector<std::optional<WordId>> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) out.push_back(dict_.lookup_word(t));
  return out;
}

std::uint64_t CorpusStats::pair_count(std::optional<SubjectId> s, std::optional<WordId> w) const {
  return s && w ? store_.pair_df(*s, *w) : 0;
}

Ratio CorpusStats::conditional(std::optional<SubjectId> s, std::optional<WordId> w) const {
  if (!s) return {};
  return Ratio(pair_count(s, w), store_.subject_df(*s));
}

}  // namespace cooc
