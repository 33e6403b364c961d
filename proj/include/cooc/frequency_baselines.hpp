#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cooc/corpus_stats.hpp"
#include "cooc/probe_dataset.hpp"
#include "cooc/ratio.hpp"

namespace cooc {

enum class Baseline { marginal, joint, pmi };
std::string_view to_string(Baseline b);
Baseline parse_baseline(std::string_view s);

struct ScoredToken {
  std::string token;
  Ratio score;
};

/// A total order over the active candidates: score descending, ties by
/// ascending token. `unknown` marks a subject with no usable statistics.
struct BaselineRanking {
  std::string uid;
  Baseline baseline = Baseline::marginal;
  std::vector<ScoredToken> ranked;
  bool unknown = false;
};

// `candidates` must be sorted; `word_ids` is parallel to it (see
// CorpusStats::words) and may be empty, in which case it is computed.

/// score = word_df / n_docs, independent of the subject.
BaselineRanking rank_marginal(const FactTriple& fact, const CorpusStats& stats, std::span<const std::string> candidates,
                              std::span<const std::optional<WordId>> word_ids = {});
/// score = pair_df(subject, w) / n_docs.
BaselineRanking rank_joint(const FactTriple& fact, const CorpusStats& stats, std::span<const std::string> candidates,
                           std::span<const std::optional<WordId>> word_ids = {});
/// score = P(w | subject) / P(w), or 0 when the pair or the word never occurred.
BaselineRanking rank_pmi(const FactTriple& fact, const CorpusStats& stats, std::span<const std::string> candidates,
                         std::span<const std::optional<WordId>> word_ids = {});

BaselineRanking rank(Baseline baseline, const FactTriple& fact, const CorpusStats& stats,
                     std::span<const std::string> candidates, std::span<const std::optional<WordId>> word_ids = {});

/// Ranks every fact under its relation's active candidates, caching word
/// lookups per relation. Output order follows `facts`.
std::vector<BaselineRanking> rank_all(Baseline baseline, std::span<const FactTriple> facts, const CorpusStats& stats,
                                      const CandidateSet& candidates);

/// Prediction JSONL: {"uid", "ranking": [...], "baseline", "unknown"}.
void write_baseline_predictions(const std::filesystem::path& path, std::span<const BaselineRanking> rankings);

}  // namespace cooc
