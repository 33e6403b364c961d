#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include "cooc/corpus_stats.hpp"
#include "cooc/probe_dataset.hpp"
#include "cooc/ratio.hpp"

namespace cooc {

/// A model's output for one fact: either a score per token or an explicit
/// ranked token list (best first). Either form must cover every active
/// candidate; extra tokens are ignored.
struct PredictionRecord {
  using Scores = std::unordered_map<std::string, double>;
  using Ranking = std::vector<std::string>;

  std::string uid;
  std::variant<Scores, Ranking> output;
};

/// Reads {"uid", "scores": {...}} or {"uid", "ranking": [...]} lines.
std::vector<PredictionRecord> read_predictions(const std::filesystem::path& path);

/// The candidates a fact is ranked against: the relation's candidate set
/// minus the other gold objects of its (subject, relation) pair. Sorted.
std::vector<std::string_view> active_candidates(const FactTriple& fact, const CandidateSet& candidates,
                                                const AlternateGoldIndex& golds);

struct FactOutcome {
  std::string uid;
  std::string relation_id;
  std::string subject;
  std::string gold;
  std::string top1;
  std::uint64_t rank = 0;  // 1-based, ties broken by ascending token
  [[nodiscard]] bool hit() const { return rank == 1; }
  [[nodiscard]] double reciprocal_rank() const { return 1.0 / static_cast<double>(rank); }
};

struct MetricSummary {
  std::size_t n = 0;
  std::size_t hits = 0;
  double rr_sum = 0.0;
  [[nodiscard]] double hits1() const { return n ? static_cast<double>(hits) / static_cast<double>(n) : 0.0; }
  [[nodiscard]] double mrr() const { return n ? rr_sum / static_cast<double>(n) : 0.0; }
};

struct EvalResult {
  std::vector<FactOutcome> facts;  // in dataset order
  MetricSummary overall;
  std::map<std::string, MetricSummary> per_relation;
};

/// hits@1 and reciprocal rank per fact after candidate restriction and
/// other-valid-object removal. Throws DataError listing missing uids, on
/// under-covering predictions, or when a gold object is not a candidate.
EvalResult evaluate(std::span<const PredictionRecord> predictions, std::span<const FactTriple> facts,
                    const CandidateSet& candidates, const AlternateGoldIndex& golds);

/// uid,relation_id,hits1,rr
void write_results_csv(const std::filesystem::path& path, const EvalResult& result);
/// model,mode,scope,n,hits1,mrr with one ALL row then one row per relation.
void write_summary_csv(const std::filesystem::path& path, const EvalResult& result, std::string_view model,
                       CandidateMode mode);

/// One fact's evaluation outcome next to its corpus statistics.
struct JoinedRecord {
  std::string uid;
  std::string relation_id;
  std::string gold;
  std::string prediction;
  bool hit = false;
  double rr = 0.0;
  /// Subject unusable or gold word outside the dictionary.
  bool unknown = false;
  Ratio gold_condprob;
  Ratio pred_condprob;
  std::uint64_t gold_pair = 0;
  std::uint64_t pred_pair = 0;
  /// 1 / (1 + number of active candidates with a strictly higher pair count).
  Ratio cooc_rr;
};

std::vector<JoinedRecord> join_statistics(const EvalResult& result, const CorpusStats& stats,
                                          const CandidateSet& candidates, const AlternateGoldIndex& golds);

void write_joined_csv(const std::filesystem::path& path, std::span<const JoinedRecord> records);

}  // namespace cooc
