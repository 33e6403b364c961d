#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cooc/corpus_stats.hpp"
#include "cooc/probe_dataset.hpp"
#include "cooc/ratio.hpp"

namespace cooc {

enum class FilterStrategy { bias_score, random };
std::string_view to_string(FilterStrategy s);
FilterStrategy parse_filter_strategy(std::string_view s);

/// Undersampling parameters. The ratio is held in parts per million so
/// floor(p * n) is exact for decimal ratios.
class FilterSpec {
 public:
  /// Throws UsageError unless 0 <= ratio < 1.
  FilterSpec(FilterStrategy strategy, double ratio, std::uint64_t seed = 0);

  [[nodiscard]] FilterStrategy strategy() const { return strategy_; }
  [[nodiscard]] std::uint64_t ratio_ppm() const { return ratio_ppm_; }
  [[nodiscard]] double ratio() const { return static_cast<double>(ratio_ppm_) / 1e6; }
  [[nodiscard]] std::uint64_t seed() const { return seed_; }

  /// floor(p * n)
  [[nodiscard]] std::size_t discard_count(std::size_t n) const;

 private:
  FilterStrategy strategy_;
  std::uint64_t ratio_ppm_;
  std::uint64_t seed_;
};

/// P(obj | subj) from the pre-training counts; nullopt when unknown.
std::optional<Ratio> score_bias(const FactTriple& fact, const CorpusStats& stats);

struct DiscardEntry {
  std::string uid;
  std::string relation_id;
  std::optional<Ratio> score;
};

struct FilterResult {
  std::vector<FactTriple> kept;  // input order
  std::vector<DiscardEntry> discarded;
};

/// Per relation r, discards floor(p * n_r) facts: the highest bias scores
/// (unknown scores count as 0; ties by ascending uid), or a seeded uniform
/// sample for the random strategy. Every fact passed in is filtered; pass
/// the training split only.
FilterResult filter_facts(std::span<const FactTriple> facts, const FilterSpec& spec, const CorpusStats& stats);

/// uid,relation_id,score,strategy,seed
void write_discard_manifest(const std::filesystem::path& path, std::span<const DiscardEntry> discarded,
                            const FilterSpec& spec);

}  // namespace cooc
