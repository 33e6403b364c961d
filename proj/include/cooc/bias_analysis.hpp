#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <ostream>
#include <span>
#include <string_view>
#include <vector>

#include "cooc/evaluation.hpp"
#include "cooc/ratio.hpp"

namespace cooc {

/// Geometric frequency bins over [0, 1]: "1/1" is {1}; "1/2^k" is
/// [1/2^k, 1/2^(k-1)) for k = 1..6; "0" is [0, 1/64).
struct FrequencyBin {
  std::size_t index;
  std::string_view label;
  double lower;
  double upper;
};

inline constexpr std::size_t kBinCount = 8;
inline constexpr std::string_view kBinScheme = "geometric-v1";

std::span<const FrequencyBin> frequency_bins();

/// Throws std::domain_error outside [0, 1] (or NaN).
const FrequencyBin& assign_bin(double value);
/// Exact variant for count ratios.
const FrequencyBin& assign_bin(Ratio value);

enum class BinBasis { condprob, cooc_rr };
std::string_view to_string(BinBasis b);
BinBasis parse_bin_basis(std::string_view s);

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;  // population
};
std::optional<MeanStd> mean_std(std::span<const double> values);

struct BinRow {
  std::string_view label;
  std::size_t n = 0;
  std::size_t hits = 0;
  std::size_t n_fail = 0;
  std::size_t n_biased = 0;
  std::vector<double> pred_condprob;  // failures only
  std::vector<double> gold_condprob;  // failures only

  [[nodiscard]] std::optional<double> hits1_mean() const;
  [[nodiscard]] std::optional<double> biased_ratio() const;
};

struct BinnedReport {
  BinBasis basis = BinBasis::condprob;
  std::array<BinRow, kBinCount> bins;
  BinRow total;
  std::size_t total_facts = 0;
  std::size_t excluded = 0;  // unknown statistics

  [[nodiscard]] double excluded_fraction() const;
};

/// Per-bin fact count and hits@1, unknown facts excluded first.
BinnedReport binned_accuracy(std::span<const JoinedRecord> records, BinBasis basis);

/// Failures (top-1 != gold) and biased cases: failures whose prediction
/// co-occurs with the subject strictly more often than the gold does.
void biased_case_analysis(std::span<const JoinedRecord> records, BinnedReport& report);

/// P(pred | subj) and P(gold | subj) over the failure cases of each bin.
void condprob_comparison(std::span<const JoinedRecord> records, BinnedReport& report);

/// All three passes.
BinnedReport analyze(std::span<const JoinedRecord> records, BinBasis basis);

/// bin_label,n,hits1_mean,n_fail,n_biased,biased_ratio,pred_condprob_mean,
/// pred_condprob_std,gold_condprob_mean,gold_condprob_std; undefined
/// values are empty fields. Eight bin rows and a Total row.
void write_report_csv(std::ostream& out, const BinnedReport& report);

}  // namespace cooc
