#include "cooc/bias_analysis.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "cooc/error.hpp"
#include "cooc/jsonl.hpp"

namespace cooc {
namespace {

constexpr std::array<FrequencyBin, kBinCount> kBins{{
    {0, "1/1", 1.0, 1.0},
    {1, "1/2", 1.0 / 2, 1.0},
    {2, "1/4", 1.0 / 4, 1.0 / 2},
    {3, "1/8", 1.0 / 8, 1.0 / 4},
    {4, "1/16", 1.0 / 16, 1.0 / 8},
    {5, "1/32", 1.0 / 32, 1.0 / 16},
    {6, "1/64", 1.0 / 64, 1.0 / 32},
    {7, "0", 0.0, 1.0 / 64},
}};

const FrequencyBin& bin_for(const JoinedRecord& r, BinBasis basis) {
  return assign_bin(basis == BinBasis::condprob ? r.gold_condprob : r.cooc_rr);
}

template <typename Fn>
void for_each_included(std::span<const JoinedRecord> records, BinnedReport& report, Fn fn) {
  for (const auto& r : records) {
    if (r.unknown) continue;
    auto& row = report.bins[bin_for(r, report.basis).index];
    fn(r, row);
    fn(r, report.total);
  }
}

}  // namespace

std::span<const FrequencyBin> frequency_bins() { return kBins; }

const FrequencyBin& assign_bin(double value) {
  if (!(value >= 0.0 && value <= 1.0)) throw std::domain_error("assign_bin: value outside [0, 1]");
  if (value == 1.0) return kBins[0];
  for (std::size_t k = 1; k <= 6; ++k)
    if (value >= kBins[k].lower) return kBins[k];
  return kBins[7];
}

const FrequencyBin& assign_bin(Ratio value) {
  if (value.num > value.den) throw std::domain_error("assign_bin: ratio above 1");
  if (value.num == value.den) return kBins[0];
  using u128 = unsigned __int128;
  for (std::size_t k = 1; k <= 6; ++k)
    if ((u128(value.num) << k) >= value.den) return kBins[k];
  return kBins[7];
}

std::string_view to_string(BinBasis b) { return b == BinBasis::condprob ? "condprob" : "cooc_rr"; }

BinBasis parse_bin_basis(std::string_view s) {
  if (s == "condprob") return BinBasis::condprob;
  if (s == "cooc_rr") return BinBasis::cooc_rr;
  throw UsageError("unknown bin basis '" + std::string(s) + "'");
}

std::optional<MeanStd> mean_std(std::span<const double> values) {
  if (values.empty()) return std::nullopt;
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / static_cast<double>(values.size());
  double sq = 0.0;
  for (double v : values) sq += (v - mean) * (v - mean);
  return MeanStd{mean, std::sqrt(sq / static_cast<double>(values.size()))};
}

std::optional<double> BinRow::hits1_mean() const {
  if (n == 0) return std::nullopt;
  return static_cast<double>(hits) / static_cast<double>(n);
}

std::optional<double> BinRow::biased_ratio() const {
  if (n_fail == 0) return std::nullopt;
  return static_cast<double>(n_biased) / static_cast<double>(n_fail);
}

double BinnedReport::excluded_fraction() const {
  return total_facts ? static_cast<double>(excluded) / static_cast<double>(total_facts) : 0.0;
}

BinnedReport binned_accuracy(std::span<const JoinedRecord> records, BinBasis basis) {
  BinnedReport report;
  report.basis = basis;
  for (std::size_t i = 0; i < kBinCount; ++i) report.bins[i].label = kBins[i].label;
  report.total.label = "Total";
  report.total_facts = records.size();
  for (const auto& r : records) report.excluded += r.unknown ? 1 : 0;
  for_each_included(records, report, [](const JoinedRecord& r, BinRow& row) {
    ++row.n;
    row.hits += r.hit ? 1 : 0;
  });
  return report;
}

void biased_case_analysis(std::span<const JoinedRecord> records, BinnedReport& report) {
  for_each_included(records, report, [](const JoinedRecord& r, BinRow& row) {
    if (r.hit) return;
    ++row.n_fail;
    if (r.pred_pair > r.gold_pair) ++row.n_biased;
  });
}

void condprob_comparison(std::span<const JoinedRecord> records, BinnedReport& report) {
  for_each_included(records, report, [](const JoinedRecord& r, BinRow& row) {
    if (r.hit) return;
    row.pred_condprob.push_back(r.pred_condprob.value());
    row.gold_condprob.push_back(r.gold_condprob.value());
  });
}

BinnedReport analyze(std::span<const JoinedRecord> records, BinBasis basis) {
  auto report = binned_accuracy(records, basis);
  biased_case_analysis(records, report);
  condprob_comparison(records, report);
  return report;
}

void write_report_csv(std::ostream& out, const BinnedReport& report) {
  auto opt = [](std::optional<double> v) { return v ? fixed6(*v) : std::string(); };
  out << "bin_label,n,hits1_mean,n_fail,n_biased,biased_ratio,pred_condprob_mean,pred_condprob_std,"
         "gold_condprob_mean,gold_condprob_std\n";
  auto row = [&](const BinRow& r) {
    const auto pred = mean_std(r.pred_condprob);
    const auto gold = mean_std(r.gold_condprob);
    out << r.label << ',' << r.n << ',' << opt(r.hits1_mean()) << ',' << r.n_fail << ',' << r.n_biased << ','
        << opt(r.biased_ratio()) << ',' << opt(pred ? std::optional(pred->mean) : std::nullopt) << ','
        << opt(pred ? std::optional(pred->std) : std::nullopt) << ','
        << opt(gold ? std::optional(gold->mean) : std::nullopt) << ','
        << opt(gold ? std::optional(gold->std) : std::nullopt) << '\n';
  };
  for (const auto& b : report.bins) row(b);
  row(report.total);
}

}  // namespace cooc
