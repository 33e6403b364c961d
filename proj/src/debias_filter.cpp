#include "cooc/debias_filter.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <unordered_set>

#include "cooc/error.hpp"
#include "cooc/jsonl.hpp"
#include "cooc/rng.hpp"

namespace cooc {

std::string_view to_string(FilterStrategy s) { return s == FilterStrategy::bias_score ? "bias-score" : "random"; }

FilterStrategy parse_filter_strategy(std::string_view s) {
  if (s == "bias-score") return FilterStrategy::bias_score;
  if (s == "random") return FilterStrategy::random;
  throw UsageError("unknown filter strategy '" + std::string(s) + "'");
}

FilterSpec::FilterSpec(FilterStrategy strategy, double ratio, std::uint64_t seed)
    : strategy_(strategy), ratio_ppm_(0), seed_(seed) {
  if (!(ratio >= 0.0 && ratio < 1.0)) throw UsageError("filter ratio must be in [0, 1)");
  ratio_ppm_ = static_cast<std::uint64_t>(std::llround(ratio * 1e6));
  if (ratio_ppm_ >= 1'000'000) throw UsageError("filter ratio must be below 1");
}

std::size_t FilterSpec::discard_count(std::size_t n) const {
  return static_cast<std::size_t>((static_cast<unsigned __int128>(n) * ratio_ppm_) / 1'000'000);
}

std::optional<Ratio> score_bias(const FactTriple& fact, const CorpusStats& stats) {
  const auto subject = stats.usable_subject(fact.subject);
  const auto word = stats.word(fact.object);
  if (!subject || !word) return std::nullopt;
  return stats.conditional(subject, word);
}

FilterResult filter_facts(std::span<const FactTriple> facts, const FilterSpec& spec, const CorpusStats& stats) {
  std::map<std::string, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < facts.size(); ++i) groups[facts[i].relation_id].push_back(i);

  std::vector<std::optional<Ratio>> scores(facts.size());
  for (std::size_t i = 0; i < facts.size(); ++i) scores[i] = score_bias(facts[i], stats);

  std::vector<bool> drop(facts.size(), false);
  FilterResult result;
  for (auto& [relation, idx] : groups) {
    const auto k = spec.discard_count(idx.size());
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return facts[a].uid < facts[b].uid; });
    if (spec.strategy() == FilterStrategy::bias_score) {
      std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        return scores[a].value_or(Ratio{}) > scores[b].value_or(Ratio{});
      });
    } else {
      std::mt19937_64 rng(mix_seed(spec.seed(), relation));
      shuffle(std::span(idx), rng);
    }
    for (std::size_t j = 0; j < k; ++j) {
      drop[idx[j]] = true;
      result.discarded.push_back({facts[idx[j]].uid, relation, scores[idx[j]]});
    }
  }
  for (std::size_t i = 0; i < facts.size(); ++i)
    if (!drop[i]) result.kept.push_back(facts[i]);
  return result;
}

void write_discard_manifest(const std::filesystem::path& path, std::span<const DiscardEntry> discarded,
                            const FilterSpec& spec) {
  auto out = open_output(path);
  out << "uid,relation_id,score,strategy,seed\n";
  for (const auto& d : discarded) {
    out << d.uid << ',' << d.relation_id << ',' << (d.score ? fixed6(d.score->value()) : std::string("unknown")) << ','
        << to_string(spec.strategy()) << ',' << spec.seed() << '\n';
  }
}

}  // namespace cooc
