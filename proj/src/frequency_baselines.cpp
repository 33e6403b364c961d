#include "cooc/frequency_baselines.hpp"

#include <algorithm>
#include <numeric>

#include "cooc/error.hpp"
#include "cooc/jsonl.hpp"

namespace cooc {

std::string_view to_string(Baseline b) {
  switch (b) {
    case Baseline::marginal: return "marginal";
    case Baseline::joint: return "joint";
    case Baseline::pmi: return "pmi";
  }
  return "?";
}

Baseline parse_baseline(std::string_view s) {
  if (s == "marginal") return Baseline::marginal;
  if (s == "joint") return Baseline::joint;
  if (s == "pmi") return Baseline::pmi;
  throw UsageError("unknown baseline '" + std::string(s) + "'");
}

namespace {

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t out = 0;
  if (__builtin_mul_overflow(a, b, &out)) throw InvariantError("pmi: count product overflows 64 bits");
  return out;
}

Ratio score_of(Baseline baseline, const CooccurrenceStore& store, std::optional<SubjectId> subject,
               std::optional<WordId> word) {
  if (!word) return {};
  const auto n = store.n_docs();
  switch (baseline) {
    case Baseline::marginal:
      return Ratio(store.word_df(*word), n);
    case Baseline::joint:
      return subject ? Ratio(store.pair_df(*subject, *word), n) : Ratio{};
    case Baseline::pmi: {
      if (!subject) return {};
      const auto pair = store.pair_df(*subject, *word);
      const auto wdf = store.word_df(*word);
      if (pair == 0 || wdf == 0) return {};
      // (pair / sdf) / (wdf / n)
      return Ratio(checked_mul(pair, n), checked_mul(store.subject_df(*subject), wdf));
    }
  }
  return {};
}

}  // namespace

BaselineRanking rank(Baseline baseline, const FactTriple& fact, const CorpusStats& stats,
                     std::span<const std::string> candidates, std::span<const std::optional<WordId>> word_ids) {
  std::vector<std::optional<WordId>> computed;
  if (word_ids.empty() && !candidates.empty()) {
    computed = stats.words(candidates);
    word_ids = computed;
  }
  if (word_ids.size() != candidates.size()) throw InvariantError("rank: word id list does not match candidates");

  BaselineRanking out;
  out.uid = fact.uid;
  out.baseline = baseline;
  const auto subject = stats.usable_subject(fact.subject);
  out.unknown = !subject;

  std::vector<Ratio> scores(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i)
    scores[i] = score_of(baseline, stats.store(), subject, word_ids[i]);

  std::vector<std::size_t> order(candidates.size());
  std::iota(order.begin(), order.end(), 0);
  // Candidates arrive sorted, so index order is token order.
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  out.ranked.reserve(order.size());
  for (auto i : order) out.ranked.push_back({candidates[i], scores[i]});
  return out;
}

BaselineRanking rank_marginal(const FactTriple& fact, const CorpusStats& stats, std::span<const std::string> candidates,
                              std::span<const std::optional<WordId>> word_ids) {
  return rank(Baseline::marginal, fact, stats, candidates, word_ids);
}

BaselineRanking rank_joint(const FactTriple& fact, const CorpusStats& stats, std::span<const std::string> candidates,
                           std::span<const std::optional<WordId>> word_ids) {
  return rank(Baseline::joint, fact, stats, candidates, word_ids);
}

BaselineRanking rank_pmi(const FactTriple& fact, const CorpusStats& stats, std::span<const std::string> candidates,
                         std::span<const std::optional<WordId>> word_ids) {
  return rank(Baseline::pmi, fact, stats, candidates, word_ids);
}

std::vector<BaselineRanking> rank_all(Baseline baseline, std::span<const FactTriple> facts, const CorpusStats& stats,
                                      const CandidateSet& candidates) {
  std::map<std::string, std::vector<std::optional<WordId>>, std::less<>> word_cache;
  std::vector<BaselineRanking> out;
  out.reserve(facts.size());
  for (const auto& fact : facts) {
    const auto members = candidates.for_relation(fact.relation_id);
    auto it = word_cache.find(fact.relation_id);
    if (it == word_cache.end()) it = word_cache.emplace(fact.relation_id, stats.words(members)).first;
    out.push_back(rank(baseline, fact, stats, members, it->second));
  }
  return out;
}

void write_baseline_predictions(const std::filesystem::path& path, std::span<const BaselineRanking> rankings) {
  JsonlWriter w(path);
  for (const auto& r : rankings) {
    nlohmann::ordered_json ranking = nlohmann::ordered_json::array();
    for (const auto& t : r.ranked) ranking.push_back(t.token);
    w.write(nlohmann::ordered_json{
        {"uid", r.uid}, {"ranking", std::move(ranking)}, {"baseline", to_string(r.baseline)}, {"unknown", r.unknown}});
  }
}

}  // namespace cooc
