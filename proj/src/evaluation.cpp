#include "cooc/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_set>

#include <fmt/format.h>

#include "cooc/error.hpp"
#include "cooc/jsonl.hpp"

namespace cooc {
using nlohmann::json;

std::vector<PredictionRecord> read_predictions(const std::filesystem::path& path) {
  std::vector<PredictionRecord> out;
  for_each_line(path, [&](std::string_view line, std::size_t n) {
    const auto where = path.string() + ":" + std::to_string(n);
    const auto j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("uid") || !j["uid"].is_string())
      throw DataError(where + ": malformed prediction record");
    PredictionRecord rec;
    rec.uid = j["uid"].get<std::string>();
    if (j.contains("ranking") && j["ranking"].is_array()) {
      PredictionRecord::Ranking ranking;
      ranking.reserve(j["ranking"].size());
      for (const auto& t : j["ranking"]) {
        if (!t.is_string()) throw DataError(where + ": ranking entries must be strings");
        ranking.push_back(t.get<std::string>());
      }
      rec.output = std::move(ranking);
    } else if (j.contains("scores") && j["scores"].is_object()) {
      PredictionRecord::Scores scores;
      scores.reserve(j["scores"].size());
      for (const auto& [tok, v] : j["scores"].items()) {
        if (!v.is_number()) throw DataError(where + ": score for '" + tok + "' is not a number");
        const double d = v.get<double>();
        if (std::isnan(d)) throw DataError(where + ": NaN score for '" + tok + "'");
        scores.emplace(tok, d);
      }
      rec.output = std::move(scores);
    } else {
      throw DataError(where + ": record has neither \"scores\" nor \"ranking\"");
    }
    out.push_back(std::move(rec));
  });
  return out;
}

std::vector<std::string_view> active_candidates(const FactTriple& fact, const CandidateSet& candidates,
                                                const AlternateGoldIndex& golds) {
  const auto members = candidates.for_relation(fact.relation_id);
  const auto others = golds.objects(fact.subject, fact.relation_id);
  std::vector<std::string_view> out;
  out.reserve(members.size());
  for (const auto& m : members) {
    if (m != fact.object && std::binary_search(others.begin(), others.end(), m)) continue;
    out.push_back(m);
  }
  return out;
}

namespace {

struct Ranked {
  std::uint64_t rank;
  std::string_view top1;
};

Ranked rank_scores(const PredictionRecord::Scores& scores, std::span<const std::string_view> active,
                   std::string_view gold, const std::string& uid) {
  auto score = [&](std::string_view tok) {
    const auto it = scores.find(std::string(tok));
    if (it == scores.end())
      throw DataError("prediction " + uid + " does not cover candidate '" + std::string(tok) + "'");
    return it->second;
  };
  const double g = score(gold);
  std::uint64_t ahead = 0;
  std::string_view top;
  double top_score = -std::numeric_limits<double>::infinity();
  bool first = true;
  for (const auto tok : active) {
    const double s = score(tok);
    if (s > g || (s == g && tok < gold)) ++ahead;
    if (first || s > top_score) {  // active is sorted: first max wins ties
      top = tok;
      top_score = s;
      first = false;
    }
  }
  return {ahead + 1, top};
}

Ranked rank_list(const PredictionRecord::Ranking& ranking, std::span<const std::string_view> active,
                 std::string_view gold, const std::string& uid) {
  std::unordered_map<std::string_view, std::size_t> pos;
  pos.reserve(ranking.size());
  for (std::size_t i = 0; i < ranking.size(); ++i) pos.emplace(ranking[i], i);
  auto position = [&](std::string_view tok) {
    const auto it = pos.find(tok);
    if (it == pos.end())
      throw DataError("prediction " + uid + " does not cover candidate '" + std::string(tok) + "'");
    return it->second;
  };
  const auto g = position(gold);
  std::uint64_t ahead = 0;
  std::string_view top;
  std::size_t top_pos = std::numeric_limits<std::size_t>::max();
  for (const auto tok : active) {
    const auto p = position(tok);
    if (p < g) ++ahead;
    if (p < top_pos) {
      top_pos = p;
      top = tok;
    }
  }
  return {ahead + 1, top};
}

}  // namespace

EvalResult evaluate(std::span<const PredictionRecord> predictions, std::span<const FactTriple> facts,
                    const CandidateSet& candidates, const AlternateGoldIndex& golds) {
  std::unordered_map<std::string_view, const PredictionRecord*> by_uid;
  by_uid.reserve(predictions.size());
  for (const auto& p : predictions) {
    if (!by_uid.emplace(p.uid, &p).second) throw DataError("duplicate prediction for uid " + p.uid);
  }
  std::vector<std::string> missing;
  for (const auto& f : facts)
    if (!by_uid.contains(f.uid)) missing.push_back(f.uid);
  if (!missing.empty()) {
    std::string list;
    for (std::size_t i = 0; i < missing.size() && i < 20; ++i) list += (i ? ", " : "") + missing[i];
    throw DataError(fmt::format("{} fact(s) have no prediction: {}{}", missing.size(), list,
                                missing.size() > 20 ? ", ..." : ""));
  }

  EvalResult result;
  result.facts.reserve(facts.size());
  for (const auto& f : facts) {
    if (!candidates.contains(f.relation_id, f.object))
      throw DataError("gold object '" + f.object + "' of " + f.uid + " is not in the " +
                      std::string(to_string(candidates.mode())) + " candidate set");
    const auto active = active_candidates(f, candidates, golds);
    const auto& rec = *by_uid.at(f.uid);
    const auto r = std::holds_alternative<PredictionRecord::Scores>(rec.output)
                       ? rank_scores(std::get<PredictionRecord::Scores>(rec.output), active, f.object, f.uid)
                       : rank_list(std::get<PredictionRecord::Ranking>(rec.output), active, f.object, f.uid);
    FactOutcome o{f.uid, f.relation_id, f.subject, f.object, std::string(r.top1), r.rank};
    for (auto* s : {&result.overall, &result.per_relation[f.relation_id]}) {
      ++s->n;
      s->hits += o.hit() ? 1 : 0;
      s->rr_sum += o.reciprocal_rank();
    }
    result.facts.push_back(std::move(o));
  }
  return result;
}

namespace {

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace

void write_results_csv(const std::filesystem::path& path, const EvalResult& result) {
  auto out = open_output(path);
  out << "uid,relation_id,hits1,rr\n";
  for (const auto& f : result.facts)
    out << f.uid << ',' << csv_field(f.relation_id) << ',' << (f.hit() ? 1 : 0) << ',' << fixed6(f.reciprocal_rank())
        << '\n';
}

void write_summary_csv(const std::filesystem::path& path, const EvalResult& result, std::string_view model,
                       CandidateMode mode) {
  auto out = open_output(path);
  out << "model,mode,scope,n,hits1,mrr\n";
  auto row = [&](std::string_view scope, const MetricSummary& s) {
    out << csv_field(model) << ',' << to_string(mode) << ',' << csv_field(scope) << ',' << s.n << ','
        << fixed6(s.hits1()) << ',' << fixed6(s.mrr()) << '\n';
  };
  row("ALL", result.overall);
  for (const auto& [rel, s] : result.per_relation) row(rel, s);
}

std::vector<JoinedRecord> join_statistics(const EvalResult& result, const CorpusStats& stats,
                                          const CandidateSet& candidates, const AlternateGoldIndex& golds) {
  std::vector<JoinedRecord> out;
  out.reserve(result.facts.size());
  std::unordered_map<std::string, std::optional<WordId>> word_cache;
  auto word = [&](std::string_view tok) {
    auto it = word_cache.find(std::string(tok));
    if (it == word_cache.end()) it = word_cache.emplace(std::string(tok), stats.word(tok)).first;
    return it->second;
  };
  for (const auto& o : result.facts) {
    JoinedRecord j;
    j.uid = o.uid;
    j.relation_id = o.relation_id;
    j.gold = o.gold;
    j.prediction = o.top1;
    j.hit = o.hit();
    j.rr = o.reciprocal_rank();
    const auto subject = stats.usable_subject(o.subject);
    const auto gold_word = word(o.gold);
    const auto pred_word = word(o.top1);
    j.unknown = !subject || !gold_word;
    j.gold_pair = stats.pair_count(subject, gold_word);
    j.pred_pair = stats.pair_count(subject, pred_word);
    j.gold_condprob = stats.conditional(subject, gold_word);
    j.pred_condprob = stats.conditional(subject, pred_word);
    if (!j.unknown) {
      const FactTriple fact{o.uid, o.subject, o.relation_id, o.gold, Split::test};
      std::uint64_t higher = 0;
      for (const auto tok : active_candidates(fact, candidates, golds))
        if (stats.pair_count(subject, word(tok)) > j.gold_pair) ++higher;
      j.cooc_rr = Ratio(1, higher + 1);
    }
    out.push_back(std::move(j));
  }
  return out;
}

void write_joined_csv(const std::filesystem::path& path, std::span<const JoinedRecord> records) {
  auto out = open_output(path);
  out << "uid,relation_id,gold,prediction,hits1,rr,unknown,gold_pair,pred_pair,gold_condprob,pred_condprob,cooc_rr\n";
  for (const auto& r : records) {
    out << r.uid << ',' << csv_field(r.relation_id) << ',' << csv_field(r.gold) << ',' << csv_field(r.prediction)
        << ',' << (r.hit ? 1 : 0) << ',' << fixed6(r.rr) << ',' << (r.unknown ? 1 : 0) << ',' << r.gold_pair << ','
        << r.pred_pair << ',' << fixed6(r.gold_condprob.value()) << ',' << fixed6(r.pred_condprob.value()) << ','
        << (r.unknown ? std::string() : fixed6(r.cooc_rr.value())) << '\n';
  }
}

}  // namespace cooc
