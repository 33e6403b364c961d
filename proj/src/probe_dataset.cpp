#include "cooc/probe_dataset.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <set>
#include <unordered_map>

#include "cooc/error.hpp"
#include "cooc/hash.hpp"
#include "cooc/jsonl.hpp"
#include "cooc/rng.hpp"
#include "cooc/text.hpp"

namespace cooc {
namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

std::string_view to_string(Split s) { return s == Split::train ? "train" : "test"; }

std::string_view to_string(RelationType t) {
  switch (t) {
    case RelationType::one_to_one: return "1-1";
    case RelationType::many_to_one: return "N-1";
    case RelationType::many_to_many: return "N-M";
  }
  return "?";
}

Split parse_split(std::string_view s) {
  if (s == "train") return Split::train;
  if (s == "test") return Split::test;
  throw DataError("unknown split '" + std::string(s) + "'");
}

RelationType parse_relation_type(std::string_view s) {
  if (s == "1-1") return RelationType::one_to_one;
  if (s == "N-1") return RelationType::many_to_one;
  if (s == "N-M") return RelationType::many_to_many;
  throw DataError("unknown relation type '" + std::string(s) + "'");
}

std::string fact_uid(std::string_view subject, std::string_view relation_id, std::string_view object) {
  std::string key;
  key.reserve(subject.size() + relation_id.size() + object.size() + 2);
  key.append(subject).append("|").append(relation_id).append("|").append(object);
  return sha256_hex(key).substr(0, 16);
}

TemplateTable::TemplateTable(std::vector<RelationTemplate> templates) : templates_(std::move(templates)) {
  std::set<std::string> seen;
  for (const auto& t : templates_) {
    validate_template(t.pattern);
    if (!seen.insert(t.relation_id).second) throw DataError("duplicate template for relation " + t.relation_id);
  }
}

TemplateTable TemplateTable::builtin() {
  const auto b = builtin_templates();
  return TemplateTable(std::vector<RelationTemplate>(b.begin(), b.end()));
}

TemplateTable TemplateTable::load(const fs::path& path) {
  std::vector<RelationTemplate> out;
  for_each_line(path, [&](std::string_view line, std::size_t n) {
    const auto j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("relation_id") || !j.contains("template"))
      throw DataError(path.string() + ":" + std::to_string(n) + ": malformed template record");
    RelationTemplate t;
    t.relation_id = j.at("relation_id").get<std::string>();
    t.label = j.value("label", "");
    t.pattern = j.at("template").get<std::string>();
    t.type = parse_relation_type(j.value("type", "N-1"));
    t.reference_train = j.value("train", std::size_t{0});
    t.reference_test = j.value("test", std::size_t{0});
    out.push_back(std::move(t));
  });
  return TemplateTable(std::move(out));
}

void TemplateTable::save(const fs::path& path) const {
  JsonlWriter w(path);
  for (const auto& t : templates_) {
    w.write(ordered_json{{"relation_id", t.relation_id},
                         {"label", t.label},
                         {"template", t.pattern},
                         {"type", to_string(t.type)},
                         {"train", t.reference_train},
                         {"test", t.reference_test}});
  }
}

const RelationTemplate* TemplateTable::find(std::string_view relation_id) const {
  const auto it = std::find_if(templates_.begin(), templates_.end(),
                               [&](const RelationTemplate& t) { return t.relation_id == relation_id; });
  return it == templates_.end() ? nullptr : &*it;
}

namespace {

std::size_t count_of(std::string_view hay, std::string_view needle) {
  std::size_t n = 0;
  for (auto pos = hay.find(needle); pos != std::string_view::npos; pos = hay.find(needle, pos + needle.size())) ++n;
  return n;
}

}  // namespace

void validate_template(std::string_view pattern) {
  if (count_of(pattern, "[X]") != 1 || count_of(pattern, "[Y]") != 1)
    throw DataError("template must contain exactly one [X] and one [Y]: '" + std::string(pattern) + "'");
}

std::string render(const FactTriple& fact, const RelationTemplate& tmpl, RenderMode mode) {
  validate_template(tmpl.pattern);
  static constexpr std::string_view kMask = "[MASK]";
  std::string masked;
  std::size_t mask_at = 0;
  std::string_view rest = tmpl.pattern;
  while (!rest.empty()) {
    const auto x = rest.find("[X]");
    const auto y = rest.find("[Y]");
    const auto next = std::min(x, y);
    if (next == std::string_view::npos) {
      masked.append(rest);
      break;
    }
    masked.append(rest.substr(0, next));
    if (next == x) {
      masked.append(fact.subject);
    } else {
      mask_at = masked.size();
      masked.append(kMask);
    }
    rest.remove_prefix(next + 3);
  }
  switch (mode) {
    case RenderMode::masked:
      return masked;
    case RenderMode::zero_shot_prefix: {
      auto prefix = masked.substr(0, mask_at);
      while (!prefix.empty() && (prefix.back() == ' ' || prefix.back() == '\t')) prefix.pop_back();
      return prefix;
    }
    case RenderMode::finetune_prompt:
      return "### Input:\n " + masked + "\n\n### Response:";
  }
  throw InvariantError("render: unknown mode");
}

std::vector<RawFact> read_raw_facts(const fs::path& path, std::vector<Exclusion>& report) {
  std::vector<RawFact> out;
  for_each_line(path, [&](std::string_view line, std::size_t n) {
    const auto j = json::parse(line, nullptr, false);
    auto field = [&j](const char* a, const char* b) -> std::optional<std::string> {
      for (const char* k : {a, b}) {
        if (j.contains(k) && j[k].is_string()) return j[k].get<std::string>();
      }
      return std::nullopt;
    };
    if (j.is_discarded() || !j.is_object()) {
      report.push_back({"fact", path.filename().string() + ":" + std::to_string(n), "malformed record"});
      return;
    }
    auto s = field("subject", "sub_label");
    auto r = field("relation_id", "predicate_id");
    auto o = field("object", "obj_label");
    if (!s || !r || !o) {
      report.push_back({"fact", path.filename().string() + ":" + std::to_string(n), "missing field"});
      return;
    }
    RawFact f{std::move(*s), std::move(*r), std::move(*o), std::nullopt};
    if (j.contains("split") && j["split"].is_string()) f.split = parse_split(j["split"].get<std::string>());
    out.push_back(std::move(f));
  });
  return out;
}

std::vector<std::string> load_vocabulary_intersection(std::span<const fs::path> paths) {
  if (paths.empty()) throw UsageError("at least one vocabulary file is required");
  std::vector<std::string> result;
  for (std::size_t i = 0; i < paths.size(); ++i) {
    std::vector<std::string> words;
    for_each_line(paths[i], [&](std::string_view line, std::size_t) { words.emplace_back(line); });
    std::sort(words.begin(), words.end());
    words.erase(std::unique(words.begin(), words.end()), words.end());
    if (i == 0) {
      result = std::move(words);
    } else {
      std::vector<std::string> both;
      std::set_intersection(result.begin(), result.end(), words.begin(), words.end(), std::back_inserter(both));
      result = std::move(both);
    }
  }
  return result;
}

PreprocessResult preprocess(std::span<const RawFact> raw, const TemplateTable& templates,
                            std::span<const std::string> vocabulary, bool keep_input_split) {
  if (vocabulary.empty()) throw DataError("preprocess: vocabulary intersection is empty");
  PreprocessResult out;
  std::unordered_map<std::string, std::string> seen;  // uid -> triple key
  std::vector<std::pair<FactTriple, bool>> kept;
  for (const auto& r : raw) {
    const auto desc = r.subject + " | " + r.relation_id + " | " + r.object;
    if (r.subject.empty() || r.relation_id.empty() || r.object.empty()) {
      out.excluded.push_back({"fact", desc, "empty field"});
      continue;
    }
    if (templates.find(r.relation_id) == nullptr) {
      out.excluded.push_back({"fact", desc, "unknown relation id"});
      continue;
    }
    if (!std::binary_search(vocabulary.begin(), vocabulary.end(), r.object)) {
      out.excluded.push_back({"fact", desc, "object not in vocabulary intersection"});
      continue;
    }
    auto uid = fact_uid(r.subject, r.relation_id, r.object);
    const auto [it, inserted] = seen.emplace(uid, desc);
    if (!inserted) {
      if (it->second != desc) throw InvariantError("uid collision between '" + it->second + "' and '" + desc + "'");
      out.excluded.push_back({"fact", desc, "duplicate triple"});
      continue;
    }
    const bool fixed = keep_input_split && r.split.has_value();
    kept.push_back({FactTriple{std::move(uid), r.subject, r.relation_id, r.object, r.split.value_or(Split::train)}, fixed});
  }
  std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
    return std::tie(a.first.relation_id, a.first.uid) < std::tie(b.first.relation_id, b.first.uid);
  });
  for (auto& [fact, fixed] : kept) {
    out.facts.push_back(std::move(fact));
    out.split_fixed.push_back(fixed);
  }
  return out;
}

void assign_splits(std::vector<FactTriple>& facts, const SplitConfig& config, const std::vector<bool>& fixed) {
  if (config.train_percent > 100) throw UsageError("train percent must be in [0, 100]");
  if (!fixed.empty() && fixed.size() != facts.size()) throw InvariantError("assign_splits: fixed mask size mismatch");
  std::map<std::string, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < facts.size(); ++i) {
    if (config.keep_input_split && !fixed.empty() && fixed[i]) continue;
    groups[facts[i].relation_id].push_back(i);
  }
  for (auto& [relation, idx] : groups) {
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return facts[a].uid < facts[b].uid; });
    std::mt19937_64 rng(mix_seed(config.seed, relation));
    shuffle(std::span(idx), rng);
    const std::size_t n_train = idx.size() * config.train_percent / 100;
    for (std::size_t k = 0; k < idx.size(); ++k) facts[idx[k]].split = k < n_train ? Split::train : Split::test;
  }
}

std::map<std::string, std::pair<std::size_t, std::size_t>> split_counts(std::span<const FactTriple> facts) {
  std::map<std::string, std::pair<std::size_t, std::size_t>> out;
  for (const auto& f : facts) {
    auto& c = out[f.relation_id];
    (f.split == Split::train ? c.first : c.second)++;
  }
  return out;
}

std::vector<FactTriple> read_dataset(const fs::path& path) {
  std::vector<FactTriple> out;
  for_each_line(path, [&](std::string_view line, std::size_t n) {
    const auto j = json::parse(line, nullptr, false);
    const auto where = path.string() + ":" + std::to_string(n);
    if (j.is_discarded() || !j.is_object()) throw DataError(where + ": malformed dataset record");
    try {
      FactTriple f;
      f.subject = j.at("subject").get<std::string>();
      f.relation_id = j.at("relation_id").get<std::string>();
      f.object = j.at("object").get<std::string>();
      f.split = parse_split(j.at("split").get<std::string>());
      f.uid = fact_uid(f.subject, f.relation_id, f.object);
      if (j.contains("uid") && j["uid"].get<std::string>() != f.uid)
        throw DataError(where + ": uid does not match the content hash of the triple");
      out.push_back(std::move(f));
    } catch (const json::exception& e) {
      throw DataError(where + ": " + e.what());
    }
  });
  return out;
}

void write_dataset(const fs::path& path, std::span<const FactTriple> facts) {
  JsonlWriter w(path);
  for (const auto& f : facts) {
    w.write(ordered_json{{"uid", f.uid},
                         {"subject", f.subject},
                         {"relation_id", f.relation_id},
                         {"object", f.object},
                         {"split", to_string(f.split)}});
  }
}

std::vector<FactTriple> select_split(std::span<const FactTriple> facts, std::optional<Split> split) {
  std::vector<FactTriple> out;
  for (const auto& f : facts)
    if (!split || f.split == *split) out.push_back(f);
  return out;
}

std::string_view to_string(CandidateMode m) {
  switch (m) {
    case CandidateMode::remove_stopwords: return "remove-stopwords";
    case CandidateMode::gold_objects: return "gold-objects";
    case CandidateMode::gold_objects_relation_wise: return "gold-objects-relation-wise";
  }
  return "?";
}

CandidateMode parse_candidate_mode(std::string_view s) {
  if (s == "remove-stopwords") return CandidateMode::remove_stopwords;
  if (s == "gold-objects") return CandidateMode::gold_objects;
  if (s == "gold-objects-relation-wise") return CandidateMode::gold_objects_relation_wise;
  throw UsageError("unknown candidate mode '" + std::string(s) + "'");
}

CandidateSet::CandidateSet(CandidateMode mode, std::vector<std::string> global,
                           std::map<std::string, std::vector<std::string>> by_relation)
    : mode_(mode), global_(std::move(global)) {
  auto tidy = [](std::vector<std::string>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  };
  tidy(global_);
  for (auto& [rel, members] : by_relation) {
    tidy(members);
    by_relation_.emplace(rel, std::move(members));
  }
}

std::span<const std::string> CandidateSet::for_relation(std::string_view relation_id) const {
  if (mode_ != CandidateMode::gold_objects_relation_wise) return global_;
  const auto it = by_relation_.find(relation_id);
  if (it == by_relation_.end()) return {};
  return it->second;
}

bool CandidateSet::contains(std::string_view relation_id, std::string_view token) const {
  const auto members = for_relation(relation_id);
  return std::binary_search(members.begin(), members.end(), token, std::less<>{});
}

CandidateSet build_candidate_set(std::span<const FactTriple> dataset, CandidateMode mode,
                                 std::span<const std::string> vocabulary) {
  switch (mode) {
    case CandidateMode::remove_stopwords: {
      std::vector<std::string> members;
      for (const auto& w : vocabulary)
        if (!text::is_stopword(w)) members.push_back(w);
      return CandidateSet(mode, std::move(members), {});
    }
    case CandidateMode::gold_objects:
    case CandidateMode::gold_objects_relation_wise: {
      std::vector<std::string> all;
      std::map<std::string, std::vector<std::string>> by_relation;
      for (const auto& f : dataset) {
        all.push_back(f.object);
        if (mode == CandidateMode::gold_objects_relation_wise) by_relation[f.relation_id].push_back(f.object);
      }
      return CandidateSet(mode, std::move(all), std::move(by_relation));
    }
  }
  throw InvariantError("build_candidate_set: unknown mode");
}

AlternateGoldIndex::AlternateGoldIndex(std::span<const FactTriple> dataset) {
  for (const auto& f : dataset) index_[{f.subject, f.relation_id}].push_back(f.object);
  for (auto& [_, objects] : index_) {
    std::sort(objects.begin(), objects.end());
    objects.erase(std::unique(objects.begin(), objects.end()), objects.end());
  }
}

std::span<const std::string> AlternateGoldIndex::objects(std::string_view subject, std::string_view relation_id) const {
  const auto it = index_.find({std::string(subject), std::string(relation_id)});
  if (it == index_.end()) return {};
  return it->second;
}

}  // namespace cooc
