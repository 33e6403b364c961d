#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cooc/dictionary.hpp"

namespace cooc {

enum class Split { train, test };
enum class RelationType { one_to_one, many_to_one, many_to_many };

std::string_view to_string(Split s);
std::string_view to_string(RelationType t);
Split parse_split(std::string_view s);
RelationType parse_relation_type(std::string_view s);

/// A subject-relation-object fact. The uid is a content hash of
/// subject|relation|object, so joins across runs are stable.
struct FactTriple {
  std::string uid;
  std::string subject;
  std::string relation_id;
  std::string object;
  Split split = Split::train;

  friend bool operator==(const FactTriple&, const FactTriple&) = default;
};

std::string fact_uid(std::string_view subject, std::string_view relation_id, std::string_view object);

/// A cloze template with exactly one [X] and one [Y].
struct RelationTemplate {
  std::string relation_id;
  std::string label;
  std::string pattern;
  RelationType type = RelationType::many_to_one;
  // Published per-relation split sizes, for comparison reports; 0 if unknown.
  std::size_t reference_train = 0;
  std::size_t reference_test = 0;
};

/// The 41 LAMA-TREx relations with their templates and published counts.
std::span<const RelationTemplate> builtin_templates();

class TemplateTable {
 public:
  TemplateTable() = default;
  explicit TemplateTable(std::vector<RelationTemplate> templates);
  static TemplateTable builtin();
  /// JSONL with relation_id, label, template, type (and optional train/test).
  static TemplateTable load(const std::filesystem::path& path);
  void save(const std::filesystem::path& path) const;

  [[nodiscard]] const RelationTemplate* find(std::string_view relation_id) const;
  [[nodiscard]] const std::vector<RelationTemplate>& all() const { return templates_; }

 private:
  std::vector<RelationTemplate> templates_;
};

/// Throws DataError unless the pattern has exactly one [X] and one [Y].
void validate_template(std::string_view pattern);

enum class RenderMode { masked, zero_shot_prefix, finetune_prompt };

/// masked:           [X] -> subject, [Y] -> "[MASK]"
/// zero_shot_prefix: masked text cut right before "[MASK]", right-trimmed
/// finetune_prompt:  "### Input:\n {masked}\n\n### Response:"
std::string render(const FactTriple& fact, const RelationTemplate& tmpl, RenderMode mode);

/// A record of the raw dataset before preprocessing.
struct RawFact {
  std::string subject;
  std::string relation_id;
  std::string object;
  std::optional<Split> split;
};

/// Accepts {subject, relation_id, object[, split]} or LAMA's
/// {sub_label, predicate_id, obj_label}. Malformed lines become exclusions.
std::vector<RawFact> read_raw_facts(const std::filesystem::path& path, std::vector<Exclusion>& report);

/// Sorted token list; the intersection of all files (one token per line).
std::vector<std::string> load_vocabulary_intersection(std::span<const std::filesystem::path> paths);

struct PreprocessResult {
  std::vector<FactTriple> facts;  // sorted by (relation_id, uid)
  std::vector<bool> split_fixed;  // parallel to facts
  std::vector<Exclusion> excluded;
};

/// Drops facts with an unknown relation, an object outside the vocabulary,
/// empty fields, or a duplicate triple. Splits are not assigned here unless
/// the raw record carries one and `keep_input_split` is set.
PreprocessResult preprocess(std::span<const RawFact> raw, const TemplateTable& templates,
                            std::span<const std::string> vocabulary, bool keep_input_split);

struct SplitConfig {
  std::uint64_t seed = 0;
  unsigned train_percent = 70;
  /// Facts whose split was fixed by preprocess() keep it.
  bool keep_input_split = false;
};

/// Stratified per relation: each relation's facts (ordered by uid) are
/// shuffled under a relation-specific stream of the seed and the first
/// floor(n_r * train_percent / 100) become train.
void assign_splits(std::vector<FactTriple>& facts, const SplitConfig& config,
                   const std::vector<bool>& fixed = {});

/// Per-relation (train, test) counts, ordered by relation id.
std::map<std::string, std::pair<std::size_t, std::size_t>> split_counts(std::span<const FactTriple> facts);

std::vector<FactTriple> read_dataset(const std::filesystem::path& path);
void write_dataset(const std::filesystem::path& path, std::span<const FactTriple> facts);
std::vector<FactTriple> select_split(std::span<const FactTriple> facts, std::optional<Split> split);

enum class CandidateMode { remove_stopwords, gold_objects, gold_objects_relation_wise };
std::string_view to_string(CandidateMode m);
CandidateMode parse_candidate_mode(std::string_view s);

/// An output-vocabulary restriction. Members are sorted byte-wise; the
/// position in that order is the token id used for tie-breaking.
class CandidateSet {
 public:
  CandidateSet() = default;
  CandidateSet(CandidateMode mode, std::vector<std::string> global,
               std::map<std::string, std::vector<std::string>> by_relation);

  [[nodiscard]] CandidateMode mode() const { return mode_; }
  /// The active candidates for a relation.
  [[nodiscard]] std::span<const std::string> for_relation(std::string_view relation_id) const;
  [[nodiscard]] bool contains(std::string_view relation_id, std::string_view token) const;
  [[nodiscard]] std::span<const std::string> global() const { return global_; }

 private:
  CandidateMode mode_ = CandidateMode::gold_objects;
  std::vector<std::string> global_;
  std::map<std::string, std::vector<std::string>, std::less<>> by_relation_;
};

/// remove-stopwords: vocabulary minus stopwords; gold-objects: every gold
/// object of the dataset; relation-wise: gold objects per relation.
CandidateSet build_candidate_set(std::span<const FactTriple> dataset, CandidateMode mode,
                                 std::span<const std::string> vocabulary);

/// All gold objects of each (subject, relation) pair across both splits.
class AlternateGoldIndex {
 public:
  AlternateGoldIndex() = default;
  explicit AlternateGoldIndex(std::span<const FactTriple> dataset);

  /// Sorted objects for the pair; empty if the pair is unknown.
  [[nodiscard]] std::span<const std::string> objects(std::string_view subject, std::string_view relation_id) const;

 private:
  std::map<std::pair<std::string, std::string>, std::vector<std::string>> index_;
};

}  // namespace cooc
