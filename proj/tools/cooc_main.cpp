// cooc: corpus co-occurrence statistics and factual-probing analysis.
//
// Subcommands
//   count       corpus JSONL -> dictionary + sharded store -> merged store
//   export-tsv  store -> subject<TAB>word<TAB>count
//   prep        raw facts -> filtered, split, rendered dataset
//   baseline    store + dataset -> marginal/joint/PMI prediction files
//   eval        predictions + dataset -> hits@1 / MRR CSVs
//   analyze     predictions + store + dataset -> binned failure-analysis CSVs
//   debias      dataset + store -> undersampled training set
//
// Exit codes: 0 ok, 1 usage/config error, 2 data error, 3 internal invariant.

#include <chrono>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "cooc/bias_analysis.hpp"
#include "cooc/corpus.hpp"
#include "cooc/corpus_stats.hpp"
#include "cooc/debias_filter.hpp"
#include "cooc/error.hpp"
#include "cooc/evaluation.hpp"
#include "cooc/frequency_baselines.hpp"
#include "cooc/hash.hpp"
#include "cooc/jsonl.hpp"
#include "cooc/probe_dataset.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using namespace cooc;

constexpr const char* kVersion = "0.1.0";

std::string utc_now() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

/// manifest.json written next to every output. Only "created_at" varies
/// between identical runs.
class RunManifest {
 public:
  RunManifest(std::string command, fs::path out_dir) : out_dir_(std::move(out_dir)) {
    doc_["tool"] = "cooc";
    doc_["version"] = kVersion;
    doc_["command"] = std::move(command);
    doc_["config"] = ordered_json::object();
    doc_["inputs"] = ordered_json::array();
    doc_["outputs"] = ordered_json::array();
  }

  ordered_json& config() { return doc_["config"]; }
  ordered_json& extra(const std::string& key) { return doc_[key]; }

  void input(std::string role, const fs::path& path) {
    doc_["inputs"].push_back({{"role", std::move(role)}, {"path", path.string()}, {"sha256", sha256_file(path)}});
  }
  void input(std::string role, const fs::path& path, const std::string& sha256) {
    doc_["inputs"].push_back({{"role", std::move(role)}, {"path", path.string()}, {"sha256", sha256}});
  }
  void output(const fs::path& path) {
    doc_["outputs"].push_back(
        {{"path", fs::relative(path, out_dir_).generic_string()}, {"sha256", sha256_file(path)}});
  }

  void write() {
    doc_["created_at"] = utc_now();
    auto out = open_output(out_dir_ / "manifest.json");
    out << doc_.dump(2) << '\n';
  }

 private:
  fs::path out_dir_;
  ordered_json doc_;
};

void write_exclusions(const fs::path& path, const std::vector<Exclusion>& excluded) {
  auto out = open_output(path);
  out << "kind\titem\treason\n";
  for (const auto& e : excluded) out << e.kind << '\t' << e.item << '\t' << e.reason << '\n';
}

std::vector<std::string> read_lines(const fs::path& path) {
  std::vector<std::string> lines;
  for_each_line(path, [&](std::string_view line, std::size_t) { lines.emplace_back(line); });
  return lines;
}

std::optional<Split> parse_split_option(const std::string& s) {
  if (s == "all") return std::nullopt;
  try {
    return parse_split(s);
  } catch (const DataError&) {
    throw UsageError("--split must be train, test or all");
  }
}

std::vector<std::string> vocabulary_for(CandidateMode mode, const std::vector<fs::path>& vocab_files) {
  if (mode != CandidateMode::remove_stopwords) return {};
  if (vocab_files.empty()) throw UsageError("--vocab is required for the remove-stopwords candidate mode");
  return load_vocabulary_intersection(vocab_files);
}

ordered_json paths_json(const std::vector<fs::path>& paths) {
  auto out = ordered_json::array();
  for (const auto& p : paths) out.push_back(p.string());
  return out;
}

// ---------------------------------------------------------------- count

struct CountArgs {
  fs::path corpus, subjects, out;
  std::vector<fs::path> vocab;
  std::size_t shards = 1;
  std::size_t jobs = 1;
};

void run_count(const CountArgs& a) {
  fs::create_directories(a.out);
  std::vector<Exclusion> excluded;
  const auto vocab = load_vocabulary_intersection(a.vocab);
  const auto dict = EntityDictionary::build(read_lines(a.subjects), vocab, excluded);
  dict.save(a.out / "dictionary.tsv");
  write_exclusions(a.out / "dictionary_exclusions.tsv", excluded);

  CountOptions opts;
  opts.shards = a.shards;
  opts.jobs = a.jobs;
  opts.log = [](const std::string& msg) { std::cerr << msg << '\n'; };
  const auto files = list_corpus_files(a.corpus);
  const auto result = count_corpus(files, dict, a.out, opts);
  result.store.write(a.out / "store.bin");

  RunManifest m("count", a.out);
  m.config() = {{"corpus", a.corpus.string()}, {"subjects", a.subjects.string()}, {"vocab", paths_json(a.vocab)},
                {"shards", a.shards}, {"jobs", a.jobs}};
  for (const auto& f : result.corpus) m.input("corpus", f.path, f.sha256);
  m.input("subjects", a.subjects);
  for (const auto& v : a.vocab) m.input("vocab", v);
  m.extra("dictionary_hash") = dict.hash();
  m.extra("dictionary") = {{"subjects", dict.subject_count()}, {"words", dict.word_count()},
                           {"excluded", excluded.size()}};
  m.extra("n_docs") = result.store.n_docs();
  m.extra("n_skipped") = result.store.n_skipped();
  for (const auto& s : result.shards)
    m.extra("shards").push_back({{"index", s.index},
                                 {"path", fs::relative(s.path, a.out).generic_string()},
                                 {"sha256", s.sha256},
                                 {"n_docs", s.n_docs},
                                 {"n_skipped", s.n_skipped}});
  m.output(a.out / "dictionary.tsv");
  m.output(a.out / "dictionary_exclusions.tsv");
  m.output(a.out / "store.bin");
  m.write();
  std::cerr << fmt::format("counted {} documents ({} skipped), {} pairs\n", result.store.n_docs(),
                           result.store.n_skipped(), result.store.pair_count());
}

// ---------------------------------------------------------------- export-tsv

void run_export(const fs::path& store_dir, const fs::path& out_path) {
  const auto stats = CorpusStats::load(store_dir);
  if (out_path.empty() || out_path == "-") {
    stats.store().export_tsv(std::cout, stats.dictionary());
  } else {
    auto out = open_output(out_path);
    stats.store().export_tsv(out, stats.dictionary());
  }
}

// ---------------------------------------------------------------- prep

struct PrepArgs {
  fs::path raw, templates, out;
  std::vector<fs::path> vocab;
  std::uint64_t seed = 0;
  unsigned train_percent = 70;
  bool keep_input_split = false;
};

void run_prep(const PrepArgs& a) {
  const auto templates = a.templates.empty() ? TemplateTable::builtin() : TemplateTable::load(a.templates);
  std::vector<Exclusion> excluded;
  const auto raw = read_raw_facts(a.raw, excluded);
  const auto vocab = load_vocabulary_intersection(a.vocab);
  auto pre = preprocess(raw, templates, vocab, a.keep_input_split);
  excluded.insert(excluded.end(), pre.excluded.begin(), pre.excluded.end());
  assign_splits(pre.facts, {a.seed, a.train_percent, a.keep_input_split}, pre.split_fixed);

  fs::create_directories(a.out);
  write_dataset(a.out / "dataset.jsonl", pre.facts);
  write_exclusions(a.out / "exclusions.tsv", excluded);
  templates.save(a.out / "templates.jsonl");
  {
    auto out = open_output(a.out / "vocab.txt");
    for (const auto& w : vocab) out << w << '\n';
  }
  {
    auto out = open_output(a.out / "relation_counts.csv");
    out << "relation_id,label,type,train,test,reference_train,reference_test\n";
    for (const auto& [rel, c] : split_counts(pre.facts)) {
      const auto* t = templates.find(rel);
      out << rel << ",\"" << t->label << "\"," << to_string(t->type) << ',' << c.first << ',' << c.second << ','
          << t->reference_train << ',' << t->reference_test << '\n';
    }
  }
  {
    JsonlWriter zero_shot(a.out / "zero_shot.jsonl");
    JsonlWriter finetune(a.out / "finetune_train.jsonl");
    for (const auto& f : pre.facts) {
      const auto& t = *templates.find(f.relation_id);
      zero_shot.write({{"uid", f.uid},
                       {"split", to_string(f.split)},
                       {"masked", render(f, t, RenderMode::masked)},
                       {"prompt", render(f, t, RenderMode::zero_shot_prefix)}});
      if (f.split == Split::train)
        finetune.write({{"uid", f.uid}, {"prompt", render(f, t, RenderMode::finetune_prompt)}, {"completion", f.object}});
    }
  }

  RunManifest m("prep", a.out);
  m.config() = {{"raw", a.raw.string()},
                {"templates", a.templates.empty() ? "builtin" : a.templates.string()},
                {"vocab", paths_json(a.vocab)},
                {"seed", a.seed},
                {"train_percent", a.train_percent},
                {"stratified", "per-relation"},
                {"keep_input_split", a.keep_input_split}};
  m.input("raw", a.raw);
  if (!a.templates.empty()) m.input("templates", a.templates);
  for (const auto& v : a.vocab) m.input("vocab", v);
  m.extra("facts") = pre.facts.size();
  m.extra("excluded") = excluded.size();
  for (const char* name : {"dataset.jsonl", "exclusions.tsv", "templates.jsonl", "vocab.txt", "relation_counts.csv",
                           "zero_shot.jsonl", "finetune_train.jsonl"})
    m.output(a.out / name);
  m.write();
  std::cerr << fmt::format("{} facts kept, {} excluded\n", pre.facts.size(), excluded.size());
}

// ---------------------------------------------------------------- baseline

struct EvalInputs {
  fs::path dataset, out;
  std::vector<fs::path> vocab;
  std::string mode = "gold-objects";
  std::string split = "test";
};

struct BaselineArgs : EvalInputs {
  fs::path store;
  std::vector<std::string> baselines{"marginal", "joint", "pmi"};
};

void run_baseline(const BaselineArgs& a) {
  const auto mode = parse_candidate_mode(a.mode);
  const auto split = parse_split_option(a.split);
  const auto dataset = read_dataset(a.dataset);
  const auto stats = CorpusStats::load(a.store);
  const auto candidates = build_candidate_set(dataset, mode, vocabulary_for(mode, a.vocab));
  const auto facts = select_split(dataset, split);

  fs::create_directories(a.out);
  RunManifest m("baseline", a.out);
  m.config() = {{"dataset", a.dataset.string()}, {"store", a.store.string()}, {"mode", a.mode},
                {"split", a.split},              {"vocab", paths_json(a.vocab)}, {"baselines", a.baselines}};
  m.input("dataset", a.dataset);
  m.input("store", a.store / "store.bin");
  m.input("dictionary", a.store / "dictionary.tsv");
  for (const auto& v : a.vocab) m.input("vocab", v);
  for (const auto& name : a.baselines) {
    const auto b = parse_baseline(name);
    const auto rankings = rank_all(b, facts, stats, candidates);
    const auto path = a.out / fmt::format("predictions_{}.jsonl", name);
    write_baseline_predictions(path, rankings);
    m.output(path);
  }
  m.write();
}

// ---------------------------------------------------------------- eval

struct EvalArgs : EvalInputs {
  fs::path predictions;
  std::string model;
};

void run_eval(const EvalArgs& a) {
  const auto mode = parse_candidate_mode(a.mode);
  const auto dataset = read_dataset(a.dataset);
  const auto candidates = build_candidate_set(dataset, mode, vocabulary_for(mode, a.vocab));
  const AlternateGoldIndex golds(dataset);
  const auto facts = select_split(dataset, parse_split_option(a.split));
  const auto predictions = read_predictions(a.predictions);
  const auto result = evaluate(predictions, facts, candidates, golds);
  const auto model = a.model.empty() ? a.predictions.stem().string() : a.model;

  fs::create_directories(a.out);
  write_results_csv(a.out / "results.csv", result);
  write_summary_csv(a.out / "summary.csv", result, model, mode);
  RunManifest m("eval", a.out);
  m.config() = {{"predictions", a.predictions.string()}, {"dataset", a.dataset.string()}, {"mode", a.mode},
                {"split", a.split}, {"model", model}, {"vocab", paths_json(a.vocab)},
                {"rank_ties", "ascending-token"}};
  m.input("predictions", a.predictions);
  m.input("dataset", a.dataset);
  for (const auto& v : a.vocab) m.input("vocab", v);
  m.output(a.out / "results.csv");
  m.output(a.out / "summary.csv");
  m.write();
  std::cout << fmt::format("{} {} n={} hits@1={} mrr={}\n", model, a.mode, result.overall.n,
                           fixed6(result.overall.hits1()), fixed6(result.overall.mrr()));
}

// ---------------------------------------------------------------- analyze

struct AnalyzeArgs : EvalInputs {
  fs::path predictions, store;
  std::string bin_scheme{kBinScheme};
};

void run_analyze(const AnalyzeArgs& a) {
  if (a.bin_scheme != kBinScheme) throw UsageError("unsupported bin scheme '" + a.bin_scheme + "'");
  const auto mode = parse_candidate_mode(a.mode);
  const auto dataset = read_dataset(a.dataset);
  const auto stats = CorpusStats::load(a.store);
  const auto candidates = build_candidate_set(dataset, mode, vocabulary_for(mode, a.vocab));
  const AlternateGoldIndex golds(dataset);
  const auto facts = select_split(dataset, parse_split_option(a.split));
  const auto result = evaluate(read_predictions(a.predictions), facts, candidates, golds);
  const auto joined = join_statistics(result, stats, candidates, golds);

  fs::create_directories(a.out);
  RunManifest m("analyze", a.out);
  m.config() = {{"predictions", a.predictions.string()}, {"dataset", a.dataset.string()},
                {"store", a.store.string()}, {"mode", a.mode}, {"split", a.split},
                {"vocab", paths_json(a.vocab)}, {"bin_scheme", a.bin_scheme}};
  m.input("predictions", a.predictions);
  m.input("dataset", a.dataset);
  m.input("store", a.store / "store.bin");
  m.input("dictionary", a.store / "dictionary.tsv");
  for (const auto& v : a.vocab) m.input("vocab", v);
  write_joined_csv(a.out / "joined.csv", joined);
  m.output(a.out / "joined.csv");
  for (const auto basis : {BinBasis::condprob, BinBasis::cooc_rr}) {
    const auto report = analyze(joined, basis);
    const auto path = a.out / fmt::format("report_{}.csv", to_string(basis));
    auto out = open_output(path);
    write_report_csv(out, report);
    out.close();
    m.output(path);
    m.extra("excluded") = {{"unknown", report.excluded},
                           {"total", report.total_facts},
                           {"fraction", fixed6(report.excluded_fraction())}};
  }
  m.write();
}

// ---------------------------------------------------------------- debias

struct DebiasArgs {
  fs::path dataset, store, templates, out;
  std::string strategy = "bias-score";
  double ratio = 0.1;
  std::uint64_t seed = 0;
};

void run_debias(const DebiasArgs& a) {
  const FilterSpec spec(parse_filter_strategy(a.strategy), a.ratio, a.seed);
  const auto dataset = read_dataset(a.dataset);
  const auto stats = CorpusStats::load(a.store);
  const auto templates = a.templates.empty() ? TemplateTable::builtin() : TemplateTable::load(a.templates);
  const auto train = select_split(dataset, Split::train);
  const auto result = filter_facts(train, spec, stats);

  std::vector<FactTriple> full = result.kept;
  const auto test = select_split(dataset, Split::test);
  full.insert(full.end(), test.begin(), test.end());
  std::sort(full.begin(), full.end(), [](const FactTriple& x, const FactTriple& y) {
    return std::tie(x.relation_id, x.uid) < std::tie(y.relation_id, y.uid);
  });

  fs::create_directories(a.out);
  write_dataset(a.out / "dataset.jsonl", full);
  write_discard_manifest(a.out / "discarded.csv", result.discarded, spec);
  {
    JsonlWriter finetune(a.out / "finetune_train.jsonl");
    for (const auto& f : result.kept) {
      const auto* t = templates.find(f.relation_id);
      if (t == nullptr) throw DataError("no template for relation " + f.relation_id);
      finetune.write({{"uid", f.uid}, {"prompt", render(f, *t, RenderMode::finetune_prompt)}, {"completion", f.object}});
    }
  }
  RunManifest m("debias", a.out);
  m.config() = {{"dataset", a.dataset.string()}, {"store", a.store.string()},
                {"strategy", a.strategy},        {"ratio_ppm", spec.ratio_ppm()},
                {"seed", a.seed},                {"templates", a.templates.empty() ? "builtin" : a.templates.string()}};
  m.input("dataset", a.dataset);
  m.input("store", a.store / "store.bin");
  m.input("dictionary", a.store / "dictionary.tsv");
  m.extra("train_in") = train.size();
  m.extra("train_kept") = result.kept.size();
  m.extra("discarded") = result.discarded.size();
  m.output(a.out / "dataset.jsonl");
  m.output(a.out / "discarded.csv");
  m.output(a.out / "finetune_train.jsonl");
  m.write();
}

void add_eval_inputs(CLI::App* cmd, EvalInputs& e) {
  cmd->add_option("--dataset", e.dataset, "Dataset JSONL from `prep`")->required();
  cmd->add_option("--mode", e.mode, "remove-stopwords | gold-objects | gold-objects-relation-wise")
      ->capture_default_str();
  cmd->add_option("--vocab", e.vocab, "Vocabulary file(s) for remove-stopwords");
  cmd->add_option("--split", e.split, "train | test | all")->capture_default_str();
  cmd->add_option("--out", e.out, "Output directory")->required();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cooc: corpus co-occurrence statistics and factual-probing analysis"};
  app.set_config("--config", "", "TOML config with one [<subcommand>] section; give it before the subcommand. Flags override it");
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  CountArgs count;
  auto* c = app.add_subcommand("count", "Count document co-occurrences of subjects and vocabulary words");
  c->add_option("--corpus", count.corpus, "JSONL file or directory of *.jsonl")->required();
  c->add_option("--subjects", count.subjects, "Subject surface forms, one per line")->required();
  c->add_option("--vocab", count.vocab, "Vocabulary file(s); their intersection is used")->required();
  c->add_option("--out", count.out, "Store directory")->required();
  c->add_option("--shards", count.shards, "Number of shards")->capture_default_str()->check(CLI::PositiveNumber);
  c->add_option("--jobs", count.jobs, "Parallel workers")->capture_default_str()->check(CLI::PositiveNumber);

  fs::path export_store, export_out;
  auto* x = app.add_subcommand("export-tsv", "Dump a store as subject<TAB>word<TAB>count");
  x->add_option("--store", export_store, "Store directory")->required();
  x->add_option("--out", export_out, "Output file (default stdout)");

  PrepArgs prep;
  auto* p = app.add_subcommand("prep", "Filter, split and render the probing dataset");
  p->add_option("--raw", prep.raw, "Raw facts JSONL")->required();
  p->add_option("--vocab", prep.vocab, "Model vocabulary file(s); objects must be in all")->required();
  p->add_option("--templates", prep.templates, "Templates JSONL (default: built-in LAMA-TREx table)");
  p->add_option("--seed", prep.seed, "Split seed")->capture_default_str();
  p->add_option("--train-percent", prep.train_percent, "Training share per relation")->capture_default_str();
  p->add_flag("--keep-input-split", prep.keep_input_split, "Keep split fields present in the raw file");
  p->add_option("--out", prep.out, "Output directory")->required();

  BaselineArgs baseline;
  auto* b = app.add_subcommand("baseline", "Rank candidates with term-frequency baselines");
  add_eval_inputs(b, baseline);
  b->add_option("--store", baseline.store, "Store directory from `count`")->required();
  b->add_option("--baselines", baseline.baselines, "marginal, joint, pmi")->capture_default_str();

  EvalArgs eval;
  auto* e = app.add_subcommand("eval", "Score predictions with hits@1 and MRR");
  add_eval_inputs(e, eval);
  e->add_option("--predictions", eval.predictions, "Prediction JSONL")->required();
  e->add_option("--model", eval.model, "Model name for the summary (default: predictions file stem)");

  AnalyzeArgs an;
  auto* n = app.add_subcommand("analyze", "Frequency-binned accuracy and failure analysis");
  add_eval_inputs(n, an);
  n->add_option("--predictions", an.predictions, "Prediction JSONL")->required();
  n->add_option("--store", an.store, "Store directory from `count`")->required();
  n->add_option("--bin-scheme", an.bin_scheme, "Bin scheme version")->capture_default_str();

  DebiasArgs deb;
  auto* d = app.add_subcommand("debias", "Undersample high-co-occurrence training facts per relation");
  d->add_option("--dataset", deb.dataset, "Dataset JSONL from `prep`")->required();
  d->add_option("--store", deb.store, "Store directory from `count`")->required();
  d->add_option("--strategy", deb.strategy, "bias-score | random")->capture_default_str();
  d->add_option("--ratio", deb.ratio, "Filtering ratio p in [0, 1)")->capture_default_str();
  d->add_option("--seed", deb.seed, "Seed for the random strategy")->capture_default_str();
  d->add_option("--templates", deb.templates, "Templates JSONL (default: built-in)");
  d->add_option("--out", deb.out, "Output directory")->required();

  for (auto* sub : app.get_subcommands({})) sub->configurable();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*c) run_count(count);
    else if (*x) run_export(export_store, export_out);
    else if (*p) run_prep(prep);
    else if (*b) run_baseline(baseline);
    else if (*e) run_eval(eval);
    else if (*n) run_analyze(an);
    else if (*d) run_debias(deb);
    return 0;
  } catch (const UsageError& err) {
    std::cerr << "error: " << err.what() << '\n';
    return 1;
  } catch (const DataError& err) {
    std::cerr << "data error: " << err.what() << '\n';
    return 2;
  } catch (const std::logic_error& err) {
    std::cerr << "internal error: " << err.what() << '\n';
    return 3;
  } catch (const std::exception& err) {
    std::cerr << "data error: " << err.what() << '\n';
    return 2;
  }
}
