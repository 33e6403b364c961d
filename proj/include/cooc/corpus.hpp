#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cooc/dictionary.hpp"
#include "cooc/store.hpp"

namespace cooc {

struct CorpusFile {
  std::filesystem::path path;
  std::uint64_t size = 0;
  std::string sha256;
};

/// Byte range [begin, end) of one corpus file. A line belongs to the segment
/// in which it starts.
struct ShardSegment {
  std::size_t file = 0;
  std::uint64_t begin = 0;
  std::uint64_t end = 0;
};

/// Shards are equal byte ranges over the concatenation of the corpus files.
struct ShardPlan {
  std::vector<CorpusFile> files;
  std::vector<std::vector<ShardSegment>> shards;
};

/// A directory yields its *.jsonl files in byte order of their names; a file
/// yields itself.
std::vector<std::filesystem::path> list_corpus_files(const std::filesystem::path& dir_or_file);

/// Stats and hashes the files.
std::vector<CorpusFile> describe_corpus(const std::vector<std::filesystem::path>& paths);

ShardPlan plan_shards(std::vector<CorpusFile> files, std::size_t n_shards);

/// The "text" field of one JSONL record; nullopt if the record is malformed.
/// Extra fields are ignored.
std::optional<std::string> document_text(std::string_view line);

/// Counts every record of shard `index`. Blank lines are not documents;
/// malformed records are tallied in the store's skip counter.
CooccurrenceStore count_shard(const ShardPlan& plan, std::size_t index, const EntityDictionary& dict);

struct ShardStatus {
  std::size_t index = 0;
  bool reused = false;
  std::filesystem::path path;
  std::string sha256;
  std::uint64_t n_docs = 0;
  std::uint64_t n_skipped = 0;
};

struct CountOptions {
  std::size_t shards = 1;
  std::size_t jobs = 1;
  std::function<void(const std::string&)> log;
};

struct CountResult {
  CooccurrenceStore store;
  std::vector<ShardStatus> shards;
  std::vector<CorpusFile> corpus;
};

/// Counts the corpus into `out_dir/shards/`, reusing shard files from an
/// earlier run whose shard key (dictionary, corpus hashes, shard count and
/// index) matches, then merges them.
CountResult count_corpus(const std::vector<std::filesystem::path>& files, const EntityDictionary& dict,
                         const std::filesystem::path& out_dir, const CountOptions& options);

}  // namespace cooc
