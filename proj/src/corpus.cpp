#include "cooc/corpus.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include <fmt/format.h>
#include <rapidjson/document.h>

#include "cooc/error.hpp"
#include "cooc/hash.hpp"

namespace cooc {
namespace fs = std::filesystem;

std::vector<fs::path> list_corpus_files(const fs::path& dir_or_file) {
  if (!fs::exists(dir_or_file)) throw UsageError("corpus path does not exist: " + dir_or_file.string());
  if (!fs::is_directory(dir_or_file)) return {dir_or_file};
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir_or_file)) {
    if (entry.is_regular_file() && entry.path().extension() == ".jsonl") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end(), [](const fs::path& a, const fs::path& b) {
    return a.filename().string() < b.filename().string();
  });
  if (files.empty()) throw UsageError("no *.jsonl files in " + dir_or_file.string());
  return files;
}

std::vector<CorpusFile> describe_corpus(const std::vector<fs::path>& paths) {
  std::vector<CorpusFile> out;
  out.reserve(paths.size());
  for (const auto& p : paths) out.push_back({p, fs::file_size(p), sha256_file(p)});
  return out;
}

ShardPlan plan_shards(std::vector<CorpusFile> files, std::size_t n_shards) {
  if (n_shards == 0) throw UsageError("shard count must be positive");
  ShardPlan plan;
  std::uint64_t total = 0;
  for (const auto& f : files) total += f.size;
  plan.shards.resize(n_shards);
  for (std::size_t k = 0; k < n_shards; ++k) {
    const auto lo = static_cast<std::uint64_t>((static_cast<unsigned __int128>(total) * k) / n_shards);
    const auto hi = static_cast<std::uint64_t>((static_cast<unsigned __int128>(total) * (k + 1)) / n_shards);
    std::uint64_t offset = 0;
    for (std::size_t f = 0; f < files.size(); ++f) {
      const auto fb = std::max(lo, offset);
      const auto fe = std::min(hi, offset + files[f].size);
      if (fb < fe) plan.shards[k].push_back({f, fb - offset, fe - offset});
      offset += files[f].size;
    }
  }
  plan.files = std::move(files);
  return plan;
}

namespace {

int hex4(std::string_view s) {
  int v = 0;
  for (const char c : s) {
    v <<= 4;
    if (c >= '0' && c <= '9') v |= c - '0';
    else if (c >= 'a' && c <= 'f') v |= c - 'a' + 10;
    else if (c >= 'A' && c <= 'F') v |= c - 'A' + 10;
    else return -1;
  }
  return v;
}

// The reader tolerates a \u escape naming a low surrogate with no high
// surrogate before it; such text is not valid JSON.
bool has_lone_low_surrogate(std::string_view line) {
  for (std::size_t i = line.find('\\'); i != std::string_view::npos && i + 1 < line.size(); i = line.find('\\', i)) {
    if (line[i + 1] != 'u' || i + 6 > line.size()) {
      i += 2;
      continue;
    }
    const int cp = hex4(line.substr(i + 2, 4));
    i += 6;
    if (cp >= 0xD800 && cp <= 0xDBFF) {
      i += 6;  // the reader has already checked the low half
    } else if (cp >= 0xDC00 && cp <= 0xDFFF) {
      return true;
    }
  }
  return false;
}

}  // namespace

std::optional<std::string> document_text(std::string_view line) {
  constexpr unsigned kFlags = rapidjson::kParseValidateEncodingFlag | rapidjson::kParseIterativeFlag;
  rapidjson::Document doc;
  doc.Parse<kFlags>(line.data(), line.size());
  if (doc.HasParseError() || !doc.IsObject() || has_lone_low_surrogate(line)) return std::nullopt;
  // A repeated key keeps its last value.
  const rapidjson::Value* text = nullptr;
  for (const auto& m : doc.GetObject()) {
    if (std::string_view(m.name.GetString(), m.name.GetStringLength()) == "text") text = &m.value;
  }
  if (text == nullptr || !text->IsString()) return std::nullopt;
  return std::string(text->GetString(), text->GetStringLength());
}

namespace {

bool is_blank(std::string_view line) {
  return std::all_of(line.begin(), line.end(), [](char c) { return c == ' ' || c == '\t' || c == '\r'; });
}

void count_segment(const CorpusFile& file, const ShardSegment& seg, ShardCounter& counter) {
  std::ifstream in(file.path, std::ios::binary);
  if (!in) throw UsageError("cannot open corpus file " + file.path.string());
  std::vector<char> iobuf(1 << 20);
  in.rdbuf()->pubsetbuf(iobuf.data(), static_cast<std::streamsize>(iobuf.size()));
  std::uint64_t pos = seg.begin;
  in.seekg(static_cast<std::streamoff>(pos));
  std::string line;
  if (pos > 0) {
    // Not at a line start unless the previous byte is a newline.
    in.seekg(static_cast<std::streamoff>(pos - 1));
    char prev = 0;
    in.get(prev);
    if (prev != '\n') {
      std::getline(in, line);
      pos += line.size() + (in.eof() ? 0 : 1);
    }
  }
  while (pos < seg.end && std::getline(in, line)) {
    pos += line.size() + (in.eof() ? 0 : 1);
    if (is_blank(line)) continue;
    if (auto text = document_text(line)) {
      counter.add_document(*text);
    } else {
      counter.add_skipped();
    }
  }
}

std::string shard_key(const ShardPlan& plan, std::size_t index, const EntityDictionary& dict) {
  Sha256 h;
  h.update("cooc-shard-v1\n").update(dict.hash()).update("\n");
  for (const auto& f : plan.files) h.update(f.sha256).update(fmt::format(" {}\n", f.size));
  h.update(fmt::format("{} of {}\n", index, plan.shards.size()));
  return h.hex_digest();
}

std::string read_small(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

CooccurrenceStore count_shard(const ShardPlan& plan, std::size_t index, const EntityDictionary& dict) {
  ShardCounter counter(dict);
  for (const auto& seg : plan.shards.at(index)) count_segment(plan.files.at(seg.file), seg, counter);
  return counter.finish();
}

CountResult count_corpus(const std::vector<fs::path>& files, const EntityDictionary& dict, const fs::path& out_dir,
                         const CountOptions& options) {
  auto log = [&options](const std::string& msg) {
    if (options.log) options.log(msg);
  };
  CountResult result;
  const auto plan = plan_shards(describe_corpus(files), options.shards);
  result.corpus = plan.files;
  const auto shard_dir = out_dir / "shards";
  fs::create_directories(shard_dir);

  const std::size_t n = plan.shards.size();
  result.shards.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    result.shards[k].index = k;
    result.shards[k].path = shard_dir / fmt::format("shard-{:05}-of-{:05}.bin", k, n);
  }

  std::atomic<std::size_t> next{0};
  std::mutex log_mutex;
  std::exception_ptr failure;
  auto worker = [&]() {
    for (std::size_t k = next++; k < n; k = next++) {
      auto& status = result.shards[k];
      const auto key = shard_key(plan, k, dict);
      const fs::path key_path = status.path.string() + ".key";
      try {
        if (fs::exists(status.path) && fs::exists(key_path) && read_small(key_path) == key) {
          status.reused = true;
          std::lock_guard lock(log_mutex);
          log(fmt::format("shard {}/{}: complete, skipped", k + 1, n));
          continue;
        }
        fs::remove(key_path);
        count_shard(plan, k, dict).write(status.path);
        std::ofstream(key_path, std::ios::binary | std::ios::trunc) << key;
        std::lock_guard lock(log_mutex);
        log(fmt::format("shard {}/{}: counted", k + 1, n));
      } catch (...) {
        std::lock_guard lock(log_mutex);
        if (!failure) failure = std::current_exception();
        next = n;
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    const auto jobs = std::max<std::size_t>(1, std::min(options.jobs, n));
    for (std::size_t j = 0; j < jobs; ++j) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  CooccurrenceStore merged(dict);
  for (auto& status : result.shards) {
    auto shard = CooccurrenceStore::read(status.path);
    if (shard.dictionary_hash() != dict.hash()) throw DataError("shard " + status.path.string() + " has a foreign dictionary");
    status.n_docs = shard.n_docs();
    status.n_skipped = shard.n_skipped();
    status.sha256 = sha256_file(status.path);
    const CooccurrenceStore pair[] = {std::move(merged), std::move(shard)};
    merged = merge(pair);
  }
  result.store = std::move(merged);
  return result;
}

}  // namespace cooc
