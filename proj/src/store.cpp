#include "cooc/store.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <ostream>
#include <sstream>

#include "cooc/error.hpp"

namespace cooc {
namespace {

constexpr std::string_view kMagic = "COOCST01";

class Writer {
 public:
  void bytes(std::string_view s) { out_.append(s); }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out_.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out_.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
  }
  std::string take() { return std::move(out_); }

 private:
  std::string out_;
};

class Reader {
 public:
  explicit Reader(std::string_view in) : in_(in) {}
  std::string_view bytes(std::size_t n) {
    need(n);
    auto s = in_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  std::uint32_t u32() { return static_cast<std::uint32_t>(le(4)); }
  std::uint64_t u64() { return le(8); }
  bool done() const { return pos_ == in_.size(); }

 private:
  void need(std::size_t n) const {
    if (in_.size() - pos_ < n) throw DataError("store: truncated file");
  }
  std::uint64_t le(int n) {
    need(static_cast<std::size_t>(n));
    std::uint64_t v = 0;
    for (int i = 0; i < n; ++i) v |= std::uint64_t(static_cast<unsigned char>(in_[pos_ + i])) << (8 * i);
    pos_ += static_cast<std::size_t>(n);
    return v;
  }
  std::string_view in_;
  std::size_t pos_ = 0;
};

}  // namespace

CooccurrenceStore::CooccurrenceStore(const EntityDictionary& dict)
    : dictionary_hash_(dict.hash()),
      word_df_(dict.word_count(), 0),
      subject_df_(dict.subject_count(), 0),
      row_begin_(dict.subject_count() + 1, 0) {}

std::span<const CooccurrenceStore::PairEntry> CooccurrenceStore::row(SubjectId s) const {
  if (s >= subject_count()) return {};
  return std::span(pairs_).subspan(row_begin_[s], row_begin_[s + 1] - row_begin_[s]);
}

std::uint64_t CooccurrenceStore::pair_df(SubjectId s, WordId w) const {
  const auto r = row(s);
  const auto it = std::lower_bound(r.begin(), r.end(), w, [](const PairEntry& e, WordId id) { return e.word < id; });
  return it != r.end() && it->word == w ? it->count : 0;
}

std::string CooccurrenceStore::to_bytes() const {
  Writer w;
  w.bytes(kMagic);
  w.u32(static_cast<std::uint32_t>(dictionary_hash_.size()));
  w.bytes(dictionary_hash_);
  w.u64(subject_count());
  w.u64(word_count());
  w.u64(n_docs_);
  w.u64(n_skipped_);
  auto sparse = [&w](const std::vector<std::uint64_t>& df) {
    w.u64(static_cast<std::uint64_t>(std::count_if(df.begin(), df.end(), [](auto c) { return c != 0; })));
    for (std::size_t i = 0; i < df.size(); ++i) {
      if (df[i] == 0) continue;
      w.u32(static_cast<std::uint32_t>(i));
      w.u64(df[i]);
    }
  };
  sparse(word_df_);
  sparse(subject_df_);
  w.u64(pairs_.size());
  for (SubjectId s = 0; s < subject_count(); ++s) {
    for (const auto& e : row(s)) {
      w.u32(s);
      w.u32(e.word);
      w.u64(e.count);
    }
  }
  return w.take();
}

CooccurrenceStore CooccurrenceStore::from_bytes(std::string_view bytes) {
  Reader r(bytes);
  if (r.bytes(kMagic.size()) != kMagic) throw DataError("store: bad magic");
  CooccurrenceStore st;
  st.dictionary_hash_ = std::string(r.bytes(r.u32()));
  const auto n_subjects = r.u64();
  const auto n_words = r.u64();
  st.n_docs_ = r.u64();
  st.n_skipped_ = r.u64();
  st.subject_df_.assign(n_subjects, 0);
  st.word_df_.assign(n_words, 0);
  auto sparse = [&r](std::vector<std::uint64_t>& df) {
    const auto n = r.u64();
    std::int64_t prev = -1;
    for (std::uint64_t i = 0; i < n; ++i) {
      const auto id = r.u32();
      if (id >= df.size() || static_cast<std::int64_t>(id) <= prev) throw DataError("store: bad marginal record");
      df[id] = r.u64();
      prev = id;
    }
  };
  sparse(st.word_df_);
  sparse(st.subject_df_);
  const auto n_pairs = r.u64();
  st.pairs_.reserve(n_pairs);
  st.row_begin_.assign(n_subjects + 1, 0);
  std::uint64_t prev_key = 0;
  for (std::uint64_t i = 0; i < n_pairs; ++i) {
    const auto s = r.u32();
    const auto w = r.u32();
    const auto c = r.u64();
    const std::uint64_t key = (std::uint64_t{s} << 32) | w;
    if (s >= n_subjects || w >= n_words || (i > 0 && key <= prev_key)) throw DataError("store: bad pair record");
    prev_key = key;
    st.pairs_.push_back({w, c});
    ++st.row_begin_[s + 1];
  }
  for (std::size_t s = 0; s < n_subjects; ++s) st.row_begin_[s + 1] += st.row_begin_[s];
  if (!r.done()) throw DataError("store: trailing bytes");
  return st;
}

void CooccurrenceStore::write(const std::filesystem::path& path) const {
  const auto tmp = std::filesystem::path(path.string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw UsageError("cannot write " + tmp.string());
    const auto bytes = to_bytes();
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw UsageError("write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

CooccurrenceStore CooccurrenceStore::read(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open store " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_bytes(buf.str());
}

void CooccurrenceStore::export_tsv(std::ostream& out, const EntityDictionary& dict) const {
  if (dict.hash() != dictionary_hash_) throw DataError("export: dictionary does not match store");
  for (SubjectId s = 0; s < subject_count(); ++s)
    for (const auto& e : row(s)) out << dict.subject_key(s) << '\t' << dict.word(e.word) << '\t' << e.count << '\n';
}

CooccurrenceStore merge(std::span<const CooccurrenceStore> stores) {
  if (stores.empty()) return {};
  CooccurrenceStore out;
  const auto& first = stores.front();
  out.dictionary_hash_ = first.dictionary_hash_;
  out.word_df_.assign(first.word_count(), 0);
  out.subject_df_.assign(first.subject_count(), 0);
  out.row_begin_.assign(first.subject_count() + 1, 0);
  for (const auto& st : stores) {
    if (st.dictionary_hash_ != out.dictionary_hash_ || st.word_count() != first.word_count() ||
        st.subject_count() != first.subject_count())
      throw DataError("merge: stores were built against different dictionaries");
    out.n_docs_ += st.n_docs_;
    out.n_skipped_ += st.n_skipped_;
    for (std::size_t i = 0; i < st.word_df_.size(); ++i) out.word_df_[i] += st.word_df_[i];
    for (std::size_t i = 0; i < st.subject_df_.size(); ++i) out.subject_df_[i] += st.subject_df_[i];
  }

  // k-way merge of the sorted rows, one subject at a time.
  std::vector<std::size_t> cursor(stores.size());
  for (SubjectId s = 0; s < first.subject_count(); ++s) {
    std::vector<std::span<const CooccurrenceStore::PairEntry>> rows;
    rows.reserve(stores.size());
    for (const auto& st : stores) rows.push_back(st.row(s));
    std::fill(cursor.begin(), cursor.end(), 0);
    while (true) {
      WordId next = UINT32_MAX;
      bool any = false;
      for (std::size_t k = 0; k < rows.size(); ++k) {
        if (cursor[k] < rows[k].size() && (!any || rows[k][cursor[k]].word < next)) {
          next = rows[k][cursor[k]].word;
          any = true;
        }
      }
      if (!any) break;
      std::uint64_t total = 0;
      for (std::size_t k = 0; k < rows.size(); ++k) {
        if (cursor[k] < rows[k].size() && rows[k][cursor[k]].word == next) total += rows[k][cursor[k]++].count;
      }
      out.pairs_.push_back({next, total});
    }
    out.row_begin_[s + 1] = out.pairs_.size();
  }
  return out;
}

ShardCounter::ShardCounter(const EntityDictionary& dict)
    : dict_(&dict),
      matcher_(dict),
      word_df_(dict.word_count(), 0),
      subject_df_(dict.subject_count(), 0) {}

void ShardCounter::add_document(std::string_view text) {
  ++n_docs_;
  normalizer_(text, tokens_);
  matcher_.match(tokens_, subjects_, words_);
  for (auto w : words_) ++word_df_[w];
  for (auto s : subjects_) {
    ++subject_df_[s];
    const std::uint64_t hi = std::uint64_t{s} << 32;
    for (auto w : words_) ++pairs_[hi | w];
  }
}

CooccurrenceStore ShardCounter::finish() const {
  CooccurrenceStore st(*dict_);
  st.n_docs_ = n_docs_;
  st.n_skipped_ = n_skipped_;
  st.word_df_ = word_df_;
  st.subject_df_ = subject_df_;
  std::vector<std::pair<std::uint64_t, std::uint64_t>> sorted(pairs_.begin(), pairs_.end());
  std::sort(sorted.begin(), sorted.end());
  st.pairs_.reserve(sorted.size());
  for (const auto& [key, count] : sorted) {
    const auto s = static_cast<SubjectId>(key >> 32);
    st.pairs_.push_back({static_cast<WordId>(key & 0xffffffffu), count});
    ++st.row_begin_[s + 1];
  }
  for (std::size_t s = 0; s < st.subject_count(); ++s) st.row_begin_[s + 1] += st.row_begin_[s];
  return st;
}

CooccurrenceStore count_documents(std::span<const std::string> documents, const EntityDictionary& dict) {
  ShardCounter counter(dict);
  for (const auto& doc : documents) counter.add_document(doc);
  return counter.finish();
}

std::optional<PairStatistics> query(const CooccurrenceStore& store, std::optional<SubjectId> subject, WordId word) {
  if (word >= store.word_count()) throw InvariantError("query: word id " + std::to_string(word) + " not in dictionary");
  if (!subject || *subject >= store.subject_count()) return std::nullopt;
  const auto sdf = store.subject_df(*subject);
  if (sdf == 0) return std::nullopt;
  PairStatistics out;
  out.pair_count = store.pair_df(*subject, word);
  out.conditional = Ratio(out.pair_count, sdf);
  out.marginal = Ratio(store.word_df(word), store.n_docs());
  return out;
}

}  // namespace cooc
