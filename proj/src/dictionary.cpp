#include "cooc/dictionary.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "cooc/error.hpp"
#include "cooc/hash.hpp"
#include "cooc/text.hpp"

namespace cooc {
namespace {

constexpr unsigned kKeyBits = 21;
constexpr std::uint64_t kMaxTokenId = (std::uint64_t{1} << kKeyBits) - 1;

std::uint64_t pack(std::span<const std::uint32_t> ids) {
  std::uint64_t key = 0;
  for (auto id : ids) key = (key << kKeyBits) | id;
  return key;
}

void sort_unique(std::vector<std::string>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

}  // namespace

EntityDictionary::EntityDictionary(std::vector<std::string> subjects, std::vector<std::string> words)
    : subjects_(std::move(subjects)), words_(std::move(words)) {
  sort_unique(subjects_);
  sort_unique(words_);
  subject_index_.reserve(subjects_.size());
  for (SubjectId i = 0; i < subjects_.size(); ++i) subject_index_.emplace(subjects_[i], i);
  word_index_.reserve(words_.size());
  for (WordId i = 0; i < words_.size(); ++i) word_index_.emplace(words_[i], i);
  hash_ = sha256_hex(serialize());
}

EntityDictionary EntityDictionary::build(std::span<const std::string> subject_surface_forms,
                                         std::span<const std::string> vocab_words,
                                         std::vector<Exclusion>& report) {
  if (subject_surface_forms.empty() && vocab_words.empty())
    throw DataError("dictionary: both the subject list and the vocabulary are empty");

  std::vector<std::string> subjects;
  subjects.reserve(subject_surface_forms.size());
  for (const auto& surface : subject_surface_forms) {
    const auto tokens = text::normalize(surface);
    if (tokens.empty()) {
      report.push_back({"subject", surface, "normalizes to zero tokens"});
    } else if (tokens.size() > kMaxSubjectTokens) {
      report.push_back({"subject", surface, "more than three tokens"});
    } else {
      subjects.push_back(text::join(tokens));
    }
  }

  std::vector<std::string> words;
  words.reserve(vocab_words.size());
  for (const auto& surface : vocab_words) {
    auto tokens = text::normalize(surface);
    if (tokens.empty()) {
      report.push_back({"vocab", surface, "normalizes to zero tokens"});
    } else if (tokens.size() > 1) {
      report.push_back({"vocab", surface, "normalizes to more than one token"});
    } else {
      words.push_back(std::move(tokens.front()));
    }
  }
  return EntityDictionary(std::move(subjects), std::move(words));
}

std::optional<SubjectId> EntityDictionary::find_subject(std::span<const std::string> tokens) const {
  if (tokens.empty() || tokens.size() > kMaxSubjectTokens) return std::nullopt;
  const auto it = subject_index_.find(text::join(tokens));
  if (it == subject_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<WordId> EntityDictionary::find_word(std::string_view token) const {
  const auto it = word_index_.find(std::string(token));
  if (it == word_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<SubjectId> EntityDictionary::lookup_subject(std::string_view surface) const {
  return find_subject(text::normalize(surface));
}

std::optional<WordId> EntityDictionary::lookup_word(std::string_view surface) const {
  const auto tokens = text::normalize(surface);
  if (tokens.size() != 1) return std::nullopt;
  return find_word(tokens.front());
}

std::string EntityDictionary::serialize() const {
  std::string out;
  for (const auto& s : subjects_) out.append("S\t").append(s).push_back('\n');
  for (const auto& w : words_) out.append("W\t").append(w).push_back('\n');
  return out;
}

EntityDictionary EntityDictionary::parse(std::string_view text) {
  std::vector<std::string> subjects;
  std::vector<std::string> words;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    const auto line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (line.empty()) continue;
    if (line.size() < 3 || line[1] != '\t' || (line[0] != 'S' && line[0] != 'W'))
      throw DataError("dictionary: malformed line " + std::to_string(line_no));
    (line[0] == 'S' ? subjects : words).emplace_back(line.substr(2));
  }
  EntityDictionary dict(std::move(subjects), std::move(words));
  return dict;
}

void EntityDictionary::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw UsageError("cannot write " + path.string());
  out << serialize();
}

EntityDictionary EntityDictionary::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open dictionary " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

DocumentMatcher::DocumentMatcher(const EntityDictionary& dict) {
  auto intern = [this](const std::string& tok) {
    const auto [it, inserted] = token_ids_.emplace(tok, static_cast<std::uint32_t>(token_ids_.size() + 1));
    if (inserted) word_of_token_.push_back(kNoWord);
    return it->second;
  };
  word_of_token_.push_back(kNoWord);  // slot for kNoToken

  for (WordId w = 0; w < dict.word_count(); ++w) word_of_token_[intern(dict.word(w))] = w;

  std::vector<std::uint32_t> ids;
  for (SubjectId s = 0; s < dict.subject_count(); ++s) {
    ids.clear();
    std::string_view key = dict.subject_key(s);
    while (!key.empty()) {
      const auto sp = key.find(' ');
      ids.push_back(intern(std::string(key.substr(0, sp))));
      key = sp == std::string_view::npos ? std::string_view{} : key.substr(sp + 1);
    }
    ngrams_.emplace(pack(ids), s);
  }
  if (token_ids_.size() > kMaxTokenId)
    throw DataError("dictionary: more than 2^21 distinct tokens; matcher key space exhausted");
}

void DocumentMatcher::match(std::span<const std::string> tokens, std::vector<SubjectId>& subjects,
                            std::vector<WordId>& words) const {
  subjects.clear();
  words.clear();
  ids_.resize(tokens.size());
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const auto it = token_ids_.find(tokens[i]);
    ids_[i] = it == token_ids_.end() ? kNoToken : it->second;
    if (ids_[i] != kNoToken && word_of_token_[ids_[i]] != kNoWord) words.push_back(word_of_token_[ids_[i]]);
  }
  for (std::size_t i = 0; i < ids_.size(); ++i) {
    std::uint64_t key = 0;
    for (std::size_t n = 0; n < EntityDictionary::kMaxSubjectTokens && i + n < ids_.size(); ++n) {
      if (ids_[i + n] == kNoToken) break;
      key = (key << kKeyBits) | ids_[i + n];
      const auto it = ngrams_.find(key);
      if (it != ngrams_.end()) subjects.push_back(it->second);
    }
  }
  std::sort(subjects.begin(), subjects.end());
  subjects.erase(std::unique(subjects.begin(), subjects.end()), subjects.end());
  std::sort(words.begin(), words.end());
  words.erase(std::unique(words.begin(), words.end()), words.end());
}

}  // namespace cooc
