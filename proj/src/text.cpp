#include "cooc/text.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <utility>

namespace cooc::text {
namespace detail {
extern const std::string_view kStopwordData;
}

namespace {

std::vector<std::string> load_stopwords() {
  std::vector<std::string> words;
  std::string_view data = detail::kStopwordData;
  while (!data.empty()) {
    const auto nl = data.find('\n');
    auto line = data.substr(0, nl);
    data = nl == std::string_view::npos ? std::string_view{} : data.substr(nl + 1);
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.remove_suffix(1);
    if (!line.empty()) words.emplace_back(line);
  }
  std::sort(words.begin(), words.end());
  words.erase(std::unique(words.begin(), words.end()), words.end());
  return words;
}

constexpr std::array<std::pair<std::string_view, std::string_view>, 7> kClitics{{
    {"n't", "not"}, {"'s", "s"}, {"'re", "re"}, {"'ve", "ve"}, {"'ll", "ll"}, {"'d", "d"}, {"'m", "m"},
}};

bool is_split_char(unsigned char c) {
  switch (c) {
    case '!': case '"': case '#': case '$': case '%': case '(': case ')': case '*':
    case ',': case ':': case ';': case '<': case '=': case '>': case '?': case '@':
    case '[': case '\\': case ']': case '^': case '`': case '{': case '|': case '}':
    case '~':
      return true;
    default:
      return false;
  }
}

bool is_space(unsigned char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }
bool is_digit(unsigned char c) { return c >= '0' && c <= '9'; }

bool has_content(std::string_view tok) {
  return std::any_of(tok.begin(), tok.end(), [](unsigned char c) {
    return c >= 0x80 || is_digit(c) || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
  });
}

char* put_utf8(char* out, std::uint32_t cp) {
  if (cp < 0x80) {
    *out++ = static_cast<char>(cp);
  } else if (cp < 0x800) {
    *out++ = static_cast<char>(0xC0 | (cp >> 6));
    *out++ = static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    *out++ = static_cast<char>(0xE0 | (cp >> 12));
    *out++ = static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    *out++ = static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    *out++ = static_cast<char>(0xF0 | (cp >> 18));
    *out++ = static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    *out++ = static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    *out++ = static_cast<char>(0x80 | (cp & 0x3F));
  }
  return out;
}

// Decodes UTF-8 (replacing invalid sequences), folds quotes and case.
void clean(std::string_view in, std::string& out) {
  // An invalid byte becomes a 3-byte replacement character, so 3x is the
  // worst-case growth.
  out.resize(in.size() * 3);
  char* w = out.data();
  const auto* p = reinterpret_cast<const unsigned char*>(in.data());
  const std::size_t n = in.size();
  std::size_t i = 0;
  while (i < n) {
    const unsigned char c = p[i];
    if (c < 0x80) {
      *w++ = static_cast<char>(c >= 'A' && c <= 'Z' ? c + 32 : c);
      ++i;
      continue;
    }
    std::size_t len = 0;
    std::uint32_t cp = 0;
    std::uint32_t min = 0;
    if ((c & 0xE0) == 0xC0) {
      len = 2, cp = c & 0x1F, min = 0x80;
    } else if ((c & 0xF0) == 0xE0) {
      len = 3, cp = c & 0x0F, min = 0x800;
    } else if ((c & 0xF8) == 0xF0) {
      len = 4, cp = c & 0x07, min = 0x10000;
    }
    bool ok = len != 0 && i + len <= n;
    for (std::size_t k = 1; ok && k < len; ++k) {
      if ((p[i + k] & 0xC0) != 0x80) ok = false;
      else cp = (cp << 6) | (p[i + k] & 0x3F);
    }
    if (ok && (cp < min || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF))) ok = false;
    if (!ok) {
      w = put_utf8(w, 0xFFFD);
      ++i;
      continue;
    }
    i += len;
    if (cp == 0x2018 || cp == 0x2019 || cp == 0x201B) cp = '\'';
    else if (cp == 0x201C || cp == 0x201D || cp == 0x201F) cp = '"';
    else if (cp == 0x00A0) cp = ' ';
    else if (cp >= 0x00C0 && cp <= 0x00DE && cp != 0x00D7) cp += 0x20;
    w = put_utf8(w, cp);
  }
  out.resize(static_cast<std::size_t>(w - out.data()));
}

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

// Peels quotes, clitics and trailing periods off one piece; emits into out.
void emit_piece(std::string_view core, std::vector<std::string>& out) {
  std::array<std::string_view, 16> suffixes{};
  std::size_t n_suffix = 0;
  bool changed = true;
  while (changed && !core.empty()) {
    changed = false;
    while (!core.empty() && core.front() == '\'') core.remove_prefix(1), changed = true;
    while (!core.empty() && core.back() == '\'') core.remove_suffix(1), changed = true;
    if (core.empty()) break;
    for (const auto& [clitic, _] : kClitics) {
      if (core.size() > clitic.size() && ends_with(core, clitic)) {
        if (n_suffix < suffixes.size()) suffixes[n_suffix++] = core.substr(core.size() - clitic.size());
        core.remove_suffix(clitic.size());
        changed = true;
        break;
      }
    }
    if (changed) continue;
    if (core.back() == '.') {
      auto stripped = core;
      while (!stripped.empty() && stripped.back() == '.') stripped.remove_suffix(1);
      if (stripped.find('.') == std::string_view::npos) {
        core = stripped;
        changed = true;
      }
    }
  }
  if (core == "cannot") {
    out.emplace_back("can");
    out.emplace_back("not");
  } else if (has_content(core)) {
    out.emplace_back(core);
  }
  for (std::size_t k = n_suffix; k > 0; --k) out.emplace_back(suffixes[k - 1]);
}

void tokenize_cleaned(std::string_view s, std::vector<std::string>& out) {
  out.clear();
  std::size_t i = 0;
  const std::size_t n = s.size();
  std::size_t start = 0;
  auto flush = [&](std::size_t end) {
    if (end > start) emit_piece(s.substr(start, end - start), out);
  };
  while (i < n) {
    const auto c = static_cast<unsigned char>(s[i]);
    if (is_space(c)) {
      flush(i);
      start = ++i;
    } else if (is_split_char(c)) {
      if (c == ',' && i > start && i + 1 < n && is_digit(static_cast<unsigned char>(s[i - 1])) &&
          is_digit(static_cast<unsigned char>(s[i + 1]))) {
        ++i;
        continue;
      }
      flush(i);
      start = ++i;  // the punctuation itself has no content and is dropped
    } else {
      ++i;
    }
  }
  flush(n);
}

}  // namespace

std::span<const std::string> stopwords() {
  static const std::vector<std::string> words = load_stopwords();
  return words;
}

namespace {

// Stopwords bucketed by (length, first byte); each bucket holds a handful.
class StopwordTable {
 public:
  static constexpr std::size_t kMaxLen = 16;
  StopwordTable() {
    for (const auto& w : stopwords())
      if (!w.empty() && w.size() < kMaxLen) buckets_[w.size()][static_cast<unsigned char>(w[0])].push_back(w);
  }
  [[nodiscard]] bool contains(std::string_view key) const {
    if (key.empty() || key.size() >= kMaxLen) return false;
    const auto& bucket = buckets_[key.size()][static_cast<unsigned char>(key[0])];
    return std::find(bucket.begin(), bucket.end(), key) != bucket.end();
  }

 private:
  std::array<std::array<std::vector<std::string_view>, 256>, kMaxLen> buckets_;
};

bool is_lower_stopword(std::string_view key) {
  static const StopwordTable table;
  if (!key.empty() && (key[0] == '\'' || key[0] == 'n')) {
    for (const auto& [clitic, plain] : kClitics) {
      if (key == clitic) {
        key = plain;
        break;
      }
    }
  }
  return table.contains(key);
}

}  // namespace

bool is_stopword(std::string_view token) {
  std::string lowered;
  lowered.reserve(token.size());
  for (unsigned char c : token) lowered.push_back(static_cast<char>(c >= 'A' && c <= 'Z' ? c + 32 : c));
  return is_lower_stopword(lowered);
}

std::vector<std::string> tokenize(std::string_view text) {
  std::string cleaned;
  clean(text, cleaned);
  std::vector<std::string> out;
  tokenize_cleaned(cleaned, out);
  return out;
}

NormalizedTokens normalize(std::string_view text) {
  NormalizedTokens out;
  Normalizer{}(text, out);
  return out;
}

void Normalizer::operator()(std::string_view text, std::vector<std::string>& out) {
  clean(text, cleaned_);
  tokenize_cleaned(cleaned_, scratch_);
  out.clear();
  for (auto& tok : scratch_) {
    if (!is_lower_stopword(tok)) out.push_back(std::move(tok));
  }
}

std::string join(std::span<const std::string> tokens, char sep) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out.push_back(sep);
    out += tokens[i];
  }
  return out;
}

}  // namespace cooc::text
