#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cooc::text {

/// Lowercase tokens with stopwords and punctuation-only tokens removed.
using NormalizedTokens = std::vector<std::string>;

/// The bundled English stopword list (NLTK snapshot), sorted.
std::span<const std::string> stopwords();

/// True for bundled stopwords and for the contraction clitics the tokenizer
/// splits off ('s, n't, ...), which are stopwords in apostrophe-free form.
/// Matching is case-insensitive.
bool is_stopword(std::string_view token);

/// PTB-style tokenization over UTF-8 text.
///
/// Rules, applied in order:
///  1. Invalid UTF-8 is replaced by U+FFFD; curly quotes fold to ASCII
///     quotes; no-break space becomes a space; ASCII and Latin-1 letters are
///     lowercased.
///  2. Split on whitespace.
///  3. Detach the punctuation characters  ! " # $ % ( ) * , : ; < = > ? @ [ \ ] ^ ` { | } ~
///     (a comma between two digits stays inside the token).
///  4. Strip leading and trailing single quotes; split off the clitics
///     n't 's 're 've 'll 'd 'm; "cannot" becomes "can" "not"; detach a run of
///     trailing periods unless the remainder still contains a period
///     ("u.s." stays whole).
///  5. Drop tokens with no alphanumeric or non-ASCII character.
std::vector<std::string> tokenize(std::string_view text);

/// tokenize() followed by stopword removal.
NormalizedTokens normalize(std::string_view text);

/// Reusable normalizer for the counting hot path; keeps its buffers across
/// calls.
class Normalizer {
 public:
  void operator()(std::string_view text, std::vector<std::string>& out);

 private:
  std::string cleaned_;
  std::vector<std::string> scratch_;
};

std::string join(std::span<const std::string> tokens, char sep = ' ');

}  // namespace cooc::text
