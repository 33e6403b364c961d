#include <random>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"

#include "cooc/text.hpp"

using cooc::text::normalize;
using cooc::text::tokenize;
using Tokens = std::vector<std::string>;

TEST_CASE("normalize examples") {
  CHECK(normalize("The capital of Canada is Ottawa.") == Tokens{"capital", "canada", "ottawa"});
  CHECK(normalize("").empty());
  CHECK(normalize("the of is").empty());
  CHECK(normalize("  \t\n ").empty());
}

TEST_CASE("tokenize follows the bundled rules") {
  CHECK(tokenize("Don't stop") == Tokens{"do", "n't", "stop"});
  CHECK(tokenize("John's car") == Tokens{"john", "'s", "car"});
  CHECK(tokenize("We cannot go.") == Tokens{"we", "can", "not", "go"});
  CHECK(tokenize("the U.S. Army.") == Tokens{"the", "u.s.", "army"});
  CHECK(tokenize("1,000 people, mostly") == Tokens{"1,000", "people", "mostly"});
  CHECK(tokenize("(Paris)") == Tokens{"paris"});
  CHECK(tokenize("\xE2\x80\x9CQuoted\xE2\x80\x9D") == Tokens{"quoted"});
  CHECK(tokenize("'single'") == Tokens{"single"});
  CHECK(tokenize("a--b") == Tokens{"a--b"});
  CHECK(tokenize("?!...") == Tokens{});
  CHECK(tokenize("e-mail") == Tokens{"e-mail"});
}

TEST_CASE("case folding covers Latin-1") {
  CHECK(tokenize("\xC3\x89" "COLE") == Tokens{"\xC3\xA9" "cole"});
  CHECK(tokenize("M\xC3\x9C" "NCHEN") == Tokens{"m\xC3\xBC" "nchen"});
}

TEST_CASE("invalid UTF-8 is replaced, not fatal") {
  const auto toks = tokenize("abc \xFF def");
  REQUIRE(toks.size() == 3);
  CHECK(toks[0] == "abc");
  CHECK(toks[1] == "\xEF\xBF\xBD");
  CHECK(toks[2] == "def");
}

TEST_CASE("stopword list") {
  const auto words = cooc::text::stopwords();
  CHECK(words.size() == 179);
  CHECK(std::set<std::string>(words.begin(), words.end()).size() == words.size());
  CHECK(cooc::text::is_stopword("the"));
  CHECK(cooc::text::is_stopword("The"));
  CHECK(cooc::text::is_stopword("'s"));
  CHECK(cooc::text::is_stopword("n't"));
  CHECK_FALSE(cooc::text::is_stopword("canada"));
  CHECK(normalize("He isn't here") == Tokens{});
}

TEST_CASE("Normalizer matches normalize") {
  cooc::text::Normalizer norm;
  Tokens out;
  for (const char* s : {"The capital of Canada is Ottawa.", "", "U.S. troops can't", "x"}) {
    norm(s, out);
    CHECK(out == normalize(s));
  }
}

namespace {

std::string random_text(std::mt19937_64& rng) {
  static const std::vector<std::string> pieces{
      "The", "capital", "of", "Canada", "U.S.", "isn't", "can't", "cannot", "'quoted'", "\"x\"", ",", ".", "...",
      "1,000", "a,b", "e-mail", "(", ")", "[", "]", "'s", "n't", "O'Neil", "\xC3\x89t\xC3\xA9", "\xFF", "\xE2\x80\x99",
      "--", "Mr.", "end.", "ab.cd.", "#tag", "@me", "x:y", "\t", " ", "  "};
  std::string out;
  const std::size_t n = rng() % 25;
  for (std::size_t i = 0; i < n; ++i) {
    out += pieces[rng() % pieces.size()];
    if (rng() % 3) out += ' ';
  }
  return out;
}

}  // namespace

TEST_CASE("property: normalization is idempotent") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 5000; ++i) {
    const auto text = random_text(rng);
    const auto once = normalize(text);
    CAPTURE(text);
    CHECK(normalize(cooc::text::join(once)) == once);
    for (const auto& t : once) {
      CHECK_FALSE(t.empty());
      CHECK_FALSE(cooc::text::is_stopword(t));
      CHECK(t.find(' ') == std::string::npos);
    }
  }
}
