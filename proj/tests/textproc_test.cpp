#include <doctest.h>

#include <set>

#include "persona/rng.hpp"
#include "persona/textproc.hpp"
#include "persona/utf8.hpp"

using namespace persona;
using namespace persona::textproc;

namespace {

// Random mixed-script text for property tests.
std::string random_text(Rng& rng, bool allow_markers) {
  static const std::vector<std::string> pieces = {
      "مرحبا", "كتاب", "نور",  "hello", "World", "123", "٤٥٦", "😀", "🌙", "!", "?", ".",
      " ",     "  ",   "\t",   "،",     "الـلغة", "مَرْحَبًا"};
  static const std::vector<std::string> markers = {"#وسم", "@user", "#tag_1", "@صديق"};
  std::string out;
  const std::size_t n = 1 + rng.index(12);
  for (std::size_t i = 0; i < n; ++i) {
    out += pieces[rng.index(pieces.size())];
    if (allow_markers && rng.uniform01() < 0.2) out += " " + markers[rng.index(markers.size())];
    out += ' ';
  }
  return out;
}

std::vector<TokenKind> kinds_of(const std::string& text) {
  std::vector<TokenKind> kinds;
  for (const auto& t : tokenize(text)) kinds.push_back(t.kind);
  return kinds;
}

}  // namespace

TEST_CASE("normalize strips diacritics, tatweel and folds letter variants") {
  CHECK(normalize("مَرْحَبًا") == "مرحبا");
  CHECK(normalize("") == "");
  CHECK(normalize("أإآ") == "ااا");
  CHECK(normalize("مصطفى") == "مصطفي");
  CHECK(normalize("الـلغة") == "اللغة");  // tatweel removed
  CHECK(normalize("a \t  b\n c") == "a b c");
  CHECK(normalize("  مرحبا  ") == "مرحبا");
}

TEST_CASE("normalize is idempotent and never grows the text") {
  Rng rng(11);
  for (int i = 0; i < 200; ++i) {
    const std::string text = random_text(rng, true);
    const std::string once = normalize(text);
    CHECK(normalize(once) == once);
    CHECK(utf8::scalar_count(once) <= utf8::scalar_count(text));
  }
}

TEST_CASE("normalize leaves non-Arabic non-space content alone") {
  const std::string latin = "Hello, World! 123 😀";
  CHECK(normalize(latin) == latin);
}

TEST_CASE("tokenize classifies the spec example") {
  const auto kinds = kinds_of("مرحبا @user #وسم 😀");
  REQUIRE(kinds.size() == 4);
  CHECK(kinds[0] == TokenKind::Word);
  CHECK(kinds[1] == TokenKind::Mention);
  CHECK(kinds[2] == TokenKind::Hashtag);
  CHECK(kinds[3] == TokenKind::Emoji);
}

TEST_CASE("tokenize merges ZWJ emoji sequences into one token") {
  const auto tokens = tokenize("👩‍👩‍👧");
  REQUIRE(tokens.size() == 1);
  CHECK(tokens[0].kind == TokenKind::Emoji);
  CHECK(tokens[0].text == "👩‍👩‍👧");

  // Skin tone modifier stays attached.
  const auto thumbs = tokenize("👍🏽 ok");
  REQUIRE(thumbs.size() == 2);
  CHECK(thumbs[0].kind == TokenKind::Emoji);
  CHECK(thumbs[1].kind == TokenKind::LatinWord);
}

TEST_CASE("tokenize handles urls, numbers and empty input") {
  CHECK(tokenize("").empty());

  const auto tokens = tokenize("see https://t.co/abc?x=1 الان 42");
  REQUIRE(tokens.size() == 4);
  CHECK(tokens[0].kind == TokenKind::LatinWord);
  CHECK(tokens[1].kind == TokenKind::Url);
  CHECK(tokens[1].text == "https://t.co/abc?x=1");
  CHECK(tokens[2].kind == TokenKind::Word);
  CHECK(tokens[3].kind == TokenKind::Number);

  CHECK(kinds_of("٤٥٦") == std::vector<TokenKind>{TokenKind::Number});
  // A bare marker is punctuation, not a tag.
  CHECK(kinds_of("#") == std::vector<TokenKind>{TokenKind::Punctuation});
  CHECK(kinds_of("@ x") ==
        std::vector<TokenKind>{TokenKind::Punctuation, TokenKind::LatinWord});
}

TEST_CASE("tokenize keeps diacritics inside raw word tokens") {
  const auto tokens = tokenize("مَرْحَبًا بكم");
  REQUIRE(tokens.size() == 2);
  CHECK(tokens[0].kind == TokenKind::Word);
  CHECK(tokens[0].text == "مَرْحَبًا");
}

TEST_CASE("tokenize never invents characters") {
  Rng rng(23);
  for (int i = 0; i < 200; ++i) {
    const std::string text = random_text(rng, true);
    const std::set<char32_t> input_chars = [&] {
      std::set<char32_t> s;
      for (char32_t c : utf8::decode(text)) s.insert(c);
      return s;
    }();
    for (const auto& token : tokenize(text))
      for (char32_t c : utf8::decode(token.text)) CHECK(input_chars.count(c) == 1);
  }
}

TEST_CASE("surface_features counts the spec example by the stated rules") {
  const auto f = surface_features("Hello مرحبا #tag @m 😀!");
  CHECK(f.n_hashtags == 1);
  CHECK(f.n_mentions == 1);
  CHECK(f.n_emojis == 1);
  CHECK(f.n_words == 2);
  CHECK(f.n_title_words == 1);
  CHECK(f.n_punctuation == 1);
  CHECK(f.n_characters == 22);
  CHECK(f.word_density == doctest::Approx(2.0 / 22.0).epsilon(1e-12));
}

TEST_CASE("surface_features degenerate and density cases") {
  const auto empty = surface_features("");
  CHECK(empty.n_characters == 0);
  CHECK(empty.n_words == 0);
  CHECK(empty.word_density == 0.0);

  // 10 scalars, 2 words -> density 0.2
  const auto f = surface_features("abcd efgh!");
  CHECK(f.n_characters == 10);
  CHECK(f.n_words == 2);
  CHECK(f.word_density == doctest::Approx(0.2).epsilon(1e-12));
}

TEST_CASE("surface counts are zero without their marker characters") {
  Rng rng(5);
  for (int i = 0; i < 100; ++i) {
    std::string text = random_text(rng, false);
    std::erase(text, '#');
    std::erase(text, '@');
    const auto f = surface_features(text);
    CHECK(f.n_hashtags == 0);
    CHECK(f.n_mentions == 0);
  }
  CHECK(surface_features("مرحبا بكم hello").n_emojis == 0);
}

TEST_CASE("surface_features is pure") {
  Rng rng(17);
  for (int i = 0; i < 50; ++i) {
    const std::string text = random_text(rng, true);
    CHECK(surface_features(text) == surface_features(text));
  }
}

TEST_CASE("bio_features counts the bio subset") {
  const auto f = bio_features("مهندس @org 😀");
  CHECK(f.n_words == 1);
  CHECK(f.n_mentions == 1);
  CHECK(f.n_emojis == 1);
  CHECK(f.n_latin_words == 0);

  const auto latin = bio_features("software engineer");
  CHECK(latin.n_latin_words == 2);
  CHECK(latin.n_words == 2);

  const auto empty = bio_features("");
  CHECK(empty.n_words == 0);
  CHECK(empty.n_emojis == 0);
  CHECK(empty.n_mentions == 0);
  CHECK(empty.n_latin_words == 0);
}

TEST_CASE("invalid utf-8 never crashes the pipeline") {
  const std::string broken = "ok \xFF\xFE\x80 مرحبا \xC3";
  CHECK_NOTHROW(normalize(broken));
  CHECK_NOTHROW(tokenize(broken));
  CHECK_NOTHROW(surface_features(broken));
}
