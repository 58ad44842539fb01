#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace persona::textproc {

enum class TokenKind : std::uint8_t {
  Word,        // contiguous Arabic letters
  Hashtag,     // '#' + tag characters
  Mention,     // '@' + tag characters
  Url,         // scheme:// up to whitespace
  Emoji,       // Extended_Pictographic scalar, ZWJ sequences merged
  Punctuation, // single non-word scalar
  Number,      // contiguous digits (ASCII or Arabic-Indic)
  LatinWord    // contiguous A-Z/a-z
};

std::string_view token_kind_name(TokenKind k);

struct Token {
  std::string text;
  TokenKind kind;

  bool operator==(const Token&) const = default;
};

struct SurfaceFeatures {
  std::size_t n_hashtags = 0;
  std::size_t n_emojis = 0;
  std::size_t n_mentions = 0;
  std::size_t n_words = 0;
  std::size_t n_punctuation = 0;
  std::size_t n_title_words = 0;
  std::size_t n_characters = 0;
  double word_density = 0.0;

  bool operator==(const SurfaceFeatures&) const = default;
};

struct BioFeatures {
  std::size_t n_emojis = 0;
  std::size_t n_words = 0;
  std::size_t n_mentions = 0;
  std::size_t n_latin_words = 0;

  bool operator==(const BioFeatures&) const = default;
};

// Removes Arabic diacritics (U+064B..U+065F, U+0670) and tatweel (U+0640),
// folds alef variants to bare alef and alef maqsura to yeh, and collapses
// whitespace runs to single spaces (trimmed). Idempotent; total.
std::string normalize(std::string_view text);

// Splits text into typed tokens. Emoji use the Extended_Pictographic
// property; a ZWJ sequence (with optional skin-tone modifiers and variation
// selectors) is one token. Hashtags/mentions accept Arabic letters, Latin
// letters, digits and underscore after the marker.
std::vector<Token> tokenize(std::string_view text);

// Counts computed over the raw (un-normalized) text. n_words counts Word +
// LatinWord tokens; n_title_words counts LatinWord tokens starting with an
// uppercase Latin letter; n_characters counts Unicode scalar values;
// word_density = n_words / max(1, n_characters).
SurfaceFeatures surface_features(std::string_view text);

BioFeatures bio_features(std::string_view bio);

// Character predicates used by the tokenizer (exposed for tests).
bool is_arabic_letter(char32_t cp);
bool is_arabic_mark(char32_t cp);

}  // namespace persona::textproc
