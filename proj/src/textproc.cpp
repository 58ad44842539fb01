#include "persona/textproc.hpp"

#include <algorithm>

#include "persona/emoji_table.hpp"
#include "persona/utf8.hpp"

namespace persona::textproc {

namespace {

constexpr char32_t kTatweel = 0x0640;
constexpr char32_t kZwj = 0x200D;

bool is_whitespace(char32_t cp) {
  switch (cp) {
    case U' ': case U'\t': case U'\n': case U'\v': case U'\f': case U'\r':
    case 0x0085: case 0x00A0: case 0x1680: case 0x2028: case 0x2029:
    case 0x202F: case 0x205F: case 0x3000:
      return true;
    default:
      return cp >= 0x2000 && cp <= 0x200A;
  }
}

bool is_latin(char32_t cp) {
  return (cp >= U'A' && cp <= U'Z') || (cp >= U'a' && cp <= U'z');
}

bool is_digit(char32_t cp) {
  return (cp >= U'0' && cp <= U'9') || (cp >= 0x0660 && cp <= 0x0669) ||
         (cp >= 0x06F0 && cp <= 0x06F9);
}

bool is_variation_selector(char32_t cp) { return cp == 0xFE0E || cp == 0xFE0F; }

bool is_skin_modifier(char32_t cp) { return cp >= 0x1F3FB && cp <= 0x1F3FF; }

bool is_word_continuation(char32_t cp) {
  return is_arabic_letter(cp) || is_arabic_mark(cp) || cp == kTatweel;
}

bool is_tag_char(char32_t cp) {
  return is_word_continuation(cp) || is_latin(cp) || is_digit(cp) || cp == U'_';
}

bool is_scheme_char(char32_t cp) {
  return is_latin(cp) || is_digit(cp) || cp == U'+' || cp == U'-' || cp == U'.';
}

}  // namespace

bool is_arabic_letter(char32_t cp) {
  return (cp >= 0x0620 && cp <= 0x063F) || (cp >= 0x0641 && cp <= 0x064A) ||
         (cp >= 0x066E && cp <= 0x066F) || (cp >= 0x0671 && cp <= 0x06D3) || cp == 0x06D5 ||
         (cp >= 0x06EE && cp <= 0x06EF) || (cp >= 0x06FA && cp <= 0x06FC) || cp == 0x06FF ||
         (cp >= 0x0750 && cp <= 0x077F) || (cp >= 0x08A0 && cp <= 0x08C9) ||
         (cp >= 0xFB50 && cp <= 0xFDC7) || (cp >= 0xFE70 && cp <= 0xFEFC);
}

bool is_arabic_mark(char32_t cp) {
  return (cp >= 0x064B && cp <= 0x065F) || cp == 0x0670 || (cp >= 0x0610 && cp <= 0x061A) ||
         (cp >= 0x06D6 && cp <= 0x06DC) || (cp >= 0x06DF && cp <= 0x06E4) ||
         (cp >= 0x06E7 && cp <= 0x06E8) || (cp >= 0x06EA && cp <= 0x06ED);
}

std::string_view token_kind_name(TokenKind k) {
  switch (k) {
    case TokenKind::Word: return "word";
    case TokenKind::Hashtag: return "hashtag";
    case TokenKind::Mention: return "mention";
    case TokenKind::Url: return "url";
    case TokenKind::Emoji: return "emoji";
    case TokenKind::Punctuation: return "punctuation";
    case TokenKind::Number: return "number";
    case TokenKind::LatinWord: return "latin_word";
  }
  return "";
}

std::string normalize(std::string_view text) {
  const std::u32string in = utf8::decode(text);
  std::u32string out;
  out.reserve(in.size());
  bool pending_space = false;
  for (char32_t cp : in) {
    if ((cp >= 0x064B && cp <= 0x065F) || cp == 0x0670 || cp == kTatweel) continue;
    if (cp == 0x0622 || cp == 0x0623 || cp == 0x0625) cp = 0x0627;
    if (cp == 0x0649) cp = 0x064A;
    if (is_whitespace(cp)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) {
      out.push_back(U' ');
      pending_space = false;
    }
    out.push_back(cp);
  }
  return utf8::encode(out);
}

std::vector<Token> tokenize(std::string_view text) {
  const std::u32string s = utf8::decode(text);
  const std::size_t n = s.size();
  std::vector<Token> tokens;

  auto emit = [&](std::size_t begin, std::size_t end, TokenKind kind) {
    tokens.push_back(Token{utf8::encode(std::u32string_view(s).substr(begin, end - begin)), kind});
  };

  std::size_t i = 0;
  while (i < n) {
    const char32_t c = s[i];
    if (is_whitespace(c)) {
      ++i;
      continue;
    }
    if ((c == U'#' || c == U'@') && i + 1 < n && is_tag_char(s[i + 1])) {
      std::size_t j = i + 1;
      while (j < n && is_tag_char(s[j])) ++j;
      emit(i, j, c == U'#' ? TokenKind::Hashtag : TokenKind::Mention);
      i = j;
      continue;
    }
    if (is_latin(c)) {
      // URL if a scheme prefix ("letters://") starts here.
      std::size_t j = i;
      while (j < n && j - i < 12 && is_scheme_char(s[j])) ++j;
      if (j + 2 < n && s[j] == U':' && s[j + 1] == U'/' && s[j + 2] == U'/') {
        std::size_t k = j + 3;
        while (k < n && !is_whitespace(s[k])) ++k;
        emit(i, k, TokenKind::Url);
        i = k;
        continue;
      }
      j = i;
      while (j < n && is_latin(s[j])) ++j;
      emit(i, j, TokenKind::LatinWord);
      i = j;
      continue;
    }
    if (is_extended_pictographic(c)) {
      std::size_t j = i + 1;
      while (j < n && (is_skin_modifier(s[j]) || is_variation_selector(s[j]))) ++j;
      while (j < n && s[j] == kZwj && j + 1 < n && is_extended_pictographic(s[j + 1])) {
        j += 2;
        while (j < n && (is_skin_modifier(s[j]) || is_variation_selector(s[j]))) ++j;
      }
      emit(i, j, TokenKind::Emoji);
      i = j;
      continue;
    }
    if (is_arabic_letter(c)) {
      std::size_t j = i + 1;
      while (j < n && is_word_continuation(s[j])) ++j;
      emit(i, j, TokenKind::Word);
      i = j;
      continue;
    }
    if (is_digit(c)) {
      std::size_t j = i + 1;
      while (j < n && is_digit(s[j])) ++j;
      emit(i, j, TokenKind::Number);
      i = j;
      continue;
    }
    if (c == kZwj || is_variation_selector(c)) {
      ++i;  // unattached joiner, invisible
      continue;
    }
    emit(i, i + 1, TokenKind::Punctuation);
    ++i;
  }
  return tokens;
}

SurfaceFeatures surface_features(std::string_view text) {
  SurfaceFeatures f;
  f.n_characters = utf8::scalar_count(text);
  for (const Token& t : tokenize(text)) {
    switch (t.kind) {
      case TokenKind::Hashtag:
        ++f.n_hashtags;
        break;
      case TokenKind::Mention:
        ++f.n_mentions;
        break;
      case TokenKind::Emoji:
        ++f.n_emojis;
        break;
      case TokenKind::Word:
        ++f.n_words;
        break;
      case TokenKind::LatinWord:
        ++f.n_words;
        if (!t.text.empty() && t.text[0] >= 'A' && t.text[0] <= 'Z') ++f.n_title_words;
        break;
      case TokenKind::Punctuation:
        ++f.n_punctuation;
        break;
      default:
        break;
    }
  }
  f.word_density = static_cast<double>(f.n_words) /
                   static_cast<double>(std::max<std::size_t>(1, f.n_characters));
  return f;
}

BioFeatures bio_features(std::string_view bio) {
  BioFeatures f;
  for (const Token& t : tokenize(bio)) {
    switch (t.kind) {
      case TokenKind::Emoji:
        ++f.n_emojis;
        break;
      case TokenKind::Mention:
        ++f.n_mentions;
        break;
      case TokenKind::Word:
        ++f.n_words;
        break;
      case TokenKind::LatinWord:
        ++f.n_words;
        ++f.n_latin_words;
        break;
      default:
        break;
    }
  }
  return f;
}

}  // namespace persona::textproc
