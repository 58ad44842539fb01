#include "persona/utf8.hpp"

namespace persona::utf8 {

namespace {
constexpr char32_t kReplacement = 0xFFFD;
}

std::u32string decode(std::string_view s) {
  std::u32string out;
  out.reserve(s.size());
  std::size_t i = 0;
  const std::size_t n = s.size();
  while (i < n) {
    const unsigned char b = static_cast<unsigned char>(s[i]);
    int len;
    char32_t v;
    if (b < 0x80) {
      len = 1;
      v = b;
    } else if ((b >> 5) == 0x6) {
      len = 2;
      v = b & 0x1F;
    } else if ((b >> 4) == 0xE) {
      len = 3;
      v = b & 0x0F;
    } else if ((b >> 3) == 0x1E) {
      len = 4;
      v = b & 0x07;
    } else {
      out.push_back(kReplacement);
      ++i;
      continue;
    }
    if (i + static_cast<std::size_t>(len) > n) {
      out.push_back(kReplacement);
      ++i;
      continue;
    }
    bool ok = true;
    for (int k = 1; k < len; ++k) {
      const unsigned char c = static_cast<unsigned char>(s[i + static_cast<std::size_t>(k)]);
      if ((c >> 6) != 0x2) {
        ok = false;
        break;
      }
      v = (v << 6) | (c & 0x3F);
    }
    if (ok) {
      const bool overlong = (len == 2 && v < 0x80) || (len == 3 && v < 0x800) ||
                            (len == 4 && v < 0x10000);
      if (overlong || (v >= 0xD800 && v <= 0xDFFF) || v > 0x10FFFF) ok = false;
    }
    if (ok) {
      out.push_back(v);
      i += static_cast<std::size_t>(len);
    } else {
      out.push_back(kReplacement);
      ++i;
    }
  }
  return out;
}

void append(std::string& out, char32_t cp) {
  if (cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) cp = kReplacement;
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

std::string encode(std::u32string_view s) {
  std::string out;
  out.reserve(s.size() * 2);
  for (char32_t cp : s) append(out, cp);
  return out;
}

std::size_t scalar_count(std::string_view s) { return decode(s).size(); }

}  // namespace persona::utf8
