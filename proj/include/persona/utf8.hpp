#pragma once

#include <cstddef>
#include <string>
#include <string_view>

namespace persona::utf8 {

// Decodes UTF-8 into Unicode scalar values. Malformed bytes become U+FFFD;
// decoding is total and never throws.
std::u32string decode(std::string_view s);

std::string encode(std::u32string_view s);

void append(std::string& out, char32_t cp);

// Number of Unicode scalar values in s (malformed bytes count one each).
std::size_t scalar_count(std::string_view s);

}  // namespace persona::utf8
