#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace pter::uni {

/// Decodes UTF-8 into codepoints. Throws an input error naming the byte
/// offset of the first malformed sequence.
std::u32string decode_utf8(std::string_view text);

std::string encode_utf8(std::u32string_view codepoints);
std::string encode_utf8(char32_t codepoint);

/// Canonical decomposition (NFD): full decomposition followed by canonical
/// ordering of combining marks. Idempotent.
std::u32string nfd(std::u32string_view codepoints);

/// Canonical combining class; 0 for starters.
std::uint8_t combining_class(char32_t codepoint);

/// True for general category Mn (nonspacing marks).
bool is_combining_mark(char32_t codepoint);

/// Unicode White_Space property.
bool is_whitespace(char32_t codepoint);

/// "U+0061" style spelling, for error messages.
std::string codepoint_name(char32_t codepoint);

}  // namespace pter::uni
