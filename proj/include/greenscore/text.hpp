#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace greenscore {

/// Tokenizer used for the word-frequency tables.
///
/// Rules (deterministic, locale-free):
///  - input is UTF-8; invalid bytes act as separators
///  - ASCII letters/digits and non-separator codepoints >= U+0080 form words
///  - Han ideographs are emitted as single-codepoint tokens
///  - ASCII (and Latin-1 supplement) uppercase letters are lowercased;
///    other scripts pass through unchanged
std::vector<std::string> tokenize(std::string_view utf8_text);

bool is_cjk_ideograph(char32_t cp);

}  // namespace greenscore
