#ifndef KGCORPUS_UTF8_HPP
#define KGCORPUS_UTF8_HPP

#include <cstddef>
#include <optional>
#include <string_view>

namespace kgcorpus::utf8 {

// Well-formed UTF-8 (no overlongs, surrogates or values past U+10FFFF).
bool valid(std::string_view text);

// Number of code points in text[0, byte_offset). byte_offset must be on a
// code point boundary.
std::size_t codepoints_before(std::string_view text, std::size_t byte_offset);

// Byte offset of the code point with index `codepoint`; text.size() for the
// one-past-the-end index; nullopt past that.
std::optional<std::size_t> byte_offset(std::string_view text, std::size_t codepoint);

}  // namespace kgcorpus::utf8

#endif  // KGCORPUS_UTF8_HPP
