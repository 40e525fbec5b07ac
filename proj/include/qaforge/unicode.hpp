#pragma once

// Minimal UTF-8 / codepoint utilities. All character indices in this toolkit
// count Unicode scalar values, never bytes, so every module that does span
// arithmetic works on decoded u32 text and converts back at the edges.

#include <cstdint>
#include <string>
#include <string_view>

namespace qaforge::uni {

inline constexpr char32_t kReplacementChar = 0xFFFD;

// Decodes UTF-8; malformed byte sequences become U+FFFD, one per bad byte.
inline std::u32string decode_utf8(std::string_view s) {
  std::u32string out;
  out.reserve(s.size());
  std::size_t i = 0;
  const auto byte = [&](std::size_t k) { return static_cast<unsigned char>(s[k]); };
  while (i < s.size()) {
    unsigned char b0 = byte(i);
    if (b0 < 0x80) {
      out.push_back(b0);
      ++i;
      continue;
    }
    int len = 0;
    char32_t cp = 0;
    if ((b0 & 0xE0) == 0xC0) { len = 2; cp = b0 & 0x1F; }
    else if ((b0 & 0xF0) == 0xE0) { len = 3; cp = b0 & 0x0F; }
    else if ((b0 & 0xF8) == 0xF0) { len = 4; cp = b0 & 0x07; }
    else { out.push_back(kReplacementChar); ++i; continue; }
    if (i + len > s.size()) { out.push_back(kReplacementChar); ++i; continue; }
    bool ok = true;
    for (int k = 1; k < len; ++k) {
      unsigned char bk = byte(i + k);
      if ((bk & 0xC0) != 0x80) { ok = false; break; }
      cp = (cp << 6) | (bk & 0x3F);
    }
    if (!ok || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF) ||
        (len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) || (len == 4 && cp < 0x10000)) {
      out.push_back(kReplacementChar);
      ++i;
      continue;
    }
    out.push_back(cp);
    i += len;
  }
  return out;
}

inline void append_utf8(std::string& out, char32_t cp) {
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

inline std::string encode_utf8(std::u32string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char32_t cp : s) append_utf8(out, cp);
  return out;
}

inline std::string encode_utf8(char32_t cp) {
  std::string out;
  append_utf8(out, cp);
  return out;
}

// Number of Unicode scalar values in a UTF-8 string.
inline std::size_t cp_length(std::string_view s) {
  std::size_t n = 0;
  for (std::size_t i = 0; i < s.size();) {
    unsigned char b = static_cast<unsigned char>(s[i]);
    if (b < 0x80) i += 1;
    else if ((b & 0xE0) == 0xC0) i += 2;
    else if ((b & 0xF0) == 0xE0) i += 3;
    else if ((b & 0xF8) == 0xF0) i += 4;
    else i += 1;
    ++n;
  }
  return n;
}

inline bool is_space(char32_t cp) {
  switch (cp) {
    case U' ': case U'\t': case U'\n': case U'\r': case 0x0B: case 0x0C:
    case 0x85: case 0xA0: case 0x1680: case 0x2028: case 0x2029:
    case 0x202F: case 0x205F: case 0x3000:
      return true;
    default:
      return cp >= 0x2000 && cp <= 0x200A;
  }
}

inline bool is_ascii_digit(char32_t cp) { return cp >= U'0' && cp <= U'9'; }

// ASCII punctuation as used by the standard SQuAD normalizer
// (Python's string.punctuation).
inline bool is_ascii_punct(char32_t cp) {
  return (cp >= 0x21 && cp <= 0x2F) || (cp >= 0x3A && cp <= 0x40) ||
         (cp >= 0x5B && cp <= 0x60) || (cp >= 0x7B && cp <= 0x7E);
}

// Common non-ASCII punctuation (general punctuation block, quotation marks,
// dashes, Latin-1 marks). Pragmatic subset of Unicode category P covering
// the scripts this toolkit handles.
inline bool is_ext_punct(char32_t cp) {
  switch (cp) {
    case 0xA1: case 0xA7: case 0xAB: case 0xB6: case 0xB7: case 0xBB: case 0xBF:
    case 0x2E2E: case 0x2E3A: case 0x2E3B:
    case 0x3001: case 0x3002: case 0x3008: case 0x3009: case 0x300A: case 0x300B:
    case 0x300C: case 0x300D: case 0x30FB:
      return true;
    default:
      return (cp >= 0x2010 && cp <= 0x2027) || (cp >= 0x2030 && cp <= 0x205E);
  }
}

inline bool is_punct(char32_t cp) { return is_ascii_punct(cp) || is_ext_punct(cp); }

namespace detail {

// Latin Extended-A upper/lower pairing alternates direction across the block.
inline bool latin_ext_a_upper(char32_t cp) {
  if (cp >= 0x100 && cp <= 0x137) return (cp & 1) == 0;
  if (cp >= 0x139 && cp <= 0x148) return (cp & 1) == 1;
  if (cp >= 0x14A && cp <= 0x177) return (cp & 1) == 0;
  if (cp == 0x178) return true;
  if (cp >= 0x179 && cp <= 0x17E) return (cp & 1) == 1;
  return false;
}

} // namespace detail

inline bool is_upper(char32_t cp) {
  if (cp >= U'A' && cp <= U'Z') return true;
  if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) return true;        // Latin-1
  if (cp >= 0x100 && cp <= 0x17E) return detail::latin_ext_a_upper(cp);
  if (cp >= 0x400 && cp <= 0x42F) return true;                    // Cyrillic
  return false;
}

inline bool is_lower(char32_t cp) {
  if (cp >= U'a' && cp <= U'z') return true;
  if ((cp >= 0xDF && cp <= 0xFF && cp != 0xF7)) return true;
  if (cp >= 0x100 && cp <= 0x17F) return !detail::latin_ext_a_upper(cp) && cp != 0x178;
  if (cp >= 0x430 && cp <= 0x45F) return true;
  return false;
}

inline bool is_letter(char32_t cp) {
  if (is_upper(cp) || is_lower(cp)) return true;
  // Treat any other non-space, non-punct codepoint above ASCII as letter-like
  // so that unknown scripts still tokenize as word runs.
  return cp >= 0x80 && !is_space(cp) && !is_ext_punct(cp);
}

inline char32_t to_lower(char32_t cp) {
  if (cp >= U'A' && cp <= U'Z') return cp + 0x20;
  if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) return cp + 0x20;
  if (cp == 0x178) return 0xFF;
  if (cp >= 0x100 && cp <= 0x17E && detail::latin_ext_a_upper(cp)) return cp + 1;
  if (cp >= 0x410 && cp <= 0x42F) return cp + 0x20;
  if (cp >= 0x400 && cp <= 0x40F) return cp + 0x50;
  return cp;
}

inline char32_t to_upper(char32_t cp) {
  if (cp >= U'a' && cp <= U'z') return cp - 0x20;
  if (cp >= 0xE0 && cp <= 0xFE && cp != 0xF7) return cp - 0x20;
  if (cp == 0xFF) return 0x178;
  if (cp >= 0x101 && cp <= 0x17F && !detail::latin_ext_a_upper(cp) && cp != 0x138 && cp != 0x149)
    return cp - 1;
  if (cp >= 0x430 && cp <= 0x44F) return cp - 0x20;
  if (cp >= 0x450 && cp <= 0x45F) return cp - 0x50;
  return cp;
}

inline std::string to_lower_utf8(std::string_view s) {
  std::u32string u = decode_utf8(s);
  for (char32_t& cp : u) cp = to_lower(cp);
  return encode_utf8(u);
}

} // namespace qaforge::uni
