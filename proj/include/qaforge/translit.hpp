#pragma once

// Serbian Cyrillic <-> Latin transliteration. The Cyrillic->Latin direction
// is total and deterministic; Latin->Cyrillic is best-effort because the
// digraphs lj/nj/dž are ambiguous (инјекција vs. њ), so it reports how many
// digraph merges it performed instead of guessing from a dictionary.

#include <cstddef>
#include <string>
#include <string_view>
#include <utility>

#include "qaforge/unicode.hpp"

namespace qaforge::translit {

enum class ScriptTag { Cyrillic, Latin, Mixed, Neutral };

inline const char* to_string(ScriptTag tag) {
  switch (tag) {
    case ScriptTag::Cyrillic: return "Cyrillic";
    case ScriptTag::Latin: return "Latin";
    case ScriptTag::Mixed: return "Mixed";
    case ScriptTag::Neutral: return "Neutral";
  }
  return "Neutral";
}

struct TranslitStats {
  std::size_t unmapped_cyrillic = 0; // non-Serbian Cyrillic letters passed through
};

namespace detail {

// Serbian Cyrillic -> Latin, single letters only; digraph letters Љ Њ Џ are
// handled by the caller. Returns nullptr for anything outside the Serbian
// alphabet.
inline const char* single_lat(char32_t cp) {
  switch (cp) {
    case 0x410: return "A";  case 0x430: return "a";
    case 0x411: return "B";  case 0x431: return "b";
    case 0x412: return "V";  case 0x432: return "v";
    case 0x413: return "G";  case 0x433: return "g";
    case 0x414: return "D";  case 0x434: return "d";
    case 0x402: return "Đ"; case 0x452: return "đ"; // Đ đ
    case 0x415: return "E";  case 0x435: return "e";
    case 0x416: return "Ž"; case 0x436: return "ž"; // Ž ž
    case 0x417: return "Z";  case 0x437: return "z";
    case 0x418: return "I";  case 0x438: return "i";
    case 0x408: return "J";  case 0x458: return "j";
    case 0x41A: return "K";  case 0x43A: return "k";
    case 0x41B: return "L";  case 0x43B: return "l";
    case 0x41C: return "M";  case 0x43C: return "m";
    case 0x41D: return "N";  case 0x43D: return "n";
    case 0x41E: return "O";  case 0x43E: return "o";
    case 0x41F: return "P";  case 0x43F: return "p";
    case 0x420: return "R";  case 0x440: return "r";
    case 0x421: return "S";  case 0x441: return "s";
    case 0x422: return "T";  case 0x442: return "t";
    case 0x40B: return "Ć"; case 0x45B: return "ć"; // Ć ć
    case 0x423: return "U";  case 0x443: return "u";
    case 0x424: return "F";  case 0x444: return "f";
    case 0x425: return "H";  case 0x445: return "h";
    case 0x426: return "C";  case 0x446: return "c";
    case 0x427: return "Č"; case 0x447: return "č"; // Č č
    case 0x428: return "Š"; case 0x448: return "š"; // Š š
    default: return nullptr;
  }
}

inline bool is_upper_digraph(char32_t cp) { return cp == 0x409 || cp == 0x40A || cp == 0x40F; }
inline bool is_lower_digraph(char32_t cp) { return cp == 0x459 || cp == 0x45A || cp == 0x45F; }

inline bool is_serbian_cyrillic(char32_t cp) {
  return single_lat(cp) != nullptr || is_upper_digraph(cp) || is_lower_digraph(cp);
}

inline bool is_cyrillic_block(char32_t cp) { return cp >= 0x400 && cp <= 0x4FF; }

inline bool is_serbian_latin(char32_t cp) {
  if ((cp >= U'A' && cp <= U'Z') || (cp >= U'a' && cp <= U'z')) return true;
  switch (cp) {
    case 0x106: case 0x107: case 0x10C: case 0x10D: case 0x110: case 0x111:
    case 0x160: case 0x161: case 0x17D: case 0x17E:
      return true;
    default:
      return false;
  }
}

} // namespace detail

// Cyrillic -> Latin over the Serbian alphabet; all other characters pass
// through unchanged (non-Serbian Cyrillic letters are tallied in `stats`).
// An uppercase digraph letter expands fully uppercased when its neighbour
// letters say the token is in caps: ЉУБАВ -> LJUBAV, Његош -> Njegoš.
inline std::string cyr_to_lat(std::string_view text, TranslitStats* stats = nullptr) {
  std::u32string u = uni::decode_utf8(text);
  std::string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    char32_t cp = u[i];
    if (const char* m = detail::single_lat(cp)) {
      out += m;
      continue;
    }
    if (detail::is_lower_digraph(cp)) {
      out += (cp == 0x459) ? "lj" : (cp == 0x45A) ? "nj" : "dž";
      continue;
    }
    if (detail::is_upper_digraph(cp)) {
      bool caps = false;
      if (i + 1 < u.size() && uni::is_letter(u[i + 1]))
        caps = uni::is_upper(u[i + 1]);
      else if (i > 0 && uni::is_letter(u[i - 1]))
        caps = uni::is_upper(u[i - 1]);
      if (cp == 0x409) out += caps ? "LJ" : "Lj";
      else if (cp == 0x40A) out += caps ? "NJ" : "Nj";
      else out += caps ? "DŽ" : "Dž";
      continue;
    }
    if (detail::is_cyrillic_block(cp) && stats) ++stats->unmapped_cyrillic;
    uni::append_utf8(out, cp);
  }
  return out;
}

// Latin -> Cyrillic, greedy longest match: digraphs lj/nj/dž first, then
// single letters. Every digraph match is a potential false merge and is
// counted in the returned ambiguity tally.
inline std::pair<std::string, std::size_t> lat_to_cyr(std::string_view text) {
  std::u32string u = uni::decode_utf8(text);
  std::string out;
  out.reserve(text.size());
  std::size_t ambiguous = 0;

  const auto single_cyr = [](char32_t cp) -> char32_t {
    char32_t lower = uni::to_lower(cp);
    char32_t mapped = 0;
    switch (lower) {
      case U'a': mapped = 0x430; break; case U'b': mapped = 0x431; break;
      case U'v': mapped = 0x432; break; case U'g': mapped = 0x433; break;
      case U'd': mapped = 0x434; break; case 0x111: mapped = 0x452; break;
      case U'e': mapped = 0x435; break; case 0x17E: mapped = 0x436; break;
      case U'z': mapped = 0x437; break; case U'i': mapped = 0x438; break;
      case U'j': mapped = 0x458; break; case U'k': mapped = 0x43A; break;
      case U'l': mapped = 0x43B; break; case U'm': mapped = 0x43C; break;
      case U'n': mapped = 0x43D; break; case U'o': mapped = 0x43E; break;
      case U'p': mapped = 0x43F; break; case U'r': mapped = 0x440; break;
      case U's': mapped = 0x441; break; case U't': mapped = 0x442; break;
      case 0x107: mapped = 0x45B; break; case U'u': mapped = 0x443; break;
      case U'f': mapped = 0x444; break; case U'h': mapped = 0x445; break;
      case U'c': mapped = 0x446; break; case 0x10D: mapped = 0x447; break;
      case 0x161: mapped = 0x448; break;
      default: return 0;
    }
    return uni::is_upper(cp) ? uni::to_upper(mapped) : mapped;
  };

  for (std::size_t i = 0; i < u.size(); ++i) {
    char32_t c0 = u[i];
    char32_t l0 = uni::to_lower(c0);
    if (i + 1 < u.size()) {
      char32_t l1 = uni::to_lower(u[i + 1]);
      char32_t merged = 0;
      if (l0 == U'l' && l1 == U'j') merged = 0x459;
      else if (l0 == U'n' && l1 == U'j') merged = 0x45A;
      else if (l0 == U'd' && l1 == 0x17E) merged = 0x45F;
      if (merged != 0) {
        ++ambiguous;
        uni::append_utf8(out, uni::is_upper(c0) ? uni::to_upper(merged) : merged);
        ++i;
        continue;
      }
    }
    if (char32_t m = single_cyr(c0)) {
      uni::append_utf8(out, m);
    } else {
      uni::append_utf8(out, c0);
    }
  }
  return {std::move(out), ambiguous};
}

// Cyrillic if the text has Serbian Cyrillic letters and no Serbian Latin
// ones, Latin symmetrically, Mixed if both, Neutral if neither.
inline ScriptTag detect_script(std::string_view text) {
  bool cyr = false;
  bool lat = false;
  for (char32_t cp : uni::decode_utf8(text)) {
    if (detail::is_serbian_cyrillic(cp)) cyr = true;
    else if (detail::is_serbian_latin(cp)) lat = true;
    if (cyr && lat) return ScriptTag::Mixed;
  }
  if (cyr) return ScriptTag::Cyrillic;
  if (lat) return ScriptTag::Latin;
  return ScriptTag::Neutral;
}

} // namespace qaforge::translit
