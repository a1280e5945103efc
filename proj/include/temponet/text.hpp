#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace temponet {
namespace detail {

inline constexpr char32_t kInvalidCp = 0xFFFD;

/// Decodes one UTF-8 code point starting at `i`; advances `i`. Malformed bytes
/// decode to U+FFFD and advance by one byte.
inline char32_t decode_utf8(std::string_view s, std::size_t& i) {
  const auto byte = [&](std::size_t k) -> std::uint8_t {
    return static_cast<std::uint8_t>(s[k]);
  };
  const std::uint8_t b0 = byte(i);
  if (b0 < 0x80) {
    ++i;
    return b0;
  }
  auto cont = [&](std::size_t k) {
    return k < s.size() && (byte(k) & 0xC0) == 0x80;
  };
  if ((b0 & 0xE0) == 0xC0 && cont(i + 1)) {
    const char32_t cp = ((b0 & 0x1Fu) << 6) | (byte(i + 1) & 0x3Fu);
    i += 2;
    return cp >= 0x80 ? cp : kInvalidCp;
  }
  if ((b0 & 0xF0) == 0xE0 && cont(i + 1) && cont(i + 2)) {
    const char32_t cp = ((b0 & 0x0Fu) << 12) | ((byte(i + 1) & 0x3Fu) << 6) |
                        (byte(i + 2) & 0x3Fu);
    i += 3;
    return cp >= 0x800 ? cp : kInvalidCp;
  }
  if ((b0 & 0xF8) == 0xF0 && cont(i + 1) && cont(i + 2) && cont(i + 3)) {
    const char32_t cp = ((b0 & 0x07u) << 18) | ((byte(i + 1) & 0x3Fu) << 12) |
                        ((byte(i + 2) & 0x3Fu) << 6) | (byte(i + 3) & 0x3Fu);
    i += 4;
    return (cp >= 0x10000 && cp <= 0x10FFFF) ? cp : kInvalidCp;
  }
  ++i;
  return kInvalidCp;
}

inline void encode_utf8(char32_t cp, std::string& out) {
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

/// Lowercases ASCII, Latin-1 and Latin Extended-A letters; everything else
/// passes through unchanged.
inline char32_t lower_codepoint(char32_t cp) {
  if (cp >= 'A' && cp <= 'Z') return cp + 0x20;
  if (cp >= 0x00C0 && cp <= 0x00DE && cp != 0x00D7) return cp + 0x20;
  if ((cp >= 0x0100 && cp <= 0x0137) || (cp >= 0x014A && cp <= 0x0177)) {
    return (cp % 2 == 0) ? cp + 1 : cp;
  }
  if (cp >= 0x0139 && cp <= 0x0148) {
    return (cp % 2 == 1) ? cp + 1 : cp;
  }
  if (cp == 0x0178) return 0x00FF;
  if (cp >= 0x0179 && cp <= 0x017E) {
    return (cp % 2 == 1) ? cp + 1 : cp;
  }
  return cp;
}

/// Canonical composition for the Latin combining diacritics that actually
/// occur in European hashtags (grave, acute, circumflex, tilde, diaeresis,
/// ring, cedilla). Applied after lowercasing, so only lowercase bases matter.
/// Returns 0 when the pair has no precomposed form.
inline char32_t compose_latin(char32_t base, char32_t mark) {
  switch (mark) {
    case 0x0300:  // grave
      switch (base) {
        case 'a': return 0x00E0;
        case 'e': return 0x00E8;
        case 'i': return 0x00EC;
        case 'o': return 0x00F2;
        case 'u': return 0x00F9;
        default: return 0;
      }
    case 0x0301:  // acute
      switch (base) {
        case 'a': return 0x00E1;
        case 'e': return 0x00E9;
        case 'i': return 0x00ED;
        case 'o': return 0x00F3;
        case 'u': return 0x00FA;
        case 'y': return 0x00FD;
        default: return 0;
      }
    case 0x0302:  // circumflex
      switch (base) {
        case 'a': return 0x00E2;
        case 'e': return 0x00EA;
        case 'i': return 0x00EE;
        case 'o': return 0x00F4;
        case 'u': return 0x00FB;
        default: return 0;
      }
    case 0x0303:  // tilde
      switch (base) {
        case 'a': return 0x00E3;
        case 'n': return 0x00F1;
        case 'o': return 0x00F5;
        default: return 0;
      }
    case 0x0308:  // diaeresis
      switch (base) {
        case 'a': return 0x00E4;
        case 'e': return 0x00EB;
        case 'i': return 0x00EF;
        case 'o': return 0x00F6;
        case 'u': return 0x00FC;
        case 'y': return 0x00FF;
        default: return 0;
      }
    case 0x030A:  // ring above
      return base == 'a' ? 0x00E5 : 0;
    case 0x0327:  // cedilla
      return base == 'c' ? 0x00E7 : 0;
    default:
      return 0;
  }
}

}  // namespace detail

/// Lowercases a UTF-8 string and composes common Latin base+diacritic
/// sequences into their precomposed forms, so that the composed and
/// decomposed spellings of the same tag compare equal.
inline std::string normalize_text(std::string_view input) {
  std::vector<char32_t> cps;
  cps.reserve(input.size());
  std::size_t i = 0;
  while (i < input.size()) {
    cps.push_back(detail::lower_codepoint(detail::decode_utf8(input, i)));
  }
  std::string out;
  out.reserve(input.size());
  for (std::size_t k = 0; k < cps.size(); ++k) {
    char32_t cp = cps[k];
    while (k + 1 < cps.size()) {
      const char32_t composed = detail::compose_latin(cp, cps[k + 1]);
      if (composed == 0) break;
      cp = composed;
      ++k;
    }
    detail::encode_utf8(cp, out);
  }
  return out;
}

/// Hashtag normal form: trimmed, leading '#' stripped, lowercased, composed.
/// Returns an empty string when nothing is left.
inline std::string normalize_hashtag(std::string_view raw) {
  std::size_t begin = 0;
  std::size_t end = raw.size();
  while (begin < end && (raw[begin] == ' ' || raw[begin] == '\t' ||
                         raw[begin] == '\r' || raw[begin] == '\n')) {
    ++begin;
  }
  while (end > begin && (raw[end - 1] == ' ' || raw[end - 1] == '\t' ||
                         raw[end - 1] == '\r' || raw[end - 1] == '\n')) {
    --end;
  }
  while (begin < end && raw[begin] == '#') ++begin;
  return normalize_text(raw.substr(begin, end - begin));
}

}  // namespace temponet
