// Minimal Unicode support for IPA text: UTF-8 codec, NFD, mark classification.
// Tables are generated from the Unicode character database; see
// scripts/gen_unicode_data.py.

#include "pter/unicode.hpp"

#include <algorithm>
#include <cstdint>

#include "pter/errors.hpp"

namespace pter::uni {

#include "unicode_data.inc"

namespace {

constexpr char32_t kHangulSBase = 0xAC00;
constexpr char32_t kHangulLBase = 0x1100;
constexpr char32_t kHangulVBase = 0x1161;
constexpr char32_t kHangulTBase = 0x11A7;
constexpr int kHangulVCount = 21;
constexpr int kHangulTCount = 28;
constexpr int kHangulSCount = 11172;

const DecompEntry* find_decomposition(char32_t cp) {
    auto it = std::lower_bound(std::begin(kDecompEntries), std::end(kDecompEntries), cp,
                               [](const DecompEntry& e, char32_t c) { return e.cp < c; });
    if (it != std::end(kDecompEntries) && it->cp == cp) return &*it;
    return nullptr;
}

void append_decomposed(char32_t cp, std::u32string& out) {
    if (cp >= kHangulSBase && cp < kHangulSBase + kHangulSCount) {
        char32_t index = cp - kHangulSBase;
        out.push_back(kHangulLBase + index / (kHangulVCount * kHangulTCount));
        out.push_back(kHangulVBase + (index % (kHangulVCount * kHangulTCount)) / kHangulTCount);
        char32_t trailing = index % kHangulTCount;
        if (trailing != 0) out.push_back(kHangulTBase + trailing);
        return;
    }
    if (const DecompEntry* e = find_decomposition(cp)) {
        for (std::uint8_t i = 0; i < e->length; ++i) {
            out.push_back(kDecompPool[e->offset + i]);
        }
        return;
    }
    out.push_back(cp);
}

}  // namespace

std::u32string decode_utf8(std::string_view text) {
    std::u32string out;
    out.reserve(text.size());
    std::size_t i = 0;
    const auto fail = [&](std::size_t at) -> Error {
        return input_error("invalid UTF-8 at byte offset " + std::to_string(at));
    };
    while (i < text.size()) {
        const auto b0 = static_cast<unsigned char>(text[i]);
        std::size_t len;
        char32_t cp;
        if (b0 < 0x80) {
            len = 1;
            cp = b0;
        } else if ((b0 & 0xE0) == 0xC0) {
            len = 2;
            cp = b0 & 0x1F;
        } else if ((b0 & 0xF0) == 0xE0) {
            len = 3;
            cp = b0 & 0x0F;
        } else if ((b0 & 0xF8) == 0xF0) {
            len = 4;
            cp = b0 & 0x07;
        } else {
            throw fail(i);
        }
        if (i + len > text.size()) throw fail(i);
        for (std::size_t k = 1; k < len; ++k) {
            const auto b = static_cast<unsigned char>(text[i + k]);
            if ((b & 0xC0) != 0x80) throw fail(i);
            cp = (cp << 6) | (b & 0x3F);
        }
        // Reject overlong forms, surrogates, and out-of-range values.
        static constexpr char32_t kMinByLen[5] = {0, 0, 0x80, 0x800, 0x10000};
        if (cp < kMinByLen[len] || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
            throw fail(i);
        }
        out.push_back(cp);
        i += len;
    }
    return out;
}

std::string encode_utf8(char32_t cp) {
    std::string out;
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
    return out;
}

std::string encode_utf8(std::u32string_view codepoints) {
    std::string out;
    out.reserve(codepoints.size());
    for (char32_t cp : codepoints) out += encode_utf8(cp);
    return out;
}

std::uint8_t combining_class(char32_t cp) {
    auto it = std::lower_bound(std::begin(kCombiningClasses), std::end(kCombiningClasses), cp,
                               [](const CombiningClassEntry& e, char32_t c) { return e.cp < c; });
    if (it != std::end(kCombiningClasses) && it->cp == cp) return it->ccc;
    return 0;
}

bool is_combining_mark(char32_t cp) {
    auto it = std::upper_bound(std::begin(kMnRanges), std::end(kMnRanges), cp,
                               [](char32_t c, const CodepointRange& r) { return c < r.first; });
    if (it == std::begin(kMnRanges)) return false;
    --it;
    return cp >= it->first && cp <= it->last;
}

std::u32string nfd(std::u32string_view codepoints) {
    std::u32string out;
    out.reserve(codepoints.size());
    for (char32_t cp : codepoints) append_decomposed(cp, out);

    // Canonical ordering: stable sort of each nonzero-ccc run. Runs are
    // short, so adjacent swaps are fine.
    for (std::size_t i = 1; i < out.size(); ++i) {
        std::uint8_t ccc = combining_class(out[i]);
        if (ccc == 0) continue;
        std::size_t j = i;
        while (j > 0) {
            std::uint8_t prev = combining_class(out[j - 1]);
            if (prev == 0 || prev <= ccc) break;
            std::swap(out[j - 1], out[j]);
            --j;
        }
    }
    return out;
}

bool is_whitespace(char32_t cp) {
    switch (cp) {
        case 0x0009: case 0x000A: case 0x000B: case 0x000C: case 0x000D:
        case 0x0020: case 0x0085: case 0x00A0: case 0x1680:
        case 0x2028: case 0x2029: case 0x202F: case 0x205F: case 0x3000:
            return true;
        default:
            return cp >= 0x2000 && cp <= 0x200A;
    }
}

std::string codepoint_name(char32_t cp) {
    static const char* kHex = "0123456789ABCDEF";
    std::string digits;
    for (char32_t v = cp; v != 0; v >>= 4) digits.insert(digits.begin(), kHex[v & 0xF]);
    while (digits.size() < 4) digits.insert(digits.begin(), '0');
    return "U+" + digits;
}

}  // namespace pter::uni
