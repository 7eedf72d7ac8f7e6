// IPA text normalization and segmentation into phonetic tokens.

#include "pter/ipa.hpp"

#include <algorithm>
#include <set>
#include <string_view>

#include "pter/errors.hpp"
#include "pter/unicode.hpp"

namespace pter {

namespace detail {
#include "phonology_data.inc"
}

namespace {

constexpr char32_t kToneLetterFirst = 0x02E5;  // ˥
constexpr char32_t kToneLetterLast = 0x02E9;   // ˩
constexpr char32_t kLengthLong = 0x02D0;       // ː
constexpr char32_t kLengthHalfLong = 0x02D1;   // ˑ
constexpr char32_t kStressPrimary = 0x02C8;    // ˈ
constexpr char32_t kStressSecondary = 0x02CC;  // ˌ
constexpr char32_t kTieBarAbove = 0x0361;
constexpr char32_t kTieBarBelow = 0x035C;

bool is_tone_letter(char32_t cp) { return cp >= kToneLetterFirst && cp <= kToneLetterLast; }

// The combining marks and spacing modifier letters the tokenizer accepts
// without complaint. Everything else that still classifies leads to an
// unknown-symbol report.
bool is_known_combining(char32_t cp) { return cp >= 0x0300 && cp <= 0x036F; }

bool is_known_spacing_modifier(char32_t cp) {
    return (cp >= 0x02B0 && cp <= 0x02FF) || cp == 0x207F;  // ⁿ
}

const std::set<std::string>& base_symbol_set() {
    static const std::set<std::string> symbols = [] {
        std::set<std::string> out;
        std::string_view tsv = detail::kBuiltinFeaturesTsv;
        std::size_t pos = 0;
        while (pos < tsv.size()) {
            std::size_t eol = tsv.find('\n', pos);
            if (eol == std::string_view::npos) eol = tsv.size();
            std::string_view line = tsv.substr(pos, eol - pos);
            pos = eol + 1;
            if (line.empty() || line.front() == '#') continue;
            std::size_t tab = line.find('\t');
            if (tab == std::string_view::npos) continue;
            out.emplace(line.substr(0, tab));
        }
        return out;
    }();
    return symbols;
}

struct CpClass {
    TokenRole role;
    bool known;
};

CpClass classify_cp(char32_t cp) {
    if (is_tone_letter(cp)) return {TokenRole::ToneContour, true};
    if (cp == kLengthLong || cp == kLengthHalfLong) return {TokenRole::Length, true};
    if (cp == kStressPrimary || cp == kStressSecondary) return {TokenRole::Stress, true};
    if (uni::is_combining_mark(cp)) return {TokenRole::Diacritic, is_known_combining(cp)};
    if (is_known_spacing_modifier(cp)) return {TokenRole::Diacritic, true};
    if (base_symbol_set().count(uni::encode_utf8(cp)) > 0) return {TokenRole::Base, true};
    return {TokenRole::Base, false};
}

}  // namespace

std::string_view role_name(TokenRole role) {
    switch (role) {
        case TokenRole::Base: return "base";
        case TokenRole::Diacritic: return "diacritic";
        case TokenRole::ToneContour: return "tone";
        case TokenRole::Stress: return "stress";
        case TokenRole::Length: return "length";
        case TokenRole::Separator: return "separator";
    }
    return "?";
}

std::string TokenSequence::joined() const {
    std::string out;
    auto boundary = word_boundaries.begin();
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (boundary != word_boundaries.end() && *boundary == i) {
            if (i > 0) out += ' ';
            ++boundary;
        }
        out += tokens[i].text;
    }
    return out;
}

std::string normalize(std::string_view raw) {
    std::u32string cps = uni::nfd(uni::decode_utf8(raw));

    std::u32string out;
    out.reserve(cps.size());
    bool pending_space = false;
    for (char32_t cp : cps) {
        if (cp == kTieBarAbove || cp == kTieBarBelow) continue;
        if (uni::is_whitespace(cp)) {
            pending_space = !out.empty();
            continue;
        }
        if (pending_space) {
            out.push_back(U' ');
            pending_space = false;
        }
        out.push_back(cp);
    }
    return uni::encode_utf8(out);
}

TokenSequence tokenize(std::string_view text, std::string utterance_id,
                       const TokenizerOptions& options, std::vector<std::string>* warnings) {
    const std::string norm = normalize(text);
    if (norm != text && warnings != nullptr) {
        warnings->push_back("input was not normalized; applied normalization before tokenizing" +
                            (utterance_id.empty() ? "" : " (utterance " + utterance_id + ")"));
    }
    const std::u32string cps = uni::decode_utf8(norm);

    TokenSequence seq;
    seq.utterance_id = std::move(utterance_id);
    bool pending_boundary = false;
    std::size_t i = 0;
    while (i < cps.size()) {
        if (cps[i] == U' ') {
            pending_boundary = true;
            ++i;
            continue;
        }

        Token token;
        if (is_tone_letter(cps[i])) {
            std::size_t j = i;
            while (j < cps.size() && is_tone_letter(cps[j])) ++j;
            token.text = uni::encode_utf8(std::u32string_view(cps).substr(i, j - i));
            token.role = TokenRole::ToneContour;
            i = j;
        } else {
            const CpClass cls = classify_cp(cps[i]);
            if (!cls.known) {
                std::string message = "unknown symbol " + uni::codepoint_name(cps[i]) + " (\"" +
                                      uni::encode_utf8(cps[i]) + "\") at codepoint offset " +
                                      std::to_string(i) +
                                      (seq.utterance_id.empty() ? ""
                                                                : " in utterance " + seq.utterance_id);
                if (!options.permissive) throw input_error(message);
                if (warnings != nullptr) warnings->push_back(message + "; passed through");
            }
            token.text = uni::encode_utf8(cps[i]);
            token.role = cls.role;
            ++i;
        }

        if (pending_boundary && !seq.tokens.empty()) {
            seq.word_boundaries.push_back(seq.tokens.size());
        }
        pending_boundary = false;
        seq.tokens.push_back(std::move(token));
    }
    return seq;
}

TokenRole classify_token(std::string_view token_text) {
    const std::u32string cps = uni::decode_utf8(token_text);
    if (cps.empty()) throw input_error("cannot classify an empty token");
    if (std::all_of(cps.begin(), cps.end(), [](char32_t c) { return uni::is_whitespace(c); })) {
        return TokenRole::Separator;
    }
    if (std::all_of(cps.begin(), cps.end(), is_tone_letter)) return TokenRole::ToneContour;
    if (cps.size() == 1) return classify_cp(cps[0]).role;
    return TokenRole::Base;
}

Token make_token(std::string_view text) {
    return Token{std::string(text), classify_token(text)};
}

bool is_known_token_text(std::string_view text) {
    const std::u32string cps = uni::decode_utf8(text);
    if (cps.empty()) return false;
    if (std::all_of(cps.begin(), cps.end(), is_tone_letter)) return true;
    return cps.size() == 1 && classify_cp(cps[0]).known;
}

const std::vector<std::string>& ipa_base_symbols() {
    static const std::vector<std::string> symbols(base_symbol_set().begin(),
                                                  base_symbol_set().end());
    return symbols;
}

}  // namespace pter
