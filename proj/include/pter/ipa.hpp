#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace pter {

// One output-layer symbol: a base letter, one combining or spacing modifier,
// a maximal run of Chao tone letters, a stress mark, or a length mark.
enum class TokenRole {
    Base,
    Diacritic,
    ToneContour,
    Stress,
    Length,
    Separator,
};

std::string_view role_name(TokenRole role);

struct Token {
    std::string text;  // UTF-8, non-empty, no whitespace
    TokenRole role = TokenRole::Base;

    friend bool operator==(const Token&, const Token&) = default;
};

// Word boundaries are kept positionally: `word_boundaries` holds indices i
// such that a single separator falls between tokens[i-1] and tokens[i].
// Tokens themselves never contain whitespace.
struct TokenSequence {
    std::string utterance_id;
    std::vector<Token> tokens;
    std::vector<std::size_t> word_boundaries;

    /// Concatenated token texts with separators restored; equals the
    /// normalized source text the sequence was produced from.
    std::string joined() const;
};

struct TokenizerOptions {
    // Unknown symbols are errors by default; permissive mode keeps them as
    // pass-through tokens and reports a warning instead.
    bool permissive = false;
};

/// Canonical decomposition, tie-bar removal (affricates become two base
/// tokens), and whitespace-run collapse to single separators. Idempotent.
std::string normalize(std::string_view raw);

/// Segments normalized text into phonetic tokens. Input that is not yet
/// normalized is normalized first and a warning records that this happened.
TokenSequence tokenize(std::string_view text, std::string utterance_id = {},
                       const TokenizerOptions& options = {},
                       std::vector<std::string>* warnings = nullptr);

/// Role of a token's text; deterministic, total. Multi-codepoint text that is
/// not a tone-letter run classifies as Base (the pre-tokenized fallback).
TokenRole classify_token(std::string_view token_text);

/// Builds a token from pre-tokenized text using classify_token.
Token make_token(std::string_view text);

/// True when every codepoint of the text lies in the tokenizer's IPA
/// repertoire and the text forms a single well-formed token.
bool is_known_token_text(std::string_view text);

/// Single-codepoint base letters recognized by the tokenizer, sorted.
const std::vector<std::string>& ipa_base_symbols();

}  // namespace pter
