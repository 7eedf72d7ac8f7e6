#include <doctest.h>

#include <random>
#include <string>
#include <vector>

#include "pter/errors.hpp"
#include "pter/ipa.hpp"
#include "pter/unicode.hpp"

using namespace pter;

namespace {

std::vector<std::string> texts(const TokenSequence& seq) {
    std::vector<std::string> out;
    for (const Token& t : seq.tokens) out.push_back(t.text);
    return out;
}

}  // namespace

TEST_CASE("normalize removes tie bars") {
    CHECK(normalize("t͡ʃ") == "tʃ");
    CHECK(normalize("t͜ʃ") == "tʃ");
}

TEST_CASE("normalize leaves plain text alone") {
    CHECK(normalize("a") == "a");
    CHECK(normalize("pata") == "pata");
}

TEST_CASE("normalize collapses whitespace runs") {
    CHECK(normalize("aː  b") == "aː b");
    CHECK(normalize("a\t b") == "a b");
    CHECK(normalize("  a b  ") == "a b");
}

TEST_CASE("normalize decomposes precomposed letters") {
    // U+00E9 .. e + combining acute
    CHECK(normalize("é") == "é");
}

TEST_CASE("normalize is idempotent") {
    const std::vector<std::string> samples = {
        "t͡ʃa", "é  ø", "ma˥˩ pa", "  aː\tb  ", "n̩ː",
    };
    for (const std::string& s : samples) {
        const std::string once = normalize(s);
        CHECK(normalize(once) == once);
    }
}

TEST_CASE("normalize rejects malformed UTF-8 with a byte offset") {
    const std::string bad = std::string("ab") + char(0xFF) + "c";
    CHECK_THROWS_WITH_AS(normalize(bad), doctest::Contains("byte offset 2"), Error);
    try {
        normalize(bad);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Input);
    }
    // Overlong encoding of '/' and an unpaired surrogate are both malformed.
    CHECK_THROWS_AS(normalize(std::string("\xC0\xAF")), Error);
    CHECK_THROWS_AS(normalize(std::string("\xED\xA0\x80")), Error);
}

TEST_CASE("tokenize splits ejective coding into three symbols") {
    const TokenSequence seq = tokenize("tʃʼ");
    CHECK(texts(seq) == std::vector<std::string>{"t", "ʃ", "ʼ"});
    CHECK(seq.tokens[0].role == TokenRole::Base);
    CHECK(seq.tokens[1].role == TokenRole::Base);
    CHECK(seq.tokens[2].role == TokenRole::Diacritic);
}

TEST_CASE("tokenize keeps length marks separate") {
    const TokenSequence seq = tokenize("aː");
    CHECK(texts(seq) == std::vector<std::string>{"a", "ː"});
    CHECK(seq.tokens[1].role == TokenRole::Length);
}

TEST_CASE("tokenize makes a maximal tone run one token") {
    const TokenSequence seq = tokenize("a˥˥i");
    CHECK(texts(seq) == std::vector<std::string>{"a", "˥˥", "i"});
    CHECK(seq.tokens[1].role == TokenRole::ToneContour);

    // Runs of mixed tone letters still form one token.
    const TokenSequence run = tokenize("a˥˩˧");
    CHECK(texts(run) == std::vector<std::string>{"a", "˥˩˧"});
}

TEST_CASE("tokenize of empty input is empty") {
    const TokenSequence seq = tokenize("");
    CHECK(seq.tokens.empty());
    CHECK(seq.word_boundaries.empty());
}

TEST_CASE("tokenize separates words positionally") {
    const TokenSequence seq = tokenize("pa ta");
    CHECK(texts(seq) == std::vector<std::string>{"p", "a", "t", "a"});
    CHECK(seq.word_boundaries == std::vector<std::size_t>{2});
    CHECK(seq.joined() == "pa ta");
}

TEST_CASE("tokenize rejects unknown symbols with codepoint and offset") {
    std::vector<std::string> warnings;
    CHECK_THROWS_WITH_AS(tokenize("ab7c", "utt9"), doctest::Contains("U+0037"), Error);
    CHECK_THROWS_WITH_AS(tokenize("ab7c", "utt9"), doctest::Contains("utt9"), Error);
    try {
        tokenize("ab7c");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Input);
        CHECK(std::string(e.what()).find("offset 2") != std::string::npos);
    }
}

TEST_CASE("permissive tokenize passes unknown symbols through with a warning") {
    std::vector<std::string> warnings;
    TokenizerOptions options;
    options.permissive = true;
    const TokenSequence seq = tokenize("ab7c", "u", options, &warnings);
    CHECK(texts(seq) == std::vector<std::string>{"a", "b", "7", "c"});
    REQUIRE(warnings.size() == 1);
    CHECK(warnings[0].find("U+0037") != std::string::npos);
}

TEST_CASE("tokenize normalizes unnormalized input and says so") {
    std::vector<std::string> warnings;
    const TokenSequence seq = tokenize("t͡ʃé", "u", {}, &warnings);
    CHECK(texts(seq) == std::vector<std::string>{"t", "ʃ", "e", "́"});
    REQUIRE(warnings.size() == 1);
    CHECK(warnings[0].find("normaliz") != std::string::npos);
}

TEST_CASE("classify_token role table") {
    CHECK(classify_token("ˈ") == TokenRole::Stress);
    CHECK(classify_token("ˌ") == TokenRole::Stress);
    CHECK(classify_token("˨˨") == TokenRole::ToneContour);
    CHECK(classify_token("˥") == TokenRole::ToneContour);
    CHECK(classify_token("ʼ") == TokenRole::Diacritic);
    CHECK(classify_token("ʰ") == TokenRole::Diacritic);
    CHECK(classify_token("́") == TokenRole::Diacritic);
    CHECK(classify_token("ː") == TokenRole::Length);
    CHECK(classify_token("ˑ") == TokenRole::Length);
    CHECK(classify_token("a") == TokenRole::Base);
    CHECK(classify_token(" ") == TokenRole::Separator);
    // Pre-tokenized text the tokenizer would not produce falls back to Base.
    CHECK(classify_token("xyz") == TokenRole::Base);
}

TEST_CASE("is_known_token_text matches the tokenizer repertoire") {
    CHECK(is_known_token_text("a"));
    CHECK(is_known_token_text("˥˩"));
    CHECK(is_known_token_text("ʰ"));
    CHECK(is_known_token_text("ː"));
    CHECK_FALSE(is_known_token_text("7"));
    CHECK_FALSE(is_known_token_text("ab"));
    CHECK_FALSE(is_known_token_text(""));
}

TEST_CASE("ipa_base_symbols is nonempty and sorted") {
    const std::vector<std::string>& bases = ipa_base_symbols();
    REQUIRE(!bases.empty());
    CHECK(std::is_sorted(bases.begin(), bases.end()));
    for (const std::string& b : bases) CHECK(classify_token(b) == TokenRole::Base);
}

namespace {

// Mixes bases, combining and spacing diacritics, tone letters, stress,
// length, tie bars, precomposed letters, and whitespace.
std::string random_ipa_string(std::mt19937& rng) {
    static const std::vector<std::string> pieces = {
        "a",      "e",      "i",      "p",  "t",  "k",  "s",  "m",
        "ʃ",      "ʼ",      "ʰ",      "ʷ",  "ː",  "ˑ",  "ˈ",  "ˌ",
        "˥",      "˩",      "˧",      "˨",  "˦",  "́", "̈", "̥",
        "͡", "é", "ø", " ",  "  ", "\t",
    };
    std::uniform_int_distribution<std::size_t> len(0, 12);
    std::uniform_int_distribution<std::size_t> pick(0, pieces.size() - 1);
    std::string out;
    const std::size_t n = len(rng);
    for (std::size_t i = 0; i < n; ++i) out += pieces[pick(rng)];
    return out;
}

}  // namespace

TEST_CASE("round-trip and idempotence over a fuzz sample") {
    std::mt19937 rng(20240817);
    for (int i = 0; i < 2000; ++i) {
        const std::string raw = random_ipa_string(rng);
        const std::string norm = normalize(raw);
        const TokenSequence seq = tokenize(norm);

        // I1: joining with separators restored reproduces the normalized text.
        CHECK(seq.joined() == norm);

        // I4: token text lengths sum to the normalized length minus separators.
        std::size_t token_bytes = 0;
        for (const Token& t : seq.tokens) token_bytes += t.text.size();
        CHECK(token_bytes == norm.size() - seq.word_boundaries.size());

        // I2: retokenizing the joined text yields the identical token list.
        const TokenSequence again = tokenize(seq.joined());
        CHECK(again.tokens == seq.tokens);
        CHECK(again.word_boundaries == seq.word_boundaries);

        // I3: determinism.
        CHECK(tokenize(norm).tokens == seq.tokens);
    }
}
