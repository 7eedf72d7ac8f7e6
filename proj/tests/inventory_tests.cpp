#include <doctest.h>

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "pter/errors.hpp"
#include "pter/inventory.hpp"
#include "pter/ipa.hpp"

using namespace pter;

namespace {

const FeatureTable& table() { return FeatureTable::builtin(); }

std::vector<TokenSequence> corpus(const std::vector<std::string>& lines) {
    std::vector<TokenSequence> out;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        out.push_back(tokenize(lines[i], "u" + std::to_string(i)));
    }
    return out;
}

LanguageInventory inv_of(const std::string& language, const std::vector<std::string>& tokens) {
    LanguageInventory inv;
    inv.language = language;
    for (const std::string& t : tokens) inv.tokens[t] += 1;
    return inv;
}

}  // namespace

TEST_CASE("build_inventory counts and classifies") {
    const LanguageInventory inv = build_inventory(corpus({"pata"}), "toy", table());
    CHECK(inv.language == "toy");
    CHECK(inv.tokens.at("p") == 1);
    CHECK(inv.tokens.at("a") == 2);
    CHECK(inv.tokens.at("t") == 1);
    CHECK(inv.consonant_symbols == std::set<std::string>{"p", "t"});
    CHECK(inv.vowel_symbols == std::set<std::string>{"a"});
    CHECK(inv.modifier_symbols.empty());
    CHECK(inv.contains("a"));
    CHECK_FALSE(inv.contains("z"));
}

TEST_CASE("build_inventory of empty refs is empty") {
    const LanguageInventory inv = build_inventory({}, "toy", table());
    CHECK(inv.tokens.empty());
    CHECK(inv.vowel_symbols.empty());
    CHECK(inv.consonant_symbols.empty());
}

TEST_CASE("modifiers land in their own set") {
    const LanguageInventory inv = build_inventory(corpus({"tʼaː ˈma˥˩"}), "toy", table());
    CHECK(inv.modifier_symbols == std::set<std::string>{"ʼ", "ː", "ˈ", "˥˩"});
    CHECK(inv.vowel_symbols == std::set<std::string>{"a"});
    CHECK(inv.consonant_symbols == std::set<std::string>{"t", "m"});
    CHECK(inv.tokens.at("˥˩") == 1);
    // Vowel and consonant sets never overlap and never include modifiers.
    std::vector<std::string> overlap;
    std::set_intersection(inv.vowel_symbols.begin(), inv.vowel_symbols.end(),
                          inv.consonant_symbols.begin(), inv.consonant_symbols.end(),
                          std::back_inserter(overlap));
    CHECK(overlap.empty());
}

TEST_CASE("build_inventory propagates unknown bases") {
    // "7" never tokenizes strictly, so smuggle it in as a pre-tokenized token.
    TokenSequence seq;
    seq.utterance_id = "u0";
    seq.tokens = {make_token("7"), make_token("a")};
    CHECK_THROWS_WITH_AS(build_inventory({seq}, "toy", table()), doctest::Contains("7"), Error);

    std::vector<std::string> warnings;
    const LanguageInventory inv = build_inventory({seq}, "toy", table(), true, &warnings);
    CHECK(inv.unknown_symbols == std::set<std::string>{"7"});
    CHECK(inv.tokens.at("7") == 1);
    REQUIRE(warnings.size() == 1);
    CHECK(warnings[0].find("toy") != std::string::npos);
}

TEST_CASE("inventory counts match a naive recount and ignore order") {
    std::mt19937 rng(13);
    static const std::vector<std::string> words = {"pata", "keso", "mi˥lu", "tʼano", "saːre"};
    std::vector<std::string> lines;
    std::uniform_int_distribution<std::size_t> pick(0, words.size() - 1);
    for (int i = 0; i < 50; ++i) {
        lines.push_back(words[pick(rng)] + " " + words[pick(rng)]);
    }
    const LanguageInventory inv = build_inventory(corpus(lines), "toy", table());

    std::map<std::string, std::uint64_t> recount;
    for (const TokenSequence& seq : corpus(lines)) {
        for (const Token& t : seq.tokens) recount[t.text] += 1;
    }
    CHECK(inv.tokens == recount);

    std::vector<std::string> shuffled = lines;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    const LanguageInventory reordered = build_inventory(corpus(shuffled), "toy", table());
    CHECK(reordered.tokens == inv.tokens);
    CHECK(reordered.vowel_symbols == inv.vowel_symbols);
    CHECK(reordered.consonant_symbols == inv.consonant_symbols);
}

TEST_CASE("sharing_count counts containing inventories") {
    const std::vector<LanguageInventory> invs = {
        inv_of("L1", {"a", "b"}),
        inv_of("L2", {"b", "c"}),
        inv_of("L3", {"b"}),
    };
    CHECK(sharing_count("zz", invs) == 0);
    CHECK(sharing_count("a", invs) == 1);
    CHECK(sharing_count("b", invs) == 3);
    CHECK(sharing_count("c", invs) == 1);
}

TEST_CASE("sharing_count is monotone under added inventories") {
    std::vector<LanguageInventory> invs = {inv_of("L1", {"a", "b"})};
    const std::size_t before = sharing_count("a", invs);
    invs.push_back(inv_of("L2", {"a", "c"}));
    CHECK(sharing_count("a", invs) >= before);
    invs.push_back(inv_of("L3", {"c"}));
    CHECK(sharing_count("a", invs) >= before);
}

TEST_CASE("unique_phones splits singletons by language") {
    const std::vector<LanguageInventory> invs = {
        inv_of("L1", {"a", "b"}),
        inv_of("L2", {"b", "c"}),
    };
    const auto unique = unique_phones(invs);
    CHECK(unique.at("L1") == std::set<std::string>{"a"});
    CHECK(unique.at("L2") == std::set<std::string>{"c"});
}

TEST_CASE("identical inventories have no unique phones") {
    const std::vector<LanguageInventory> invs = {
        inv_of("L1", {"a", "b"}),
        inv_of("L2", {"a", "b"}),
    };
    const auto unique = unique_phones(invs);
    CHECK(unique.at("L1").empty());
    CHECK(unique.at("L2").empty());
}

TEST_CASE("unique_phones needs at least two inventories") {
    CHECK_THROWS_AS(unique_phones({inv_of("L1", {"a"})}), Error);
    CHECK_THROWS_AS(unique_phones({}), Error);
}

TEST_CASE("unique_phones agrees with sharing_count") {
    std::mt19937 rng(14);
    static const std::vector<std::string> pool = {"a", "b", "c", "d", "e", "f", "g", "h"};
    std::vector<LanguageInventory> invs;
    std::uniform_int_distribution<int> coin(0, 1);
    for (int lang = 0; lang < 5; ++lang) {
        std::vector<std::string> chosen;
        for (const std::string& t : pool) {
            if (coin(rng)) chosen.push_back(t);
        }
        invs.push_back(inv_of("L" + std::to_string(lang), chosen));
    }
    const auto unique = unique_phones(invs);

    std::size_t unique_total = 0;
    std::set<std::string> all_tokens;
    for (const LanguageInventory& inv : invs) {
        for (const auto& [text, count] : inv.tokens) {
            (void)count;
            all_tokens.insert(text);
        }
    }
    for (const auto& [language, tokens] : unique) {
        unique_total += tokens.size();
        for (const std::string& t : tokens) {
            CHECK(sharing_count(t, invs) == 1);
        }
    }
    for (const std::string& t : all_tokens) {
        const bool somewhere_unique = std::any_of(
            unique.begin(), unique.end(),
            [&t](const auto& entry) { return entry.second.count(t) > 0; });
        CHECK(somewhere_unique == (sharing_count(t, invs) == 1));
    }
    CHECK(unique_total <= all_tokens.size());
}
