// Per-language token inventories built from reference transcripts.

#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "pter/ipa.hpp"
#include "pter/phonology.hpp"

namespace pter {

struct LanguageInventory {
    std::string language;
    std::map<std::string, std::uint64_t> tokens;
    // Distinct base symbols by feature-table class. Modifier, tone, stress,
    // and length symbols are counted in tokens but kept in their own set so
    // the vowel/consonant tallies stay base-only.
    std::set<std::string> vowel_symbols;
    std::set<std::string> consonant_symbols;
    std::set<std::string> modifier_symbols;
    // Base symbols with no feature entry, retained in permissive mode.
    std::set<std::string> unknown_symbols;

    bool contains(const std::string& token_text) const {
        const auto it = tokens.find(token_text);
        return it != tokens.end() && it->second > 0;
    }
};

LanguageInventory build_inventory(const std::vector<TokenSequence>& refs, std::string language,
                                  const FeatureTable& table, bool permissive = false,
                                  std::vector<std::string>* warnings = nullptr);

// Number of inventories whose reference transcripts contain the token.
std::size_t sharing_count(const std::string& token_text,
                          const std::vector<LanguageInventory>& inventories);

// Tokens with sharing count exactly 1, grouped by their sole language.
// Needs at least two inventories to be meaningful.
std::map<std::string, std::set<std::string>> unique_phones(
    const std::vector<LanguageInventory>& inventories);

}  // namespace pter
