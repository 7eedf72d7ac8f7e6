#include "pter/inventory.hpp"

#include "pter/errors.hpp"

namespace pter {

LanguageInventory build_inventory(const std::vector<TokenSequence>& refs, std::string language,
                                  const FeatureTable& table, bool permissive,
                                  std::vector<std::string>* warnings) {
    LanguageInventory inv;
    inv.language = std::move(language);
    for (const TokenSequence& seq : refs) {
        for (const Token& token : seq.tokens) {
            ++inv.tokens[token.text];
            if (token.role != TokenRole::Base) {
                inv.modifier_symbols.insert(token.text);
                continue;
            }
            if (inv.vowel_symbols.count(token.text) > 0 ||
                inv.consonant_symbols.count(token.text) > 0 ||
                inv.unknown_symbols.count(token.text) > 0) {
                continue;
            }
            const ArticulatoryFeatures* feats = table.find(token.text);
            if (feats == nullptr) {
                if (!permissive) {
                    throw input_error("unknown phone \"" + token.text +
                                      "\" in reference transcripts of " + inv.language +
                                      (seq.utterance_id.empty()
                                           ? ""
                                           : " (utterance " + seq.utterance_id + ")"));
                }
                if (warnings != nullptr) {
                    warnings->push_back("language " + inv.language + ": base symbol \"" +
                                        token.text + "\" has no feature entry");
                }
                inv.unknown_symbols.insert(token.text);
            } else if (feats->klass == SoundClass::Vowel) {
                inv.vowel_symbols.insert(token.text);
            } else {
                inv.consonant_symbols.insert(token.text);
            }
        }
    }
    return inv;
}

std::size_t sharing_count(const std::string& token_text,
                          const std::vector<LanguageInventory>& inventories) {
    std::size_t count = 0;
    for (const LanguageInventory& inv : inventories) {
        if (inv.contains(token_text)) ++count;
    }
    return count;
}

std::map<std::string, std::set<std::string>> unique_phones(
    const std::vector<LanguageInventory>& inventories) {
    if (inventories.size() < 2) {
        throw config_error("unique_phones needs at least two language inventories");
    }
    std::map<std::string, std::size_t> owners;
    for (std::size_t i = 0; i < inventories.size(); ++i) {
        for (const auto& [text, count] : inventories[i].tokens) {
            if (count == 0) continue;
            const auto [it, inserted] = owners.emplace(text, i);
            if (!inserted && it->second != i) it->second = inventories.size();
        }
    }
    std::map<std::string, std::set<std::string>> result;
    for (const LanguageInventory& inv : inventories) result[inv.language];
    for (const auto& [text, owner] : owners) {
        if (owner < inventories.size()) result[inventories[owner].language].insert(text);
    }
    return result;
}

}  // namespace pter
