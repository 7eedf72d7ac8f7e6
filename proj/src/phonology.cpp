// Feature table parsing and the analyses built on it. The builtin table is
// embedded from data/ipa_features.tsv and data/ipa_modifiers.tsv at build
// time; external files with the same layout can replace it.

#include "pter/phonology.hpp"

#include <algorithm>

#include "file_util.hpp"
#include "pter/alignment.hpp"
#include "pter/errors.hpp"
#include "pter/unicode.hpp"

namespace pter {

namespace detail {
#include "phonology_data.inc"
}

namespace {

std::vector<std::string_view> split_lines(std::string_view text) {
    std::vector<std::string_view> lines;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos) eol = text.size();
        std::string_view line = text.substr(pos, eol - pos);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        lines.push_back(line);
        pos = eol + 1;
    }
    return lines;
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t pos = 0;
    while (true) {
        std::size_t tab = line.find('\t', pos);
        if (tab == std::string_view::npos) {
            fields.push_back(line.substr(pos));
            break;
        }
        fields.push_back(line.substr(pos, tab - pos));
        pos = tab + 1;
    }
    return fields;
}

std::optional<std::string> optional_field(std::string_view field) {
    if (field == "-" || field.empty()) return std::nullopt;
    return std::string(field);
}

bool is_tone_contour_text(std::string_view text) {
    const std::u32string cps = uni::decode_utf8(text);
    if (cps.empty()) return false;
    return std::all_of(cps.begin(), cps.end(),
                       [](char32_t cp) { return cp >= 0x02E5 && cp <= 0x02E9; });
}

// Counts a slot pair as differing when exactly one side is set or both are
// set to different values.
template <typename T>
std::size_t slot_diff(const std::optional<T>& a, const std::optional<T>& b) {
    if (a.has_value() != b.has_value()) return 1;
    if (a && *a != *b) return 1;
    return 0;
}

}  // namespace

const FeatureTable& FeatureTable::builtin() {
    static const FeatureTable table = parse(detail::kBuiltinFeaturesTsv,
                                            detail::kBuiltinModifiersTsv, "builtin features",
                                            "builtin modifiers");
    return table;
}

FeatureTable FeatureTable::load(const std::string& features_path,
                                const std::string& modifiers_path) {
    return parse(detail::read_file(features_path), detail::read_file(modifiers_path),
                 features_path, modifiers_path);
}

FeatureTable FeatureTable::parse(std::string_view features_tsv, std::string_view modifiers_tsv,
                                 std::string_view features_name,
                                 std::string_view modifiers_name) {
    FeatureTable table;

    const std::vector<std::string_view> feature_lines = split_lines(features_tsv);
    for (std::size_t i = 0; i < feature_lines.size(); ++i) {
        std::string_view line = feature_lines[i];
        if (line.empty() || line.front() == '#') continue;
        const auto loc = [&] {
            return std::string(features_name) + ":" + std::to_string(i + 1);
        };
        const std::vector<std::string_view> f = split_fields(line);
        if (f.size() != 8) {
            throw input_error(loc() + ": expected 8 tab-separated fields, got " +
                              std::to_string(f.size()));
        }
        ArticulatoryFeatures feats;
        if (f[1] == "consonant") {
            feats.klass = SoundClass::Consonant;
        } else if (f[1] == "vowel") {
            feats.klass = SoundClass::Vowel;
        } else {
            throw input_error(loc() + ": unknown class \"" + std::string(f[1]) + "\"");
        }
        feats.manner = optional_field(f[2]);
        feats.place = optional_field(f[3]);
        feats.voicing = optional_field(f[4]);
        feats.height = optional_field(f[5]);
        feats.backness = optional_field(f[6]);
        feats.rounding = optional_field(f[7]);
        if (feats.klass == SoundClass::Consonant) {
            if (!feats.manner || !feats.place) {
                throw input_error(loc() + ": consonant rows need manner and place");
            }
            if (feats.height || feats.backness || feats.rounding) {
                throw input_error(loc() + ": consonant rows must leave vowel fields \"-\"");
            }
        } else {
            if (!feats.height || !feats.backness || !feats.rounding) {
                throw input_error(loc() + ": vowel rows need height, backness, and rounding");
            }
            if (feats.manner || feats.place || feats.voicing) {
                throw input_error(loc() + ": vowel rows must leave consonant fields \"-\"");
            }
        }
        const std::string symbol(f[0]);
        if (symbol.empty()) throw input_error(loc() + ": empty symbol");
        if (!table.entries_.emplace(symbol, std::move(feats)).second) {
            throw input_error(loc() + ": duplicate symbol \"" + symbol + "\"");
        }
    }

    const std::vector<std::string_view> rule_lines = split_lines(modifiers_tsv);
    for (std::size_t i = 0; i < rule_lines.size(); ++i) {
        std::string_view line = rule_lines[i];
        if (line.empty() || line.front() == '#') continue;
        const auto loc = [&] {
            return std::string(modifiers_name) + ":" + std::to_string(i + 1);
        };
        const std::vector<std::string_view> f = split_fields(line);
        if (f.size() != 2) {
            throw input_error(loc() + ": expected 2 tab-separated fields, got " +
                              std::to_string(f.size()));
        }
        ModifierRule rule;
        std::string_view spec = f[1];
        if (spec.starts_with("mark:")) {
            rule.kind = ModifierRule::Kind::Mark;
            rule.value = std::string(spec.substr(5));
        } else if (spec.starts_with("set:")) {
            std::string_view assignment = spec.substr(4);
            const std::size_t eq = assignment.find('=');
            if (eq == std::string_view::npos) {
                throw input_error(loc() + ": set rule needs FIELD=VALUE");
            }
            std::string_view field = assignment.substr(0, eq);
            if (field == "voicing") {
                rule.kind = ModifierRule::Kind::VoicingOverride;
            } else if (field == "place") {
                rule.kind = ModifierRule::Kind::PlaceOverride;
            } else if (field == "manner") {
                rule.kind = ModifierRule::Kind::MannerOverride;
            } else {
                throw input_error(loc() + ": cannot override field \"" + std::string(field) +
                                  "\"");
            }
            rule.value = std::string(assignment.substr(eq + 1));
        } else {
            throw input_error(loc() + ": rule must start with \"mark:\" or \"set:\"");
        }
        if (rule.value.empty()) throw input_error(loc() + ": empty rule value");
        const std::string symbol(f[0]);
        if (symbol.empty()) throw input_error(loc() + ": empty symbol");
        if (!table.rules_.emplace(symbol, std::move(rule)).second) {
            throw input_error(loc() + ": duplicate modifier \"" + symbol + "\"");
        }
    }

    return table;
}

const ArticulatoryFeatures* FeatureTable::find(std::string_view base_symbol) const {
    const auto it = entries_.find(std::string(base_symbol));
    return it == entries_.end() ? nullptr : &it->second;
}

const ArticulatoryFeatures& FeatureTable::lookup(std::string_view base_symbol) const {
    const ArticulatoryFeatures* found = find(base_symbol);
    if (found == nullptr) {
        throw input_error("unknown phone \"" + std::string(base_symbol) +
                          "\": no feature table entry");
    }
    return *found;
}

std::optional<ModifierRule> FeatureTable::find_modifier(std::string_view modifier_text) const {
    if (is_tone_contour_text(modifier_text)) {
        return ModifierRule{ModifierRule::Kind::Mark, "tone:" + std::string(modifier_text)};
    }
    const auto it = rules_.find(std::string(modifier_text));
    if (it == rules_.end()) return std::nullopt;
    return it->second;
}

ArticulatoryFeatures lookup(const Token& base, const FeatureTable& table) {
    return table.lookup(base.text);
}

ArticulatoryFeatures apply_modifiers(ArticulatoryFeatures features, const std::vector<Token>& mods,
                                     const FeatureTable& table) {
    for (const Token& mod : mods) {
        const std::optional<ModifierRule> rule = table.find_modifier(mod.text);
        if (!rule) {
            throw input_error("unknown modifier \"" + mod.text + "\": no modifier rule");
        }
        switch (rule->kind) {
            case ModifierRule::Kind::Mark: features.marks.insert(rule->value); break;
            case ModifierRule::Kind::VoicingOverride: features.voicing = rule->value; break;
            case ModifierRule::Kind::PlaceOverride: features.place = rule->value; break;
            case ModifierRule::Kind::MannerOverride: features.manner = rule->value; break;
        }
    }
    return features;
}

std::size_t feature_distance(const ArticulatoryFeatures& a, const ArticulatoryFeatures& b) {
    std::size_t d = a.klass == b.klass ? 0 : 1;
    d += slot_diff(a.manner, b.manner);
    d += slot_diff(a.place, b.place);
    d += slot_diff(a.voicing, b.voicing);
    d += slot_diff(a.height, b.height);
    d += slot_diff(a.backness, b.backness);
    d += slot_diff(a.rounding, b.rounding);
    for (const std::string& mark : a.marks) d += b.marks.count(mark) == 0 ? 1 : 0;
    for (const std::string& mark : b.marks) d += a.marks.count(mark) == 0 ? 1 : 0;
    return d;
}

std::string Phone::text() const {
    std::string out = base.text;
    for (const Token& mod : modifiers) out += mod.text;
    return out;
}

ArticulatoryFeatures phone_features(const Phone& p, const FeatureTable& table) {
    return apply_modifiers(table.lookup(p.base.text), p.modifiers, table);
}

std::vector<Phone> group_phones(const std::vector<Token>& tokens) {
    std::vector<Phone> phones;
    for (const Token& token : tokens) {
        if (token.role == TokenRole::Base) {
            phones.push_back(Phone{token, {}});
        } else if (!phones.empty()) {
            phones.back().modifiers.push_back(token);
        }
    }
    return phones;
}

NearestPhone nearest_phone(const Phone& p, const std::vector<Phone>& pool,
                           const FeatureTable& table) {
    if (pool.empty()) throw config_error("nearest_phone needs a non-empty pool");
    const ArticulatoryFeatures target = phone_features(p, table);
    const Phone* best = nullptr;
    std::size_t best_distance = 0;
    std::string best_text;
    for (const Phone& candidate : pool) {
        const std::size_t d = feature_distance(target, phone_features(candidate, table));
        std::string text = candidate.text();
        if (best == nullptr || d < best_distance || (d == best_distance && text < best_text)) {
            best = &candidate;
            best_distance = d;
            best_text = std::move(text);
        }
    }
    return {*best, best_distance};
}

bool is_valid_combination(const std::vector<Token>& tokens, const FeatureTable& table) {
    if (tokens.empty()) return true;
    bool restricted_modifier = false;
    bool syllabic = false;
    for (std::size_t i = 1; i < tokens.size(); ++i) {
        const Token& mod = tokens[i];
        if (mod.role == TokenRole::ToneContour || mod.role == TokenRole::Length) {
            restricted_modifier = true;
        }
        const std::optional<ModifierRule> rule = table.find_modifier(mod.text);
        if (rule && rule->kind == ModifierRule::Kind::Mark && rule->value == "syllabic") {
            syllabic = true;
        }
    }
    if (!restricted_modifier) return true;
    if (tokens.front().role != TokenRole::Base) return true;
    const ArticulatoryFeatures* base = table.find(tokens.front().text);
    if (base == nullptr) return true;
    return base->klass == SoundClass::Vowel || syllabic;
}

ToneInsertionReport tone_insertion_report(const std::vector<Alignment>& alignments,
                                          bool ref_is_tonal, const FeatureTable& table,
                                          const ToneInsertionOptions& options) {
    ToneInsertionReport report;
    report.ref_is_tonal = ref_is_tonal;
    for (const Alignment& a : alignments) {
        for (const EditStep& step : a.steps) {
            if (step.kind == EditKind::Insert &&
                step.hyp_token->role == TokenRole::ToneContour) {
                ++report.inserted_tone_tokens;
            }
            if (step.ref_token && step.ref_token->role == TokenRole::Base) {
                const ArticulatoryFeatures* feats = table.find(step.ref_token->text);
                if (feats != nullptr && feats->klass == SoundClass::Vowel) {
                    ++report.reference_vowels;
                }
            }
        }
        const std::vector<Token> hyp = a.hyp_tokens();
        for (const Phone& phone : group_phones(hyp)) {
            std::vector<Token> combo;
            combo.reserve(1 + phone.modifiers.size());
            combo.push_back(phone.base);
            combo.insert(combo.end(), phone.modifiers.begin(), phone.modifiers.end());
            if (!is_valid_combination(combo, table)) ++report.invalid_combinations;
        }
    }
    const double denominator =
        static_cast<double>(std::max<std::size_t>(report.reference_vowels, 1));
    report.insertions_per_100_vowels =
        100.0 * static_cast<double>(report.inserted_tone_tokens) / denominator;
    report.spurious_tonality =
        !ref_is_tonal && report.insertions_per_100_vowels > options.threshold_per_100_vowels;
    return report;
}

}  // namespace pter
