// Articulatory feature database: base-symbol features, modifier effects,
// feature distance, nearest-phone search, and tonality diagnostics.

#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "pter/ipa.hpp"

namespace pter {

struct Alignment;

enum class SoundClass { Consonant, Vowel };

// Feature categories are kept as interned strings straight from the data
// file; the analyses group and compare them, they never enumerate them.
struct ArticulatoryFeatures {
    SoundClass klass = SoundClass::Consonant;
    std::optional<std::string> manner;
    std::optional<std::string> place;
    std::optional<std::string> voicing;
    std::optional<std::string> height;
    std::optional<std::string> backness;
    std::optional<std::string> rounding;
    std::set<std::string> marks;

    friend bool operator==(const ArticulatoryFeatures&, const ArticulatoryFeatures&) = default;
};

struct ModifierRule {
    enum class Kind { Mark, VoicingOverride, PlaceOverride, MannerOverride };
    Kind kind = Kind::Mark;
    std::string value;
};

class FeatureTable {
  public:
    // The table compiled into the library from data/. Never fails.
    static const FeatureTable& builtin();
    static FeatureTable load(const std::string& features_path, const std::string& modifiers_path);
    static FeatureTable parse(std::string_view features_tsv, std::string_view modifiers_tsv,
                              std::string_view features_name = "features",
                              std::string_view modifiers_name = "modifiers");

    const ArticulatoryFeatures* find(std::string_view base_symbol) const;
    const ArticulatoryFeatures& lookup(std::string_view base_symbol) const;

    // Tone-contour tokens resolve dynamically to a mark "tone:<contour>";
    // everything else must appear in the modifier rules file.
    std::optional<ModifierRule> find_modifier(std::string_view modifier_text) const;

    const std::map<std::string, ArticulatoryFeatures>& entries() const { return entries_; }
    const std::map<std::string, ModifierRule>& modifier_rules() const { return rules_; }

  private:
    std::map<std::string, ArticulatoryFeatures> entries_;
    std::map<std::string, ModifierRule> rules_;
};

ArticulatoryFeatures lookup(const Token& base, const FeatureTable& table);

ArticulatoryFeatures apply_modifiers(ArticulatoryFeatures features, const std::vector<Token>& mods,
                                     const FeatureTable& table);

// Number of differing feature slots (klass, manner, place, voicing, height,
// backness, rounding) plus the symmetric difference of the mark sets.
std::size_t feature_distance(const ArticulatoryFeatures& a, const ArticulatoryFeatures& b);

// A base token plus the modifier tokens attached to it.
struct Phone {
    Token base;
    std::vector<Token> modifiers;

    std::string text() const;
    friend bool operator==(const Phone&, const Phone&) = default;
};

ArticulatoryFeatures phone_features(const Phone& p, const FeatureTable& table);

// Groups a token sequence into phones: each Base token opens a phone and
// collects the non-Base tokens that follow it. Tokens before the first base
// are dropped (nothing to attach to).
std::vector<Phone> group_phones(const std::vector<Token>& tokens);

struct NearestPhone {
    Phone phone;
    std::size_t distance = 0;
};

// Minimizes feature_distance over the pool; ties break on lexicographically
// smaller phone text. The pool must be non-empty.
NearestPhone nearest_phone(const Phone& p, const std::vector<Phone>& pool,
                           const FeatureTable& table);

// False iff a tone contour or length mark attaches to a consonant base with
// no syllabic mark among the modifiers. Bases missing from the table are
// given the benefit of the doubt.
bool is_valid_combination(const std::vector<Token>& tokens, const FeatureTable& table);

struct ToneInsertionOptions {
    double threshold_per_100_vowels = 5.0;
};

struct ToneInsertionReport {
    std::size_t inserted_tone_tokens = 0;
    std::size_t reference_vowels = 0;
    double insertions_per_100_vowels = 0.0;
    std::size_t invalid_combinations = 0;
    bool ref_is_tonal = false;
    bool spurious_tonality = false;

    friend bool operator==(const ToneInsertionReport&, const ToneInsertionReport&) = default;
};

// Counts hypothesis-side tone-contour insertions against the number of
// reference vowels and screens hypothesis phones for invalid combinations.
ToneInsertionReport tone_insertion_report(const std::vector<Alignment>& alignments,
                                          bool ref_is_tonal, const FeatureTable& table,
                                          const ToneInsertionOptions& options = {});

}  // namespace pter
