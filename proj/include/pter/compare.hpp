// Cross-condition analyses: improvement arithmetic, sharing-count bins,
// feature-category aggregation, stability screening, and cross-language
// PTER distributions.

#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "pter/alignment.hpp"
#include "pter/inventory.hpp"

namespace pter {

enum class Condition { Mono, Cross, Multi };

std::string_view condition_name(Condition c);
std::optional<Condition> parse_condition(std::string_view name);

struct ConditionScores {
    std::string language;
    Condition condition = Condition::Mono;
    double corpus_pter = 0.0;  // ratio, not percent
    std::map<std::string, PhoneErrorStats> phone_stats;
    // Precomputed per-phone PTERs (ratios) for fixture tables that ship
    // rates instead of transcripts. Overlays phone_stats when both exist.
    std::map<std::string, double> phone_pter_override;

    std::optional<double> phone_pter(const std::string& token_text) const;
    // All tokens with a defined per-phone PTER, as token -> ratio.
    std::map<std::string, double> defined_phone_pters() const;
};

struct ExperimentTable {
    // language -> condition -> scores; the nested map keeps one row per
    // (language, condition) by construction.
    std::map<std::string, std::map<Condition, ConditionScores>> rows;
    std::vector<LanguageInventory> inventories;

    const ConditionScores* find(const std::string& language, Condition c) const;
    // Throws a configuration error naming the missing row.
    const ConditionScores& at(const std::string& language, Condition c) const;
};

struct BoxplotStats {
    std::size_t n = 0;
    double median = 0.0;
    double q1 = 0.0;
    double q3 = 0.0;
    double iqd = 0.0;
    double whisker_low = 0.0;
    double whisker_high = 0.0;
    std::vector<double> outliers;

    friend bool operator==(const BoxplotStats&, const BoxplotStats&) = default;
};

// Five-number summary with linearly interpolated quartiles and Tukey
// whiskers (furthest values within 1.5 IQD of the quartiles). Values
// outside the whiskers are listed as outliers. Needs n >= 1.
BoxplotStats boxplot_stats(std::vector<double> values);

// (base - other) * 100: positive when other improves on base.
double absolute_improvement(double base, double other);

// 100 * (base - other) / base. Throws when base is zero.
double relative_improvement(double base, double other);

struct SharingBin {
    BoxplotStats stats;
    // Clipped improvements in percentage points, in deterministic
    // (language, token) iteration order.
    std::vector<double> values;
    // (language, token) pairs with a defined from-condition PTER whose
    // to-condition PTER is undefined.
    std::size_t skipped = 0;
};

// Bins clipped absolute per-phone improvements (from -> to, percentage
// points) by the token's sharing count over the table's inventories.
// Tokens backed by counted stats need ref_count >= min_ref_count in the
// from condition; precomputed rates carry no counts and always pass.
std::map<std::size_t, SharingBin> improvement_by_sharing_count(const ExperimentTable& table,
                                                               Condition from, Condition to,
                                                               double clip_floor_pp = -100.0,
                                                               std::uint64_t min_ref_count = 1);

enum class FeatureAxis { Manner, Place };

struct GroupImprovement {
    double mean_relative = 0.0;  // percent
    std::size_t n = 0;           // contributing (language, token) pairs
};

// Mean per-phone relative improvement per manner or place category, over
// (language, token) pairs. Vowels form their own category on the manner
// axis and are skipped on the place axis. Pairs with an undefined PTER on
// either side, or a zero from-condition PTER, are skipped. Non-base tokens
// carry no features and are skipped. Unknown base symbols throw unless
// skip_unknown is set.
std::map<std::string, GroupImprovement> group_by_feature(const ExperimentTable& table,
                                                         FeatureAxis axis, Condition from,
                                                         Condition to, const FeatureTable& features,
                                                         bool skip_unknown = false);

// Tokens stable in a language: all three conditions present, per-phone
// PTER defined in each, and both |cross - mono| and |multi - mono| within
// threshold_pp percentage points. Languages missing a condition row are
// not considered. Tokens stable nowhere are absent from the result.
std::map<std::string, std::set<std::string>> stability_filter(const ExperimentTable& table,
                                                              double threshold_pp = 25.0);

// Per-condition distribution of per-phone PTER (in percent) across
// languages, for tokens whose sharing count is at least min_languages.
std::map<std::string, std::map<Condition, BoxplotStats>> cross_language_distribution(
    const ExperimentTable& table, std::size_t min_languages = 11);

}  // namespace pter
