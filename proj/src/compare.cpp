#include "pter/compare.hpp"

#include <algorithm>
#include <cmath>

#include "pter/errors.hpp"

namespace pter {

namespace {

// Linear interpolation between order statistics: quantile q sits at rank
// q * (n - 1) of the sorted sample.
double quantile_sorted(const std::vector<double>& sorted, double q) {
    const double rank = q * static_cast<double>(sorted.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(rank);
    if (lo + 1 >= sorted.size()) return sorted.back();
    const double frac = rank - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

}  // namespace

std::string_view condition_name(Condition c) {
    switch (c) {
        case Condition::Mono: return "mono";
        case Condition::Cross: return "cross";
        case Condition::Multi: return "multi";
    }
    return "?";
}

std::optional<Condition> parse_condition(std::string_view name) {
    if (name == "mono") return Condition::Mono;
    if (name == "cross") return Condition::Cross;
    if (name == "multi") return Condition::Multi;
    return std::nullopt;
}

std::optional<double> ConditionScores::phone_pter(const std::string& token_text) const {
    const auto over = phone_pter_override.find(token_text);
    if (over != phone_pter_override.end()) return over->second;
    const auto it = phone_stats.find(token_text);
    if (it == phone_stats.end()) return std::nullopt;
    return it->second.pter();
}

std::map<std::string, double> ConditionScores::defined_phone_pters() const {
    std::map<std::string, double> out;
    for (const auto& [text, stats] : phone_stats) {
        const std::optional<double> rate = stats.pter();
        if (rate) out.emplace(text, *rate);
    }
    for (const auto& [text, rate] : phone_pter_override) out[text] = rate;
    return out;
}

const ConditionScores* ExperimentTable::find(const std::string& language, Condition c) const {
    const auto lang = rows.find(language);
    if (lang == rows.end()) return nullptr;
    const auto row = lang->second.find(c);
    return row == lang->second.end() ? nullptr : &row->second;
}

const ConditionScores& ExperimentTable::at(const std::string& language, Condition c) const {
    const ConditionScores* found = find(language, c);
    if (found == nullptr) {
        throw config_error("no scores for language " + language + ", condition " +
                           std::string(condition_name(c)));
    }
    return *found;
}

BoxplotStats boxplot_stats(std::vector<double> values) {
    if (values.empty()) throw input_error("boxplot statistics need at least one value");
    std::sort(values.begin(), values.end());
    BoxplotStats stats;
    stats.n = values.size();
    stats.q1 = quantile_sorted(values, 0.25);
    stats.median = quantile_sorted(values, 0.5);
    stats.q3 = quantile_sorted(values, 0.75);
    stats.iqd = stats.q3 - stats.q1;
    const double low_fence = stats.q1 - 1.5 * stats.iqd;
    const double high_fence = stats.q3 + 1.5 * stats.iqd;
    stats.whisker_low = stats.q3;
    stats.whisker_high = stats.q1;
    for (const double v : values) {
        if (v < low_fence || v > high_fence) {
            stats.outliers.push_back(v);
        } else {
            stats.whisker_low = std::min(stats.whisker_low, v);
            stats.whisker_high = std::max(stats.whisker_high, v);
        }
    }
    return stats;
}

double absolute_improvement(double base, double other) { return (base - other) * 100.0; }

double relative_improvement(double base, double other) {
    if (base == 0.0) {
        throw input_error("relative improvement is undefined for a zero base rate");
    }
    return 100.0 * (base - other) / base;
}

std::map<std::size_t, SharingBin> improvement_by_sharing_count(const ExperimentTable& table,
                                                               Condition from, Condition to,
                                                               double clip_floor_pp,
                                                               std::uint64_t min_ref_count) {
    std::map<std::size_t, SharingBin> bins;
    for (const auto& [language, conditions] : table.rows) {
        (void)conditions;
        const ConditionScores& from_scores = table.at(language, from);
        const ConditionScores& to_scores = table.at(language, to);
        for (const auto& [text, from_rate] : from_scores.defined_phone_pters()) {
            if (from_scores.phone_pter_override.count(text) == 0) {
                const auto stats = from_scores.phone_stats.find(text);
                if (stats != from_scores.phone_stats.end() &&
                    stats->second.ref_count < min_ref_count) {
                    continue;
                }
            }
            SharingBin& bin = bins[sharing_count(text, table.inventories)];
            const std::optional<double> to_rate = to_scores.phone_pter(text);
            if (!to_rate) {
                ++bin.skipped;
                continue;
            }
            bin.values.push_back(
                clip_improvement(absolute_improvement(from_rate, *to_rate), clip_floor_pp));
        }
    }
    for (auto& [count, bin] : bins) {
        (void)count;
        if (!bin.values.empty()) bin.stats = boxplot_stats(bin.values);
    }
    return bins;
}

std::map<std::string, GroupImprovement> group_by_feature(const ExperimentTable& table,
                                                         FeatureAxis axis, Condition from,
                                                         Condition to,
                                                         const FeatureTable& features,
                                                         bool skip_unknown) {
    struct Sum {
        double total = 0.0;
        std::size_t n = 0;
    };
    std::map<std::string, Sum> sums;
    for (const auto& [language, conditions] : table.rows) {
        (void)conditions;
        const ConditionScores& from_scores = table.at(language, from);
        const ConditionScores& to_scores = table.at(language, to);
        for (const auto& [text, from_rate] : from_scores.defined_phone_pters()) {
            if (classify_token(text) != TokenRole::Base) continue;
            const ArticulatoryFeatures* feats = features.find(text);
            if (feats == nullptr) {
                if (skip_unknown) continue;
                throw input_error("unknown phone \"" + text + "\" in scores of " + language +
                                  ": no feature table entry");
            }
            std::string category;
            if (feats->klass == SoundClass::Vowel) {
                if (axis == FeatureAxis::Place) continue;
                category = "vowel";
            } else {
                category = axis == FeatureAxis::Manner ? *feats->manner : *feats->place;
            }
            if (from_rate == 0.0) continue;
            const std::optional<double> to_rate = to_scores.phone_pter(text);
            if (!to_rate) continue;
            Sum& sum = sums[category];
            sum.total += relative_improvement(from_rate, *to_rate);
            ++sum.n;
        }
    }
    std::map<std::string, GroupImprovement> out;
    for (const auto& [category, sum] : sums) {
        out.emplace(category,
                    GroupImprovement{sum.total / static_cast<double>(sum.n), sum.n});
    }
    return out;
}

std::map<std::string, std::set<std::string>> stability_filter(const ExperimentTable& table,
                                                              double threshold_pp) {
    std::map<std::string, std::set<std::string>> stable;
    for (const auto& [language, conditions] : table.rows) {
        const auto mono = conditions.find(Condition::Mono);
        const auto cross = conditions.find(Condition::Cross);
        const auto multi = conditions.find(Condition::Multi);
        if (mono == conditions.end() || cross == conditions.end() || multi == conditions.end()) {
            continue;
        }
        for (const auto& [text, mono_rate] : mono->second.defined_phone_pters()) {
            const std::optional<double> cross_rate = cross->second.phone_pter(text);
            const std::optional<double> multi_rate = multi->second.phone_pter(text);
            if (!cross_rate || !multi_rate) continue;
            const double cross_dev = std::abs(cross_rate.value() - mono_rate) * 100.0;
            const double multi_dev = std::abs(multi_rate.value() - mono_rate) * 100.0;
            if (cross_dev <= threshold_pp && multi_dev <= threshold_pp) {
                stable[text].insert(language);
            }
        }
    }
    return stable;
}

std::map<std::string, std::map<Condition, BoxplotStats>> cross_language_distribution(
    const ExperimentTable& table, std::size_t min_languages) {
    // Candidate tokens: anything with a defined PTER anywhere.
    std::set<std::string> candidates;
    for (const auto& [language, conditions] : table.rows) {
        (void)language;
        for (const auto& [condition, scores] : conditions) {
            (void)condition;
            for (const auto& [text, rate] : scores.defined_phone_pters()) {
                (void)rate;
                candidates.insert(text);
            }
        }
    }

    std::map<std::string, std::map<Condition, BoxplotStats>> out;
    for (const std::string& text : candidates) {
        if (sharing_count(text, table.inventories) < min_languages) continue;
        std::map<Condition, std::vector<double>> samples;
        for (const auto& [language, conditions] : table.rows) {
            (void)language;
            for (const auto& [condition, scores] : conditions) {
                const std::optional<double> rate = scores.phone_pter(text);
                if (rate) samples[condition].push_back(*rate * 100.0);
            }
        }
        for (const auto& [condition, values] : samples) {
            out[text].emplace(condition, boxplot_stats(values));
        }
    }
    return out;
}

}  // namespace pter
