// Token-level Levenshtein alignment, error tallies, and per-phone
// attribution of substitutions, deletions, and insertions.

#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pter/ipa.hpp"

namespace pter {

enum class EditKind { Correct, Substitute, Delete, Insert };

std::string_view edit_kind_name(EditKind kind);

struct EditStep {
    EditKind kind = EditKind::Correct;
    std::optional<Token> ref_token;
    std::optional<Token> hyp_token;
};

struct Alignment {
    std::string utterance_id;
    std::vector<EditStep> steps;
    std::size_t cost = 0;

    std::vector<Token> ref_tokens() const;
    std::vector<Token> hyp_tokens() const;
};

struct ErrorTally {
    std::uint64_t n_ref = 0;
    std::uint64_t correct = 0;
    std::uint64_t sub = 0;
    std::uint64_t del = 0;
    std::uint64_t ins = 0;

    friend bool operator==(const ErrorTally&, const ErrorTally&) = default;
};

struct PhoneErrorStats {
    std::uint64_t ref_count = 0;
    std::uint64_t correct = 0;
    std::uint64_t sub_out = 0;  // this token in the reference, substituted away
    std::uint64_t del = 0;
    std::uint64_t ins = 0;      // this token inserted into the hypothesis
    std::uint64_t sub_in = 0;   // this token hypothesized in a substitution

    friend bool operator==(const PhoneErrorStats&, const PhoneErrorStats&) = default;

    // (sub_out + del + ins) / ref_count; absent when the token never occurs
    // in the reference. May exceed 1 because insertions are unbounded.
    // The mirror variant also charges sub_in against this token, for
    // sensitivity analyses of the attribution rule.
    std::optional<double> pter(bool mirror_substitutions = false) const;
};

// Minimal-cost alignment with unit edit costs. The backtrace prefers
// Correct over Substitute over Delete over Insert, making the step list
// (not just the cost) deterministic.
Alignment align(const TokenSequence& ref, const TokenSequence& hyp);

ErrorTally tally(const Alignment& a);

ErrorTally merge(const std::vector<ErrorTally>& tallies);
ErrorTally merge(const ErrorTally& a, const ErrorTally& b);

// (sub + del + ins) / n_ref. Throws an input error when n_ref is zero.
double pter(const ErrorTally& t);

std::map<std::string, PhoneErrorStats> per_phone_stats(const std::vector<Alignment>& alignments);

double clip_improvement(double delta_pp, double floor_pp = -100.0);

}  // namespace pter
