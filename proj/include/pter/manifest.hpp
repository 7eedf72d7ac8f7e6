// Experiment manifests: a key-value file naming the languages, the three
// condition datasets (or precomputed rates), and analysis options.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pter/compare.hpp"

namespace pter {

struct AnalysisOptions {
    bool pre_tokenized = false;
    bool permissive = false;
    double clip_floor_pp = -100.0;
    double stability_threshold_pp = 25.0;
    std::size_t min_languages = 11;
    std::uint64_t min_ref_count = 1;
    double tone_threshold_per_100 = 5.0;
    // Worker threads for per-(language, condition) scoring. Not a manifest
    // key; set from the command line.
    std::size_t jobs = 1;
};

enum class ManifestMode { Transcripts, Precomputed };

struct ConditionFiles {
    std::string ref_path;
    std::string hyp_path;
};

struct LanguageSpec {
    std::string id;
    bool is_tonal = false;
    // Transcripts mode: one ref/hyp pair per condition.
    std::map<Condition, ConditionFiles> files;
    // Precomputed mode: corpus PTER per condition, as a ratio.
    std::map<Condition, double> corpus_pter;
    // Precomputed mode, optional: per-phone PTER table path.
    std::string phones_path;
};

struct ExperimentManifest {
    int schema_version = 1;
    ManifestMode mode = ManifestMode::Transcripts;
    std::vector<LanguageSpec> languages;  // sorted by id
    AnalysisOptions options;
    // Directory paths in the manifest resolve against.
    std::string base_dir = ".";
};

// Parses manifest text. Does not touch the filesystem; path existence is
// checked by load_manifest.
ExperimentManifest parse_manifest(std::string_view content, std::string_view name);

// Reads, parses, resolves paths relative to the manifest's directory, and
// verifies every referenced file exists.
ExperimentManifest load_manifest(const std::string& path);

// Per-phone PTER tables for precomputed manifests: tab-separated columns
// token, mono, cross, multi; rates in percent, "-" for undefined. Returns
// condition -> token -> ratio.
std::map<Condition, std::map<std::string, double>> load_phone_pter_table(
    const std::string& path);
std::map<Condition, std::map<std::string, double>> parse_phone_pter_table(
    std::string_view content, std::string_view name);

}  // namespace pter
