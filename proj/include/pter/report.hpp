// Report assembly from a manifest, plus CSV and JSON serialization. All
// emission is deterministic: rows are ordered by (language, condition,
// token) and re-emitting the same report is byte-identical.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pter/compare.hpp"
#include "pter/manifest.hpp"
#include "pter/phonology.hpp"
#include "pter/transcripts.hpp"

namespace pter {

struct SummaryRow {
    std::string language;
    Condition condition = Condition::Mono;
    double pter = 0.0;                 // ratio
    std::optional<ErrorTally> tally;   // absent for precomputed rates
    // Versus the language's mono row; absent on the mono row itself.
    std::optional<double> abs_improvement_pp;
    std::optional<double> rel_improvement_pct;  // absent when mono PTER is 0

    friend bool operator==(const SummaryRow&, const SummaryRow&) = default;
};

struct PerPhoneRow {
    std::string language;
    Condition condition = Condition::Mono;
    std::string token;
    std::optional<PhoneErrorStats> stats;  // absent for precomputed rates
    std::optional<double> pter;            // ratio; absent when undefined

    friend bool operator==(const PerPhoneRow&, const PerPhoneRow&) = default;
};

struct Fig1Row {
    Condition to = Condition::Cross;  // comparison is always mono -> to
    std::size_t sharing_count = 0;
    BoxplotStats stats;               // clipped improvements in pp
    std::size_t skipped = 0;

    friend bool operator==(const Fig1Row&, const Fig1Row&) = default;
};

struct Fig2Row {
    std::string token;
    Condition condition = Condition::Mono;
    BoxplotStats stats;  // per-phone PTER across languages, in percent

    friend bool operator==(const Fig2Row&, const Fig2Row&) = default;
};

struct FeatureGroupRow {
    FeatureAxis axis = FeatureAxis::Manner;
    std::string category;
    Condition to = Condition::Cross;  // comparison is always mono -> to
    double mean_relative_pct = 0.0;
    std::size_t n = 0;

    friend bool operator==(const FeatureGroupRow&, const FeatureGroupRow&) = default;
};

struct StabilityRow {
    std::string token;
    std::vector<std::string> languages;  // sorted

    friend bool operator==(const StabilityRow&, const StabilityRow&) = default;
};

struct ToneDiagnosticRow {
    std::string language;
    Condition condition = Condition::Mono;
    ToneInsertionReport diagnostic;

    friend bool operator==(const ToneDiagnosticRow&, const ToneDiagnosticRow&) = default;
};

struct ReportMeta {
    int schema_version = 1;
    ManifestMode mode = ManifestMode::Transcripts;
    // The options the report was computed with. jobs is deliberately not
    // recorded: parallelism must not change report bytes.
    AnalysisOptions options;

    friend bool operator==(const ReportMeta& a, const ReportMeta& b) {
        return a.schema_version == b.schema_version && a.mode == b.mode &&
               a.options.pre_tokenized == b.options.pre_tokenized &&
               a.options.permissive == b.options.permissive &&
               a.options.clip_floor_pp == b.options.clip_floor_pp &&
               a.options.stability_threshold_pp == b.options.stability_threshold_pp &&
               a.options.min_languages == b.options.min_languages &&
               a.options.min_ref_count == b.options.min_ref_count &&
               a.options.tone_threshold_per_100 == b.options.tone_threshold_per_100;
    }
};

struct Report {
    ReportMeta meta;
    std::vector<SummaryRow> summary;
    std::vector<PerPhoneRow> per_phone;
    std::vector<Fig1Row> fig1_bins;
    std::vector<Fig2Row> fig2_rows;
    std::vector<FeatureGroupRow> feature_groups;
    std::vector<StabilityRow> stability;
    std::vector<ToneDiagnosticRow> tone_diagnostics;

    friend bool operator==(const Report&, const Report&) = default;
};

// Everything run_manifest computes before report assembly. Exposed so the
// invariant tests can cross-check the table against raw alignments.
struct ExperimentData {
    ExperimentTable table;
    // Transcripts mode: every scored (language, condition) corpus.
    std::map<std::string, std::map<Condition, ScoredCorpus>> corpora;
};

ExperimentData build_experiment_data(const ExperimentManifest& manifest,
                                     std::vector<std::string>* warnings = nullptr);

Report build_report(const ExperimentManifest& manifest, const ExperimentData& data);

Report run_manifest(const ExperimentManifest& manifest,
                    std::vector<std::string>* warnings = nullptr);

enum class ReportFormat { Csv, Json };

// CSV writes one file per section into out_dir; JSON writes report.json.
// The directory is created if missing. Returns the paths written.
std::vector<std::string> emit(const Report& report, ReportFormat format,
                              const std::string& out_dir);

std::string to_json(const Report& report);
Report report_from_json(std::string_view json_text);

// Reads back a CSV emission. Summary rates lose precision to the fixed
// 1-decimal percent formatting; every other field round-trips exactly.
Report read_csv_report(const std::string& dir);

}  // namespace pter
