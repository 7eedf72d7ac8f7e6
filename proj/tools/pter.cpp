// Command-line front end. Subcommands cover the pipeline stages:
// tokenize and score work on transcript files directly, inventory and
// analyze start from an experiment manifest, and report re-emits a saved
// JSON report in either output format.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pter/errors.hpp"
#include "pter/inventory.hpp"
#include "pter/manifest.hpp"
#include "pter/report.hpp"
#include "pter/transcripts.hpp"

namespace {

void print_warnings(const std::vector<std::string>& warnings) {
    for (const std::string& w : warnings) std::cerr << "warning: " << w << "\n";
}

std::string join_token_texts(const pter::TokenSequence& seq) {
    std::string out;
    for (std::size_t i = 0; i < seq.tokens.size(); ++i) {
        if (i > 0) out += ' ';
        out += seq.tokens[i].text;
    }
    return out;
}

std::string join_symbols(const std::set<std::string>& symbols) {
    std::string out;
    for (const std::string& s : symbols) {
        if (!out.empty()) out += ' ';
        out += s;
    }
    return out;
}

std::string pct1(double ratio) {
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, "%.1f", ratio * 100.0);
    return buffer;
}

int run_tokenize(const std::string& path, const pter::LoadOptions& options) {
    std::vector<std::string> warnings;
    const std::vector<pter::TokenSequence> seqs =
        pter::load_transcripts(path, options, &warnings);
    print_warnings(warnings);
    std::string out;
    for (const pter::TokenSequence& seq : seqs) {
        out += seq.utterance_id;
        out += '\t';
        out += join_token_texts(seq);
        out += '\n';
    }
    std::cout << out;
    return 0;
}

int run_score(const std::string& ref_path, const std::string& hyp_path,
              const pter::LoadOptions& options) {
    std::vector<std::string> warnings;
    const auto refs = pter::load_transcripts(ref_path, options, &warnings);
    const auto hyps = pter::load_transcripts(hyp_path, options, &warnings);
    print_warnings(warnings);
    const pter::ScoredCorpus corpus = pter::score_corpus(refs, hyps);
    const pter::ErrorTally& t = corpus.tally;
    std::cout << "utterances\t" << refs.size() << "\n"
              << "n_ref\t" << t.n_ref << "\n"
              << "correct\t" << t.correct << "\n"
              << "substitutions\t" << t.sub << "\n"
              << "deletions\t" << t.del << "\n"
              << "insertions\t" << t.ins << "\n";
    if (t.n_ref == 0) {
        std::cout << "pter_pct\t-\n";
    } else {
        std::cout << "pter_pct\t" << pct1(pter::pter(t)) << "\n";
    }
    return 0;
}

int run_inventory(const std::string& manifest_path) {
    std::vector<std::string> warnings;
    const pter::ExperimentManifest manifest = pter::load_manifest(manifest_path);
    const pter::ExperimentData data = pter::build_experiment_data(manifest, &warnings);
    print_warnings(warnings);
    const std::vector<pter::LanguageInventory>& inventories = data.table.inventories;

    std::map<std::string, std::set<std::string>> unique;
    if (inventories.size() >= 2) unique = pter::unique_phones(inventories);

    std::cout << "language\tdistinct\toccurrences\tvowels\tconsonants\tmodifiers\tunknown\t"
                 "unique\n";
    for (const pter::LanguageInventory& inv : inventories) {
        std::uint64_t occurrences = 0;
        for (const auto& [text, count] : inv.tokens) {
            (void)text;
            occurrences += count;
        }
        std::cout << inv.language << '\t' << inv.tokens.size() << '\t' << occurrences << '\t'
                  << join_symbols(inv.vowel_symbols) << '\t'
                  << join_symbols(inv.consonant_symbols) << '\t'
                  << join_symbols(inv.modifier_symbols) << '\t'
                  << join_symbols(inv.unknown_symbols) << '\t'
                  << join_symbols(unique[inv.language]) << '\n';
    }
    return 0;
}

int run_analyze(pter::ExperimentManifest manifest, const std::string& out_dir,
                pter::ReportFormat format) {
    std::vector<std::string> warnings;
    const pter::Report report = pter::run_manifest(manifest, &warnings);
    print_warnings(warnings);
    for (const std::string& path : pter::emit(report, format, out_dir)) {
        std::cout << path << "\n";
    }
    return 0;
}

int run_report(const std::string& input_path, const std::string& out_dir,
               pter::ReportFormat format) {
    std::string json_text;
    if (input_path.empty() || input_path == "-") {
        json_text.assign(std::istreambuf_iterator<char>(std::cin),
                         std::istreambuf_iterator<char>());
    } else {
        std::ifstream in(input_path, std::ios::binary);
        if (!in) throw pter::input_error("cannot open " + input_path);
        json_text.assign(std::istreambuf_iterator<char>(in),
                         std::istreambuf_iterator<char>());
    }
    const pter::Report report = pter::report_from_json(json_text);
    for (const std::string& path : pter::emit(report, format, out_dir)) {
        std::cout << path << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Phonetic token error rate scoring and transfer analysis"};
    app.require_subcommand(1);

    std::string tokenize_path;
    struct {
        bool pre_tokenized = false;
        bool permissive = false;
    } flags;
    CLI::App* tokenize = app.add_subcommand(
        "tokenize", "Tokenize a transcript file and print id<TAB>space-joined tokens");
    tokenize->add_option("file", tokenize_path, "Transcript file (id<TAB>payload per line)")
        ->required();
    tokenize->add_flag("--pre-tokenized", flags.pre_tokenized,
                       "Payloads are already space-separated tokens");
    tokenize->add_flag("--permissive", flags.permissive,
                       "Pass unknown symbols through with a warning");

    std::string ref_path;
    std::string hyp_path;
    CLI::App* score =
        app.add_subcommand("score", "Score a hypothesis file against a reference file");
    score->add_option("--ref", ref_path, "Reference transcript file")->required();
    score->add_option("--hyp", hyp_path, "Hypothesis transcript file")->required();
    score->add_flag("--pre-tokenized", flags.pre_tokenized,
                    "Payloads are already space-separated tokens");
    score->add_flag("--permissive", flags.permissive,
                    "Pass unknown symbols through with a warning");

    std::string inventory_manifest;
    CLI::App* inventory =
        app.add_subcommand("inventory", "Print per-language phone inventories for a manifest");
    inventory->add_option("manifest", inventory_manifest, "Experiment manifest file")
        ->required();

    std::string analyze_manifest;
    std::string out_dir = "pter_report";
    std::string format_name = "json";
    struct {
        double clip_floor = -100.0;
        double stability_threshold = 25.0;
        std::size_t min_languages = 11;
        std::uint64_t min_ref_count = 1;
        double tone_threshold = 5.0;
        std::size_t jobs = 1;
    } opt;
    CLI::App* analyze =
        app.add_subcommand("analyze", "Run the full analysis pipeline for a manifest");
    analyze->add_option("manifest", analyze_manifest, "Experiment manifest file")->required();
    analyze->add_flag("--pre-tokenized", flags.pre_tokenized,
                      "Payloads are already space-separated tokens");
    analyze->add_flag("--permissive", flags.permissive,
                      "Pass unknown symbols through with a warning");
    analyze->add_option("--clip-floor", opt.clip_floor,
                        "Per-phone improvement floor in percentage points");
    analyze->add_option("--stability-threshold", opt.stability_threshold,
                        "Max per-phone PTER deviation from mono, percentage points");
    analyze->add_option("--min-languages", opt.min_languages,
                        "Minimum sharing count for cross-language distributions");
    analyze->add_option("--min-ref-count", opt.min_ref_count,
                        "Minimum per-phone reference count for improvement bins");
    analyze->add_option("--tone-threshold", opt.tone_threshold,
                        "Tone insertions per 100 reference vowels that trigger the flag");
    analyze->add_option("--jobs", opt.jobs, "Worker threads for corpus scoring");
    analyze->add_option("--out", out_dir, "Output directory (default pter_report)");
    analyze->add_option("--format", format_name, "Report format: csv or json")
        ->check(CLI::IsMember({"csv", "json"}));

    std::string report_input;
    CLI::App* report =
        app.add_subcommand("report", "Re-emit a saved JSON report as csv or json");
    report->add_option("input", report_input, "report.json path (default: stdin)");
    report->add_option("--out", out_dir, "Output directory")->required();
    report->add_option("--format", format_name, "Report format: csv or json")
        ->required()
        ->check(CLI::IsMember({"csv", "json"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    const pter::LoadOptions load_options{flags.pre_tokenized, flags.permissive};
    const pter::ReportFormat format =
        format_name == "csv" ? pter::ReportFormat::Csv : pter::ReportFormat::Json;
    try {
        if (app.got_subcommand(tokenize)) return run_tokenize(tokenize_path, load_options);
        if (app.got_subcommand(score)) return run_score(ref_path, hyp_path, load_options);
        if (app.got_subcommand(inventory)) return run_inventory(inventory_manifest);
        if (app.got_subcommand(analyze)) {
            pter::ExperimentManifest manifest = pter::load_manifest(analyze_manifest);
            pter::AnalysisOptions& o = manifest.options;
            if (analyze->count("--pre-tokenized") > 0) o.pre_tokenized = flags.pre_tokenized;
            if (analyze->count("--permissive") > 0) o.permissive = flags.permissive;
            if (analyze->count("--clip-floor") > 0) o.clip_floor_pp = opt.clip_floor;
            if (analyze->count("--stability-threshold") > 0) {
                o.stability_threshold_pp = opt.stability_threshold;
            }
            if (analyze->count("--min-languages") > 0) o.min_languages = opt.min_languages;
            if (analyze->count("--min-ref-count") > 0) o.min_ref_count = opt.min_ref_count;
            if (analyze->count("--tone-threshold") > 0) {
                o.tone_threshold_per_100 = opt.tone_threshold;
            }
            o.jobs = opt.jobs;
            return run_analyze(std::move(manifest), out_dir, format);
        }
        if (app.got_subcommand(report)) return run_report(report_input, out_dir, format);
    } catch (const pter::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
