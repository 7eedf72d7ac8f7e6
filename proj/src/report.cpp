// Pipeline orchestration and report serialization. JSON carries every
// stored value verbatim (PTERs as ratios, improvements in percentage
// points); CSV follows the same units except the summary section, whose
// rates are fixed at one-decimal percent.

#include "pter/report.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <thread>

#include <json.hpp>

#include "file_util.hpp"
#include "pter/errors.hpp"

namespace pter {

namespace {

using ojson = nlohmann::ordered_json;

constexpr Condition kConditions[] = {Condition::Mono, Condition::Cross, Condition::Multi};
constexpr Condition kComparisons[] = {Condition::Cross, Condition::Multi};

std::string fmt_double(double value) {
    char buffer[64];
    const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
    if (ec != std::errc()) throw internal_error("number formatting failed");
    return std::string(buffer, ptr);
}

std::string fmt_pct1(double ratio_or_pp, bool convert_ratio) {
    char buffer[64];
    const double value = convert_ratio ? ratio_or_pp * 100.0 : ratio_or_pp;
    std::snprintf(buffer, sizeof buffer, "%.1f", value);
    return buffer;
}

double parse_double(std::string_view text, const std::string& loc) {
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw input_error(loc + ": expected a number, got \"" + std::string(text) + "\"");
    }
    return value;
}

std::uint64_t parse_count(std::string_view text, const std::string& loc) {
    std::uint64_t value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw input_error(loc + ": expected a count, got \"" + std::string(text) + "\"");
    }
    return value;
}

bool parse_bool(std::string_view text, const std::string& loc) {
    if (text == "true") return true;
    if (text == "false") return false;
    throw input_error(loc + ": expected true or false, got \"" + std::string(text) + "\"");
}

std::string comparison_name(Condition to) {
    return "mono_to_" + std::string(condition_name(to));
}

Condition parse_comparison(std::string_view name, const std::string& loc) {
    for (const Condition to : kComparisons) {
        if (name == comparison_name(to)) return to;
    }
    throw input_error(loc + ": unknown comparison \"" + std::string(name) + "\"");
}

Condition parse_condition_or_throw(std::string_view name, const std::string& loc) {
    const std::optional<Condition> c = parse_condition(name);
    if (!c) throw input_error(loc + ": unknown condition \"" + std::string(name) + "\"");
    return *c;
}

std::string_view axis_name(FeatureAxis axis) {
    return axis == FeatureAxis::Manner ? "manner" : "place";
}

FeatureAxis parse_axis(std::string_view name, const std::string& loc) {
    if (name == "manner") return FeatureAxis::Manner;
    if (name == "place") return FeatureAxis::Place;
    throw input_error(loc + ": unknown axis \"" + std::string(name) + "\"");
}

std::string_view mode_name(ManifestMode mode) {
    return mode == ManifestMode::Transcripts ? "transcripts" : "precomputed";
}

ManifestMode parse_mode(std::string_view name, const std::string& loc) {
    if (name == "transcripts") return ManifestMode::Transcripts;
    if (name == "precomputed") return ManifestMode::Precomputed;
    throw input_error(loc + ": unknown mode \"" + std::string(name) + "\"");
}

// ----- pipeline ------------------------------------------------------------

LanguageInventory derive_inventory(const std::string& language,
                                   const std::map<std::string, double>& mono_rates,
                                   const FeatureTable& features) {
    LanguageInventory inv;
    inv.language = language;
    for (const auto& [text, rate] : mono_rates) {
        (void)rate;
        inv.tokens[text] = 1;
        if (classify_token(text) != TokenRole::Base) {
            inv.modifier_symbols.insert(text);
            continue;
        }
        const ArticulatoryFeatures* feats = features.find(text);
        if (feats == nullptr) {
            inv.unknown_symbols.insert(text);
        } else if (feats->klass == SoundClass::Vowel) {
            inv.vowel_symbols.insert(text);
        } else {
            inv.consonant_symbols.insert(text);
        }
    }
    return inv;
}

ExperimentData build_precomputed_data(const ExperimentManifest& manifest) {
    const FeatureTable& features = FeatureTable::builtin();
    ExperimentData data;
    for (const LanguageSpec& lang : manifest.languages) {
        std::map<Condition, std::map<std::string, double>> phones;
        if (!lang.phones_path.empty()) phones = load_phone_pter_table(lang.phones_path);
        for (const auto& [condition, rate] : lang.corpus_pter) {
            ConditionScores scores;
            scores.language = lang.id;
            scores.condition = condition;
            scores.corpus_pter = rate;
            const auto ph = phones.find(condition);
            if (ph != phones.end()) scores.phone_pter_override = ph->second;
            data.table.rows[lang.id].emplace(condition, std::move(scores));
        }
        const auto mono = phones.find(Condition::Mono);
        data.table.inventories.push_back(derive_inventory(
            lang.id, mono == phones.end() ? std::map<std::string, double>{} : mono->second,
            features));
    }
    return data;
}

ExperimentData build_transcript_data(const ExperimentManifest& manifest,
                                     std::vector<std::string>* warnings) {
    struct Task {
        std::size_t lang_index;
        Condition condition;
    };
    struct TaskResult {
        ScoredCorpus corpus;
        std::vector<TokenSequence> refs;
        std::vector<std::string> warnings;
    };

    std::vector<Task> tasks;
    for (std::size_t i = 0; i < manifest.languages.size(); ++i) {
        for (const Condition c : kConditions) tasks.push_back({i, c});
    }
    std::vector<TaskResult> results(tasks.size());
    std::vector<std::exception_ptr> failures(tasks.size());
    std::atomic<std::size_t> next{0};
    const LoadOptions load_options{manifest.options.pre_tokenized, manifest.options.permissive};

    auto worker = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < tasks.size();) {
            const LanguageSpec& lang = manifest.languages[tasks[i].lang_index];
            const Condition condition = tasks[i].condition;
            TaskResult& result = results[i];
            try {
                try {
                    const ConditionFiles& files = lang.files.at(condition);
                    result.refs =
                        load_transcripts(files.ref_path, load_options, &result.warnings);
                    const std::vector<TokenSequence> hyps =
                        load_transcripts(files.hyp_path, load_options, &result.warnings);
                    result.corpus = score_corpus(result.refs, hyps);
                    if (result.corpus.tally.n_ref == 0) {
                        throw input_error("reference corpus has no tokens");
                    }
                } catch (const Error& e) {
                    throw Error(e.kind(), "language " + lang.id + ", condition " +
                                              std::string(condition_name(condition)) + ": " +
                                              e.what());
                }
            } catch (...) {
                failures[i] = std::current_exception();
            }
        }
    };

    const std::size_t thread_count =
        std::clamp<std::size_t>(manifest.options.jobs, 1, std::max<std::size_t>(tasks.size(), 1));
    if (thread_count <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(thread_count);
        for (std::size_t t = 0; t < thread_count; ++t) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
    }
    for (const std::exception_ptr& failure : failures) {
        if (failure) std::rethrow_exception(failure);
    }

    const FeatureTable& features = FeatureTable::builtin();
    ExperimentData data;
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        const LanguageSpec& lang = manifest.languages[tasks[i].lang_index];
        const Condition condition = tasks[i].condition;
        TaskResult& result = results[i];
        if (warnings != nullptr) {
            warnings->insert(warnings->end(), result.warnings.begin(), result.warnings.end());
        }

        ConditionScores scores;
        scores.language = lang.id;
        scores.condition = condition;
        scores.corpus_pter = pter(result.corpus.tally);
        scores.phone_stats = result.corpus.phone_stats;
        data.table.rows[lang.id].emplace(condition, std::move(scores));

        if (condition == Condition::Mono) {
            data.table.inventories.push_back(build_inventory(
                result.refs, lang.id, features, manifest.options.permissive, warnings));
        }
        data.corpora[lang.id].emplace(condition, std::move(result.corpus));
    }
    return data;
}

// ----- JSON ----------------------------------------------------------------

void boxplot_to_json(ojson& row, const BoxplotStats& stats, const char* suffix) {
    row["n"] = stats.n;
    row[std::string("median") + suffix] = stats.median;
    row[std::string("q1") + suffix] = stats.q1;
    row[std::string("q3") + suffix] = stats.q3;
    row[std::string("iqd") + suffix] = stats.iqd;
    row[std::string("whisker_low") + suffix] = stats.whisker_low;
    row[std::string("whisker_high") + suffix] = stats.whisker_high;
    row[std::string("outliers") + suffix] = stats.outliers;
}

BoxplotStats boxplot_from_json(const ojson& row, const char* suffix, const std::string& loc) {
    BoxplotStats stats;
    try {
        stats.n = row.at("n").get<std::size_t>();
        stats.median = row.at(std::string("median") + suffix).get<double>();
        stats.q1 = row.at(std::string("q1") + suffix).get<double>();
        stats.q3 = row.at(std::string("q3") + suffix).get<double>();
        stats.iqd = row.at(std::string("iqd") + suffix).get<double>();
        stats.whisker_low = row.at(std::string("whisker_low") + suffix).get<double>();
        stats.whisker_high = row.at(std::string("whisker_high") + suffix).get<double>();
        stats.outliers = row.at(std::string("outliers") + suffix).get<std::vector<double>>();
    } catch (const ojson::exception& e) {
        throw input_error(loc + ": " + e.what());
    }
    return stats;
}

// ----- CSV -----------------------------------------------------------------

std::string csv_escape(std::string_view field) {
    if (field.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(field);
    std::string out = "\"";
    for (const char c : field) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += '"';
    return out;
}

std::vector<std::string> split_csv_line(std::string_view line, const std::string& loc) {
    std::vector<std::string> fields;
    std::string current;
    bool quoted = false;
    std::size_t i = 0;
    while (i < line.size()) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    current += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                current += c;
            }
        } else if (c == '"') {
            if (!current.empty()) throw input_error(loc + ": stray quote inside field");
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(current));
            current.clear();
        } else {
            current += c;
        }
        ++i;
    }
    if (quoted) throw input_error(loc + ": unterminated quoted field");
    fields.push_back(std::move(current));
    return fields;
}

std::string join_doubles(const std::vector<double>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i > 0) out += ' ';
        out += fmt_double(values[i]);
    }
    return out;
}

std::vector<double> split_doubles(std::string_view text, const std::string& loc) {
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t space = text.find(' ', pos);
        if (space == std::string_view::npos) space = text.size();
        out.push_back(parse_double(text.substr(pos, space - pos), loc));
        pos = space + 1;
    }
    return out;
}

std::string boxplot_csv_fields(const BoxplotStats& stats) {
    std::string out = std::to_string(stats.n);
    for (const double v : {stats.median, stats.q1, stats.q3, stats.iqd, stats.whisker_low,
                           stats.whisker_high}) {
        out += ',';
        out += fmt_double(v);
    }
    out += ',';
    out += csv_escape(join_doubles(stats.outliers));
    return out;
}

BoxplotStats boxplot_from_fields(const std::vector<std::string>& fields, std::size_t offset,
                                 const std::string& loc) {
    BoxplotStats stats;
    stats.n = static_cast<std::size_t>(parse_count(fields[offset], loc));
    stats.median = parse_double(fields[offset + 1], loc);
    stats.q1 = parse_double(fields[offset + 2], loc);
    stats.q3 = parse_double(fields[offset + 3], loc);
    stats.iqd = parse_double(fields[offset + 4], loc);
    stats.whisker_low = parse_double(fields[offset + 5], loc);
    stats.whisker_high = parse_double(fields[offset + 6], loc);
    stats.outliers = split_doubles(fields[offset + 7], loc);
    return stats;
}

struct CsvFile {
    std::string header;
    std::vector<std::vector<std::string>> rows;
};

CsvFile read_csv_file(const std::string& path, std::size_t expect_fields) {
    const std::string content = detail::read_file(path);
    CsvFile file;
    std::size_t pos = 0;
    std::size_t line_number = 0;
    while (pos < content.size()) {
        std::size_t eol = content.find('\n', pos);
        if (eol == std::string::npos) eol = content.size();
        std::string_view line(content.data() + pos, eol - pos);
        pos = eol + 1;
        ++line_number;
        if (line.empty()) continue;
        const std::string loc = path + ":" + std::to_string(line_number);
        if (line_number == 1) {
            file.header = std::string(line);
            continue;
        }
        std::vector<std::string> fields = split_csv_line(line, loc);
        if (fields.size() != expect_fields) {
            throw input_error(loc + ": expected " + std::to_string(expect_fields) +
                              " fields, got " + std::to_string(fields.size()));
        }
        file.rows.push_back(std::move(fields));
    }
    return file;
}

}  // namespace

// ----- pipeline entry points ------------------------------------------------

ExperimentData build_experiment_data(const ExperimentManifest& manifest,
                                     std::vector<std::string>* warnings) {
    if (manifest.mode == ManifestMode::Precomputed) return build_precomputed_data(manifest);
    return build_transcript_data(manifest, warnings);
}

Report build_report(const ExperimentManifest& manifest, const ExperimentData& data) {
    const FeatureTable& features = FeatureTable::builtin();
    const AnalysisOptions& opt = manifest.options;
    const ExperimentTable& table = data.table;

    Report report;
    report.meta.mode = manifest.mode;
    report.meta.options = opt;

    for (const auto& [language, conditions] : table.rows) {
        const auto mono = conditions.find(Condition::Mono);
        for (const Condition c : kConditions) {
            const auto it = conditions.find(c);
            if (it == conditions.end()) continue;
            SummaryRow row;
            row.language = language;
            row.condition = c;
            row.pter = it->second.corpus_pter;
            const auto lang_corpora = data.corpora.find(language);
            if (lang_corpora != data.corpora.end()) {
                const auto corpus = lang_corpora->second.find(c);
                if (corpus != lang_corpora->second.end()) row.tally = corpus->second.tally;
            }
            if (c != Condition::Mono && mono != conditions.end()) {
                const double mono_pter = mono->second.corpus_pter;
                row.abs_improvement_pp = absolute_improvement(mono_pter, row.pter);
                if (mono_pter > 0.0) {
                    row.rel_improvement_pct = relative_improvement(mono_pter, row.pter);
                }
            }
            report.summary.push_back(std::move(row));
        }
    }

    for (const auto& [language, conditions] : table.rows) {
        for (const auto& [condition, scores] : conditions) {
            std::set<std::string> tokens;
            for (const auto& [text, stats] : scores.phone_stats) {
                (void)stats;
                tokens.insert(text);
            }
            for (const auto& [text, rate] : scores.phone_pter_override) {
                (void)rate;
                tokens.insert(text);
            }
            for (const std::string& text : tokens) {
                PerPhoneRow row;
                row.language = language;
                row.condition = condition;
                row.token = text;
                const auto stats = scores.phone_stats.find(text);
                if (stats != scores.phone_stats.end()) row.stats = stats->second;
                row.pter = scores.phone_pter(text);
                report.per_phone.push_back(std::move(row));
            }
        }
    }

    for (const Condition to : kComparisons) {
        for (const auto& [count, bin] :
             improvement_by_sharing_count(table, Condition::Mono, to, opt.clip_floor_pp,
                                          opt.min_ref_count)) {
            report.fig1_bins.push_back({to, count, bin.stats, bin.skipped});
        }
    }

    for (const auto& [token, per_condition] :
         cross_language_distribution(table, opt.min_languages)) {
        for (const auto& [condition, stats] : per_condition) {
            report.fig2_rows.push_back({token, condition, stats});
        }
    }

    for (const FeatureAxis axis : {FeatureAxis::Manner, FeatureAxis::Place}) {
        for (const Condition to : kComparisons) {
            for (const auto& [category, group] :
                 group_by_feature(table, axis, Condition::Mono, to, features, opt.permissive)) {
                report.feature_groups.push_back(
                    {axis, category, to, group.mean_relative, group.n});
            }
        }
    }

    for (const auto& [token, languages] :
         stability_filter(table, opt.stability_threshold_pp)) {
        report.stability.push_back(
            {token, std::vector<std::string>(languages.begin(), languages.end())});
    }

    if (manifest.mode == ManifestMode::Transcripts) {
        std::map<std::string, bool> tonal;
        for (const LanguageSpec& lang : manifest.languages) tonal[lang.id] = lang.is_tonal;
        for (const auto& [language, conditions] : data.corpora) {
            for (const auto& [condition, corpus] : conditions) {
                report.tone_diagnostics.push_back(
                    {language, condition,
                     tone_insertion_report(corpus.alignments, tonal[language], features,
                                           {opt.tone_threshold_per_100})});
            }
        }
    }

    return report;
}

Report run_manifest(const ExperimentManifest& manifest, std::vector<std::string>* warnings) {
    return build_report(manifest, build_experiment_data(manifest, warnings));
}

// ----- JSON serialization ----------------------------------------------------

std::string to_json(const Report& report) {
    ojson doc;
    doc["schema_version"] = report.meta.schema_version;
    doc["mode"] = mode_name(report.meta.mode);
    ojson options;
    options["pre_tokenized"] = report.meta.options.pre_tokenized;
    options["permissive"] = report.meta.options.permissive;
    options["clip_floor_pp"] = report.meta.options.clip_floor_pp;
    options["stability_threshold_pp"] = report.meta.options.stability_threshold_pp;
    options["min_languages"] = report.meta.options.min_languages;
    options["min_ref_count"] = report.meta.options.min_ref_count;
    options["tone_threshold_per_100"] = report.meta.options.tone_threshold_per_100;
    doc["options"] = std::move(options);

    doc["summary"] = ojson::array();
    for (const SummaryRow& row : report.summary) {
        ojson j;
        j["language"] = row.language;
        j["condition"] = condition_name(row.condition);
        j["pter"] = row.pter;
        if (row.tally) {
            j["n_ref"] = row.tally->n_ref;
            j["correct"] = row.tally->correct;
            j["substitutions"] = row.tally->sub;
            j["deletions"] = row.tally->del;
            j["insertions"] = row.tally->ins;
        } else {
            j["n_ref"] = nullptr;
            j["correct"] = nullptr;
            j["substitutions"] = nullptr;
            j["deletions"] = nullptr;
            j["insertions"] = nullptr;
        }
        j["abs_improvement_pp"] =
            row.abs_improvement_pp ? ojson(*row.abs_improvement_pp) : ojson(nullptr);
        j["rel_improvement_pct"] =
            row.rel_improvement_pct ? ojson(*row.rel_improvement_pct) : ojson(nullptr);
        doc["summary"].push_back(std::move(j));
    }

    doc["per_phone"] = ojson::array();
    for (const PerPhoneRow& row : report.per_phone) {
        ojson j;
        j["language"] = row.language;
        j["condition"] = condition_name(row.condition);
        j["token"] = row.token;
        if (row.stats) {
            j["ref_count"] = row.stats->ref_count;
            j["correct"] = row.stats->correct;
            j["sub_out"] = row.stats->sub_out;
            j["del"] = row.stats->del;
            j["ins"] = row.stats->ins;
            j["sub_in"] = row.stats->sub_in;
        } else {
            j["ref_count"] = nullptr;
            j["correct"] = nullptr;
            j["sub_out"] = nullptr;
            j["del"] = nullptr;
            j["ins"] = nullptr;
            j["sub_in"] = nullptr;
        }
        j["pter"] = row.pter ? ojson(*row.pter) : ojson(nullptr);
        doc["per_phone"].push_back(std::move(j));
    }

    doc["fig1_bins"] = ojson::array();
    for (const Fig1Row& row : report.fig1_bins) {
        ojson j;
        j["comparison"] = comparison_name(row.to);
        j["sharing_count"] = row.sharing_count;
        boxplot_to_json(j, row.stats, "_pp");
        j["skipped"] = row.skipped;
        doc["fig1_bins"].push_back(std::move(j));
    }

    doc["fig2_rows"] = ojson::array();
    for (const Fig2Row& row : report.fig2_rows) {
        ojson j;
        j["token"] = row.token;
        j["condition"] = condition_name(row.condition);
        boxplot_to_json(j, row.stats, "_pct");
        doc["fig2_rows"].push_back(std::move(j));
    }

    doc["feature_groups"] = ojson::array();
    for (const FeatureGroupRow& row : report.feature_groups) {
        ojson j;
        j["axis"] = axis_name(row.axis);
        j["category"] = row.category;
        j["comparison"] = comparison_name(row.to);
        j["mean_relative_improvement_pct"] = row.mean_relative_pct;
        j["n"] = row.n;
        doc["feature_groups"].push_back(std::move(j));
    }

    doc["stability"] = ojson::array();
    for (const StabilityRow& row : report.stability) {
        ojson j;
        j["token"] = row.token;
        j["languages"] = row.languages;
        doc["stability"].push_back(std::move(j));
    }

    doc["tone_diagnostics"] = ojson::array();
    for (const ToneDiagnosticRow& row : report.tone_diagnostics) {
        ojson j;
        j["language"] = row.language;
        j["condition"] = condition_name(row.condition);
        j["inserted_tone_tokens"] = row.diagnostic.inserted_tone_tokens;
        j["reference_vowels"] = row.diagnostic.reference_vowels;
        j["insertions_per_100_vowels"] = row.diagnostic.insertions_per_100_vowels;
        j["invalid_combinations"] = row.diagnostic.invalid_combinations;
        j["ref_is_tonal"] = row.diagnostic.ref_is_tonal;
        j["flagged"] = row.diagnostic.spurious_tonality;
        doc["tone_diagnostics"].push_back(std::move(j));
    }

    return doc.dump(2) + "\n";
}

Report report_from_json(std::string_view json_text) {
    ojson doc;
    try {
        doc = ojson::parse(json_text);
    } catch (const ojson::exception& e) {
        throw input_error(std::string("report JSON does not parse: ") + e.what());
    }
    Report report;
    try {
        report.meta.schema_version = doc.at("schema_version").get<int>();
        if (report.meta.schema_version != 1) {
            throw input_error("unsupported report schema_version " +
                              std::to_string(report.meta.schema_version));
        }
        report.meta.mode = parse_mode(doc.at("mode").get<std::string>(), "mode");
        const ojson& options = doc.at("options");
        report.meta.options.pre_tokenized = options.at("pre_tokenized").get<bool>();
        report.meta.options.permissive = options.at("permissive").get<bool>();
        report.meta.options.clip_floor_pp = options.at("clip_floor_pp").get<double>();
        report.meta.options.stability_threshold_pp =
            options.at("stability_threshold_pp").get<double>();
        report.meta.options.min_languages = options.at("min_languages").get<std::size_t>();
        report.meta.options.min_ref_count = options.at("min_ref_count").get<std::uint64_t>();
        report.meta.options.tone_threshold_per_100 =
            options.at("tone_threshold_per_100").get<double>();

        for (const ojson& j : doc.at("summary")) {
            SummaryRow row;
            row.language = j.at("language").get<std::string>();
            row.condition =
                parse_condition_or_throw(j.at("condition").get<std::string>(), "summary");
            row.pter = j.at("pter").get<double>();
            if (!j.at("n_ref").is_null()) {
                ErrorTally tally;
                tally.n_ref = j.at("n_ref").get<std::uint64_t>();
                tally.correct = j.at("correct").get<std::uint64_t>();
                tally.sub = j.at("substitutions").get<std::uint64_t>();
                tally.del = j.at("deletions").get<std::uint64_t>();
                tally.ins = j.at("insertions").get<std::uint64_t>();
                row.tally = tally;
            }
            if (!j.at("abs_improvement_pp").is_null()) {
                row.abs_improvement_pp = j.at("abs_improvement_pp").get<double>();
            }
            if (!j.at("rel_improvement_pct").is_null()) {
                row.rel_improvement_pct = j.at("rel_improvement_pct").get<double>();
            }
            report.summary.push_back(std::move(row));
        }

        for (const ojson& j : doc.at("per_phone")) {
            PerPhoneRow row;
            row.language = j.at("language").get<std::string>();
            row.condition =
                parse_condition_or_throw(j.at("condition").get<std::string>(), "per_phone");
            row.token = j.at("token").get<std::string>();
            if (!j.at("ref_count").is_null()) {
                PhoneErrorStats stats;
                stats.ref_count = j.at("ref_count").get<std::uint64_t>();
                stats.correct = j.at("correct").get<std::uint64_t>();
                stats.sub_out = j.at("sub_out").get<std::uint64_t>();
                stats.del = j.at("del").get<std::uint64_t>();
                stats.ins = j.at("ins").get<std::uint64_t>();
                stats.sub_in = j.at("sub_in").get<std::uint64_t>();
                row.stats = stats;
            }
            if (!j.at("pter").is_null()) row.pter = j.at("pter").get<double>();
            report.per_phone.push_back(std::move(row));
        }

        for (const ojson& j : doc.at("fig1_bins")) {
            Fig1Row row;
            row.to = parse_comparison(j.at("comparison").get<std::string>(), "fig1_bins");
            row.sharing_count = j.at("sharing_count").get<std::size_t>();
            row.stats = boxplot_from_json(j, "_pp", "fig1_bins");
            row.skipped = j.at("skipped").get<std::size_t>();
            report.fig1_bins.push_back(std::move(row));
        }

        for (const ojson& j : doc.at("fig2_rows")) {
            Fig2Row row;
            row.token = j.at("token").get<std::string>();
            row.condition =
                parse_condition_or_throw(j.at("condition").get<std::string>(), "fig2_rows");
            row.stats = boxplot_from_json(j, "_pct", "fig2_rows");
            report.fig2_rows.push_back(std::move(row));
        }

        for (const ojson& j : doc.at("feature_groups")) {
            FeatureGroupRow row;
            row.axis = parse_axis(j.at("axis").get<std::string>(), "feature_groups");
            row.category = j.at("category").get<std::string>();
            row.to = parse_comparison(j.at("comparison").get<std::string>(), "feature_groups");
            row.mean_relative_pct = j.at("mean_relative_improvement_pct").get<double>();
            row.n = j.at("n").get<std::size_t>();
            report.feature_groups.push_back(std::move(row));
        }

        for (const ojson& j : doc.at("stability")) {
            StabilityRow row;
            row.token = j.at("token").get<std::string>();
            row.languages = j.at("languages").get<std::vector<std::string>>();
            report.stability.push_back(std::move(row));
        }

        for (const ojson& j : doc.at("tone_diagnostics")) {
            ToneDiagnosticRow row;
            row.language = j.at("language").get<std::string>();
            row.condition = parse_condition_or_throw(j.at("condition").get<std::string>(),
                                                     "tone_diagnostics");
            row.diagnostic.inserted_tone_tokens =
                j.at("inserted_tone_tokens").get<std::size_t>();
            row.diagnostic.reference_vowels = j.at("reference_vowels").get<std::size_t>();
            row.diagnostic.insertions_per_100_vowels =
                j.at("insertions_per_100_vowels").get<double>();
            row.diagnostic.invalid_combinations =
                j.at("invalid_combinations").get<std::size_t>();
            row.diagnostic.ref_is_tonal = j.at("ref_is_tonal").get<bool>();
            row.diagnostic.spurious_tonality = j.at("flagged").get<bool>();
            report.tone_diagnostics.push_back(std::move(row));
        }
    } catch (const ojson::exception& e) {
        throw input_error(std::string("report JSON has an unexpected shape: ") + e.what());
    }
    return report;
}

// ----- CSV serialization ------------------------------------------------------

namespace {

std::string meta_csv(const ReportMeta& meta) {
    std::string out = "key,value\n";
    out += "schema_version," + std::to_string(meta.schema_version) + "\n";
    out += "mode," + std::string(mode_name(meta.mode)) + "\n";
    out += std::string("pre_tokenized,") + (meta.options.pre_tokenized ? "true" : "false") + "\n";
    out += std::string("permissive,") + (meta.options.permissive ? "true" : "false") + "\n";
    out += "clip_floor_pp," + fmt_double(meta.options.clip_floor_pp) + "\n";
    out += "stability_threshold_pp," + fmt_double(meta.options.stability_threshold_pp) + "\n";
    out += "min_languages," + std::to_string(meta.options.min_languages) + "\n";
    out += "min_ref_count," + std::to_string(meta.options.min_ref_count) + "\n";
    out += "tone_threshold_per_100," + fmt_double(meta.options.tone_threshold_per_100) + "\n";
    return out;
}

std::string summary_csv(const Report& report) {
    std::string out =
        "language,condition,pter_pct,n_ref,correct,substitutions,deletions,insertions,"
        "abs_improvement_pp,rel_improvement_pct\n";
    for (const SummaryRow& row : report.summary) {
        out += csv_escape(row.language);
        out += ',';
        out += condition_name(row.condition);
        out += ',';
        out += fmt_pct1(row.pter, true);
        if (row.tally) {
            out += ',' + std::to_string(row.tally->n_ref);
            out += ',' + std::to_string(row.tally->correct);
            out += ',' + std::to_string(row.tally->sub);
            out += ',' + std::to_string(row.tally->del);
            out += ',' + std::to_string(row.tally->ins);
        } else {
            out += ",,,,,";
        }
        out += ',';
        if (row.abs_improvement_pp) out += fmt_pct1(*row.abs_improvement_pp, false);
        out += ',';
        if (row.rel_improvement_pct) out += fmt_pct1(*row.rel_improvement_pct, false);
        out += '\n';
    }
    return out;
}

std::string per_phone_csv(const Report& report) {
    std::string out = "language,condition,token,ref_count,correct,sub_out,del,ins,sub_in,pter\n";
    for (const PerPhoneRow& row : report.per_phone) {
        out += csv_escape(row.language);
        out += ',';
        out += condition_name(row.condition);
        out += ',';
        out += csv_escape(row.token);
        if (row.stats) {
            out += ',' + std::to_string(row.stats->ref_count);
            out += ',' + std::to_string(row.stats->correct);
            out += ',' + std::to_string(row.stats->sub_out);
            out += ',' + std::to_string(row.stats->del);
            out += ',' + std::to_string(row.stats->ins);
            out += ',' + std::to_string(row.stats->sub_in);
        } else {
            out += ",,,,,,";
        }
        out += ',';
        if (row.pter) out += fmt_double(*row.pter);
        out += '\n';
    }
    return out;
}

std::string fig1_csv(const Report& report) {
    std::string out =
        "comparison,sharing_count,n,median_pp,q1_pp,q3_pp,iqd_pp,whisker_low_pp,"
        "whisker_high_pp,outliers_pp,skipped\n";
    for (const Fig1Row& row : report.fig1_bins) {
        out += comparison_name(row.to);
        out += ',' + std::to_string(row.sharing_count);
        out += ',' + boxplot_csv_fields(row.stats);
        out += ',' + std::to_string(row.skipped);
        out += '\n';
    }
    return out;
}

std::string fig2_csv(const Report& report) {
    std::string out =
        "token,condition,n,median_pct,q1_pct,q3_pct,iqd_pct,whisker_low_pct,whisker_high_pct,"
        "outliers_pct\n";
    for (const Fig2Row& row : report.fig2_rows) {
        out += csv_escape(row.token);
        out += ',';
        out += condition_name(row.condition);
        out += ',' + boxplot_csv_fields(row.stats);
        out += '\n';
    }
    return out;
}

std::string feature_groups_csv(const Report& report) {
    std::string out = "axis,category,comparison,mean_relative_improvement_pct,n\n";
    for (const FeatureGroupRow& row : report.feature_groups) {
        out += axis_name(row.axis);
        out += ',';
        out += csv_escape(row.category);
        out += ',';
        out += comparison_name(row.to);
        out += ',' + fmt_double(row.mean_relative_pct);
        out += ',' + std::to_string(row.n);
        out += '\n';
    }
    return out;
}

std::string stability_csv(const Report& report) {
    std::string out = "token,languages\n";
    for (const StabilityRow& row : report.stability) {
        out += csv_escape(row.token);
        out += ',';
        std::string joined;
        for (std::size_t i = 0; i < row.languages.size(); ++i) {
            if (i > 0) joined += ' ';
            joined += row.languages[i];
        }
        out += csv_escape(joined);
        out += '\n';
    }
    return out;
}

std::string tone_csv(const Report& report) {
    std::string out =
        "language,condition,inserted_tone_tokens,reference_vowels,insertions_per_100_vowels,"
        "invalid_combinations,ref_is_tonal,flagged\n";
    for (const ToneDiagnosticRow& row : report.tone_diagnostics) {
        out += csv_escape(row.language);
        out += ',';
        out += condition_name(row.condition);
        out += ',' + std::to_string(row.diagnostic.inserted_tone_tokens);
        out += ',' + std::to_string(row.diagnostic.reference_vowels);
        out += ',' + fmt_double(row.diagnostic.insertions_per_100_vowels);
        out += ',' + std::to_string(row.diagnostic.invalid_combinations);
        out += std::string(",") + (row.diagnostic.ref_is_tonal ? "true" : "false");
        out += std::string(",") + (row.diagnostic.spurious_tonality ? "true" : "false");
        out += '\n';
    }
    return out;
}

}  // namespace

std::vector<std::string> emit(const Report& report, ReportFormat format,
                              const std::string& out_dir) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw input_error("cannot create output directory " + out_dir + ": " + ec.message());

    std::vector<std::string> written;
    auto write = [&](const std::string& name, const std::string& content) {
        const std::string path = (std::filesystem::path(out_dir) / name).string();
        detail::write_file(path, content);
        written.push_back(path);
    };

    if (format == ReportFormat::Json) {
        write("report.json", to_json(report));
        return written;
    }
    write("meta.csv", meta_csv(report.meta));
    write("summary.csv", summary_csv(report));
    write("per_phone.csv", per_phone_csv(report));
    write("fig1_bins.csv", fig1_csv(report));
    write("fig2_rows.csv", fig2_csv(report));
    write("feature_groups.csv", feature_groups_csv(report));
    write("stability.csv", stability_csv(report));
    write("tone_diagnostics.csv", tone_csv(report));
    return written;
}

Report read_csv_report(const std::string& dir) {
    const auto in_dir = [&dir](const char* name) {
        return (std::filesystem::path(dir) / name).string();
    };
    Report report;

    {
        const CsvFile file = read_csv_file(in_dir("meta.csv"), 2);
        std::map<std::string, std::string> meta;
        for (const auto& row : file.rows) meta[row[0]] = row[1];
        const auto need = [&meta, &dir](const std::string& key) -> const std::string& {
            const auto it = meta.find(key);
            if (it == meta.end()) {
                throw input_error(dir + "/meta.csv: missing key " + key);
            }
            return it->second;
        };
        report.meta.schema_version = static_cast<int>(parse_count(need("schema_version"), "meta"));
        report.meta.mode = parse_mode(need("mode"), "meta");
        report.meta.options.pre_tokenized = parse_bool(need("pre_tokenized"), "meta");
        report.meta.options.permissive = parse_bool(need("permissive"), "meta");
        report.meta.options.clip_floor_pp = parse_double(need("clip_floor_pp"), "meta");
        report.meta.options.stability_threshold_pp =
            parse_double(need("stability_threshold_pp"), "meta");
        report.meta.options.min_languages =
            static_cast<std::size_t>(parse_count(need("min_languages"), "meta"));
        report.meta.options.min_ref_count = parse_count(need("min_ref_count"), "meta");
        report.meta.options.tone_threshold_per_100 =
            parse_double(need("tone_threshold_per_100"), "meta");
    }

    for (const auto& f : read_csv_file(in_dir("summary.csv"), 10).rows) {
        SummaryRow row;
        row.language = f[0];
        row.condition = parse_condition_or_throw(f[1], "summary.csv");
        row.pter = parse_double(f[2], "summary.csv") / 100.0;
        if (!f[3].empty()) {
            ErrorTally tally;
            tally.n_ref = parse_count(f[3], "summary.csv");
            tally.correct = parse_count(f[4], "summary.csv");
            tally.sub = parse_count(f[5], "summary.csv");
            tally.del = parse_count(f[6], "summary.csv");
            tally.ins = parse_count(f[7], "summary.csv");
            row.tally = tally;
        }
        if (!f[8].empty()) row.abs_improvement_pp = parse_double(f[8], "summary.csv");
        if (!f[9].empty()) row.rel_improvement_pct = parse_double(f[9], "summary.csv");
        report.summary.push_back(std::move(row));
    }

    for (const auto& f : read_csv_file(in_dir("per_phone.csv"), 10).rows) {
        PerPhoneRow row;
        row.language = f[0];
        row.condition = parse_condition_or_throw(f[1], "per_phone.csv");
        row.token = f[2];
        if (!f[3].empty()) {
            PhoneErrorStats stats;
            stats.ref_count = parse_count(f[3], "per_phone.csv");
            stats.correct = parse_count(f[4], "per_phone.csv");
            stats.sub_out = parse_count(f[5], "per_phone.csv");
            stats.del = parse_count(f[6], "per_phone.csv");
            stats.ins = parse_count(f[7], "per_phone.csv");
            stats.sub_in = parse_count(f[8], "per_phone.csv");
            row.stats = stats;
        }
        if (!f[9].empty()) row.pter = parse_double(f[9], "per_phone.csv");
        report.per_phone.push_back(std::move(row));
    }

    for (const auto& f : read_csv_file(in_dir("fig1_bins.csv"), 11).rows) {
        Fig1Row row;
        row.to = parse_comparison(f[0], "fig1_bins.csv");
        row.sharing_count = static_cast<std::size_t>(parse_count(f[1], "fig1_bins.csv"));
        row.stats = boxplot_from_fields(f, 2, "fig1_bins.csv");
        row.skipped = static_cast<std::size_t>(parse_count(f[10], "fig1_bins.csv"));
        report.fig1_bins.push_back(std::move(row));
    }

    for (const auto& f : read_csv_file(in_dir("fig2_rows.csv"), 10).rows) {
        Fig2Row row;
        row.token = f[0];
        row.condition = parse_condition_or_throw(f[1], "fig2_rows.csv");
        row.stats = boxplot_from_fields(f, 2, "fig2_rows.csv");
        report.fig2_rows.push_back(std::move(row));
    }

    for (const auto& f : read_csv_file(in_dir("feature_groups.csv"), 5).rows) {
        FeatureGroupRow row;
        row.axis = parse_axis(f[0], "feature_groups.csv");
        row.category = f[1];
        row.to = parse_comparison(f[2], "feature_groups.csv");
        row.mean_relative_pct = parse_double(f[3], "feature_groups.csv");
        row.n = static_cast<std::size_t>(parse_count(f[4], "feature_groups.csv"));
        report.feature_groups.push_back(std::move(row));
    }

    for (const auto& f : read_csv_file(in_dir("stability.csv"), 2).rows) {
        StabilityRow row;
        row.token = f[0];
        std::string_view joined = f[1];
        std::size_t pos = 0;
        while (pos < joined.size()) {
            std::size_t space = joined.find(' ', pos);
            if (space == std::string_view::npos) space = joined.size();
            row.languages.emplace_back(joined.substr(pos, space - pos));
            pos = space + 1;
        }
        report.stability.push_back(std::move(row));
    }

    for (const auto& f : read_csv_file(in_dir("tone_diagnostics.csv"), 8).rows) {
        ToneDiagnosticRow row;
        row.language = f[0];
        row.condition = parse_condition_or_throw(f[1], "tone_diagnostics.csv");
        row.diagnostic.inserted_tone_tokens =
            static_cast<std::size_t>(parse_count(f[2], "tone_diagnostics.csv"));
        row.diagnostic.reference_vowels =
            static_cast<std::size_t>(parse_count(f[3], "tone_diagnostics.csv"));
        row.diagnostic.insertions_per_100_vowels = parse_double(f[4], "tone_diagnostics.csv");
        row.diagnostic.invalid_combinations =
            static_cast<std::size_t>(parse_count(f[5], "tone_diagnostics.csv"));
        row.diagnostic.ref_is_tonal = parse_bool(f[6], "tone_diagnostics.csv");
        row.diagnostic.spurious_tonality = parse_bool(f[7], "tone_diagnostics.csv");
        report.tone_diagnostics.push_back(std::move(row));
    }

    return report;
}

}  // namespace pter
