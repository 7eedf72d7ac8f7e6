// Manifest syntax: one "key = value" per line, # comments. Keys are dotted
// paths; the language.<id>.* family carries the per-language data and the
// options.* family mirrors the command-line flags.

#include "pter/manifest.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <set>

#include "file_util.hpp"
#include "pter/errors.hpp"

namespace pter {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> parts;
    std::size_t pos = 0;
    while (true) {
        const std::size_t next = s.find(sep, pos);
        if (next == std::string_view::npos) {
            parts.push_back(s.substr(pos));
            return parts;
        }
        parts.push_back(s.substr(pos, next - pos));
        pos = next + 1;
    }
}

bool valid_language_id(std::string_view id) {
    if (id.empty()) return false;
    return std::all_of(id.begin(), id.end(), [](char c) {
        return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
               c == '_' || c == '-';
    });
}

bool parse_bool(std::string_view value, const std::string& loc) {
    if (value == "true") return true;
    if (value == "false") return false;
    throw config_error(loc + ": expected true or false, got \"" + std::string(value) + "\"");
}

double parse_number(std::string_view value, const std::string& loc) {
    double out = 0.0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc() || ptr != value.data() + value.size()) {
        throw config_error(loc + ": expected a number, got \"" + std::string(value) + "\"");
    }
    return out;
}

std::uint64_t parse_count(std::string_view value, const std::string& loc) {
    std::uint64_t out = 0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc() || ptr != value.data() + value.size()) {
        throw config_error(loc + ": expected a non-negative integer, got \"" +
                           std::string(value) + "\"");
    }
    return out;
}

}  // namespace

ExperimentManifest parse_manifest(std::string_view content, std::string_view name) {
    ExperimentManifest manifest;
    std::map<std::string, LanguageSpec> languages;
    std::optional<int> schema_version;
    std::optional<ManifestMode> declared_mode;
    bool saw_transcript_keys = false;
    bool saw_precomputed_keys = false;
    std::map<std::string, std::size_t> seen_keys;

    const std::vector<std::string_view> lines = split(content, '\n');
    for (std::size_t i = 0; i < lines.size(); ++i) {
        std::string_view line = lines[i];
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        line = trim(line);
        if (line.empty() || line.front() == '#') continue;
        const std::string loc = std::string(name) + ":" + std::to_string(i + 1);

        const std::size_t eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw config_error(loc + ": expected \"key = value\"");
        }
        const std::string key(trim(line.substr(0, eq)));
        const std::string value(trim(line.substr(eq + 1)));
        if (key.empty()) throw config_error(loc + ": empty key");
        if (value.empty()) throw config_error(loc + ": empty value for " + key);
        const auto [prev, fresh] = seen_keys.emplace(key, i + 1);
        if (!fresh) {
            throw config_error(loc + ": duplicate key " + key + " (first at line " +
                               std::to_string(prev->second) + ")");
        }

        const std::vector<std::string_view> parts = split(key, '.');
        if (key == "schema_version") {
            schema_version = static_cast<int>(parse_count(value, loc));
        } else if (key == "mode") {
            if (value == "transcripts") {
                declared_mode = ManifestMode::Transcripts;
            } else if (value == "precomputed") {
                declared_mode = ManifestMode::Precomputed;
            } else {
                throw config_error(loc + ": mode must be transcripts or precomputed");
            }
        } else if (parts.size() == 2 && parts[0] == "options") {
            const std::string_view option = parts[1];
            if (option == "pre_tokenized") {
                manifest.options.pre_tokenized = parse_bool(value, loc);
            } else if (option == "permissive") {
                manifest.options.permissive = parse_bool(value, loc);
            } else if (option == "clip_floor_pp") {
                manifest.options.clip_floor_pp = parse_number(value, loc);
            } else if (option == "stability_threshold_pp") {
                manifest.options.stability_threshold_pp = parse_number(value, loc);
            } else if (option == "min_languages") {
                manifest.options.min_languages =
                    static_cast<std::size_t>(parse_count(value, loc));
            } else if (option == "min_ref_count") {
                manifest.options.min_ref_count = parse_count(value, loc);
            } else if (option == "tone_threshold_per_100") {
                manifest.options.tone_threshold_per_100 = parse_number(value, loc);
            } else {
                throw config_error(loc + ": unknown option \"" + std::string(option) + "\"");
            }
        } else if (parts.size() >= 3 && parts[0] == "language") {
            const std::string id(parts[1]);
            if (!valid_language_id(id)) {
                throw config_error(loc + ": invalid language id \"" + id +
                                   "\" (use letters, digits, _ or -)");
            }
            LanguageSpec& lang = languages[id];
            lang.id = id;
            if (parts.size() == 3 && parts[2] == "tonal") {
                lang.is_tonal = parse_bool(value, loc);
            } else if (parts.size() == 3 && parts[2] == "phones") {
                lang.phones_path = value;
                saw_precomputed_keys = true;
            } else if (parts.size() == 4 && parts[2] == "pter") {
                const std::optional<Condition> c = parse_condition(parts[3]);
                if (!c) {
                    throw config_error(loc + ": unknown condition \"" + std::string(parts[3]) +
                                       "\" (expected mono, cross, or multi)");
                }
                lang.corpus_pter[*c] = parse_number(value, loc) / 100.0;
                saw_precomputed_keys = true;
            } else if (parts.size() == 4 && (parts[3] == "ref" || parts[3] == "hyp")) {
                const std::optional<Condition> c = parse_condition(parts[2]);
                if (!c) {
                    throw config_error(loc + ": unknown condition \"" + std::string(parts[2]) +
                                       "\" (expected mono, cross, or multi)");
                }
                ConditionFiles& files = lang.files[*c];
                (parts[3] == "ref" ? files.ref_path : files.hyp_path) = value;
                saw_transcript_keys = true;
            } else {
                throw config_error(loc + ": unknown key " + key);
            }
        } else {
            throw config_error(loc + ": unknown key " + key);
        }
    }

    if (!schema_version) {
        throw config_error(std::string(name) + ": missing schema_version");
    }
    if (*schema_version != 1) {
        throw config_error(std::string(name) + ": unsupported schema_version " +
                           std::to_string(*schema_version) + " (this build reads version 1)");
    }
    if (saw_transcript_keys && saw_precomputed_keys) {
        throw config_error(std::string(name) +
                           ": mixes transcript paths with precomputed rates; pick one mode");
    }
    if (languages.empty()) {
        throw config_error(std::string(name) + ": no languages declared");
    }
    const ManifestMode inferred =
        saw_precomputed_keys ? ManifestMode::Precomputed : ManifestMode::Transcripts;
    if (declared_mode && *declared_mode != inferred) {
        throw config_error(std::string(name) + ": mode says " +
                           (declared_mode == ManifestMode::Precomputed ? "precomputed"
                                                                       : "transcripts") +
                           " but the language keys say otherwise");
    }
    manifest.mode = inferred;

    static constexpr Condition kAll[] = {Condition::Mono, Condition::Cross, Condition::Multi};
    for (auto& [id, lang] : languages) {
        for (const Condition c : kAll) {
            if (manifest.mode == ManifestMode::Transcripts) {
                const auto it = lang.files.find(c);
                if (it == lang.files.end() || it->second.ref_path.empty() ||
                    it->second.hyp_path.empty()) {
                    throw config_error(std::string(name) + ": language " + id + " needs " +
                                       "language." + id + "." +
                                       std::string(condition_name(c)) + ".ref and .hyp");
                }
            } else if (lang.corpus_pter.count(c) == 0) {
                throw config_error(std::string(name) + ": language " + id + " needs " +
                                   "language." + id + ".pter." +
                                   std::string(condition_name(c)));
            }
        }
        manifest.languages.push_back(std::move(lang));
    }
    return manifest;
}

ExperimentManifest load_manifest(const std::string& path) {
    ExperimentManifest manifest = parse_manifest(detail::read_file(path), path);
    const std::filesystem::path base = std::filesystem::path(path).parent_path();
    manifest.base_dir = base.empty() ? "." : base.string();

    auto resolve = [&manifest, &path](std::string& file_path) {
        if (file_path.empty()) return;
        file_path = (std::filesystem::path(manifest.base_dir) / file_path).string();
        if (!std::filesystem::exists(file_path)) {
            throw input_error(path + ": referenced file does not exist: " + file_path);
        }
    };
    for (LanguageSpec& lang : manifest.languages) {
        for (auto& [condition, files] : lang.files) {
            (void)condition;
            resolve(files.ref_path);
            resolve(files.hyp_path);
        }
        resolve(lang.phones_path);
    }
    return manifest;
}

std::map<Condition, std::map<std::string, double>> parse_phone_pter_table(
    std::string_view content, std::string_view name) {
    std::map<Condition, std::map<std::string, double>> table;
    std::set<std::string> seen_tokens;
    const std::vector<std::string_view> lines = split(content, '\n');
    for (std::size_t i = 0; i < lines.size(); ++i) {
        std::string_view line = lines[i];
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty() || line.front() == '#') continue;
        const std::string loc = std::string(name) + ":" + std::to_string(i + 1);
        const std::vector<std::string_view> f = split(line, '\t');
        if (f.size() != 4) {
            throw input_error(loc + ": expected 4 tab-separated fields (token, mono, cross, "
                                    "multi), got " +
                              std::to_string(f.size()));
        }
        const std::string token(f[0]);
        if (token.empty()) throw input_error(loc + ": empty token");
        if (!seen_tokens.insert(token).second) {
            throw input_error(loc + ": duplicate token \"" + token + "\"");
        }
        static constexpr Condition kAll[] = {Condition::Mono, Condition::Cross,
                                             Condition::Multi};
        for (std::size_t c = 0; c < 3; ++c) {
            const std::string_view field = f[c + 1];
            if (field == "-") continue;
            double value = 0.0;
            const auto [ptr, ec] =
                std::from_chars(field.data(), field.data() + field.size(), value);
            if (ec != std::errc() || ptr != field.data() + field.size()) {
                throw input_error(loc + ": expected a rate in percent or \"-\", got \"" +
                                  std::string(field) + "\"");
            }
            table[kAll[c]].emplace(token, value / 100.0);
        }
    }
    return table;
}

std::map<Condition, std::map<std::string, double>> load_phone_pter_table(
    const std::string& path) {
    return parse_phone_pter_table(detail::read_file(path), path);
}

}  // namespace pter
