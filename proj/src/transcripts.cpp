#include "pter/transcripts.hpp"

#include <set>

#include "file_util.hpp"
#include "pter/errors.hpp"

namespace pter {

namespace {

std::string location(std::string_view name, std::size_t line_number) {
    return std::string(name) + ":" + std::to_string(line_number);
}

TokenSequence parse_pre_tokenized(std::string_view payload, std::string utterance_id,
                                  const std::string& loc, bool permissive,
                                  std::vector<std::string>* warnings) {
    TokenSequence seq;
    seq.utterance_id = std::move(utterance_id);
    std::size_t pos = 0;
    while (pos < payload.size()) {
        std::size_t space = payload.find(' ', pos);
        if (space == std::string_view::npos) space = payload.size();
        std::string_view piece = payload.substr(pos, space - pos);
        pos = space + 1;
        if (piece.empty()) continue;
        if (!is_known_token_text(piece)) {
            const std::string message =
                loc + ": unknown token \"" + std::string(piece) + "\"";
            if (!permissive) throw input_error(message);
            if (warnings != nullptr) warnings->push_back(message + "; passed through");
        }
        seq.tokens.push_back(make_token(piece));
    }
    return seq;
}

}  // namespace

std::vector<TokenSequence> parse_transcripts(std::string_view content, std::string_view name,
                                             const LoadOptions& options,
                                             std::vector<std::string>* warnings) {
    std::vector<TokenSequence> sequences;
    std::set<std::string> seen_ids;
    std::size_t line_number = 0;
    std::size_t pos = 0;
    while (pos <= content.size()) {
        if (pos == content.size() && line_number > 0) break;
        std::size_t eol = content.find('\n', pos);
        if (eol == std::string_view::npos) eol = content.size();
        std::string_view line = content.substr(pos, eol - pos);
        pos = eol + 1;
        ++line_number;
        if (line_number == 1 && line.starts_with("\xEF\xBB\xBF")) line.remove_prefix(3);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty()) continue;

        const std::string loc = location(name, line_number);
        const std::size_t tab = line.find('\t');
        if (tab == std::string_view::npos) {
            throw input_error(loc + ": expected \"<utterance-id><TAB><payload>\", found no tab");
        }
        std::string id(line.substr(0, tab));
        if (id.empty()) throw input_error(loc + ": empty utterance id");
        if (!seen_ids.insert(id).second) {
            throw input_error(loc + ": duplicate utterance id \"" + id + "\"");
        }
        std::string_view payload = line.substr(tab + 1);

        if (options.pre_tokenized) {
            sequences.push_back(
                parse_pre_tokenized(payload, std::move(id), loc, options.permissive, warnings));
        } else {
            try {
                sequences.push_back(tokenize(payload, std::move(id),
                                             TokenizerOptions{options.permissive}, warnings));
            } catch (const Error& e) {
                throw Error(e.kind(), loc + ": " + e.what());
            }
        }
    }
    return sequences;
}

std::vector<TokenSequence> load_transcripts(const std::string& path, const LoadOptions& options,
                                            std::vector<std::string>* warnings) {
    return parse_transcripts(detail::read_file(path), path, options, warnings);
}

ScoredCorpus score_corpus(const std::vector<TokenSequence>& refs,
                          const std::vector<TokenSequence>& hyps) {
    std::map<std::string, const TokenSequence*> hyp_by_id;
    for (const TokenSequence& hyp : hyps) {
        if (!hyp_by_id.emplace(hyp.utterance_id, &hyp).second) {
            throw input_error("duplicate hypothesis utterance id \"" + hyp.utterance_id + "\"");
        }
    }
    std::set<std::string> ref_ids;
    for (const TokenSequence& ref : refs) {
        if (!ref_ids.insert(ref.utterance_id).second) {
            throw input_error("duplicate reference utterance id \"" + ref.utterance_id + "\"");
        }
    }
    for (const auto& [id, hyp] : hyp_by_id) {
        (void)hyp;
        if (ref_ids.count(id) == 0) {
            throw input_error("hypothesis utterance \"" + id + "\" has no reference");
        }
    }

    ScoredCorpus corpus;
    const TokenSequence empty_hyp;
    std::vector<ErrorTally> tallies;
    tallies.reserve(refs.size());
    for (const TokenSequence& ref : refs) {
        const auto it = hyp_by_id.find(ref.utterance_id);
        const TokenSequence& hyp = it == hyp_by_id.end() ? empty_hyp : *it->second;
        Alignment a = align(ref, hyp);
        a.utterance_id = ref.utterance_id;
        tallies.push_back(tally(a));
        corpus.alignments.push_back(std::move(a));
    }
    corpus.tally = merge(tallies);
    corpus.phone_stats = per_phone_stats(corpus.alignments);
    return corpus;
}

}  // namespace pter
