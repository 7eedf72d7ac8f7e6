// Transcript file ingestion and corpus-level scoring.

#pragma once

#include <map>
#include <string>
#include <vector>

#include "pter/alignment.hpp"
#include "pter/ipa.hpp"

namespace pter {

struct LoadOptions {
    // Payloads are space-separated tokens instead of raw IPA strings.
    bool pre_tokenized = false;
    bool permissive = false;
};

// One utterance per line: id, a single tab, payload. Raw payloads run
// through normalize + tokenize; pre-tokenized payloads split on spaces with
// each piece checked against the token repertoire. Reports file name and
// line number on every error.
std::vector<TokenSequence> load_transcripts(const std::string& path,
                                            const LoadOptions& options = {},
                                            std::vector<std::string>* warnings = nullptr);

std::vector<TokenSequence> parse_transcripts(std::string_view content, std::string_view name,
                                             const LoadOptions& options = {},
                                             std::vector<std::string>* warnings = nullptr);

struct ScoredCorpus {
    ErrorTally tally;
    std::map<std::string, PhoneErrorStats> phone_stats;
    std::vector<Alignment> alignments;  // in reference order
};

// Pairs utterances by id. References without a hypothesis score as full
// deletions; hypotheses without a reference are an error.
ScoredCorpus score_corpus(const std::vector<TokenSequence>& refs,
                          const std::vector<TokenSequence>& hyps);

}  // namespace pter
