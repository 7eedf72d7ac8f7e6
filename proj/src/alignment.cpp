#include "pter/alignment.hpp"

#include <algorithm>

#include "pter/errors.hpp"

namespace pter {

std::string_view edit_kind_name(EditKind kind) {
    switch (kind) {
        case EditKind::Correct: return "correct";
        case EditKind::Substitute: return "substitute";
        case EditKind::Delete: return "delete";
        case EditKind::Insert: return "insert";
    }
    return "?";
}

std::vector<Token> Alignment::ref_tokens() const {
    std::vector<Token> out;
    for (const EditStep& step : steps) {
        if (step.ref_token) out.push_back(*step.ref_token);
    }
    return out;
}

std::vector<Token> Alignment::hyp_tokens() const {
    std::vector<Token> out;
    for (const EditStep& step : steps) {
        if (step.hyp_token) out.push_back(*step.hyp_token);
    }
    return out;
}

Alignment align(const TokenSequence& ref, const TokenSequence& hyp) {
    const std::vector<Token>& r = ref.tokens;
    const std::vector<Token>& h = hyp.tokens;
    const std::size_t n = r.size();
    const std::size_t m = h.size();

    // dist[i][j]: minimal cost aligning the first i reference tokens with
    // the first j hypothesis tokens. Row-major in a flat vector.
    std::vector<std::size_t> dist((n + 1) * (m + 1));
    auto at = [m, &dist](std::size_t i, std::size_t j) -> std::size_t& {
        return dist[i * (m + 1) + j];
    };
    for (std::size_t i = 0; i <= n; ++i) at(i, 0) = i;
    for (std::size_t j = 0; j <= m; ++j) at(0, j) = j;
    for (std::size_t i = 1; i <= n; ++i) {
        for (std::size_t j = 1; j <= m; ++j) {
            const std::size_t match = at(i - 1, j - 1) + (r[i - 1] == h[j - 1] ? 0 : 1);
            const std::size_t del = at(i - 1, j) + 1;
            const std::size_t ins = at(i, j - 1) + 1;
            at(i, j) = std::min({match, del, ins});
        }
    }

    // Backtrace, preferring Correct, then Substitute, then Delete, then
    // Insert whenever costs tie. Steps come out reversed.
    Alignment out;
    out.utterance_id = ref.utterance_id.empty() ? hyp.utterance_id : ref.utterance_id;
    out.cost = at(n, m);
    out.steps.reserve(std::max(n, m));
    std::size_t i = n;
    std::size_t j = m;
    while (i > 0 || j > 0) {
        if (i > 0 && j > 0 && r[i - 1] == h[j - 1] && at(i, j) == at(i - 1, j - 1)) {
            out.steps.push_back({EditKind::Correct, r[i - 1], h[j - 1]});
            --i, --j;
        } else if (i > 0 && j > 0 && at(i, j) == at(i - 1, j - 1) + 1) {
            out.steps.push_back({EditKind::Substitute, r[i - 1], h[j - 1]});
            --i, --j;
        } else if (i > 0 && at(i, j) == at(i - 1, j) + 1) {
            out.steps.push_back({EditKind::Delete, r[i - 1], std::nullopt});
            --i;
        } else {
            out.steps.push_back({EditKind::Insert, std::nullopt, h[j - 1]});
            --j;
        }
    }
    std::reverse(out.steps.begin(), out.steps.end());
    return out;
}

ErrorTally tally(const Alignment& a) {
    ErrorTally t;
    for (const EditStep& step : a.steps) {
        switch (step.kind) {
            case EditKind::Correct: ++t.correct; break;
            case EditKind::Substitute: ++t.sub; break;
            case EditKind::Delete: ++t.del; break;
            case EditKind::Insert: ++t.ins; break;
        }
    }
    t.n_ref = t.correct + t.sub + t.del;
    return t;
}

ErrorTally merge(const ErrorTally& a, const ErrorTally& b) {
    return {a.n_ref + b.n_ref, a.correct + b.correct, a.sub + b.sub, a.del + b.del,
            a.ins + b.ins};
}

ErrorTally merge(const std::vector<ErrorTally>& tallies) {
    ErrorTally total;
    for (const ErrorTally& t : tallies) total = merge(total, t);
    return total;
}

double pter(const ErrorTally& t) {
    if (t.n_ref == 0) throw input_error("PTER is undefined for an empty reference (n_ref = 0)");
    return static_cast<double>(t.sub + t.del + t.ins) / static_cast<double>(t.n_ref);
}

std::optional<double> PhoneErrorStats::pter(bool mirror_substitutions) const {
    if (ref_count == 0) return std::nullopt;
    const std::uint64_t errors = sub_out + del + ins + (mirror_substitutions ? sub_in : 0);
    return static_cast<double>(errors) / static_cast<double>(ref_count);
}

std::map<std::string, PhoneErrorStats> per_phone_stats(const std::vector<Alignment>& alignments) {
    std::map<std::string, PhoneErrorStats> stats;
    for (const Alignment& a : alignments) {
        for (const EditStep& step : a.steps) {
            switch (step.kind) {
                case EditKind::Correct: {
                    PhoneErrorStats& s = stats[step.ref_token->text];
                    ++s.ref_count;
                    ++s.correct;
                    break;
                }
                case EditKind::Substitute: {
                    PhoneErrorStats& out = stats[step.ref_token->text];
                    ++out.ref_count;
                    ++out.sub_out;
                    ++stats[step.hyp_token->text].sub_in;
                    break;
                }
                case EditKind::Delete: {
                    PhoneErrorStats& s = stats[step.ref_token->text];
                    ++s.ref_count;
                    ++s.del;
                    break;
                }
                case EditKind::Insert: ++stats[step.hyp_token->text].ins; break;
            }
        }
    }
    return stats;
}

double clip_improvement(double delta_pp, double floor_pp) {
    return std::max(delta_pp, floor_pp);
}

}  // namespace pter
