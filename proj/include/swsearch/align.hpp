#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "swsearch/scoring.hpp"
#include "swsearch/sequence.hpp"

namespace swsearch {

/// Optimal local alignment score. Never negative: the empty alignment is
/// always admissible.
struct AlignScore {
    std::int32_t value = 0;
    auto operator<=>(const AlignScore&) const = default;
};

namespace detail {

// Sentinel standing in for -infinity in the gap layers. Low enough to never
// win a max against a reachable cell, high enough that subtracting gap
// penalties cannot underflow.
inline constexpr std::int32_t kNegInf = std::numeric_limits<std::int32_t>::min() / 4;

// Adaptor making a substitution matrix row addressable by query position.
struct RowView {
    const std::int32_t* matrix_row;
    const std::uint8_t* query_codes;
    std::int32_t operator[](std::size_t j) const { return matrix_row[query_codes[j]]; }
};

// Zero-floored affine-gap recurrence (three layers), computed column-major
// over the query with the subject as the outer loop. One H row and one
// vertical-gap row over the query plus a horizontal-gap scalar give linear
// space. `score_row(code)` must return the row of substitution scores for a
// subject symbol, indexed by query position.
template <typename RowFn>
std::int32_t local_score_rows(std::size_t query_len, const std::vector<std::uint8_t>& subject,
                              RowFn&& score_row, std::int32_t open, std::int32_t extend) {
    if (query_len == 0 || subject.empty()) return 0;
    std::vector<std::int32_t> h(query_len + 1, 0);
    std::vector<std::int32_t> gap_v(query_len + 1, kNegInf);
    std::int32_t best = 0;
    for (std::uint8_t code : subject) {
        const auto row = score_row(code);
        std::int32_t diag = 0;
        std::int32_t gap_h = kNegInf;
        for (std::size_t q = 1; q <= query_len; ++q) {
            gap_h = std::max(h[q - 1] - open, gap_h - extend);
            gap_v[q] = std::max(h[q] - open, gap_v[q] - extend);
            std::int32_t cell = diag + row[q - 1];
            cell = std::max({std::int32_t{0}, cell, gap_h, gap_v[q]});
            diag = h[q];
            h[q] = cell;
            best = std::max(best, cell);
        }
    }
    return best;
}

} // namespace detail

/// Scalar reference kernel: full-precision affine-gap local alignment.
inline AlignScore sw_score_scalar(const EncodedSequence& query, const EncodedSequence& subject,
                                  const ScoringMatrix& matrix, const GapModel& gaps) {
    const std::int32_t score = detail::local_score_rows(
        query.length(), subject.codes,
        [&](std::uint8_t code) {
            return detail::RowView{matrix.row(code), query.codes.data()};
        },
        gaps.open(), gaps.extend());
    return {score};
}

/// A group of subjects scored simultaneously, one per lane, with no data
/// exchanged between lanes. Fewer subjects than lanes means the tail lanes
/// are padding and score 0.
struct LaneBatch {
    std::size_t lane_width = 1;
    std::vector<const EncodedSequence*> subjects;
};

/// Inter-task lane kernel. Lanes run in 16-bit saturating arithmetic; any
/// lane whose running maximum touches the 16-bit ceiling is recomputed at
/// full precision, so saturation is invisible in the results.
inline std::vector<AlignScore> sw_score_batch(const QueryProfile& profile, const LaneBatch& batch,
                                              const GapModel& gaps) {
    if (batch.lane_width < 1) throw std::invalid_argument("lane_width must be >= 1");
    if (batch.subjects.size() > batch.lane_width)
        throw std::invalid_argument("more subjects than lanes");

    const std::size_t width = batch.lane_width;
    const std::size_t m = profile.query_length();
    std::vector<AlignScore> scores(width, AlignScore{0});
    if (m == 0) return scores;

    constexpr std::int32_t kMax16 = std::numeric_limits<std::int16_t>::max();
    constexpr std::int32_t kMin16 = std::numeric_limits<std::int16_t>::min();
    const auto sat = [](std::int32_t v) {
        return static_cast<std::int16_t>(std::clamp(v, kMin16, kMax16));
    };

    const std::int32_t open = std::min(gaps.open(), -kMin16);
    const std::int32_t extend = std::min(gaps.extend(), -kMin16);

    std::size_t max_len = 0;
    for (const EncodedSequence* s : batch.subjects)
        if (s) max_len = std::max(max_len, s->length());

    // Lane-major state: element q*width+l is lane l's value at query column q.
    std::vector<std::int16_t> h((m + 1) * width, 0);
    std::vector<std::int16_t> gap_v((m + 1) * width, sat(detail::kNegInf));
    std::vector<std::int16_t> gap_h(width, 0);
    std::vector<std::int16_t> diag(width, 0);
    std::vector<std::int16_t> best(width, 0);
    std::vector<const std::int16_t*> row(width, nullptr);

    for (std::size_t t = 0; t < max_len; ++t) {
        for (std::size_t l = 0; l < batch.subjects.size(); ++l) {
            const EncodedSequence* s = batch.subjects[l];
            row[l] = (s && t < s->length()) ? profile.row16(s->codes[t]) : nullptr;
            diag[l] = 0;
            gap_h[l] = sat(detail::kNegInf);
        }
        for (std::size_t q = 1; q <= m; ++q) {
            const std::size_t idx = q * width;
            for (std::size_t l = 0; l < batch.subjects.size(); ++l) {
                if (!row[l]) continue;
                const std::int32_t e = std::max(h[idx - width + l] - open, gap_h[l] - extend);
                const std::int32_t f = std::max(h[idx + l] - open, gap_v[idx + l] - extend);
                std::int32_t cell = diag[l] + row[l][q - 1];
                cell = std::max({std::int32_t{0}, cell, e, f});
                diag[l] = h[idx + l];
                h[idx + l] = sat(cell);
                gap_v[idx + l] = sat(f);
                gap_h[l] = sat(e);
                best[l] = std::max(best[l], h[idx + l]);
            }
        }
    }

    for (std::size_t l = 0; l < batch.subjects.size(); ++l) {
        if (!batch.subjects[l]) continue;
        if (best[l] >= kMax16) {
            // Saturated: wide recompute of this lane only.
            scores[l].value = detail::local_score_rows(
                m, batch.subjects[l]->codes, [&](std::uint8_t code) { return profile.row(code); },
                gaps.open(), gaps.extend());
        } else {
            scores[l].value = best[l];
        }
    }
    return scores;
}

/// Intra-task wavefront kernel: the query is split into stripes of
/// chunk_width columns; stripes advance over the subject in anti-diagonal
/// steps, each consuming the (H, horizontal-gap) border column its left
/// neighbour produced one step earlier. Scores match the scalar kernel for
/// every chunk_width.
inline AlignScore sw_score_wavefront(const EncodedSequence& query, const EncodedSequence& subject,
                                     const ScoringMatrix& matrix, const GapModel& gaps,
                                     std::size_t chunk_width) {
    if (chunk_width < 1) throw std::invalid_argument("chunk_width must be >= 1");
    const std::size_t m = query.length();
    const std::size_t n = subject.length();
    if (m == 0 || n == 0) return {0};

    const std::size_t stripes = (m + chunk_width - 1) / chunk_width;
    const std::int32_t open = gaps.open();
    const std::int32_t extend = gaps.extend();

    struct Border {
        std::int32_t h = 0;
        std::int32_t gap_h = detail::kNegInf;
    };

    // Per-stripe DP state plus the single border slot feeding each stripe.
    std::vector<std::vector<std::int32_t>> h(stripes), gap_v(stripes);
    for (std::size_t k = 0; k < stripes; ++k) {
        const std::size_t width = std::min(chunk_width, m - k * chunk_width);
        h[k].assign(width, 0);
        gap_v[k].assign(width, detail::kNegInf);
    }
    std::vector<Border> inbound(stripes);            // border for the row about to be processed
    std::vector<std::int32_t> diag_seed(stripes, 0); // H of the previous row's inbound border

    std::int32_t best = 0;
    // Step d processes row (d - k + 1) of stripe k; iterating stripes in
    // descending order lets each consume its inbound border before the left
    // neighbour overwrites it with the next row's values.
    const std::size_t steps = n + stripes - 1;
    for (std::size_t d = 0; d < steps; ++d) {
        const std::size_t k_hi = std::min(d, stripes - 1);
        const std::size_t k_lo = d >= n ? d - n + 1 : 0;
        for (std::size_t k = k_hi + 1; k-- > k_lo;) {
            const std::size_t t = d - k; // 0-based subject row
            const std::size_t col0 = k * chunk_width;
            const std::size_t width = h[k].size();
            const std::int32_t* row = matrix.row(subject.codes[t]);

            Border in = inbound[k];
            if (k == 0) in = Border{0, detail::kNegInf};
            std::int32_t diag = (k == 0) ? 0 : diag_seed[k];
            std::int32_t h_left = in.h;
            std::int32_t gap_h = in.gap_h;
            for (std::size_t c = 0; c < width; ++c) {
                gap_h = std::max(h_left - open, gap_h - extend);
                gap_v[k][c] = std::max(h[k][c] - open, gap_v[k][c] - extend);
                std::int32_t cell = diag + row[query.codes[col0 + c]];
                cell = std::max({std::int32_t{0}, cell, gap_h, gap_v[k][c]});
                diag = h[k][c];
                h[k][c] = cell;
                h_left = cell;
                best = std::max(best, cell);
            }
            if (k + 1 < stripes) {
                diag_seed[k + 1] = inbound[k + 1].h;
                inbound[k + 1] = Border{h_left, gap_h};
            }
        }
    }
    return {best};
}

/// One step of an alignment edit script.
///   match       both residues present, equal codes
///   substitute  both residues present, differing codes
///   insert      subject residue opposite a gap in the query
///   del         query residue opposite a gap in the subject
enum class EditOp : std::uint8_t { match, substitute, insert, del };

/// Local alignment with explicit edit script. `capped` is set when the
/// direction matrix would not fit the memory budget; the script is then
/// empty but the score is still exact.
struct Alignment {
    std::size_t query_begin = 0, query_end = 0;     // [begin, end)
    std::size_t subject_begin = 0, subject_end = 0; // [begin, end)
    std::vector<EditOp> ops;
    AlignScore score;
    bool capped = false;
};

/// Full-matrix traceback. The direction matrix needs
/// (|query|+1)*(|subject|+1) bytes; pairs exceeding `memory_cap` bytes fall
/// back to a score-only result with the capped flag set. Ties inside the
/// cell max resolve in the fixed order (zero, diagonal, horizontal gap,
/// vertical gap), which affects the reported path, never the score.
inline Alignment sw_align_traceback(const EncodedSequence& query, const EncodedSequence& subject,
                                    const ScoringMatrix& matrix, const GapModel& gaps,
                                    std::size_t memory_cap = std::size_t{256} << 20) {
    Alignment out;
    const std::size_t m = query.length();
    const std::size_t n = subject.length();
    if (m == 0 || n == 0) return out;

    const std::size_t cells = (m + 1) * (n + 1);
    if (cells / (m + 1) != n + 1 || cells > memory_cap) {
        out.score = sw_score_scalar(query, subject, matrix, gaps);
        out.capped = true;
        return out;
    }

    // Direction byte per cell: bits 0-1 H provenance (0 stop, 1 diagonal,
    // 2 horizontal gap, 3 vertical gap); bit 2 set when the horizontal gap
    // extends an existing run rather than opening one; bit 3 likewise for
    // the vertical gap. Ties between open and extend resolve to open.
    enum : std::uint8_t { kStop = 0, kDiag = 1, kGapH = 2, kGapV = 3, kHExt = 4, kVExt = 8 };
    std::vector<std::uint8_t> dir(cells, kStop);

    const std::int32_t open = gaps.open();
    const std::int32_t extend = gaps.extend();
    std::vector<std::int32_t> h(m + 1, 0);
    std::vector<std::int32_t> gap_v(m + 1, detail::kNegInf);
    std::int32_t best = 0;
    std::size_t best_t = 0, best_q = 0;

    for (std::size_t t = 1; t <= n; ++t) {
        const std::int32_t* row = matrix.row(subject.codes[t - 1]);
        std::int32_t diag = 0;
        std::int32_t gap_h = detail::kNegInf;
        for (std::size_t q = 1; q <= m; ++q) {
            std::uint8_t d = 0;
            const std::int32_t h_open = h[q - 1] - open;
            const std::int32_t h_ext = gap_h - extend;
            gap_h = std::max(h_open, h_ext);
            if (h_open < h_ext) d |= kHExt;
            const std::int32_t v_open = h[q] - open;
            const std::int32_t v_ext = gap_v[q] - extend;
            gap_v[q] = std::max(v_open, v_ext);
            if (v_open < v_ext) d |= kVExt;

            std::int32_t cell = 0;
            std::uint8_t prov = kStop;
            const std::int32_t dscore = diag + row[query.codes[q - 1]];
            if (dscore > cell) cell = dscore, prov = kDiag;
            if (gap_h > cell) cell = gap_h, prov = kGapH;
            if (gap_v[q] > cell) cell = gap_v[q], prov = kGapV;

            dir[t * (m + 1) + q] = static_cast<std::uint8_t>(d | prov);
            diag = h[q];
            h[q] = cell;
            if (cell > best) best = cell, best_t = t, best_q = q;
        }
    }

    out.score = {best};
    if (best == 0) return out;

    std::size_t t = best_t, q = best_q;
    std::vector<EditOp> ops;
    enum class Layer { main, gap_h, gap_v };
    Layer layer = Layer::main;
    while (true) {
        const std::uint8_t d = dir[t * (m + 1) + q];
        if (layer == Layer::main) {
            const std::uint8_t prov = d & 3;
            if (prov == kStop) break;
            if (prov == kDiag) {
                ops.push_back(query.codes[q - 1] == subject.codes[t - 1] ? EditOp::match
                                                                         : EditOp::substitute);
                --t;
                --q;
            } else if (prov == kGapH) {
                layer = Layer::gap_h;
            } else {
                layer = Layer::gap_v;
            }
        } else if (layer == Layer::gap_h) {
            ops.push_back(EditOp::del);
            const bool extended = d & kHExt;
            --q;
            if (!extended) layer = Layer::main;
        } else {
            ops.push_back(EditOp::insert);
            const bool extended = d & kVExt;
            --t;
            if (!extended) layer = Layer::main;
        }
    }
    std::reverse(ops.begin(), ops.end());
    out.ops = std::move(ops);
    out.query_begin = q;
    out.query_end = best_q;
    out.subject_begin = t;
    out.subject_end = best_t;
    return out;
}

/// Recompute an edit script's score under a matrix and gap model. Used to
/// validate that tracebacks are sound.
inline std::int32_t rescore_alignment(const Alignment& alignment, const EncodedSequence& query,
                                      const EncodedSequence& subject, const ScoringMatrix& matrix,
                                      const GapModel& gaps) {
    std::int64_t total = 0;
    std::size_t q = alignment.query_begin;
    std::size_t t = alignment.subject_begin;
    EditOp prev = EditOp::match;
    for (EditOp op : alignment.ops) {
        switch (op) {
        case EditOp::match:
        case EditOp::substitute:
            total += matrix.score(subject.codes[t], query.codes[q]);
            ++q;
            ++t;
            break;
        case EditOp::del:
            total -= prev == EditOp::del ? gaps.extend() : gaps.open();
            ++q;
            break;
        case EditOp::insert:
            total -= prev == EditOp::insert ? gaps.extend() : gaps.open();
            ++t;
            break;
        }
        prev = op;
    }
    return static_cast<std::int32_t>(total);
}

} // namespace swsearch
