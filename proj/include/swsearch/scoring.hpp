#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "swsearch/alphabet.hpp"
#include "swsearch/errors.hpp"
#include "swsearch/sequence.hpp"

namespace swsearch {

/// Symmetric substitution score table over the 24-symbol protein alphabet.
class ScoringMatrix {
public:
    static constexpr std::size_t size = 24;

    ScoringMatrix() { scores_.fill(0); }
    explicit ScoringMatrix(std::string name) : name_(std::move(name)) { scores_.fill(0); }

    const std::string& name() const { return name_; }

    std::int32_t score(std::uint8_t a, std::uint8_t b) const { return scores_[a * size + b]; }
    void set(std::uint8_t a, std::uint8_t b, std::int32_t v) { scores_[a * size + b] = v; }

    /// Row of scores against a fixed first symbol, indexed by second symbol.
    const std::int32_t* row(std::uint8_t a) const { return scores_.data() + a * size; }

    bool operator==(const ScoringMatrix& other) const { return scores_ == other.scores_; }

private:
    std::string name_;
    std::array<std::int32_t, size * size> scores_{};
};

/// Affine gap penalties stored as positive magnitudes: a gap of length L
/// costs open + (L-1)*extend. The common "10(2)" shorthand means
/// open=10, extend=2.
class GapModel {
public:
    GapModel(std::int32_t open, std::int32_t extend) : open_(open), extend_(extend) {
        if (extend < 0 || open < extend)
            throw std::invalid_argument("gap model requires open >= extend >= 0");
    }

    std::int32_t open() const { return open_; }
    std::int32_t extend() const { return extend_; }

private:
    std::int32_t open_;
    std::int32_t extend_;
};

/// The published BLOSUM62 table (half-bit units) over the canonical
/// 24-symbol order A R N D C Q E G H I L K M F P S T W Y V B Z X *.
inline const ScoringMatrix& blosum62() {
    static const ScoringMatrix matrix = [] {
        // clang-format off
        static constexpr std::int8_t table[24][24] = {
            /*A*/ { 4,-1,-2,-2, 0,-1,-1, 0,-2,-1,-1,-1,-1,-2,-1, 1, 0,-3,-2, 0,-2,-1, 0,-4},
            /*R*/ {-1, 5, 0,-2,-3, 1, 0,-2, 0,-3,-2, 2,-1,-3,-2,-1,-1,-3,-2,-3,-1, 0,-1,-4},
            /*N*/ {-2, 0, 6, 1,-3, 0, 0, 0, 1,-3,-3, 0,-2,-3,-2, 1, 0,-4,-2,-3, 3, 0,-1,-4},
            /*D*/ {-2,-2, 1, 6,-3, 0, 2,-1,-1,-3,-4,-1,-3,-3,-1, 0,-1,-4,-3,-3, 4, 1,-1,-4},
            /*C*/ { 0,-3,-3,-3, 9,-3,-4,-3,-3,-1,-1,-3,-1,-2,-3,-1,-1,-2,-2,-1,-3,-3,-2,-4},
            /*Q*/ {-1, 1, 0, 0,-3, 5, 2,-2, 0,-3,-2, 1, 0,-3,-1, 0,-1,-2,-1,-2, 0, 3,-1,-4},
            /*E*/ {-1, 0, 0, 2,-4, 2, 5,-2, 0,-3,-3, 1,-2,-3,-1, 0,-1,-3,-2,-2, 1, 4,-1,-4},
            /*G*/ { 0,-2, 0,-1,-3,-2,-2, 6,-2,-4,-4,-2,-3,-3,-2, 0,-2,-2,-3,-3,-1,-2,-1,-4},
            /*H*/ {-2, 0, 1,-1,-3, 0, 0,-2, 8,-3,-3,-1,-2,-1,-2,-1,-2,-2, 2,-3, 0, 0,-1,-4},
            /*I*/ {-1,-3,-3,-3,-1,-3,-3,-4,-3, 4, 2,-3, 1, 0,-3,-2,-1,-3,-1, 3,-3,-3,-1,-4},
            /*L*/ {-1,-2,-3,-4,-1,-2,-3,-4,-3, 2, 4,-2, 2, 0,-3,-2,-1,-2,-1, 1,-4,-3,-1,-4},
            /*K*/ {-1, 2, 0,-1,-3, 1, 1,-2,-1,-3,-2, 5,-1,-3,-1, 0,-1,-3,-2,-2, 0, 1,-1,-4},
            /*M*/ {-1,-1,-2,-3,-1, 0,-2,-3,-2, 1, 2,-1, 5, 0,-2,-1,-1,-1,-1, 1,-3,-1,-1,-4},
            /*F*/ {-2,-3,-3,-3,-2,-3,-3,-3,-1, 0, 0,-3, 0, 6,-4,-2,-2, 1, 3,-1,-3,-3,-1,-4},
            /*P*/ {-1,-2,-2,-1,-3,-1,-1,-2,-2,-3,-3,-1,-2,-4, 7,-1,-1,-4,-3,-2,-2,-1,-2,-4},
            /*S*/ { 1,-1, 1, 0,-1, 0, 0, 0,-1,-2,-2, 0,-1,-2,-1, 4, 1,-3,-2,-2, 0, 0, 0,-4},
            /*T*/ { 0,-1, 0,-1,-1,-1,-1,-2,-2,-1,-1,-1,-1,-2,-1, 1, 5,-2,-2, 0,-1,-1, 0,-4},
            /*W*/ {-3,-3,-4,-4,-2,-2,-3,-2,-2,-3,-2,-3,-1, 1,-4,-3,-2,11, 2,-3,-4,-3,-2,-4},
            /*Y*/ {-2,-2,-2,-3,-2,-1,-2,-3, 2,-1,-1,-2,-1, 3,-3,-2,-2, 2, 7,-1,-3,-2,-1,-4},
            /*V*/ { 0,-3,-3,-3,-1,-2,-2,-3,-3, 3, 1,-2, 1,-1,-2,-2, 0,-3,-1, 4,-3,-2,-1,-4},
            /*B*/ {-2,-1, 3, 4,-3, 0, 1,-1, 0,-3,-4, 0,-3,-3,-2, 0,-1,-4,-3,-3, 4, 1,-1,-4},
            /*Z*/ {-1, 0, 0, 1,-3, 3, 4,-2, 0,-3,-3, 1,-1,-3,-1, 0,-1,-3,-2,-2, 1, 4,-1,-4},
            /*X*/ { 0,-1,-1,-1,-2,-1,-1,-1,-1,-1,-1,-1,-1,-1,-2, 0, 0,-2,-1,-1,-1,-1,-1,-4},
            /***/ {-4,-4,-4,-4,-4,-4,-4,-4,-4,-4,-4,-4,-4,-4,-4,-4,-4,-4,-4,-4,-4,-4,-4, 1},
        };
        // clang-format on
        ScoringMatrix m("BLOSUM62");
        for (std::uint8_t a = 0; a < ScoringMatrix::size; ++a)
            for (std::uint8_t b = 0; b < ScoringMatrix::size; ++b) m.set(a, b, table[a][b]);
        return m;
    }();
    return matrix;
}

/// Parse an NCBI-style matrix file: '#' comments, a column-header row of
/// symbols, then one labeled row per symbol. Files covering fewer than 24
/// symbols are padded deterministically: +1 on the diagonal, -1 off it.
/// Asymmetric or non-square input is rejected.
inline ScoringMatrix parse_matrix(std::istream& in, std::string name = "custom") {
    const Alphabet& alphabet = protein_alphabet();
    std::string line;
    std::vector<std::uint8_t> columns;
    std::vector<bool> in_file(ScoringMatrix::size, false);

    ScoringMatrix matrix(std::move(name));
    for (std::uint8_t a = 0; a < ScoringMatrix::size; ++a)
        for (std::uint8_t b = 0; b < ScoringMatrix::size; ++b) matrix.set(a, b, a == b ? 1 : -1);

    std::vector<bool> row_seen(ScoringMatrix::size, false);
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos || line[first] == '#') continue;

        std::istringstream fields(line);
        if (columns.empty()) {
            // Header row: one symbol per column.
            std::string tok;
            while (fields >> tok) {
                if (tok.size() != 1)
                    throw format_error("matrix: bad column header '" + tok + "'");
                auto idx = alphabet.find(tok[0]);
                if (!idx) throw format_error("matrix: unknown symbol '" + tok + "' in header");
                if (in_file[*idx]) throw format_error("matrix: duplicate column '" + tok + "'");
                in_file[*idx] = true;
                columns.push_back(*idx);
            }
            if (columns.empty()) throw format_error("matrix: empty header row");
        } else {
            std::string label;
            fields >> label;
            if (label.size() != 1)
                throw format_error("matrix: bad row label '" + label + "'");
            auto row_idx = alphabet.find(label[0]);
            if (!row_idx || !in_file[*row_idx])
                throw format_error("matrix: row '" + label + "' not declared in header");
            if (row_seen[*row_idx]) throw format_error("matrix: duplicate row '" + label + "'");
            row_seen[*row_idx] = true;
            for (std::uint8_t col : columns) {
                std::int64_t v;
                if (!(fields >> v))
                    throw format_error("matrix: row '" + label + "' shorter than header");
                matrix.set(*row_idx, col, static_cast<std::int32_t>(v));
            }
            std::string extra;
            if (fields >> extra)
                throw format_error("matrix: row '" + label + "' longer than header");
        }
    }
    if (in.bad()) throw io_error("matrix: stream read failure");
    if (columns.empty()) throw format_error("matrix: no header row");

    for (std::uint8_t s = 0; s < ScoringMatrix::size; ++s)
        if (in_file[s] && !row_seen[s])
            throw format_error(std::string("matrix: missing row for symbol '") +
                               alphabet.symbol(s) + "'");
    for (std::uint8_t a : columns)
        for (std::uint8_t b : columns)
            if (matrix.score(a, b) != matrix.score(b, a))
                throw format_error(std::string("matrix: asymmetric cell (") + alphabet.symbol(a) +
                                   ", " + alphabet.symbol(b) + ")");
    return matrix;
}

inline ScoringMatrix load_matrix(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open " + path.string());
    return parse_matrix(in, path.filename().string());
}

/// Serialize the full 24x24 table in the same format parse_matrix reads.
inline void write_matrix(std::ostream& out, const ScoringMatrix& matrix) {
    const Alphabet& alphabet = protein_alphabet();
    out << "# " << matrix.name() << '\n';
    for (std::uint8_t b = 0; b < ScoringMatrix::size; ++b) out << "  " << alphabet.symbol(b);
    out << '\n';
    for (std::uint8_t a = 0; a < ScoringMatrix::size; ++a) {
        out << alphabet.symbol(a);
        for (std::uint8_t b = 0; b < ScoringMatrix::size; ++b) out << ' ' << matrix.score(a, b);
        out << '\n';
    }
    if (!out) throw io_error("matrix: stream write failure");
}

/// Per-query score profile: for every alphabet symbol s, the row of
/// substitution scores against each query position. Lets the batch kernel
/// index by subject residue only. A 16-bit clamped copy feeds the
/// saturating lane arithmetic.
class QueryProfile {
public:
    QueryProfile(const ScoringMatrix& matrix, const EncodedSequence& query) : query_(query) {
        const std::size_t m = query.length();
        rows_.resize(ScoringMatrix::size * m);
        rows16_.resize(ScoringMatrix::size * m);
        for (std::uint8_t code : query.codes)
            if (code >= ScoringMatrix::size)
                throw std::out_of_range("query code outside matrix alphabet");
        for (std::size_t s = 0; s < ScoringMatrix::size; ++s) {
            for (std::size_t j = 0; j < m; ++j) {
                const std::int32_t v = matrix.score(static_cast<std::uint8_t>(s), query.codes[j]);
                rows_[s * m + j] = v;
                rows16_[s * m + j] = static_cast<std::int16_t>(
                    std::clamp<std::int32_t>(v, std::numeric_limits<std::int16_t>::min(),
                                             std::numeric_limits<std::int16_t>::max()));
            }
        }
    }

    const EncodedSequence& query() const { return query_; }
    std::size_t query_length() const { return query_.length(); }

    const std::int32_t* row(std::uint8_t symbol) const {
        return rows_.data() + static_cast<std::size_t>(symbol) * query_.length();
    }
    const std::int16_t* row16(std::uint8_t symbol) const {
        return rows16_.data() + static_cast<std::size_t>(symbol) * query_.length();
    }

private:
    EncodedSequence query_;
    std::vector<std::int32_t> rows_;
    std::vector<std::int16_t> rows16_;
};

inline QueryProfile make_profile(const ScoringMatrix& matrix, const EncodedSequence& query) {
    return QueryProfile(matrix, query);
}

} // namespace swsearch
