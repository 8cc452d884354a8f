#pragma once

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "swsearch/alphabet.hpp"
#include "swsearch/errors.hpp"
#include "swsearch/sequence.hpp"

namespace swsearch {

namespace detail {

inline std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

} // namespace detail

/// Parse FASTA text into raw records. Residue lines belonging to a record
/// are concatenated with all whitespace stripped; LF and CRLF both accepted.
/// The first non-blank line must start with '>'.
inline std::vector<SequenceRecord> parse_fasta(std::istream& in) {
    std::vector<SequenceRecord> records;
    std::string line;
    std::size_t line_no = 0;
    bool have_record = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.find_first_not_of(" \t") == std::string::npos) continue;
        if (line[0] == '>') {
            SequenceRecord rec;
            rec.header = detail::trim(std::string_view(line).substr(1));
            if (rec.header.empty())
                throw format_error("FASTA: empty header at line " + std::to_string(line_no));
            records.push_back(std::move(rec));
            have_record = true;
        } else {
            if (!have_record)
                throw format_error("FASTA: expected '>' header at line " + std::to_string(line_no));
            auto& residues = records.back().residues;
            for (char c : line)
                if (!std::isspace(static_cast<unsigned char>(c))) residues.push_back(c);
        }
    }
    if (in.bad()) throw io_error("FASTA: stream read failure");
    return records;
}

/// Per-load bookkeeping surfaced as warnings, never as errors.
struct LoadStats {
    std::size_t unknown_residues = 0;
    std::size_t zero_length_records = 0;
};

/// Parse, encode, and aggregate a whole FASTA stream into a database.
inline SequenceDatabase build_database(std::istream& in, const Alphabet& alphabet = protein_alphabet(),
                                       LoadStats* stats = nullptr) {
    SequenceDatabase db;
    for (const SequenceRecord& rec : parse_fasta(in)) {
        EncodedSequence seq = encode_sequence(rec, alphabet, stats ? &stats->unknown_residues : nullptr);
        if (stats && seq.length() == 0) ++stats->zero_length_records;
        db.total_residues += seq.length();
        db.max_length = std::max(db.max_length, seq.length());
        db.sequences.push_back(std::move(seq));
    }
    return db;
}

inline SequenceDatabase load_database(const std::filesystem::path& path,
                                      const Alphabet& alphabet = protein_alphabet(),
                                      LoadStats* stats = nullptr) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open " + path.string());
    return build_database(in, alphabet, stats);
}

/// Write a database back out as FASTA, residues wrapped at `line_width`.
inline void write_fasta(std::ostream& out, const SequenceDatabase& db,
                        const Alphabet& alphabet = protein_alphabet(), std::size_t line_width = 60) {
    for (const EncodedSequence& seq : db.sequences) {
        out << '>' << seq.header << '\n';
        const std::string residues = decode_sequence(seq, alphabet);
        for (std::size_t i = 0; i < residues.size(); i += line_width)
            out << residues.substr(i, line_width) << '\n';
    }
    if (!out) throw io_error("FASTA: stream write failure");
}

} // namespace swsearch
