#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "swsearch/alphabet.hpp"

namespace swsearch {

/// One raw FASTA record: description line (without '>') plus the residue
/// characters exactly as read, whitespace removed.
struct SequenceRecord {
    std::string header;
    std::string residues;
};

/// A sequence mapped onto alphabet indices. The header travels with the
/// codes for reporting, but the search hot path reads only `codes`.
struct EncodedSequence {
    std::vector<std::uint8_t> codes;
    std::string header;

    std::size_t length() const { return codes.size(); }
};

/// Immutable after load; safe for unrestricted concurrent reads.
struct SequenceDatabase {
    std::vector<EncodedSequence> sequences;
    std::size_t total_residues = 0;
    std::size_t max_length = 0;

    std::size_t num_sequences() const { return sequences.size(); }
};

/// Encode a record against an alphabet. Residues are matched
/// case-insensitively; characters outside the alphabet coerce to the
/// unknown symbol and are tallied into `*unknown_count` when given.
inline EncodedSequence encode_sequence(const SequenceRecord& record, const Alphabet& alphabet,
                                       std::size_t* unknown_count = nullptr) {
    EncodedSequence out;
    out.header = record.header;
    out.codes.reserve(record.residues.size());
    std::size_t unknowns = 0;
    for (char c : record.residues) {
        if (auto idx = alphabet.find(c)) {
            out.codes.push_back(*idx);
        } else {
            out.codes.push_back(alphabet.unknown_index());
            ++unknowns;
        }
    }
    if (unknown_count) *unknown_count += unknowns;
    return out;
}

/// Render codes back to residue characters.
inline std::string decode_sequence(const EncodedSequence& seq, const Alphabet& alphabet) {
    std::string out;
    out.reserve(seq.codes.size());
    for (std::uint8_t code : seq.codes) out.push_back(alphabet.symbol(code));
    return out;
}

} // namespace swsearch
