#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

namespace swsearch {

/// Residue alphabet: a fixed set of symbols mapped to dense indices
/// 0..size-1, with one designated "unknown" symbol that absorbs every
/// character outside the set. Lookup is case-insensitive.
class Alphabet {
public:
    Alphabet(std::string_view symbols, char unknown) : symbols_(symbols) {
        to_index_.fill(kInvalid);
        for (std::size_t i = 0; i < symbols_.size(); ++i) {
            const unsigned char c = static_cast<unsigned char>(symbols_[i]);
            to_index_[c] = static_cast<std::uint8_t>(i);
            to_index_[lower(c)] = static_cast<std::uint8_t>(i);
            if (symbols_[i] == unknown) unknown_ = static_cast<std::uint8_t>(i);
        }
    }

    std::size_t size() const { return symbols_.size(); }
    std::uint8_t unknown_index() const { return unknown_; }
    char symbol(std::uint8_t index) const { return symbols_[index]; }

    /// Index of a member symbol, or empty if `c` is not in the alphabet.
    std::optional<std::uint8_t> find(char c) const {
        const std::uint8_t idx = to_index_[static_cast<unsigned char>(c)];
        if (idx == kInvalid) return std::nullopt;
        return idx;
    }

    /// Coercing lookup: non-members map to the unknown symbol's index.
    std::uint8_t index_of(char c) const {
        const std::uint8_t idx = to_index_[static_cast<unsigned char>(c)];
        return idx == kInvalid ? unknown_ : idx;
    }

    bool contains(char c) const { return find(c).has_value(); }

private:
    static constexpr std::uint8_t kInvalid = 0xff;

    static unsigned char lower(unsigned char c) {
        return (c >= 'A' && c <= 'Z') ? static_cast<unsigned char>(c - 'A' + 'a') : c;
    }

    std::string_view symbols_;
    std::array<std::uint8_t, 256> to_index_{};
    std::uint8_t unknown_ = 0;
};

/// The 24-symbol protein alphabet in canonical NCBI matrix order.
/// Unknown characters (gaps, ambiguity codes outside the set, punctuation)
/// coerce to 'X'.
inline const Alphabet& protein_alphabet() {
    static const Alphabet alphabet("ARNDCQEGHILKMFPSTWYVBZX*", 'X');
    return alphabet;
}

} // namespace swsearch
