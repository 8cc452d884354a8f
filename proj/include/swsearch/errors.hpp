#pragma once

#include <stdexcept>
#include <string>

namespace swsearch {

/// File or stream could not be read or written.
class io_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input text violates an expected format (FASTA, matrix file, CSV).
class format_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A timed run produced results differing from the first run of the same
/// configuration. Always a bug; surfaced as a hard failure.
class determinism_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A timing measurement was unusable (non-positive elapsed time).
class measurement_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace swsearch
