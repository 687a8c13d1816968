#pragma once

#include <cstddef>
#include <string>
#include <string_view>

#include "qsynth/circuit.hpp"
#include "qsynth/expected.hpp"

// Tuple-list text format shared with proposers, e.g.
//   [('H', [0]), ('CNOT', [0, 12]), ('RY', [25.0, 2])]
namespace qsynth {

struct ParseError {
    enum class Kind { NoListFound, MalformedEntry, UnknownGate, BadArity, BadNumber };

    Kind kind = Kind::MalformedEntry;
    std::size_t position = 0;  // byte offset into the text handed to parse/curate
    std::string detail;

    std::string describe() const;
    bool operator==(const ParseError&) const = default;
};

// "no-list-found", "malformed-entry", ...
const char* to_string(ParseError::Kind kind);

/**
 * Cleans raw proposer output down to a candidate list literal.
 *
 * Keeps the text between the first <python> ... </python> pair when both
 * tags are present, drops fenced-code marker lines, deletes non-ASCII
 * bytes, then keeps only the outermost balanced [ ... ] group. Idempotent.
 */
Expected<std::string, ParseError> curate(std::string_view raw);

/**
 * Parses a gate list. Entries may be wrapped in () or [], names may use
 * either quote style and any case. Wire range is not checked here: an
 * out-of-range wire yields a Circuit that `validate` rejects.
 */
Expected<Circuit, ParseError> parse(std::string_view text, int num_qubits);

// curate followed by parse; positions in errors refer to the curated text
// for grammar errors and to the raw text for no-list-found.
Expected<Circuit, ParseError> parse_proposal(std::string_view raw, int num_qubits);

// Canonical single-line form; parse(serialize(c), c.num_qubits) == c.
std::string serialize(const Circuit& circuit);

// "25.0" for integral values, otherwise the shortest round-trip decimal.
std::string format_angle(double angle);

}  // namespace qsynth
