#pragma once

#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace cpog {

// Variables are positive integers, literals are nonzero signed integers,
// clause identifiers are positive integers.  All 64-bit: competition-scale
// proofs can exceed the 32-bit clause-id range.
using Var = int64_t;
using Lit = int64_t;
using ClauseId = int64_t;

inline Var var_of(Lit lit) { return lit < 0 ? -lit : lit; }
inline bool is_pos(Lit lit) { return lit > 0; }
inline Lit negate(Lit lit) { return -lit; }

// Raised on malformed input files.  Line numbers are 1-based; col 0 means
// "somewhere on this line".
class ParseError : public std::runtime_error {
public:
    ParseError(int line, int col, const std::string &msg)
        : std::runtime_error("line " + std::to_string(line) +
                             (col > 0 ? ":" + std::to_string(col) : "") + ": " + msg),
          line(line), col(col) {}
    int line;
    int col;
};

// Raised when proof generation cannot proceed (graph/CNF mismatch,
// solver resource limit, unsatisfiable justification that should hold).
class GenError : public std::runtime_error {
public:
    explicit GenError(const std::string &msg) : std::runtime_error(msg) {}
};

// Raised on broken internal invariants (e.g. a verified POG whose model
// count is not an integer).  Never catchable into a verdict.
class InternalError : public std::logic_error {
public:
    explicit InternalError(const std::string &msg) : std::logic_error(msg) {}
};

} // namespace cpog
