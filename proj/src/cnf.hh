#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "basic.hh"

namespace cpog {

// A CNF formula as parsed from a DIMACS file.  Clauses keep their file
// order; clause ID i (1-based) is clauses[i-1].  Literals within a clause
// keep file order, duplicates included, so the formula reprints faithfully.
struct CnfFormula {
    Var var_count = 0;
    std::vector<std::vector<Lit>> clauses;
    // `c p weight <lit> <w> 0` annotations, in file order.
    std::vector<std::pair<Lit, std::string>> weight_lines;

    ClauseId clause_count() const { return (ClauseId)clauses.size(); }
    std::span<const Lit> clause(ClauseId id) const { return clauses[(size_t)(id - 1)]; }
};

bool clause_is_tautology(std::span<const Lit> lits);
bool clause_has_duplicates(std::span<const Lit> lits);

// Throws ParseError with a line/column diagnostic.
CnfFormula parse_dimacs(std::string_view text);

// Header, weight annotations, then clauses one per line in ID order.
// parse_dimacs(format_dimacs(f)) reproduces f exactly.
std::string format_dimacs(const CnfFormula &f);

} // namespace cpog
