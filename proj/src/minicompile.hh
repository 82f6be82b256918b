#pragma once

#include <string>

#include "cnf.hh"
#include "ddnnf.hh"

namespace cpog {

// Small decision-DNNF compiler used to produce test inputs for the proof
// generator: Shannon expansion with unit propagation, connected-component
// splitting at and-nodes, and caching keyed on the simplified clause set,
// so equal subproblems share a node.  Deterministic for a given formula.
// Test infrastructure, not a product surface.
DdnnfGraph mini_compile(const CnfFormula &f);

// Interchange text form of a compiled graph (node lines, then arc lines).
std::string write_ddnnf(const DdnnfGraph &g);

} // namespace cpog
