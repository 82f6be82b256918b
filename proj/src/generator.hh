#pragma once

#include <string>
#include <vector>

#include "basic.hh"
#include "cnf.hh"
#include "cpog_file.hh"
#include "ddnnf.hh"
#include "pog.hh"

namespace cpog {

enum class GenMode : uint8_t { Hybrid, Structural, Monolithic, OneSided };

struct GenOptions {
    GenMode mode = GenMode::Hybrid;
    bool use_lemmas = true;
    bool use_grouping = true;
    // Hybrid selection: node-level switch to monolithic below this tree size.
    int64_t tree_threshold = 1'000'000;
    // Monolithic generation is only selected when the solver fragment
    // stays below this many clauses.
    int64_t sat_clause_cap = 10'000'000;
    // External hint-emitting solver, "{cnf}"/"{proof}" placeholders;
    // empty means the built-in solver.
    std::string solver_command;
    int64_t max_conflicts = 4'000'000;
};

struct GenStats {
    std::string selected_mode; // mono | struct | struct-mono | one-sided
    int64_t pog_nodes = 0;
    int64_t defining_clauses = 0;
    int64_t declarations = 0; // declaration steps incl. auxiliary products
    int64_t assertions = 0;
    int64_t deletions = 0;
    int64_t lemmas = 0;
    int64_t lemma_applications = 0;
    int64_t lemma_fallbacks = 0;
    int64_t sat_calls = 0;
    // Largest number of times any node was expanded rather than reused;
    // with lemmas enabled this stays at 1.
    int64_t max_node_expansions = 0;
    std::string tree_size;
    std::string tree_ratio; // "num/den"
};

struct GenResult {
    std::vector<CpogStep> steps;
    GenStats stats;
};

// Converts a decision-DNNF graph plus the formula it was compiled from
// into a complete CPOG proof: node declarations, a forward-implication
// proof (structural, monolithic, or the hybrid of the two), and the
// reverse-implication deletions.  Throws GenError when the graph and
// formula cannot be reconciled or a solver call fails.
GenResult generate(const CnfFormula &cnf, const DdnnfGraph &graph, const GenOptions &opts = {});

} // namespace cpog
