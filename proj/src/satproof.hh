#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "basic.hh"

namespace cpog {

// One derived clause with the antecedents that make it a strict RUP
// consequence of the fragment plus all earlier steps.  Hint IDs: 1..m are
// the fragment clauses in order, m+1.. are earlier proof steps.  The final
// step of a complete refutation is the empty clause.
struct ProofStep {
    std::vector<Lit> lits;
    std::vector<ClauseId> hints;
};

struct SolveOutcome {
    enum class Status { Satisfiable, Unsatisfiable, Limit, Error };
    Status status = Status::Error;
    std::string error;
    // Total assignment over the fragment's variables (Satisfiable).
    std::vector<Lit> model;
    // Refutation (Unsatisfiable).
    std::vector<ProofStep> proof;
};

struct SolveLimits {
    int64_t max_conflicts = 4'000'000;
};

// Conflict-driven solver that logs the resolution chain of every learned
// clause, so each proof step carries an explicit hint and replays under
// strict RUP semantics without search.
SolveOutcome solve(const std::vector<std::vector<Lit>> &clauses, SolveLimits limits = {});

// Escape hatch: run an external hint-emitting solver.  The command template
// must contain "{cnf}" and "{proof}" placeholders.  The returned proof is
// replayed locally before being trusted; deletion lines are ignored and
// steps introducing new variables are rejected.
SolveOutcome external_solve(const std::vector<std::vector<Lit>> &clauses,
                            const std::string &command_template);

// Strict replay of a refutation against the fragment; error text on failure.
std::optional<std::string> replay_unsat_proof(const std::vector<std::vector<Lit>> &clauses,
                                              std::span<const ProofStep> proof);

} // namespace cpog
