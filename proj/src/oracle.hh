#pragma once

#include <functional>
#include <vector>

#include "basic.hh"
#include "bigint.hh"
#include "cnf.hh"
#include "pog.hh"
#include "q25.hh"

namespace cpog {

// Brute-force reference implementations.  Used by tests and the CLI's
// self-check mode, never by the checker's verdict path.  Hard instance-size
// guards turn misuse into an explicit error instead of a hang.

class OracleLimitError : public std::runtime_error {
public:
    explicit OracleLimitError(const std::string &msg) : std::runtime_error(msg) {}
};

// |M(f)| by exhaustive enumeration; requires var_count <= 24.
BigInt brute_count(const CnfFormula &f);

// Sum over models of the product of literal weights; requires
// var_count <= 20.  The weight function maps a variable to w(x); negative
// literals contribute 1 - w(x).
Q25 brute_weighted(const CnfFormula &f, const std::function<Q25(Var)> &weight);

// Same in a prime field.
uint64_t brute_weighted_mod(const CnfFormula &f, const std::function<uint64_t(Var)> &weight,
                            uint64_t modulus);

// Extension of a total input assignment to every node of the graph,
// in declaration order.
std::vector<int8_t> extend_assignment(const Pog &p, const std::vector<int8_t> &alpha);

// True iff every total assignment satisfies the formula exactly when its
// extension satisfies the root; requires var_count <= 16.
bool equiv_over_x(const CnfFormula &f, const Pog &p);

// Satisfaction of a clause set under a total assignment packed as bits.
bool cnf_satisfied(const CnfFormula &f, uint64_t assignment_bits);

} // namespace cpog
