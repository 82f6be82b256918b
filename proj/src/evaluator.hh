#pragma once

#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "basic.hh"
#include "cnf.hh"
#include "pog.hh"
#include "q25.hh"

namespace cpog {

// Commutative ring interfaces for evaluation.  A ring supplies the element
// type, the two constants, and the three operations; evaluation is a single
// bottom-up pass with one cached value per node, so it costs at most one
// ring operation per graph edge plus one per negation.

struct Q25Ring {
    using Elem = Q25;
    Elem zero() const { return Q25::zero(); }
    Elem one() const { return Q25::one(); }
    Elem add(const Elem &x, const Elem &y) const { return x + y; }
    Elem sub(const Elem &x, const Elem &y) const { return x - y; }
    Elem mul(const Elem &x, const Elem &y) const { return x * y; }
};

// Integers modulo a prime below 2^63; products go through 128-bit
// intermediates.
struct PrimeField {
    uint64_t modulus;
    using Elem = uint64_t;
    Elem zero() const { return 0; }
    Elem one() const { return 1 % modulus; }
    Elem add(Elem x, Elem y) const {
        uint64_t s = x + y;
        return s >= modulus ? s - modulus : s;
    }
    Elem sub(Elem x, Elem y) const { return x >= y ? x - y : modulus - (y - x); }
    Elem mul(Elem x, Elem y) const {
        return (uint64_t)((unsigned __int128)x * y % modulus);
    }
};

bool is_prime_u64(uint64_t n);

// Bottom-up evaluation of a verified graph: literal weights at the inputs,
// product of child values at products, sum at sums, 1 - value for negative
// references.
template <class Ring>
typename Ring::Elem ring_eval(const Pog &p, Lit lit,
                              const std::function<typename Ring::Elem(Var)> &weight,
                              const Ring &ring) {
    using Elem = typename Ring::Elem;
    std::vector<Elem> memo(p.nodes.size(), ring.zero());
    auto lit_value = [&](Lit a) -> Elem {
        Var v = var_of(a);
        Elem val = p.is_input_var(v) ? weight(v) : memo[(size_t)p.index_of(v)];
        return is_pos(a) ? val : ring.sub(ring.one(), val);
    };
    Var top = var_of(lit);
    int64_t limit = p.is_input_var(top) ? -1 : p.index_of(top);
    if (!p.is_input_var(top) && limit < 0)
        throw InternalError("ring_eval: undeclared literal " + std::to_string(lit));
    for (int64_t i = 0; i <= limit; i++) {
        const PogNode &n = p.nodes[(size_t)i];
        Elem acc;
        if (n.kind == PogKind::Product) {
            acc = ring.one();
            for (Lit a : n.args)
                acc = ring.mul(acc, lit_value(a));
        } else {
            acc = ring.add(lit_value(n.args[0]), lit_value(n.args[1]));
        }
        memo[(size_t)i] = acc;
    }
    return lit_value(lit);
}

// Density of the root: ring evaluation over the rationals with weight 1/2
// for every variable.
Q25 density(const Pog &p);

// density * 2^n for the declared variable count n.  The result of a valid
// partitioned graph is always a nonnegative integer; anything else is an
// internal invariant breach.
BigInt unweighted_count(const Pog &p, Var n);

// Weighted model counting with independent literal weights.  Weights may
// come from DIMACS annotations or a standalone weights file; variables with
// no annotation default to W(x) = W(-x) = 1/2.  When only one polarity is
// given, the other defaults to 1 - W.
struct WeightSet {
    std::unordered_map<Var, std::pair<std::optional<Q25>, std::optional<Q25>>> entries;
    void set(Lit lit, const Q25 &w);
};

// Throws ParseError on malformed text; lines are "<lit> <decimal>".
WeightSet parse_weights_file(std::string_view text);
WeightSet weights_from_annotations(const CnfFormula &f);

struct WeightedOutcome {
    bool ok = false;
    Q25 value;
    std::string error;
};

// R(phi, W/r) * prod r(x) over declared variables, with r(x) = W(x)+W(-x).
// Fails when some r(x) = 0 or some W(x)/r(x) leaves the ring.
WeightedOutcome weighted_count(const Pog &p, const WeightSet &weights, Var n);

// Ring evaluation over a prime field with pseudorandom weights drawn from
// the seed; a randomized equivalence probe.  modulus must be prime (and for
// the collision bound, at least 2n).
uint64_t function_hash(const Pog &p, uint64_t seed, uint64_t modulus);

} // namespace cpog
