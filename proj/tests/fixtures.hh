#pragma once

// Shared fixtures and small generators for the test suites.

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "checker.hh"
#include "cnf.hh"
#include "cpog_file.hh"
#include "pog.hh"

namespace fixtures {

// The 4-variable example used throughout: (x3 <-> x4) & not (x1 & x2).
// Six models.
inline const char *kExampleCnf =
    "p cnf 4 5\n"
    "-1 3 -4 0\n"
    "-1 -3 4 0\n"
    "3 -4 0\n"
    "1 -3 4 0\n"
    "-1 -2 0\n";

inline const char *kExampleCpog =
    "6 p 5 -3 -4 0\n"
    "9 p 6 3 4 0\n"
    "12 s 7 5 6 7 10 0\n"
    "15 p 8 -1 7 0\n"
    "18 p 9 1 -2 7 0\n"
    "22 s 10 8 9 16 19 0\n"
    "r 10\n"
    "25 a 5 1 3 0 3 6 0\n"
    "26 a 6 1 -3 0 4 9 0\n"
    "27 a 3 7 1 0 13 25 0\n"
    "28 a 7 1 0 27 14 26 0\n"
    "29 a 8 1 0 28 15 0\n"
    "30 a 5 -1 3 0 1 6 0\n"
    "31 a 6 -1 -3 0 2 9 0\n"
    "32 a 3 7 -1 0 13 30 0\n"
    "33 a 7 -1 0 32 14 31 0\n"
    "34 a 9 -1 0 5 33 18 0\n"
    "35 a 1 10 0 23 29 0\n"
    "36 a 10 0 35 24 34 0\n"
    "d 35 23 29 0\n"
    "d 34 5 33 18 0\n"
    "d 33 32 14 31 0\n"
    "d 32 13 30 0\n"
    "d 31 2 9 0\n"
    "d 30 1 6 0\n"
    "d 29 28 15 0\n"
    "d 28 27 14 26 0\n"
    "d 27 13 25 0\n"
    "d 26 4 9 0\n"
    "d 25 3 6 0\n"
    "d 1 36 8 10 12 16 21 22 0\n"
    "d 2 36 7 11 12 16 21 22 0\n"
    "d 3 36 8 10 12 17 21 22 0\n"
    "d 4 36 7 11 12 17 19 22 0\n"
    "d 5 36 16 20 22 0\n";

inline const char *kExampleDdnnf =
    "o 1 0\n"
    "o 2 0\n"
    "t 3 0\n"
    "1 2 -1 0\n"
    "2 3 -3 -4 0\n"
    "2 3 3 4 0\n"
    "1 2 1 -2 0\n";

inline cpog::CnfFormula example_cnf() { return cpog::parse_dimacs(kExampleCnf); }

inline std::vector<cpog::CpogStep> example_steps() { return cpog::parse_cpog(kExampleCpog); }

// The example's graph built directly (extension variables 5..10, root 10).
inline cpog::Pog example_pog() {
    cpog::Pog p;
    p.input_count = 4;
    p.add_node(cpog::PogKind::Product, 5, {-3, -4}, 6);
    p.add_node(cpog::PogKind::Product, 6, {3, 4}, 9);
    p.add_node(cpog::PogKind::Sum, 7, {5, 6}, 12);
    p.add_node(cpog::PogKind::Product, 8, {-1, 7}, 15);
    p.add_node(cpog::PogKind::Product, 9, {1, -2, 7}, 18);
    p.add_node(cpog::PogKind::Sum, 10, {8, 9}, 22);
    p.root = 10;
    return p;
}

// Random CNF over n variables: clause lengths 1..3, no duplicate vars
// within a clause.
inline cpog::CnfFormula random_cnf(std::mt19937_64 &rng, int nvars, int nclauses) {
    cpog::CnfFormula f;
    f.var_count = nvars;
    std::uniform_int_distribution<int> len_dist(1, 3);
    std::uniform_int_distribution<int> var_dist(1, nvars);
    std::uniform_int_distribution<int> sign_dist(0, 1);
    for (int i = 0; i < nclauses; i++) {
        int len = std::min(len_dist(rng), (int)nvars);
        std::vector<cpog::Lit> cl;
        std::vector<cpog::Var> used;
        while ((int)cl.size() < len) {
            cpog::Var v = var_dist(rng);
            bool dup = false;
            for (cpog::Var u : used)
                dup = dup || u == v;
            if (dup)
                continue;
            used.push_back(v);
            cl.push_back(sign_dist(rng) ? v : -v);
        }
        f.clauses.push_back(std::move(cl));
    }
    return f;
}

// Random partitioned graph over the variables [lo, hi]: sums branch on a
// decision variable, so their children have disjoint models by
// construction; products split the variable range.  Optionally negates
// some internal references to exercise the 1-minus-value path.
struct RandomPogBuilder {
    cpog::Pog pog;
    cpog::Var next_ev;
    std::mt19937_64 &rng;
    bool allow_negation;

    RandomPogBuilder(cpog::Var nvars, std::mt19937_64 &rng, bool allow_negation = false)
        : rng(rng), allow_negation(allow_negation) {
        pog.input_count = nvars;
        next_ev = nvars + 1;
    }

    cpog::Lit build(cpog::Var lo, cpog::Var hi, int depth) {
        if (lo > hi)
            return make_const(true);
        if (depth <= 0 || lo == hi) {
            cpog::Var v = lo + (cpog::Var)(rng() % (uint64_t)(hi - lo + 1));
            return (rng() & 1) ? (cpog::Lit)v : -(cpog::Lit)v;
        }
        if (rng() % 2 == 0) {
            // Decision sum on variable lo.
            cpog::Lit low = build_branch(-(cpog::Lit)lo, lo + 1, hi, depth - 1);
            cpog::Lit high = build_branch((cpog::Lit)lo, lo + 1, hi, depth - 1);
            pog.add_node(cpog::PogKind::Sum, next_ev, {low, high});
            return (cpog::Lit)next_ev++;
        }
        // Product split.
        cpog::Var mid = lo + (cpog::Var)(rng() % (uint64_t)(hi - lo + 1));
        std::vector<cpog::Lit> args;
        args.push_back(decorate(build(lo, mid, depth - 1)));
        if (mid < hi)
            args.push_back(decorate(build(mid + 1, hi, depth - 1)));
        pog.add_node(cpog::PogKind::Product, next_ev, args);
        return (cpog::Lit)next_ev++;
    }

    cpog::Lit build_branch(cpog::Lit decision, cpog::Var lo, cpog::Var hi, int depth) {
        std::vector<cpog::Lit> args{decision};
        if (lo <= hi)
            args.push_back(decorate(build(lo, hi, depth)));
        pog.add_node(cpog::PogKind::Product, next_ev, args);
        return (cpog::Lit)next_ev++;
    }

    cpog::Lit decorate(cpog::Lit l) {
        if (allow_negation && !pog.is_input_var(cpog::var_of(l)) && rng() % 4 == 0)
            return -l;
        return l;
    }

    cpog::Lit make_const(bool value) {
        pog.add_node(cpog::PogKind::Product, next_ev, {});
        cpog::Lit l = (cpog::Lit)next_ev++;
        return value ? l : -l;
    }

    cpog::Pog finish(cpog::Lit root) {
        pog.root = root;
        return std::move(pog);
    }
};

inline cpog::Pog random_pog(std::mt19937_64 &rng, cpog::Var nvars, bool allow_negation = false) {
    RandomPogBuilder b(nvars, rng, allow_negation);
    cpog::Lit root = b.build(1, nvars, 4);
    if (b.pog.is_input_var(cpog::var_of(root))) {
        // Promote to a node so the graph is never empty.
        b.pog.add_node(cpog::PogKind::Product, b.next_ev, {root});
        root = (cpog::Lit)b.next_ev++;
    }
    return b.finish(root);
}

} // namespace fixtures
