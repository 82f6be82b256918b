#pragma once

#include <span>
#include <string>
#include <vector>

#include "basic.hh"
#include "bigint.hh"

namespace cpog {

enum class PogKind : uint8_t { Product, Sum };

// One operation node.  Sums always have exactly two arguments; products
// may have any arity, including zero (constant 1; a negative reference to
// such a node stands for constant 0).  Argument literals refer to input
// variables or to extension variables of earlier nodes, which makes the
// array well-founded by construction.
struct PogNode {
    PogKind kind;
    Var ext_var;
    std::vector<Lit> args;
    // First defining clause ID in the proof's clause space; the clause for
    // argument position j (1-based) is def_id + j.
    ClauseId def_id = 0;
};

struct PartitionReport {
    bool ok = true;
    int64_t bad_node = -1; // node index, or -1
    std::string reason;
};

class Pog {
public:
    Var input_count = 0;
    std::vector<PogNode> nodes;
    Lit root = 0;

    bool is_input_var(Var v) const { return v >= 1 && v <= input_count; }
    // Node index for an extension variable, or -1.
    int64_t index_of(Var v) const;
    bool is_known_var(Var v) const { return is_input_var(v) || index_of(v) >= 0; }

    // Appends a node; argument variables must already be known.
    void add_node(PogKind kind, Var ext_var, std::vector<Lit> args, ClauseId def_id = 0);

    // Nonterminal nodes plus their outgoing edges; equals the number of
    // defining clauses the node declarations introduce.
    int64_t size() const;

    // Sorted input variables the formula of `lit` depends on.
    std::vector<Var> dependency_set(Lit lit) const;

    // Size of the graph under `lit` if all sharing were expanded away.
    // Exponential under sharing, hence exact big integers.
    BigInt tree_size(Lit lit) const;

    struct Ratio {
        BigInt num, den;
    };
    // tree_size(root) / size(); requires size() > 0.
    Ratio tree_ratio() const;

    // Truth value of `lit` under a total input assignment
    // (alpha[v] in {0,1} for v in 1..input_count; alpha[0] unused).
    bool evaluate(Lit lit, const std::vector<int8_t> &alpha) const;
    // Values of every node under alpha, in declaration order.
    std::vector<int8_t> evaluate_all(const std::vector<int8_t> &alpha) const;

    // Products: pairwise-disjoint dependency sets (structural).
    // Sums: disjoint models, checked exhaustively; only usable when
    // input_count <= semantic_limit.  The proof checker establishes sum
    // disjointness by RUP instead; this is the reference check.
    PartitionReport check_partitioned(int semantic_limit = 16) const;

private:
    std::vector<std::pair<Var, int64_t>> index_; // sorted (ext_var, node idx)
};

} // namespace cpog
