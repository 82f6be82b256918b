#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "basic.hh"

namespace cpog {

// Decision-DNNF graphs in the knowledge-compiler interchange convention:
// node lines declare typed nodes, arc lines connect them and may carry
// literals that were decided or unit-propagated along the arc.
//
//   o <id> 0            or node (decision)
//   a <id> 0            and node
//   t <id> 0            true terminal
//   f <id> 0            false terminal
//   <from> <to> <lits...> 0
//
// An arc denotes the conjunction of its literals with the target node's
// formula.  Or nodes must have exactly two outgoing arcs carrying opposite
// literals of their decision variable (single-arc or nodes are accepted as
// pass-throughs, a quirk of some compilers).  The root is the unique node
// with no incoming arc.
struct DdnnfNode {
    enum class Kind : uint8_t { True, False, And, Or };
    Kind kind;
    struct Arc {
        int64_t target; // index into DdnnfGraph::nodes
        std::vector<Lit> lits;
    };
    std::vector<Arc> arcs;
    int64_t indegree = 0;
};

struct DdnnfGraph {
    std::vector<DdnnfNode> nodes;
    int64_t root = -1; // index
    Var max_var = 0;
};

// Throws ParseError on malformed text, dangling arcs, cycles, arcs leaving
// terminals, or or-nodes without opposing decision literals.
DdnnfGraph parse_d4(std::string_view text);

} // namespace cpog
