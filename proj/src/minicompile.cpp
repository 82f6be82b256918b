#include "minicompile.hh"

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <unordered_map>

namespace cpog {

namespace {

using ClauseSet = std::vector<std::vector<Lit>>;

// Sorted literals, duplicates out; nullopt for tautologies.
std::optional<std::vector<Lit>> canon_clause(std::span<const Lit> lits) {
    std::vector<Lit> c(lits.begin(), lits.end());
    std::sort(c.begin(), c.end(), [](Lit a, Lit b) {
        return var_of(a) != var_of(b) ? var_of(a) < var_of(b) : a > b;
    });
    c.erase(std::unique(c.begin(), c.end()), c.end());
    for (size_t i = 1; i < c.size(); i++)
        if (c[i] == -c[i - 1])
            return std::nullopt;
    return c;
}

void canon_set(ClauseSet &s) {
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
}

// Remove clauses satisfied by lit, drop the falsified occurrences.
// Returns false when an empty clause appears.
bool assign(const ClauseSet &in, Lit lit, ClauseSet &out) {
    out.clear();
    for (const auto &cl : in) {
        bool sat = false;
        for (Lit l : cl)
            if (l == lit) {
                sat = true;
                break;
            }
        if (sat)
            continue;
        std::vector<Lit> kept;
        kept.reserve(cl.size());
        for (Lit l : cl)
            if (l != -lit)
                kept.push_back(l);
        if (kept.empty())
            return false;
        out.push_back(std::move(kept));
    }
    canon_set(out);
    return true;
}

class Compiler {
public:
    explicit Compiler(const CnfFormula &f) : formula_(f) {}

    DdnnfGraph run() {
        ClauseSet start;
        bool conflict = false;
        for (const auto &cl : formula_.clauses) {
            auto c = canon_clause(cl);
            if (!c)
                continue; // tautology
            if (c->empty())
                conflict = true;
            start.push_back(std::move(*c));
        }
        canon_set(start);
        graph_.max_var = formula_.var_count;
        if (conflict) {
            graph_.root = false_node();
            return std::move(graph_);
        }
        std::vector<Lit> units;
        if (!propagate(start, units)) {
            graph_.root = false_node();
            return std::move(graph_);
        }
        if (start.empty() && units.empty()) {
            graph_.root = true_node();
            return std::move(graph_);
        }
        if (units.empty()) {
            graph_.root = compile_set(start);
        } else {
            // Top-level units hang off a root and-node.
            int64_t child = start.empty() ? true_node() : compile_set(start);
            int64_t root = new_node(DdnnfNode::Kind::And);
            add_arc(root, child, units);
            graph_.root = root;
        }
        return std::move(graph_);
    }

private:
    int64_t new_node(DdnnfNode::Kind kind) {
        DdnnfNode n;
        n.kind = kind;
        graph_.nodes.push_back(std::move(n));
        return (int64_t)graph_.nodes.size() - 1;
    }

    int64_t true_node() {
        if (true_ < 0)
            true_ = new_node(DdnnfNode::Kind::True);
        return true_;
    }

    int64_t false_node() {
        if (false_ < 0)
            false_ = new_node(DdnnfNode::Kind::False);
        return false_;
    }

    void add_arc(int64_t from, int64_t to, std::vector<Lit> lits) {
        graph_.nodes[(size_t)to].indegree++;
        graph_.nodes[(size_t)from].arcs.push_back(DdnnfNode::Arc{to, std::move(lits)});
    }

    // Unit propagation to fixpoint; false on conflict.  Propagated
    // literals are appended to `units` in propagation order.
    bool propagate(ClauseSet &s, std::vector<Lit> &units) {
        for (;;) {
            Lit unit = 0;
            for (const auto &cl : s) {
                if (cl.size() == 1) {
                    unit = cl[0];
                    break;
                }
            }
            if (unit == 0)
                return true;
            units.push_back(unit);
            ClauseSet next;
            if (!assign(s, unit, next))
                return false;
            s = std::move(next);
        }
    }

    // s is unit-free, conflict-free and nonempty.
    int64_t compile_set(const ClauseSet &s) {
        auto it = cache_.find(s);
        if (it != cache_.end())
            return it->second;

        int64_t result;
        std::vector<ClauseSet> comps = components(s);
        if (comps.size() > 1) {
            int64_t node = new_node(DdnnfNode::Kind::And);
            for (auto &comp : comps)
                add_arc(node, compile_set(comp), {});
            result = node;
        } else {
            Var x = pick_decision(s);
            int64_t node = new_node(DdnnfNode::Kind::Or);
            for (Lit branch : {-(Lit)x, (Lit)x}) {
                std::vector<Lit> arc_lits{branch};
                ClauseSet sub;
                int64_t child;
                if (!assign(s, branch, sub)) {
                    child = false_node();
                } else {
                    std::vector<Lit> units;
                    if (!propagate(sub, units)) {
                        child = false_node();
                    } else {
                        arc_lits.insert(arc_lits.end(), units.begin(), units.end());
                        child = sub.empty() ? true_node() : compile_set(sub);
                    }
                }
                add_arc(node, child, std::move(arc_lits));
            }
            result = node;
        }
        cache_.emplace(s, result);
        return result;
    }

    std::vector<ClauseSet> components(const ClauseSet &s) {
        // Union-find over the variables present.
        std::unordered_map<Var, Var> parent;
        std::function<Var(Var)> find = [&](Var v) {
            Var r = v;
            while (parent[r] != r)
                r = parent[r];
            while (parent[v] != r) {
                Var next = parent[v];
                parent[v] = r;
                v = next;
            }
            return r;
        };
        for (const auto &cl : s)
            for (Lit l : cl)
                parent.emplace(var_of(l), var_of(l));
        for (const auto &cl : s) {
            Var first = var_of(cl[0]);
            for (Lit l : cl) {
                Var a = find(first), b = find(var_of(l));
                if (a != b)
                    parent[b] = a;
            }
        }
        std::map<Var, ClauseSet> groups;
        for (const auto &cl : s)
            groups[find(var_of(cl[0]))].push_back(cl);
        std::vector<ClauseSet> out;
        for (auto &[root, set] : groups)
            out.push_back(std::move(set));
        return out;
    }

    Var pick_decision(const ClauseSet &s) {
        std::map<Var, int64_t> freq;
        for (const auto &cl : s)
            for (Lit l : cl)
                freq[var_of(l)]++;
        Var best = 0;
        int64_t best_count = -1;
        for (auto [v, count] : freq) {
            if (count > best_count) {
                best = v;
                best_count = count;
            }
        }
        return best;
    }

    const CnfFormula &formula_;
    DdnnfGraph graph_;
    int64_t true_ = -1;
    int64_t false_ = -1;
    std::map<ClauseSet, int64_t> cache_;
};

} // namespace

DdnnfGraph mini_compile(const CnfFormula &f) { return Compiler(f).run(); }

std::string write_ddnnf(const DdnnfGraph &g) {
    std::string out;
    for (size_t i = 0; i < g.nodes.size(); i++) {
        char tag;
        switch (g.nodes[i].kind) {
        case DdnnfNode::Kind::Or: tag = 'o'; break;
        case DdnnfNode::Kind::And: tag = 'a'; break;
        case DdnnfNode::Kind::True: tag = 't'; break;
        default: tag = 'f'; break;
        }
        out += tag;
        out += ' ';
        out += std::to_string(i + 1);
        out += " 0\n";
    }
    for (size_t i = 0; i < g.nodes.size(); i++) {
        for (const auto &arc : g.nodes[i].arcs) {
            out += std::to_string(i + 1);
            out += ' ';
            out += std::to_string(arc.target + 1);
            for (Lit l : arc.lits) {
                out += ' ';
                out += std::to_string(l);
            }
            out += " 0\n";
        }
    }
    return out;
}

} // namespace cpog
