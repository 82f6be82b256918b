#include "generator.hh"

#include <algorithm>
#include <functional>
#include <queue>
#include <unordered_map>
#include <unordered_set>

#include "satproof.hh"

namespace cpog {

namespace {

// Partial assignment as an ordered stack; order matters because target
// clauses list the negated context literals in assignment order.
struct Rho {
    std::vector<Lit> order;
    std::unordered_set<Lit> set;

    bool has(Lit l) const { return set.count(l) != 0; }
    bool assigns_var(Var v) const { return has((Lit)v) || has(-(Lit)v); }
    void push(Lit l) {
        order.push_back(l);
        set.insert(l);
    }
    void pop(size_t n = 1) {
        while (n--) {
            set.erase(order.back());
            order.pop_back();
        }
    }
    std::vector<Lit> negated() const {
        std::vector<Lit> out;
        out.reserve(order.size());
        for (Lit l : order)
            out.push_back(-l);
        return out;
    }
};

struct TLit {
    enum class Tag : uint8_t { False, True, Literal } tag;
    Lit lit = 0;
    static TLit constant(bool b) { return TLit{b ? Tag::True : Tag::False, 0}; }
    static TLit of(Lit l) { return TLit{Tag::Literal, l}; }
    bool is_false() const { return tag == Tag::False; }
    bool is_true() const { return tag == Tag::True; }
};

struct Guard {
    Var var;
    std::vector<Lit> clause; // the argument clause this guard activates
    ClauseId def_id;
};

struct Lemma {
    ClauseId target = 0;
    std::vector<Guard> guards;
};

constexpr int64_t kTreeSizeCap = INT64_MAX / 4;

class Builder {
public:
    Builder(const CnfFormula &cnf, const DdnnfGraph &graph, const GenOptions &opts)
        : cnf_(cnf), graph_(graph), opts_(opts) {
        pog_.input_count = cnf.var_count;
        next_id_ = cnf.clause_count() + 1;
        next_var_ = cnf.var_count + 1;
        global_psi_.reserve((size_t)cnf.clause_count());
        for (ClauseId id = 1; id <= cnf.clause_count(); id++)
            global_psi_.push_back(id);
    }

    GenResult run() {
        build_pog();
        compute_metadata();
        select_mode();
        forward();
        reverse();
        stats_.pog_nodes = real_node_count_;
        stats_.defining_clauses = defining_count_;
        return GenResult{std::move(steps_), std::move(stats_)};
    }

private:
    // ----- emission ------------------------------------------------------

    ClauseId emit_product(Var ev, std::vector<Lit> args) {
        ClauseId id = next_id_;
        next_id_ += (ClauseId)args.size() + 1;
        steps_.push_back(ProductStep{id, ev, args});
        pog_.add_node(PogKind::Product, ev, std::move(args), id);
        stats_.declarations++;
        return id;
    }

    ClauseId emit_sum(Var ev, Lit left, Lit right, std::vector<ClauseId> hints) {
        ClauseId id = next_id_;
        next_id_ += 3;
        steps_.push_back(SumStep{id, ev, left, right, std::move(hints)});
        pog_.add_node(PogKind::Sum, ev, {left, right}, id);
        stats_.declarations++;
        return id;
    }

    ClauseId emit_add(std::vector<Lit> lits, std::vector<ClauseId> hints) {
        ClauseId id = next_id_++;
        asserted_.emplace_back(id, hints);
        steps_.push_back(AddStep{id, std::move(lits), std::move(hints)});
        stats_.assertions++;
        return id;
    }

    void emit_delete(ClauseId id, std::vector<ClauseId> hints) {
        steps_.push_back(DeleteStep{id, std::move(hints)});
        stats_.deletions++;
    }

    // ----- phase 1: graph translation ------------------------------------

    void build_pog() {
        memo_.assign(graph_.nodes.size(), std::nullopt);
        TLit root = translate(graph_.root);
        switch (root.tag) {
        case TLit::Tag::Literal:
            root_lit_ = root.lit;
            break;
        case TLit::Tag::True: {
            Var ev = next_var_++;
            emit_product(ev, {});
            root_lit_ = (Lit)ev;
            break;
        }
        case TLit::Tag::False: {
            Var ev = next_var_++;
            emit_product(ev, {});
            root_lit_ = -(Lit)ev;
            break;
        }
        }
        pog_.root = root_lit_;
        steps_.push_back(RootStep{root_lit_});
        real_node_count_ = (int64_t)pog_.nodes.size();
        defining_count_ = pog_.size();
        Var rv = var_of(root_lit_);
        root_index_ = pog_.is_input_var(rv) ? -1 : pog_.index_of(rv);
    }

    TLit translate(int64_t idx) {
        if (memo_[(size_t)idx])
            return *memo_[(size_t)idx];
        const DdnnfNode &n = graph_.nodes[(size_t)idx];
        TLit result;
        switch (n.kind) {
        case DdnnfNode::Kind::True:
            result = TLit::constant(true);
            break;
        case DdnnfNode::Kind::False:
            result = TLit::constant(false);
            break;
        case DdnnfNode::Kind::And: {
            std::vector<Lit> args;
            bool dead = false;
            for (const auto &arc : n.arcs) {
                TLit part = arc_formula(arc);
                if (part.is_false()) {
                    dead = true;
                    break;
                }
                if (!part.is_true() && !absorb(args, part.lit)) {
                    dead = true;
                    break;
                }
            }
            result = dead ? TLit::constant(false) : finish_product(std::move(args));
            break;
        }
        case DdnnfNode::Kind::Or: {
            if (n.arcs.size() == 1) {
                result = arc_formula(n.arcs[0]);
                break;
            }
            TLit left = arc_formula(n.arcs[0]);
            TLit right = arc_formula(n.arcs[1]);
            if (left.is_true() || right.is_true())
                throw GenError("or branch reduces to constant true");
            if (left.is_false())
                result = right;
            else if (right.is_false())
                result = left;
            else
                result = TLit::of(make_sum(left.lit, right.lit));
            break;
        }
        }
        memo_[(size_t)idx] = result;
        return result;
    }

    // Literal conjoined into a product argument list; false on x & -x.
    static bool absorb(std::vector<Lit> &args, Lit l) {
        for (Lit a : args) {
            if (a == l)
                return true;
            if (a == -l)
                return false;
        }
        args.push_back(l);
        return true;
    }

    TLit arc_formula(const DdnnfNode::Arc &arc) {
        TLit child = translate(arc.target);
        if (child.is_false())
            return child;
        std::vector<Lit> args;
        for (Lit l : arc.lits)
            if (!absorb(args, l))
                return TLit::constant(false);
        if (!child.is_true() && !absorb(args, child.lit))
            return TLit::constant(false);
        return finish_product(std::move(args));
    }

    TLit finish_product(std::vector<Lit> args) {
        if (args.empty())
            return TLit::constant(true);
        if (args.size() == 1)
            return TLit::of(args[0]);
        Var ev = next_var_++;
        emit_product(ev, std::move(args));
        return TLit::of((Lit)ev);
    }

    // Input literals a node formula directly asserts, with the defining
    // clause that exposes each.
    std::vector<std::pair<Lit, ClauseId>> exposed_literals(Lit side) {
        std::vector<std::pair<Lit, ClauseId>> out;
        Var v = var_of(side);
        if (pog_.is_input_var(v)) {
            out.emplace_back(side, 0);
            return out;
        }
        if (!is_pos(side))
            throw GenError("negative reference to operation node");
        int64_t idx = pog_.index_of(v);
        const PogNode &n = pog_.nodes[(size_t)idx];
        if (n.kind == PogKind::Product) {
            for (size_t j = 0; j < n.args.size(); j++)
                if (pog_.is_input_var(var_of(n.args[j])))
                    out.emplace_back(n.args[j], n.def_id + (ClauseId)j + 1);
        }
        return out;
    }

    Lit make_sum(Lit left, Lit right) {
        auto le = exposed_literals(left);
        auto re = exposed_literals(right);
        for (auto &[a, ca] : le) {
            for (auto &[b, cb] : re) {
                if (a != -b)
                    continue;
                std::vector<ClauseId> hints;
                if (ca)
                    hints.push_back(ca);
                if (cb)
                    hints.push_back(cb);
                Var ev = next_var_++;
                ClauseId id = emit_sum(ev, left, right, std::move(hints));
                sum_dlit_.emplace(pog_.index_of(ev), a);
                (void)id;
                return (Lit)ev;
            }
        }
        throw GenError("sum children have no opposing decision literals");
    }

    // ----- phase 2: metadata ---------------------------------------------

    void compute_metadata() {
        size_t n = (size_t)real_node_count_;
        indegree_.assign(n, 0);
        deps_.resize(n);
        tsize_.assign(n, 0);
        expansions_.assign(n, 0);
        for (size_t i = 0; i < n; i++) {
            const PogNode &node = pog_.nodes[i];
            std::vector<Var> acc;
            int64_t t = (int64_t)node.args.size() + 1;
            for (Lit a : node.args) {
                Var av = var_of(a);
                if (pog_.is_input_var(av)) {
                    acc.push_back(av);
                } else {
                    int64_t ci = pog_.index_of(av);
                    indegree_[(size_t)ci]++;
                    acc.insert(acc.end(), deps_[(size_t)ci].begin(), deps_[(size_t)ci].end());
                    t = t > kTreeSizeCap - tsize_[(size_t)ci] ? kTreeSizeCap
                                                              : t + tsize_[(size_t)ci];
                }
            }
            std::sort(acc.begin(), acc.end());
            acc.erase(std::unique(acc.begin(), acc.end()), acc.end());
            deps_[i] = std::move(acc);
            tsize_[i] = std::min(t, kTreeSizeCap);
        }
        if (root_index_ >= 0) {
            BigInt t = pog_.tree_size(root_lit_);
            stats_.tree_size = t.to_string();
            stats_.tree_ratio = t.to_string() + "/" + std::to_string(pog_.size());
        } else {
            stats_.tree_size = "0";
            stats_.tree_ratio = "0/0";
        }
    }

    void select_mode() {
        switch (opts_.mode) {
        case GenMode::Structural:
            mode_ = Mode::Structural;
            stats_.selected_mode = "struct";
            return;
        case GenMode::Monolithic:
            mode_ = Mode::Monolithic;
            stats_.selected_mode = "mono";
            return;
        case GenMode::OneSided:
            mode_ = Mode::OneSided;
            stats_.selected_mode = "one-sided";
            return;
        case GenMode::Hybrid:
            break;
        }
        if (root_index_ < 0) {
            mode_ = Mode::Monolithic;
            stats_.selected_mode = "mono";
            return;
        }
        BigInt t = pog_.tree_size(root_lit_);
        BigInt five_p = BigInt::from_int(pog_.size());
        five_p.mul_small(5);
        bool ratio_small = t <= five_p;
        bool tree_small = t < BigInt::from_int(opts_.tree_threshold);
        bool frag_small =
            cnf_.clause_count() + pog_.size() + 1 <= opts_.sat_clause_cap;
        if (ratio_small && tree_small && frag_small) {
            mode_ = Mode::Monolithic;
            stats_.selected_mode = "mono";
        } else if (ratio_small) {
            mode_ = Mode::StructuralSwitch;
            stats_.selected_mode = "struct-mono";
        } else {
            mode_ = Mode::Structural;
            stats_.selected_mode = "struct";
        }
    }

    // ----- clause access / simplification --------------------------------

    std::span<const Lit> content(ClauseId id) const {
        if (id <= cnf_.clause_count())
            return cnf_.clause(id);
        auto it = synthetic_.find(id);
        if (it == synthetic_.end())
            throw InternalError("unknown clause id in generator: " + std::to_string(id));
        return it->second;
    }

    // Clause under the context: nullopt when satisfied, otherwise the
    // remaining literals in original order.
    std::optional<std::vector<Lit>> trim_content(std::span<const Lit> lits,
                                                 const std::unordered_set<Lit> &units) const {
        std::vector<Lit> out;
        out.reserve(lits.size());
        for (Lit l : lits) {
            if (units.count(l))
                return std::nullopt;
            if (!units.count(-l))
                out.push_back(l);
        }
        return out;
    }

    struct SimpClause {
        std::vector<Lit> lits;
        ClauseId src;
    };

    // psi simplified under the context (assignment plus implied literals):
    // satisfied clauses dropped, falsified literals removed, duplicates and
    // tautologies eliminated.
    std::vector<SimpClause> simplify_set(const std::vector<ClauseId> &psi,
                                         const std::unordered_set<Lit> &ctx) const {
        std::vector<SimpClause> out;
        std::unordered_set<std::string> seen;
        for (ClauseId id : psi) {
            auto trimmed = trim_content(content(id), ctx);
            if (!trimmed)
                continue;
            std::vector<Lit> canon = *trimmed;
            std::sort(canon.begin(), canon.end(), [](Lit a, Lit b) {
                return var_of(a) != var_of(b) ? var_of(a) < var_of(b) : a < b;
            });
            canon.erase(std::unique(canon.begin(), canon.end()), canon.end());
            bool tautology = false;
            for (size_t i = 0; i + 1 < canon.size(); i++)
                if (canon[i] == -canon[i + 1]) {
                    tautology = true;
                    break;
                }
            if (tautology)
                continue;
            std::string key;
            key.reserve(canon.size() * 8);
            for (Lit l : canon)
                key += std::to_string(l) + ",";
            if (!seen.insert(key).second)
                continue;
            // Deduplicate literals but keep original order for display.
            std::vector<Lit> ordered;
            for (Lit l : *trimmed)
                if (std::find(ordered.begin(), ordered.end(), l) == ordered.end())
                    ordered.push_back(l);
            out.push_back(SimpClause{std::move(ordered), id});
        }
        return out;
    }

    // ----- BCP justification ----------------------------------------------

    // Unit propagation over psi starting from `units` (which must reflect
    // exactly what a checker replay would have: context literals that are
    // merely implied must be derived, not assumed).  Two goals: derive a
    // specific literal, or reach a fully falsified clause.  Returns the
    // clause chain trimmed to the cone that feeds the goal; each chain
    // clause propagates in order, and in conflict mode the final one is
    // falsified.  On success in derive mode, the cone units join `units`.
    struct BcpOutcome {
        std::vector<ClauseId> chain;
        std::vector<std::pair<Lit, ClauseId>> cone; // derived units on the chain
    };

    std::optional<BcpOutcome> bcp_run(const std::vector<ClauseId> &psi,
                                      const std::unordered_set<Lit> &units, Lit goal,
                                      bool want_conflict) {
        std::vector<std::pair<Lit, ClauseId>> derived; // in derivation order
        std::unordered_map<Lit, ClauseId> reason;
        std::unordered_set<Lit> local(units);
        ClauseId conflict = 0;
        bool found = false;
        bool progress = true;
        while (progress && !found) {
            progress = false;
            for (ClauseId id : psi) {
                auto c = content(id);
                Lit unit = 0;
                int open = 0;
                bool sat = false;
                for (Lit l : c) {
                    if (local.count(l)) {
                        sat = true;
                        break;
                    }
                    if (local.count(-l))
                        continue;
                    if (open == 1 && l == unit)
                        continue;
                    unit = l;
                    if (++open > 1)
                        break;
                }
                if (sat)
                    continue;
                if (open == 0) {
                    if (want_conflict) {
                        conflict = id;
                        found = true;
                        break;
                    }
                    // The context is contradictory; derivations stop here.
                    return std::nullopt;
                }
                if (open != 1)
                    continue;
                local.insert(unit);
                derived.emplace_back(unit, id);
                reason.emplace(unit, id);
                progress = true;
                if (!want_conflict && unit == goal) {
                    found = true;
                    break;
                }
            }
        }
        if (!found)
            return std::nullopt;
        // Trim to the cone feeding the goal or the conflict.
        std::unordered_set<Lit> needed;
        if (want_conflict) {
            for (Lit l : content(conflict))
                if (reason.count(-l))
                    needed.insert(-l);
        } else {
            needed.insert(goal);
        }
        std::vector<char> keep(derived.size(), 0);
        for (size_t i = derived.size(); i-- > 0;) {
            auto [lit, id] = derived[i];
            if (!needed.count(lit))
                continue;
            keep[i] = 1;
            for (Lit l : content(id)) {
                if (l == lit)
                    continue;
                if (reason.count(-l))
                    needed.insert(-l);
            }
        }
        BcpOutcome out;
        for (size_t i = 0; i < derived.size(); i++) {
            if (keep[i]) {
                out.chain.push_back(derived[i].second);
                out.cone.push_back(derived[i]);
            }
        }
        if (want_conflict)
            out.chain.push_back(conflict);
        return out;
    }

    std::optional<std::vector<ClauseId>> bcp_derive(const std::vector<ClauseId> &psi,
                                                    std::unordered_set<Lit> &units, Lit goal) {
        if (units.count(goal))
            return std::vector<ClauseId>{};
        auto out = bcp_run(psi, units, goal, false);
        if (!out)
            return std::nullopt;
        for (auto &[lit, id] : out->cone)
            units.insert(lit);
        return std::move(out->chain);
    }

    std::optional<std::vector<ClauseId>> bcp_conflict(const std::vector<ClauseId> &psi,
                                                      const std::unordered_set<Lit> &units) {
        auto out = bcp_run(psi, units, 0, true);
        if (!out)
            return std::nullopt;
        return std::move(out->chain);
    }

    // ----- SAT-backed proof fragments --------------------------------------

    // Runs the solver on pre-simplified fragment clauses, then lifts the
    // refutation into clause additions prefixed with `prefix`.  Returns the
    // ID of the lifted final step (the prefix clause itself).
    ClauseId lift_solve(const std::vector<Lit> &prefix,
                        const std::vector<std::pair<ClauseId, std::vector<Lit>>> &entries,
                        const char *what) {
        std::vector<std::vector<Lit>> fragment;
        fragment.reserve(entries.size());
        for (const auto &[id, lits] : entries)
            fragment.push_back(lits);
        stats_.sat_calls++;
        SolveOutcome outcome;
        if (opts_.solver_command.empty())
            outcome = solve(fragment, SolveLimits{opts_.max_conflicts});
        else
            outcome = external_solve(fragment, opts_.solver_command);
        switch (outcome.status) {
        case SolveOutcome::Status::Satisfiable:
            throw GenError(std::string(what) + ": implication does not hold "
                                               "(fragment satisfiable); graph and formula disagree");
        case SolveOutcome::Status::Limit:
            throw GenError(std::string(what) + ": solver resource limit exceeded");
        case SolveOutcome::Status::Error:
            throw GenError(std::string(what) + ": " + outcome.error);
        case SolveOutcome::Status::Unsatisfiable:
            break;
        }
        std::vector<ClauseId> lifted;
        lifted.reserve(outcome.proof.size());
        for (const auto &step : outcome.proof) {
            std::vector<Lit> lits = prefix;
            lits.insert(lits.end(), step.lits.begin(), step.lits.end());
            std::vector<ClauseId> hints;
            hints.reserve(step.hints.size());
            for (ClauseId h : step.hints) {
                if (h <= (ClauseId)entries.size())
                    hints.push_back(entries[(size_t)h - 1].first);
                else
                    hints.push_back(lifted[(size_t)(h - (ClauseId)entries.size() - 1)]);
            }
            lifted.push_back(emit_add(std::move(lits), std::move(hints)));
        }
        return lifted.back();
    }

    // Solver-backed justification of a single literal from the globally
    // active premises under rho.
    ClauseId solve_literal(Lit a, const Rho &rho) {
        std::unordered_set<Lit> assumps(rho.set);
        assumps.insert(-a);
        std::vector<std::pair<ClauseId, std::vector<Lit>>> entries;
        for (ClauseId id : global_psi_) {
            auto trimmed = trim_content(content(id), assumps);
            if (trimmed)
                entries.emplace_back(id, std::move(*trimmed));
        }
        std::vector<Lit> prefix{a};
        for (Lit l : rho.order)
            prefix.push_back(-l);
        return lift_solve(prefix, entries, "literal justification");
    }

    // Monolithic justification of psi & rho => u_lit via one solver call on
    // the simplified union of psi and the defining clauses under u_lit.
    ClauseId mono_at(Lit u_lit, const Rho &rho, const std::vector<ClauseId> &psi) {
        (void)psi; // any globally active premise may feed the fragment
        std::unordered_set<Lit> assumps(rho.set);
        assumps.insert(-u_lit);
        std::vector<std::pair<ClauseId, std::vector<Lit>>> entries;
        for (ClauseId id : global_psi_) {
            auto trimmed = trim_content(content(id), assumps);
            if (trimmed)
                entries.emplace_back(id, std::move(*trimmed));
        }
        Var uv = var_of(u_lit);
        if (!pog_.is_input_var(uv)) {
            // Defining clauses of the subgraph under u.
            std::vector<int64_t> order;
            std::unordered_set<int64_t> visited;
            std::function<void(int64_t)> visit = [&](int64_t idx) {
                if (!visited.insert(idx).second)
                    return;
                for (Lit a : pog_.nodes[(size_t)idx].args) {
                    Var av = var_of(a);
                    if (!pog_.is_input_var(av))
                        visit(pog_.index_of(av));
                }
                order.push_back(idx);
            };
            visit(pog_.index_of(uv));
            std::sort(order.begin(), order.end());
            for (int64_t idx : order) {
                const PogNode &n = pog_.nodes[(size_t)idx];
                auto add_clause = [&](ClauseId cid, std::vector<Lit> lits) {
                    auto trimmed = trim_content(lits, assumps);
                    if (trimmed)
                        entries.emplace_back(cid, std::move(*trimmed));
                };
                std::vector<Lit> first;
                first.push_back((Lit)n.ext_var);
                for (Lit a : n.args)
                    first.push_back(n.kind == PogKind::Product ? -a : a);
                if (n.kind == PogKind::Product) {
                    add_clause(n.def_id, first);
                    for (size_t j = 0; j < n.args.size(); j++)
                        add_clause(n.def_id + (ClauseId)j + 1,
                                   {-(Lit)n.ext_var, n.args[j]});
                } else {
                    add_clause(n.def_id, {-(Lit)n.ext_var, n.args[0], n.args[1]});
                    add_clause(n.def_id + 1, {(Lit)n.ext_var, -n.args[0]});
                    add_clause(n.def_id + 2, {(Lit)n.ext_var, -n.args[1]});
                }
            }
        }
        std::vector<Lit> prefix{u_lit};
        for (Lit l : rho.order)
            prefix.push_back(-l);
        return lift_solve(prefix, entries, "monolithic proof");
    }

    // ----- structural validation -------------------------------------------

    // `known` carries literals implied by psi under rho but absent from the
    // target context (absorbed product literals and their consequences);
    // they steer simplification but never seed a proof: hint chains derive
    // them so replays stay strict.
    ClauseId validate(Lit u_lit, Rho &rho, const std::unordered_set<Lit> &known,
                      const std::vector<ClauseId> &psi) {
        Var uv = var_of(u_lit);
        if (pog_.is_input_var(uv)) {
            // The subgraph is a bare literal.  An input clause subsumed by
            // the target serves directly; otherwise derive a contradiction
            // from its negation.
            for (ClauseId id : psi) {
                bool ok = true;
                for (Lit l : content(id)) {
                    if (l != u_lit && !rho.has(-l)) {
                        ok = false;
                        break;
                    }
                }
                if (ok)
                    return id;
            }
            std::unordered_set<Lit> seeds(rho.set);
            seeds.insert(-u_lit);
            auto chain = bcp_conflict(psi, seeds);
            if (!chain)
                chain = bcp_conflict(global_psi_, seeds);
            if (chain) {
                std::vector<Lit> lits{u_lit};
                for (Lit l : rho.order)
                    lits.push_back(-l);
                return emit_add(std::move(lits), std::move(*chain));
            }
            return solve_literal(u_lit, rho);
        }
        if (!is_pos(u_lit))
            throw GenError("negative reference to operation node");
        int64_t idx = pog_.index_of(uv);
        if (opts_.use_lemmas && mode_ != Mode::Monolithic && indegree_[(size_t)idx] > 1 &&
            !building_.count(idx)) {
            auto it = lemmas_.find(idx);
            if (it == lemmas_.end()) {
                build_lemma(idx, rho, known, psi);
                it = lemmas_.find(idx);
            }
            if (ClauseId id = apply_lemma(it->second, u_lit, rho, psi))
                return id;
            stats_.lemma_fallbacks++;
        }
        expansions_[(size_t)idx]++;
        stats_.max_node_expansions =
            std::max(stats_.max_node_expansions, expansions_[(size_t)idx]);
        if (mode_ == Mode::StructuralSwitch && tsize_[(size_t)idx] < opts_.tree_threshold)
            return mono_at(u_lit, rho, psi);
        return pog_.nodes[(size_t)idx].kind == PogKind::Sum
                   ? validate_sum(idx, rho, known, psi)
                   : validate_product(idx, rho, known, psi);
    }

    ClauseId validate_sum(int64_t idx, Rho &rho, const std::unordered_set<Lit> &known,
                          const std::vector<ClauseId> &psi) {
        // Copy the node fields: recursion below may declare auxiliary
        // products, which can reallocate the node array.
        Lit u = (Lit)pog_.nodes[(size_t)idx].ext_var;
        ClauseId def_id = pog_.nodes[(size_t)idx].def_id;
        Lit left = pog_.nodes[(size_t)idx].args[0];
        Lit right = pog_.nodes[(size_t)idx].args[1];
        Lit dlit = sum_dlit_.at(idx);

        auto branch = [&](Lit child, Lit decision) -> ClauseId {
            if (pog_.is_input_var(var_of(child)))
                return 0; // bare decision literal, no recursion needed
            rho.push(decision);
            ClauseId tid = validate(child, rho, known, psi);
            rho.pop();
            return tid;
        };
        ClauseId tl = branch(left, dlit);
        ClauseId tr = branch(right, -dlit);

        std::vector<Lit> lits_a{-dlit, u};
        for (Lit l : rho.order)
            lits_a.push_back(-l);
        std::vector<ClauseId> hints_a{def_id + 1};
        if (tl)
            hints_a.push_back(tl);
        ClauseId step_a = emit_add(std::move(lits_a), std::move(hints_a));

        std::vector<Lit> lits_b{u};
        for (Lit l : rho.order)
            lits_b.push_back(-l);
        std::vector<ClauseId> hints_b{step_a, def_id + 2};
        if (tr)
            hints_b.push_back(tr);
        return emit_add(std::move(lits_b), std::move(hints_b));
    }

    ClauseId validate_product(int64_t idx, Rho &rho, const std::unordered_set<Lit> &known,
                              const std::vector<ClauseId> &psi) {
        // Copied out: recursion and grouping below may declare auxiliary
        // products, which can reallocate the node array.
        Lit u = (Lit)pog_.nodes[(size_t)idx].ext_var;
        ClauseId def_id = pog_.nodes[(size_t)idx].def_id;
        std::vector<Lit> node_args = pog_.nodes[(size_t)idx].args;
        std::vector<ClauseId> combine;
        // Chain state starts from the target context only; implied
        // literals must be re-derived so the checker replay goes through.
        std::unordered_set<Lit> units(rho.set);

        // Literal children: boolean constraint propagation first, the
        // solver only for the rest (grouped into one call when enabled).
        std::vector<Lit> lits;
        std::vector<Lit> pending;
        for (Lit a : node_args)
            if (pog_.is_input_var(var_of(a)))
                lits.push_back(a);
        bool progress = true;
        std::unordered_set<Lit> justified;
        while (progress) {
            progress = false;
            for (Lit a : lits) {
                if (units.count(a) || justified.count(a))
                    continue;
                auto chain = bcp_derive(psi, units, a);
                if (!chain)
                    chain = bcp_derive(global_psi_, units, a);
                if (chain) {
                    combine.insert(combine.end(), chain->begin(), chain->end());
                    justified.insert(a);
                    progress = true;
                }
            }
        }
        for (Lit a : lits)
            if (!units.count(a))
                pending.push_back(a);
        if (!pending.empty()) {
            if (opts_.use_grouping && pending.size() >= 2) {
                Var gv = next_var_++;
                ClauseId gdef = emit_product(gv, pending);
                std::unordered_set<Lit> assumps(rho.set);
                assumps.insert(-(Lit)gv);
                std::vector<std::pair<ClauseId, std::vector<Lit>>> entries;
                for (ClauseId id : global_psi_) {
                    auto trimmed = trim_content(content(id), assumps);
                    if (trimmed)
                        entries.emplace_back(id, std::move(*trimmed));
                }
                std::vector<Lit> neg_group;
                for (Lit l : pending)
                    neg_group.push_back(-l);
                entries.emplace_back(gdef, std::move(neg_group));
                std::vector<Lit> prefix{(Lit)gv};
                for (Lit l : rho.order)
                    prefix.push_back(-l);
                ClauseId group_id = lift_solve(prefix, entries, "literal group proof");
                combine.push_back(group_id);
                for (size_t j = 0; j < pending.size(); j++)
                    combine.push_back(gdef + (ClauseId)j + 1);
                for (Lit l : pending)
                    units.insert(l);
            } else {
                for (Lit a : pending) {
                    combine.push_back(solve_literal(a, rho));
                    units.insert(a);
                }
            }
        }

        // Nonterminal children recurse with the target context unchanged;
        // the justified literals travel in the implied-context set.
        std::unordered_set<Lit> child_known(known);
        for (Lit l : units)
            child_known.insert(l);
        std::vector<Lit> children;
        for (Lit a : node_args)
            if (!pog_.is_input_var(var_of(a)))
                children.push_back(a);
        if (children.size() == 1) {
            combine.push_back(validate(children[0], rho, child_known, psi));
        } else if (children.size() > 1) {
            // Partition the simplified clauses among the children by
            // dependency set.  Clauses satisfied by the target context are
            // dead weight for replays and are dropped; clauses whose live
            // variables all lie outside the children (context absorbed at
            // this or an outer level) stay available to every child for
            // chain building.
            std::unordered_map<Var, size_t> owner;
            for (size_t ci = 0; ci < children.size(); ci++)
                for (Var v : deps_[(size_t)pog_.index_of(var_of(children[ci]))])
                    owner[v] = ci;
            std::vector<std::vector<ClauseId>> parts(children.size());
            for (ClauseId id : psi) {
                auto by_rho = trim_content(content(id), rho.set);
                if (!by_rho)
                    continue;
                if (clause_is_tautology(*by_rho))
                    continue;
                auto trimmed = trim_content(*by_rho, child_known);
                size_t which = SIZE_MAX;
                if (trimmed) {
                    if (trimmed->empty())
                        throw GenError("clause " + std::to_string(id) +
                                       " false under a branch that should satisfy it");
                    for (Lit l : *trimmed) {
                        auto it = owner.find(var_of(l));
                        if (it == owner.end())
                            continue;
                        if (which != SIZE_MAX && it->second != which)
                            throw GenError("clause partition by dependency failed at clause " +
                                           std::to_string(id));
                        which = it->second;
                    }
                }
                if (which != SIZE_MAX) {
                    parts[which].push_back(id);
                } else {
                    for (auto &part : parts)
                        part.push_back(id);
                }
            }
            for (size_t ci = 0; ci < children.size(); ci++)
                combine.push_back(validate(children[ci], rho, child_known, parts[ci]));
        }

        combine.push_back(def_id);
        std::vector<Lit> target{u};
        for (Lit l : rho.order)
            target.push_back(-l);
        return emit_add(std::move(target), std::move(combine));
    }

    // ----- lemmas ----------------------------------------------------------

    void build_lemma(int64_t idx, const Rho &rho, const std::unordered_set<Lit> &known,
                     const std::vector<ClauseId> &psi) {
        std::unordered_set<Lit> ctx(rho.set);
        for (Lit l : known)
            ctx.insert(l);
        std::vector<SimpClause> gamma = simplify_set(psi, ctx);
        Lemma lem;
        std::vector<ClauseId> syn_ids;
        Rho beta;
        for (const auto &sc : gamma) {
            if (sc.lits.empty())
                throw GenError("empty clause while building lemma");
            std::vector<Lit> args;
            args.reserve(sc.lits.size());
            for (Lit l : sc.lits)
                args.push_back(-l);
            Var gv = next_var_++;
            ClauseId def = emit_product(gv, std::move(args));
            std::vector<Lit> syn{(Lit)gv};
            syn.insert(syn.end(), sc.lits.begin(), sc.lits.end());
            synthetic_.emplace(def, std::move(syn));
            global_psi_.push_back(def);
            lem.guards.push_back(Guard{gv, sc.lits, def});
            syn_ids.push_back(def);
            beta.push(-(Lit)gv);
        }
        building_.insert(idx);
        lem.target = validate((Lit)pog_.nodes[(size_t)idx].ext_var, beta, {}, syn_ids);
        building_.erase(idx);
        stats_.lemmas++;
        lemmas_.emplace(idx, std::move(lem));
    }

    // Returns 0 when the lemma does not match this context (fallback).
    ClauseId apply_lemma(const Lemma &lem, Lit u, const Rho &rho,
                         const std::vector<ClauseId> &psi) {
        // Each argument clause must be untouched by the target context and
        // refutable together with it: assuming rho and the clause's
        // negation, unit propagation over psi must close.  A clause of psi
        // that the argument clause subsumes gives the one-step chain.
        std::vector<std::vector<ClauseId>> activations;
        for (const Guard &g : lem.guards) {
            for (Lit l : g.clause)
                if (rho.assigns_var(var_of(l)))
                    return 0;
            std::unordered_set<Lit> seeds(rho.set);
            for (Lit l : g.clause)
                seeds.insert(-l);
            auto chain = bcp_conflict(psi, seeds);
            if (!chain)
                chain = bcp_conflict(global_psi_, seeds);
            if (!chain)
                return 0;
            activations.push_back(std::move(*chain));
        }
        std::vector<ClauseId> combine;
        for (size_t j = 0; j < lem.guards.size(); j++) {
            const Guard &g = lem.guards[j];
            std::vector<Lit> lits{-(Lit)g.var};
            for (Lit l : rho.order)
                lits.push_back(-l);
            std::vector<ClauseId> hints;
            for (size_t k = 0; k < g.clause.size(); k++)
                hints.push_back(g.def_id + (ClauseId)k + 1);
            hints.insert(hints.end(), activations[j].begin(), activations[j].end());
            combine.push_back(emit_add(std::move(lits), std::move(hints)));
        }
        std::vector<Lit> lits{u};
        for (Lit l : rho.order)
            lits.push_back(-l);
        combine.push_back(lem.target);
        stats_.lemma_applications++;
        return emit_add(std::move(lits), std::move(combine));
    }

    // ----- forward / reverse ----------------------------------------------

    void forward() {
        std::vector<ClauseId> inputs;
        inputs.reserve((size_t)cnf_.clause_count());
        for (ClauseId id = 1; id <= cnf_.clause_count(); id++)
            inputs.push_back(id);
        Rho empty;
        if (mode_ == Mode::OneSided) {
            root_unit_ = emit_add({root_lit_}, {});
            assumption_ = root_unit_;
            return;
        }
        if (root_index_ < 0) {
            // Bare-literal root: an input clause subsumed by {r} closes the
            // proof directly, otherwise lift a refutation.
            ClauseId direct = 0;
            for (ClauseId id : inputs) {
                bool ok = true;
                for (Lit l : content(id))
                    if (l != root_lit_) {
                        ok = false;
                        break;
                    }
                if (ok && !cnf_.clause(id).empty()) {
                    direct = id;
                    break;
                }
            }
            root_unit_ = direct ? emit_add({root_lit_}, {direct})
                                : mono_at(root_lit_, empty, inputs);
            return;
        }
        if (!is_pos(root_lit_) || mode_ == Mode::Monolithic) {
            // Negated-empty-product roots lift a refutation of the formula
            // itself; plain monolithic mode lifts one of formula + negated
            // graph encoding.
            root_unit_ = mono_at(root_lit_, empty, inputs);
            return;
        }
        root_unit_ = validate(root_lit_, empty, {}, inputs);
    }

    void reverse() {
        // Asserted clauses go first, newest to oldest, reusing the hints
        // from their additions; the root unit stays.
        for (size_t i = asserted_.size(); i-- > 0;) {
            auto &[id, hints] = asserted_[i];
            if (id == root_unit_)
                continue;
            emit_delete(id, hints);
        }
        for (ClauseId cid = 1; cid <= cnf_.clause_count(); cid++)
            emit_delete(cid, input_deletion_hints(cid));
    }

    std::vector<ClauseId> input_deletion_hints(ClauseId cid) {
        std::span<const Lit> c = cnf_.clause(cid);
        if (clause_is_tautology(c))
            return {}; // negation is contradictory on its own
        if (root_index_ < 0) {
            for (Lit l : c)
                if (l == root_lit_)
                    return {root_unit_};
            throw GenError("cannot delete input clause " + std::to_string(cid) +
                           ": reverse implication fails");
        }
        if (!is_pos(root_lit_)) {
            // Constant-false root: unit -v plus the defining clause (v).
            return {root_unit_, pog_.nodes[(size_t)root_index_].def_id};
        }
        // Bottom-up marking: a node is marked once the falsified clause
        // forces its extension variable to 0.  Only the region upward of
        // the clause's literal occurrences can mark, so walk parent links
        // from those sites in declaration order.  A marked argument always
        // announces itself to the parent together with its position, so
        // the parent learns its first marked argument without scanning.
        ensure_reverse_index();
        mark_epoch_++;
        std::vector<ClauseId> hints{root_unit_};
        std::priority_queue<int64_t, std::vector<int64_t>, std::greater<int64_t>> agenda;
        auto trigger = [&](int64_t node, int32_t pos) {
            if (node > root_index_)
                return;
            if (queued_state_[(size_t)node] != mark_epoch_) {
                queued_state_[(size_t)node] = mark_epoch_;
                best_pos_[(size_t)node] = pos;
                trigger_count_[(size_t)node] = 1;
                agenda.push(node);
            } else {
                best_pos_[(size_t)node] = std::min(best_pos_[(size_t)node], pos);
                trigger_count_[(size_t)node]++;
            }
        };
        std::unordered_set<Lit> in_c(c.begin(), c.end());
        for (Lit l : in_c)
            for (const auto &[parent, pos, arg] : input_occ_[(size_t)var_of(l)])
                if (arg == l)
                    trigger(parent, pos);
        while (!agenda.empty()) {
            int64_t i = agenda.top();
            agenda.pop();
            const PogNode &n = pog_.nodes[(size_t)i];
            if (n.kind == PogKind::Product) {
                hints.push_back(n.def_id + (ClauseId)best_pos_[(size_t)i] + 1);
            } else {
                // Both children must be forced to zero.
                if (trigger_count_[(size_t)i] < 2)
                    continue;
                hints.push_back(n.def_id);
            }
            mark_state_[(size_t)i] = mark_epoch_;
            for (const auto &[parent, pos] : node_parents_[(size_t)i])
                trigger(parent, pos);
        }
        if (mark_state_[(size_t)root_index_] != mark_epoch_)
            throw GenError("cannot delete input clause " + std::to_string(cid) +
                           ": reverse implication fails");
        return hints;
    }

    void ensure_reverse_index() {
        if (!node_parents_.empty() || root_index_ < 0)
            return;
        node_parents_.assign((size_t)root_index_ + 1, {});
        input_occ_.assign((size_t)pog_.input_count + 1, {});
        mark_state_.assign((size_t)root_index_ + 1, 0);
        queued_state_.assign((size_t)root_index_ + 1, 0);
        best_pos_.assign((size_t)root_index_ + 1, 0);
        trigger_count_.assign((size_t)root_index_ + 1, 0);
        for (int64_t i = 0; i <= root_index_; i++) {
            const auto &args = pog_.nodes[(size_t)i].args;
            for (size_t j = 0; j < args.size(); j++) {
                Lit a = args[j];
                Var av = var_of(a);
                if (pog_.is_input_var(av)) {
                    input_occ_[(size_t)av].push_back({i, (int32_t)j, a});
                } else {
                    if (!is_pos(a))
                        throw GenError("negative operation reference in reverse proof");
                    int64_t ci = pog_.index_of(av);
                    if (ci <= root_index_)
                        node_parents_[(size_t)ci].push_back({i, (int32_t)j});
                }
            }
        }
    }

    // ----- members ----------------------------------------------------------

    enum class Mode : uint8_t { Structural, Monolithic, StructuralSwitch, OneSided };

    const CnfFormula &cnf_;
    const DdnnfGraph &graph_;
    GenOptions opts_;
    Mode mode_ = Mode::Structural;

    Pog pog_;
    std::vector<CpogStep> steps_;
    GenStats stats_;
    ClauseId next_id_;
    Var next_var_;
    Lit root_lit_ = 0;
    int64_t root_index_ = -1;
    int64_t real_node_count_ = 0;
    int64_t defining_count_ = 0;
    ClauseId root_unit_ = 0;
    ClauseId assumption_ = 0;

    std::vector<std::optional<TLit>> memo_;
    std::unordered_map<int64_t, Lit> sum_dlit_;
    std::vector<int64_t> indegree_;
    std::vector<std::vector<Var>> deps_;
    std::vector<int64_t> tsize_;
    std::vector<int64_t> expansions_;
    std::unordered_map<ClauseId, std::vector<Lit>> synthetic_;
    std::vector<ClauseId> global_psi_; // input clauses plus guard synthetics
    std::unordered_map<int64_t, Lemma> lemmas_;
    std::unordered_set<int64_t> building_;
    std::vector<std::pair<ClauseId, std::vector<ClauseId>>> asserted_;
    struct ParentRef {
        int64_t node;
        int32_t pos;
    };
    struct OccRef {
        int64_t node;
        int32_t pos;
        Lit arg;
    };
    std::vector<std::vector<ParentRef>> node_parents_; // reverse-proof index
    std::vector<std::vector<OccRef>> input_occ_;
    std::vector<uint32_t> mark_state_;
    std::vector<uint32_t> queued_state_;
    std::vector<int32_t> best_pos_;
    std::vector<int32_t> trigger_count_;
    uint32_t mark_epoch_ = 0;
};

} // namespace

GenResult generate(const CnfFormula &cnf, const DdnnfGraph &graph, const GenOptions &opts) {
    return Builder(cnf, graph, opts).run();
}

} // namespace cpog
