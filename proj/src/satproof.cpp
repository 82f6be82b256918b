#include "satproof.hh"

#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <unordered_map>

#include "checker.hh"

namespace cpog {

namespace {

// Internal literal encoding: variable index v in [0, nv), literal 2v or
// 2v+1 (negative).
inline int enc(int v, bool negative) { return 2 * v + (negative ? 1 : 0); }
inline int ilit_var(int l) { return l >> 1; }
inline bool ilit_neg(int l) { return l & 1; }
inline int ilit_flip(int l) { return l ^ 1; }

struct InternalClause {
    std::vector<int> lits;
    ClauseId ext_id;
};

class Cdcl {
public:
    Cdcl(const std::vector<std::vector<Lit>> &clauses, SolveLimits limits)
        : input_(clauses), limits_(limits) {}

    SolveOutcome run() {
        SolveOutcome out;
        if (!setup(out))
            return out;
        if (unsat_at_setup_) {
            out.status = SolveOutcome::Status::Unsatisfiable;
            out.proof = std::move(proof_);
            return out;
        }
        int64_t conflicts = 0;
        for (;;) {
            int confl = propagate();
            if (confl >= 0) {
                if (++conflicts > limits_.max_conflicts) {
                    out.status = SolveOutcome::Status::Limit;
                    out.error = "conflict budget exceeded";
                    return out;
                }
                if (level_ == 0) {
                    emit_final_conflict(confl);
                    out.status = SolveOutcome::Status::Unsatisfiable;
                    out.proof = std::move(proof_);
                    return out;
                }
                analyze_and_learn(confl);
            } else {
                int decision = pick_branch();
                if (decision < 0) {
                    out.status = SolveOutcome::Status::Satisfiable;
                    out.model = extract_model();
                    return out;
                }
                level_++;
                trail_lim_.push_back((int)trail_.size());
                enqueue(decision, -1);
            }
        }
    }

private:
    bool setup(SolveOutcome &out) {
        // Map external variables to dense indices.
        for (const auto &cl : input_) {
            for (Lit l : cl) {
                Var v = var_of(l);
                if (!var_map_.count(v)) {
                    int idx = (int)var_names_.size();
                    var_map_.emplace(v, idx);
                    var_names_.push_back(v);
                }
            }
        }
        int nv = (int)var_names_.size();
        value_.assign(nv, 0);
        reason_.assign(nv, -1);
        level_of_.assign(nv, 0);
        trail_pos_.assign(nv, -1);
        activity_.assign(nv, 0.0);
        seen_.assign(nv, 0);
        watches_.assign(2 * nv, {});

        for (size_t i = 0; i < input_.size(); i++) {
            ClauseId ext = (ClauseId)i + 1;
            std::vector<int> lits;
            bool tautology = false;
            for (Lit l : input_[i]) {
                int il = enc(var_map_[var_of(l)], l < 0);
                if (std::find(lits.begin(), lits.end(), il) != lits.end())
                    continue;
                if (std::find(lits.begin(), lits.end(), ilit_flip(il)) != lits.end()) {
                    tautology = true;
                    break;
                }
                lits.push_back(il);
            }
            if (tautology)
                continue;
            if (lits.empty()) {
                // Immediate refutation: the fragment contains the empty clause.
                proof_.push_back(ProofStep{{}, {ext}});
                unsat_at_setup_ = true;
                return true;
            }
            int ci = (int)clauses_.size();
            clauses_.push_back(InternalClause{std::move(lits), ext});
            auto &lits2 = clauses_.back().lits;
            if (lits2.size() == 1) {
                int l = lits2[0];
                if (value_of(l) < 0) {
                    // Conflicting unit inputs; refutation is the pair.
                    proof_.push_back(ProofStep{{}, {reason_ext(ilit_var(l)), ext}});
                    unsat_at_setup_ = true;
                    return true;
                }
                if (value_of(l) == 0) {
                    enqueue(l, ci);
                }
            } else {
                watches_[(size_t)lits2[0]].push_back(ci);
                watches_[(size_t)lits2[1]].push_back(ci);
            }
        }
        (void)out;
        return true;
    }

    ClauseId reason_ext(int v) const { return clauses_[(size_t)reason_[(size_t)v]].ext_id; }

    int value_of(int l) const {
        int8_t v = value_[(size_t)ilit_var(l)];
        if (v == 0)
            return 0;
        return (v > 0) == !ilit_neg(l) ? 1 : -1;
    }

    void enqueue(int l, int reason_clause) {
        int v = ilit_var(l);
        value_[(size_t)v] = ilit_neg(l) ? -1 : 1;
        reason_[(size_t)v] = reason_clause;
        level_of_[(size_t)v] = level_;
        trail_pos_[(size_t)v] = (int)trail_.size();
        trail_.push_back(l);
    }

    // Returns conflicting clause index or -1.
    int propagate() {
        while (qhead_ < trail_.size()) {
            int l = trail_[qhead_++];
            int fl = ilit_flip(l);
            auto &ws = watches_[(size_t)fl];
            size_t keep = 0;
            for (size_t wi = 0; wi < ws.size(); wi++) {
                int ci = ws[wi];
                auto &lits = clauses_[(size_t)ci].lits;
                // Ensure the falsified watch sits at position 1.
                if (lits[0] == fl)
                    std::swap(lits[0], lits[1]);
                if (value_of(lits[0]) > 0) {
                    ws[keep++] = ci;
                    continue;
                }
                bool moved = false;
                for (size_t k = 2; k < lits.size(); k++) {
                    if (value_of(lits[k]) >= 0) {
                        std::swap(lits[1], lits[k]);
                        watches_[(size_t)lits[1]].push_back(ci);
                        moved = true;
                        break;
                    }
                }
                if (moved)
                    continue;
                ws[keep++] = ci;
                if (value_of(lits[0]) < 0) {
                    // Conflict; keep remaining watches.
                    for (size_t wj = wi + 1; wj < ws.size(); wj++)
                        ws[keep++] = ws[wj];
                    ws.resize(keep);
                    return ci;
                }
                enqueue(lits[0], ci);
            }
            ws.resize(keep);
        }
        return -1;
    }

    void bump(int v) {
        activity_[(size_t)v] += bump_;
        if (activity_[(size_t)v] > 1e100)
            rescale_activity();
    }

    void rescale_activity() {
        for (auto &a : activity_)
            a *= 1e-100;
        bump_ *= 1e-100;
    }

    // First-UIP learning.  The hint is the resolution chain reordered as a
    // unit-propagation sequence: reasons in trail order, conflict last.
    void analyze_and_learn(int confl) {
        std::vector<int> learned; // internal lits, learned[0] = UIP negation
        learned.push_back(0);     // placeholder
        std::vector<std::pair<int, ClauseId>> chain; // (trail pos, reason ext id)
        int counter = 0;
        int idx = (int)trail_.size() - 1;
        int p = -1; // literal last resolved on, as assigned
        int clause_idx = confl;
        for (;;) {
            const auto &lits = clauses_[(size_t)clause_idx].lits;
            for (int q : lits) {
                if (q == p)
                    continue; // the literal this reason propagated
                int v = ilit_var(q);
                if (seen_[(size_t)v])
                    continue;
                seen_[(size_t)v] = 1;
                bump(v);
                if (level_of_[(size_t)v] == level_) {
                    counter++;
                } else if (level_of_[(size_t)v] > 0) {
                    learned.push_back(q);
                }
                // Level-0 literals resolve away entirely; their reasons
                // join the chain below.
            }
            // Pick the next current-level literal to resolve on.
            while (!seen_[(size_t)ilit_var(trail_[(size_t)idx])])
                idx--;
            p = trail_[(size_t)idx];
            int v = ilit_var(p);
            seen_[(size_t)v] = 0;
            counter--;
            if (counter == 0) {
                learned[0] = ilit_flip(p);
                break;
            }
            chain.emplace_back(trail_pos_[(size_t)v], reason_ext(v));
            clause_idx = reason_[(size_t)v];
            idx--;
        }
        // Resolve away any level-0 literals still marked seen.
        std::vector<int> zero_stack;
        for (int q : trail_) {
            int v = ilit_var(q);
            if (level_of_[(size_t)v] == 0 && seen_[(size_t)v])
                zero_stack.push_back(v);
        }
        // Transitively include reasons of level-0 vars referenced anywhere.
        for (size_t si = 0; si < zero_stack.size(); si++) {
            int v = zero_stack[si];
            chain.emplace_back(trail_pos_[(size_t)v], reason_ext(v));
            for (int q : clauses_[(size_t)reason_[(size_t)v]].lits) {
                int qv = ilit_var(q);
                if (!seen_[(size_t)qv] && level_of_[(size_t)qv] == 0) {
                    seen_[(size_t)qv] = 1;
                    zero_stack.push_back(qv);
                }
            }
        }
        for (int v : zero_stack)
            seen_[(size_t)v] = 0;
        for (size_t i = 1; i < learned.size(); i++)
            seen_[(size_t)ilit_var(learned[i])] = 0;

        std::sort(chain.begin(), chain.end());
        ProofStep step;
        for (int q : learned)
            step.lits.push_back(ext_lit(q));
        for (auto &[pos, ext] : chain)
            step.hints.push_back(ext);
        step.hints.push_back(clauses_[(size_t)confl].ext_id);
        ClauseId learned_ext = (ClauseId)input_.size() + (ClauseId)proof_.size() + 1;
        proof_.push_back(std::move(step));

        // Backjump.
        int back_level = 0;
        int swap_pos = -1;
        for (size_t i = 1; i < learned.size(); i++) {
            int lv = level_of_[(size_t)ilit_var(learned[i])];
            if (lv > back_level) {
                back_level = lv;
                swap_pos = (int)i;
            }
        }
        if (swap_pos > 1)
            std::swap(learned[1], learned[swap_pos]);
        backtrack(back_level);

        int ci = (int)clauses_.size();
        clauses_.push_back(InternalClause{learned, learned_ext});
        if (learned.size() >= 2) {
            watches_[(size_t)learned[0]].push_back(ci);
            watches_[(size_t)learned[1]].push_back(ci);
        }
        enqueue(learned[0], ci);
        bump_ *= 1.05;
    }

    // Conflict at level 0: resolve everything to the empty clause.
    void emit_final_conflict(int confl) {
        std::vector<int> stack;
        std::vector<std::pair<int, ClauseId>> chain;
        for (int q : clauses_[(size_t)confl].lits) {
            int v = ilit_var(q);
            if (!seen_[(size_t)v]) {
                seen_[(size_t)v] = 1;
                stack.push_back(v);
            }
        }
        for (size_t si = 0; si < stack.size(); si++) {
            int v = stack[si];
            chain.emplace_back(trail_pos_[(size_t)v], reason_ext(v));
            for (int q : clauses_[(size_t)reason_[(size_t)v]].lits) {
                int qv = ilit_var(q);
                if (!seen_[(size_t)qv]) {
                    seen_[(size_t)qv] = 1;
                    stack.push_back(qv);
                }
            }
        }
        for (int v : stack)
            seen_[(size_t)v] = 0;
        std::sort(chain.begin(), chain.end());
        ProofStep step;
        for (auto &[pos, ext] : chain)
            step.hints.push_back(ext);
        step.hints.push_back(clauses_[(size_t)confl].ext_id);
        proof_.push_back(std::move(step));
    }

    void backtrack(int target_level) {
        if (level_ <= target_level)
            return;
        int limit = trail_lim_[(size_t)target_level];
        for (size_t i = trail_.size(); i-- > (size_t)limit;) {
            int v = ilit_var(trail_[i]);
            value_[(size_t)v] = 0;
            reason_[(size_t)v] = -1;
            trail_pos_[(size_t)v] = -1;
        }
        trail_.resize((size_t)limit);
        trail_lim_.resize((size_t)target_level);
        qhead_ = trail_.size();
        level_ = target_level;
    }

    int pick_branch() {
        int best = -1;
        double best_act = -1.0;
        for (size_t v = 0; v < value_.size(); v++) {
            if (value_[v] == 0 && activity_[v] > best_act) {
                best_act = activity_[v];
                best = (int)v;
            }
        }
        if (best < 0)
            return -1;
        return enc(best, true); // branch false first
    }

    Lit ext_lit(int il) const {
        Lit v = var_names_[(size_t)ilit_var(il)];
        return ilit_neg(il) ? -v : v;
    }

    std::vector<Lit> extract_model() const {
        std::vector<Lit> model;
        model.reserve(var_names_.size());
        for (size_t v = 0; v < var_names_.size(); v++)
            model.push_back(value_[v] >= 0 ? var_names_[v] : -var_names_[v]);
        return model;
    }

    const std::vector<std::vector<Lit>> &input_;
    SolveLimits limits_;
    std::unordered_map<Var, int> var_map_;
    std::vector<Var> var_names_;
    std::vector<InternalClause> clauses_;
    std::vector<std::vector<int>> watches_;
    std::vector<int8_t> value_;
    std::vector<int> reason_;
    std::vector<int> level_of_;
    std::vector<int> trail_pos_;
    std::vector<double> activity_;
    std::vector<int8_t> seen_;
    std::vector<int> trail_;
    std::vector<int> trail_lim_;
    size_t qhead_ = 0;
    int level_ = 0;
    double bump_ = 1.0;
    std::vector<ProofStep> proof_;
    bool unsat_at_setup_ = false;
};

} // namespace

SolveOutcome solve(const std::vector<std::vector<Lit>> &clauses, SolveLimits limits) {
    Cdcl solver(clauses, limits);
    SolveOutcome out = solver.run();
    if (out.status == SolveOutcome::Status::Satisfiable) {
        // A model must satisfy every clause; verify before reporting.
        RupScratch scratch;
        Var max_var = 1;
        for (const auto &cl : clauses)
            for (Lit l : cl)
                max_var = std::max(max_var, var_of(l));
        scratch.ensure(max_var);
        for (Lit l : out.model)
            scratch.assign(l);
        for (const auto &cl : clauses) {
            bool sat = false;
            for (Lit l : cl)
                sat = sat || scratch.has(l);
            if (!sat)
                throw InternalError("solver produced a non-model");
        }
    }
    return out;
}

std::optional<std::string> replay_unsat_proof(const std::vector<std::vector<Lit>> &clauses,
                                              std::span<const ProofStep> proof) {
    if (proof.empty())
        return "empty proof";
    if (!proof.back().lits.empty())
        return "final proof step is not the empty clause";
    RupScratch scratch;
    Var max_var = 1;
    for (const auto &cl : clauses)
        for (Lit l : cl)
            max_var = std::max(max_var, var_of(l));
    for (const auto &st : proof)
        for (Lit l : st.lits)
            max_var = std::max(max_var, var_of(l));
    scratch.ensure(max_var);
    ClauseId base = (ClauseId)clauses.size();
    for (size_t i = 0; i < proof.size(); i++) {
        auto get = [&](ClauseId id) -> std::optional<std::span<const Lit>> {
            if (id >= 1 && id <= base)
                return std::span<const Lit>(clauses[(size_t)id - 1]);
            if (id > base && id <= base + (ClauseId)i)
                return std::span<const Lit>(proof[(size_t)(id - base - 1)].lits);
            return std::nullopt;
        };
        if (auto err = strict_rup_check(proof[i].lits, proof[i].hints, get, scratch))
            return "proof step " + std::to_string(i + 1) + ": " + *err;
    }
    return std::nullopt;
}

SolveOutcome external_solve(const std::vector<std::vector<Lit>> &clauses,
                            const std::string &command_template) {
    SolveOutcome out;
    namespace fs = std::filesystem;
    static std::atomic<uint64_t> counter{0};
    std::string tag =
        std::to_string((uint64_t)::getpid()) + "_" + std::to_string(counter.fetch_add(1));
    fs::path dir = fs::temp_directory_path();
    fs::path cnf_path = dir / ("cpog_frag_" + tag + ".cnf");
    fs::path proof_path = dir / ("cpog_frag_" + tag + ".lrat");

    Var max_var = 1;
    for (const auto &cl : clauses)
        for (Lit l : cl)
            max_var = std::max(max_var, var_of(l));
    {
        std::ofstream os(cnf_path);
        os << "p cnf " << max_var << " " << clauses.size() << "\n";
        for (const auto &cl : clauses) {
            for (Lit l : cl)
                os << l << " ";
            os << "0\n";
        }
    }
    std::string cmd = command_template;
    auto substitute = [&cmd](const std::string &key, const std::string &value) {
        for (size_t pos; (pos = cmd.find(key)) != std::string::npos;)
            cmd.replace(pos, key.size(), value);
    };
    substitute("{cnf}", cnf_path.string());
    substitute("{proof}", proof_path.string());
    int rc = std::system(cmd.c_str());
    std::string text;
    {
        std::ifstream is(proof_path);
        if (is)
            text.assign(std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>());
    }
    fs::remove(cnf_path);
    fs::remove(proof_path);
    if (text.empty()) {
        out.error = "external solver produced no proof (exit status " + std::to_string(rc) + ")";
        return out;
    }

    // Hinted clausal proof: "<id> <lits> 0 <hints> 0"; deletion lines
    // "<id> d <ids> 0" are ignored.  External IDs may be sparse.
    std::unordered_map<ClauseId, ClauseId> id_map;
    for (size_t i = 0; i < clauses.size(); i++)
        id_map.emplace((ClauseId)i + 1, (ClauseId)i + 1);
    std::vector<ProofStep> proof;
    {
        size_t pos = 0;
        auto next_token = [&]() -> std::string_view {
            while (pos < text.size() && isspace((unsigned char)text[pos]))
                pos++;
            size_t begin = pos;
            while (pos < text.size() && !isspace((unsigned char)text[pos]))
                pos++;
            return std::string_view(text).substr(begin, pos - begin);
        };
        for (;;) {
            std::string_view tok = next_token();
            if (tok.empty())
                break;
            int64_t ext_id = 0;
            auto res = std::from_chars(tok.data(), tok.data() + tok.size(), ext_id);
            if (res.ec != std::errc() || ext_id <= 0) {
                out.error = "malformed external proof near '" + std::string(tok) + "'";
                return out;
            }
            std::string_view t2 = next_token();
            if (t2 == "d") {
                for (;;) {
                    std::string_view t = next_token();
                    int64_t v = 0;
                    if (std::from_chars(t.data(), t.data() + t.size(), v).ec != std::errc()) {
                        out.error = "malformed deletion line in external proof";
                        return out;
                    }
                    if (v == 0)
                        break;
                }
                continue;
            }
            ProofStep step;
            bool in_lits = true;
            std::string_view t = t2;
            for (;;) {
                int64_t v = 0;
                if (t.empty() ||
                    std::from_chars(t.data(), t.data() + t.size(), v).ec != std::errc()) {
                    out.error = "malformed external proof step";
                    return out;
                }
                if (v == 0) {
                    if (!in_lits)
                        break;
                    in_lits = false;
                } else if (in_lits) {
                    step.lits.push_back(v);
                } else {
                    auto it = id_map.find(v);
                    if (it == id_map.end()) {
                        out.error = "external proof hint cites unknown id " + std::to_string(v);
                        return out;
                    }
                    step.hints.push_back(it->second);
                }
                t = next_token();
            }
            // No extension variables: every literal must be a fragment var.
            for (Lit l : step.lits) {
                if (var_of(l) > max_var) {
                    out.error = "external proof introduces variable " + std::to_string(var_of(l));
                    return out;
                }
            }
            id_map.emplace(ext_id, (ClauseId)clauses.size() + (ClauseId)proof.size() + 1);
            proof.push_back(std::move(step));
        }
    }
    if (proof.empty() || !proof.back().lits.empty()) {
        out.error = "external proof does not end with the empty clause";
        return out;
    }
    if (auto err = replay_unsat_proof(clauses, proof)) {
        out.error = "external proof rejected: " + *err;
        return out;
    }
    out.status = SolveOutcome::Status::Unsatisfiable;
    out.proof = std::move(proof);
    return out;
}

} // namespace cpog
