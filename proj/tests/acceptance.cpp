// Acceptance suite: one criterion per function, one PASS/FAIL line each.
// Usage: acceptance <cli-binary> <data-dir>

#include <sys/resource.h>

#include <chrono>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "checker.hh"
#include "cnf.hh"
#include "cpog_file.hh"
#include "ddnnf.hh"
#include "evaluator.hh"
#include "fixtures.hh"
#include "generator.hh"
#include "minicompile.hh"
#include "oracle.hh"
#include "q25.hh"

using namespace cpog;
using Clock = std::chrono::steady_clock;

namespace {

std::string g_cli;
std::string g_data;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

int run_cli(const std::string &args, std::string &output) {
    std::string cmd = g_cli + " " + args + " > /tmp/cpog_accept_out.txt 2>&1";
    int rc = std::system(cmd.c_str());
    std::ifstream is("/tmp/cpog_accept_out.txt");
    std::ostringstream ss;
    ss << is.rdbuf();
    output = ss.str();
    return WEXITSTATUS(rc);
}

struct Criterion {
    int number;
    const char *name;
    std::function<bool(std::string &)> run;
};

// ---- 1: golden example --------------------------------------------------

bool golden_example(std::string &detail) {
    auto start = Clock::now();
    CnfFormula f = parse_dimacs(fixtures::kExampleCnf);
    auto steps = parse_cpog(fixtures::kExampleCpog);
    CheckResult res = check_proof(f, steps, {});
    if (res.verdict != VerdictKind::FullEquivalence) {
        detail = "verdict not FULL: " + res.reason;
        return false;
    }
    BigInt count = unweighted_count(res.pog, 4);
    if (count.to_int64() != 6 || !(count == brute_count(f))) {
        detail = "count " + count.to_string() + " != 6";
        return false;
    }
    Q25 d = density(res.pog);
    if (d != Q25::make(BigInt::from_int(3), -3, 0)) {
        detail = "density " + d.to_decimal() + " != 0.375";
        return false;
    }
    double elapsed = seconds_since(start);
    if (elapsed >= 1.0) {
        detail = "took " + std::to_string(elapsed) + "s";
        return false;
    }
    // The command-line interface agrees.
    std::string out;
    int rc = run_cli("check " + g_data + "/example.cnf " + g_data + "/example.cpog", out);
    if (rc != 0 || out.find("VERIFIED FULL") == std::string::npos) {
        detail = "cli check: rc=" + std::to_string(rc) + " out=" + out;
        return false;
    }
    rc = run_cli("count " + g_data + "/example.cnf " + g_data + "/example.cpog --weights " +
                     g_data + "/example.weights",
                 out);
    if (rc != 0 || out.find("models 6") == std::string::npos ||
        out.find("weighted-count 0.3") == std::string::npos) {
        detail = "cli count: rc=" + std::to_string(rc) + " out=" + out;
        return false;
    }
    detail = "count 6, density 0.375, " + std::to_string(elapsed) + "s";
    return true;
}

// ---- 2: lemma example ---------------------------------------------------

bool lemma_example(std::string &detail) {
    CnfFormula f = parse_dimacs(fixtures::kExampleCnf);
    DdnnfGraph g = parse_d4(fixtures::kExampleDdnnf);
    GenOptions o;
    o.mode = GenMode::Structural;
    o.use_lemmas = true;
    GenResult gen = generate(f, g, o);
    if (gen.stats.lemmas != 1 || gen.stats.lemma_applications != 2) {
        detail = "expected 1 lemma with 2 applications";
        return false;
    }
    const char *expect =
        "25 p 11 -3 4 0\n"
        "28 p 12 3 -4 0\n"
        "31 a 5 11 12 3 0 25 6 0\n"
        "32 a 6 11 12 -3 0 28 9 0\n"
        "33 a 3 7 11 12 0 13 31 0\n"
        "34 a 7 11 12 0 33 14 32 0\n"
        "35 a -11 1 0 26 27 3 0\n"
        "36 a -12 1 0 29 30 4 0\n"
        "37 a 7 1 0 35 36 34 0\n"
        "38 a 8 1 0 37 15 0\n"
        "39 a -11 -1 0 26 27 1 0\n"
        "40 a -12 -1 0 29 30 2 0\n"
        "41 a 7 -1 0 39 40 34 0\n"
        "42 a 9 -1 0 5 41 18 0\n"
        "43 a 1 10 0 23 38 0\n"
        "44 a 10 0 43 24 42 0\n";
    if (serialize_cpog(gen.steps).find(expect) == std::string::npos) {
        detail = "lemma proof structure differs";
        return false;
    }
    CheckResult res = check_proof(f, gen.steps, {});
    if (res.verdict != VerdictKind::FullEquivalence) {
        detail = "verdict not FULL: " + res.reason;
        return false;
    }
    detail = "guard products + lemma proof + two applications, FULL";
    return true;
}

// ---- 3: soundness fuzz --------------------------------------------------

bool soundness_fuzz(std::string &detail) {
    auto start = Clock::now();
    std::mt19937_64 rng(20260501);
    for (int iter = 0; iter < 500; iter++) {
        Var n = 1 + (Var)(rng() % 12);
        int m = (int)(rng() % (uint64_t)(3 * n + 1));
        CnfFormula f = fixtures::random_cnf(rng, (int)n, m);
        DdnnfGraph g = parse_d4(write_ddnnf(mini_compile(f)));
        GenResult gen = generate(f, g, {});
        CheckResult res = check_proof(f, gen.steps, {});
        if (res.verdict != VerdictKind::FullEquivalence) {
            detail = "iteration " + std::to_string(iter) + ": " + res.reason;
            return false;
        }
        if (!(unweighted_count(res.pog, n) == brute_count(f))) {
            detail = "iteration " + std::to_string(iter) + ": count mismatch";
            return false;
        }
    }
    double elapsed = seconds_since(start);
    if (elapsed >= 300.0) {
        detail = "took " + std::to_string(elapsed) + "s";
        return false;
    }
    detail = "500/500 FULL with exact counts, " + std::to_string(elapsed) + "s";
    return true;
}

// ---- 4: spoof rejection -------------------------------------------------

bool spoof_rejection(std::string &detail) {
    // A clause that preserves satisfiability but drops models must be
    // unprovable whatever the hint.
    CnfFormula phi1 = parse_dimacs("p cnf 3 1\n1 3 0\n");
    for (const auto &hints :
         std::vector<std::vector<ClauseId>>{{}, {1}, {1, 1}, {1, 1, 1}}) {
        Checker chk(phi1, {});
        if (chk.apply(AddStep{2, {2, -3}, hints}) == std::nullopt) {
            detail = "model-dropping clause was accepted";
            return false;
        }
    }

    // Tampered file through the command line: sum hint citing an input
    // clause must be rejected with status 10.
    {
        std::string tampered(fixtures::kExampleCpog);
        size_t pos = tampered.find("12 s 7 5 6 7 10 0");
        tampered.replace(pos, strlen("12 s 7 5 6 7 10 0"), "12 s 7 5 6 3 10 0");
        std::ofstream os("/tmp/cpog_accept_tampered.cpog");
        os << tampered;
        os.close();
        std::string out;
        int rc = run_cli("check " + g_data + "/example.cnf /tmp/cpog_accept_tampered.cpog", out);
        if (rc != 10 || out.find("REJECTED") == std::string::npos) {
            detail = "tampered sum hint not rejected with status 10";
            return false;
        }
    }

    // Mutation storm over valid generated proofs: no mutant may be
    // accepted unless it is still extensionally correct.
    std::mt19937_64 rng(424242);
    int accepted = 0;
    int tried = 0;
    while (tried < 500) {
        Var n = 2 + (Var)(rng() % 9); // n <= 10 for the cross-check
        int m = (int)(1 + rng() % (uint64_t)(2 * n));
        CnfFormula f = fixtures::random_cnf(rng, (int)n, m);
        DdnnfGraph g = parse_d4(write_ddnnf(mini_compile(f)));
        GenResult gen = generate(f, g, {});
        if (check_proof(f, gen.steps, {}).verdict != VerdictKind::FullEquivalence) {
            detail = "base proof did not verify";
            return false;
        }
        for (int k = 0; k < 5 && tried < 500; k++, tried++) {
            auto mutated = gen.steps;
            size_t which = rng() % mutated.size();
            switch (rng() % 3) {
            case 0: // literal flip
                if (auto *a = std::get_if<AddStep>(&mutated[which]); a && !a->lits.empty())
                    a->lits[rng() % a->lits.size()] *= -1;
                else if (auto *p = std::get_if<ProductStep>(&mutated[which]);
                         p && !p->args.empty())
                    p->args[rng() % p->args.size()] *= -1;
                else if (auto *s = std::get_if<SumStep>(&mutated[which]))
                    s->left *= -1;
                break;
            case 1: // hint drop
                if (auto *a = std::get_if<AddStep>(&mutated[which]); a && !a->hints.empty())
                    a->hints.erase(a->hints.begin() + (ptrdiff_t)(rng() % a->hints.size()));
                else if (auto *d = std::get_if<DeleteStep>(&mutated[which]);
                         d && !d->hints.empty())
                    d->hints.erase(d->hints.begin() + (ptrdiff_t)(rng() % d->hints.size()));
                break;
            default: // sum hint rewritten to cite an input clause
                if (auto *s = std::get_if<SumStep>(&mutated[which]);
                    s && !s->hints.empty() && f.clause_count() > 0) {
                    s->hints[rng() % s->hints.size()] =
                        1 + (ClauseId)(rng() % (uint64_t)f.clause_count());
                } else {
                    std::swap(mutated[which], mutated[rng() % mutated.size()]);
                }
                break;
            }
            if (mutated == gen.steps)
                continue;
            CheckResult res = check_proof(f, mutated, {});
            if (res.verdict == VerdictKind::Rejected)
                continue;
            accepted++;
            if (!equiv_over_x(f, res.pog)) {
                detail = "false accept after mutation";
                return false;
            }
        }
    }
    detail = "spoof clause unprovable; 500 mutants, 0 false accepts (" +
             std::to_string(accepted) + " still-valid survivors)";
    return true;
}

// ---- 5: evaluation conformance -------------------------------------------

Q25 brute_pog_weighted(const Pog &p, const std::function<Q25(Var)> &w) {
    Q25 total = Q25::zero();
    std::vector<int8_t> alpha((size_t)p.input_count + 1, 0);
    for (uint64_t bits = 0; bits < ((uint64_t)1 << p.input_count); bits++) {
        for (Var v = 1; v <= p.input_count; v++)
            alpha[(size_t)v] = (bits >> (v - 1)) & 1;
        if (!p.evaluate(p.root, alpha))
            continue;
        Q25 prod = Q25::one();
        for (Var v = 1; v <= p.input_count; v++)
            prod = prod * (alpha[(size_t)v] ? w(v) : Q25::one() - w(v));
        total = total + prod;
    }
    return total;
}

uint64_t brute_pog_mod(const Pog &p, const std::vector<uint64_t> &w, uint64_t m) {
    PrimeField field{m};
    uint64_t total = 0;
    std::vector<int8_t> alpha((size_t)p.input_count + 1, 0);
    for (uint64_t bits = 0; bits < ((uint64_t)1 << p.input_count); bits++) {
        for (Var v = 1; v <= p.input_count; v++)
            alpha[(size_t)v] = (bits >> (v - 1)) & 1;
        if (!p.evaluate(p.root, alpha))
            continue;
        uint64_t prod = field.one();
        for (Var v = 1; v <= p.input_count; v++)
            prod = field.mul(prod, alpha[(size_t)v] ? w[(size_t)v]
                                                    : field.sub(field.one(), w[(size_t)v]));
        total = field.add(total, prod);
    }
    return total;
}

bool evaluation_conformance(std::string &detail) {
    std::mt19937_64 rng(5550123);
    Q25Ring ring;
    const uint64_t modulus = 1000003;
    PrimeField field{modulus};
    for (int iter = 0; iter < 1000; iter++) {
        Var n = 2 + (Var)(rng() % 7); // up to 8
        Pog p = fixtures::random_pog(rng, n, true);
        std::vector<Q25> w((size_t)n + 1);
        std::vector<uint64_t> wm((size_t)n + 1);
        for (Var v = 1; v <= n; v++) {
            w[(size_t)v] = Q25::make(BigInt::from_int((int64_t)(rng() % 17)), -4, 0);
            wm[(size_t)v] = rng() % modulus;
        }
        Q25 got = ring_eval<Q25Ring>(p, p.root, [&w](Var v) { return w[(size_t)v]; }, ring);
        if (got != brute_pog_weighted(p, [&w](Var v) { return w[(size_t)v]; })) {
            detail = "rational mismatch at iteration " + std::to_string(iter);
            return false;
        }
        uint64_t gm =
            ring_eval<PrimeField>(p, p.root, [&wm](Var v) { return wm[(size_t)v]; }, field);
        if (gm != brute_pog_mod(p, wm, modulus)) {
            detail = "field mismatch at iteration " + std::to_string(iter);
            return false;
        }
    }
    detail = "1000/1000 graphs agree with the enumeration oracle in both rings";
    return true;
}

// ---- 6: function hashing -------------------------------------------------

Lit expand_tree(const Pog &src, Lit lit, Pog &dst, Var &next) {
    Var v = var_of(lit);
    if (src.is_input_var(v))
        return lit;
    const PogNode &n = src.nodes[(size_t)src.index_of(v)];
    std::vector<Lit> args;
    for (Lit a : n.args)
        args.push_back(expand_tree(src, a, dst, next));
    dst.add_node(n.kind, next, std::move(args));
    Lit out = (Lit)next++;
    return is_pos(lit) ? out : -out;
}

bool function_hashing(std::string &detail) {
    std::mt19937_64 rng(606060);
    const uint64_t modulus = 1009; // prime, comfortably >= 2n for n <= 8
    int pairs = 0;
    while (pairs < 50) {
        Var n = 3 + (Var)(rng() % 6); // up to 8
        CnfFormula f1 = fixtures::random_cnf(rng, (int)n, (int)(1 + rng() % (uint64_t)(2 * n)));
        CnfFormula f2 = fixtures::random_cnf(rng, (int)n, (int)(1 + rng() % (uint64_t)(2 * n)));
        // Inequivalent model sets?
        bool differ = false;
        for (uint64_t bits = 0; bits < ((uint64_t)1 << n) && !differ; bits++)
            differ = cnf_satisfied(f1, bits) != cnf_satisfied(f2, bits);
        if (!differ)
            continue;
        auto build = [&](const CnfFormula &f) {
            DdnnfGraph g = parse_d4(write_ddnnf(mini_compile(f)));
            GenResult gen = generate(f, g, {});
            CheckResult res = check_proof(f, gen.steps, {});
            return res.pog;
        };
        Pog p1 = build(f1), p2 = build(f2);
        int differ_count = 0;
        for (uint64_t seed = 0; seed < 200; seed++)
            differ_count += function_hash(p1, seed, modulus) != function_hash(p2, seed, modulus);
        if (differ_count * 2 <= 200) {
            detail = "pair " + std::to_string(pairs) + " differs only " +
                     std::to_string(differ_count) + "/200";
            return false;
        }
        // The same function in different syntax always collides.
        Pog tree;
        tree.input_count = p1.input_count;
        Var next = p1.input_count + 1;
        tree.root = expand_tree(p1, p1.root, tree, next);
        for (uint64_t seed = 0; seed < 200; seed++) {
            if (function_hash(p1, seed, modulus) != function_hash(tree, seed, modulus)) {
                detail = "equivalent pair hashed differently";
                return false;
            }
        }
        pairs++;
    }
    detail = "50 inequivalent pairs each differ on >100/200 seeds; equivalent pairs collide";
    return true;
}

// ---- 7: lemma scaling -----------------------------------------------------

std::string chain_ddnnf(int m) {
    std::string text;
    for (int i = 1; i <= m; i++)
        text += "o " + std::to_string(i) + " 0\n";
    text += "o " + std::to_string(m + 1) + " 0\nt " + std::to_string(m + 2) + " 0\n";
    for (int i = 1; i <= m; i++) {
        text += std::to_string(i) + " " + std::to_string(i + 1) + " -" + std::to_string(i) + " 0\n";
        text += std::to_string(i) + " " + std::to_string(i + 1) + " " + std::to_string(i) + " 0\n";
    }
    // The base gadget decides the last two variables as an equality.
    std::string a = std::to_string(m + 1), b = std::to_string(m + 2);
    text += a + " " + b + " -" + a + " -" + b + " 0\n";
    text += a + " " + b + " " + a + " " + b + " 0\n";
    return text;
}

CnfFormula chain_cnf(int m) {
    Var a = m + 1, b = m + 2;
    std::string text = "p cnf " + std::to_string(m + 2) + " 2\n" + std::to_string(a) + " -" +
                       std::to_string(b) + " 0\n-" + std::to_string(a) + " " +
                       std::to_string(b) + " 0\n";
    return parse_dimacs(text);
}

bool lemma_scaling(std::string &detail) {
    GenOptions with;
    with.mode = GenMode::Structural;
    GenOptions without = with;
    without.use_lemmas = false;

    std::vector<int> sizes{4, 8, 12, 16};
    std::vector<int64_t> steps_with;
    for (int m : sizes) {
        CnfFormula f = chain_cnf(m);
        DdnnfGraph g = parse_d4(chain_ddnnf(m));
        GenResult gen = generate(f, g, with);
        CheckResult res = check_proof(f, gen.steps, {});
        if (res.verdict != VerdictKind::FullEquivalence) {
            detail = "lemma variant rejected at m=" + std::to_string(m);
            return false;
        }
        steps_with.push_back(gen.stats.assertions);
    }
    // Linear fit: incremental cost per chain link stays below 50 steps.
    double slope = double(steps_with.back() - steps_with.front()) / (16 - 4);
    if (slope > 50.0) {
        detail = "slope " + std::to_string(slope) + " > 50";
        return false;
    }
    CnfFormula f16 = chain_cnf(16);
    DdnnfGraph g16 = parse_d4(chain_ddnnf(16));
    GenResult noL = generate(f16, g16, without);
    if (noL.stats.assertions <= 10000) {
        detail = "tree expansion only took " + std::to_string(noL.stats.assertions) + " steps";
        return false;
    }
    if (check_proof(f16, noL.steps, {}).verdict != VerdictKind::FullEquivalence) {
        detail = "tree-expanded variant rejected";
        return false;
    }
    detail = "m=16: " + std::to_string(steps_with.back()) + " assertions with lemmas (slope " +
             std::to_string(slope) + "/link), " + std::to_string(noL.stats.assertions) +
             " without; both FULL";
    return true;
}

// ---- 8: exact arithmetic ---------------------------------------------------

struct Frac {
    __int128 num;
    __int128 den;
    static __int128 gcd(__int128 a, __int128 b) {
        if (a < 0)
            a = -a;
        while (b) {
            __int128 t = a % b;
            a = b;
            b = t;
        }
        return a;
    }
    static Frac make(__int128 n, __int128 d) {
        if (d < 0) {
            n = -n;
            d = -d;
        }
        __int128 g = gcd(n < 0 ? -n : n, d);
        if (g == 0)
            return {0, 1};
        return {n / g, d / g};
    }
    Frac operator+(const Frac &o) const { return make(num * o.den + o.num * den, den * o.den); }
    Frac operator-(const Frac &o) const { return make(num * o.den - o.num * den, den * o.den); }
    Frac operator*(const Frac &o) const { return make(num * o.num, den * o.den); }
    bool operator==(const Frac &o) const { return num == o.num && den == o.den; }
};

bool exact_arithmetic(std::string &detail) {
    std::mt19937_64 rng(771177);
    std::uniform_int_distribution<int64_t> mant(-60, 60);
    std::uniform_int_distribution<int64_t> exp(-4, 4);
    auto to_frac = [](const Q25 &q) {
        Frac f = Frac::make(*q.mantissa().to_int64(), 1);
        for (int64_t i = 0; i < q.pow2(); i++)
            f = f * Frac::make(2, 1);
        for (int64_t i = 0; i > q.pow2(); i--)
            f = f * Frac::make(1, 2);
        for (int64_t i = 0; i < q.pow5(); i++)
            f = f * Frac::make(5, 1);
        for (int64_t i = 0; i > q.pow5(); i--)
            f = f * Frac::make(1, 5);
        return f;
    };
    for (int i = 0; i < 100000; i++) {
        Q25 x = Q25::make(BigInt::from_int(mant(rng)), exp(rng), exp(rng));
        Q25 y = Q25::make(BigInt::from_int(mant(rng)), exp(rng), exp(rng));
        Q25 r;
        Frac expect{};
        switch (i % 3) {
        case 0:
            r = x + y;
            expect = to_frac(x) + to_frac(y);
            break;
        case 1:
            r = x - y;
            expect = to_frac(x) - to_frac(y);
            break;
        default:
            r = x * y;
            expect = to_frac(x) * to_frac(y);
            break;
        }
        if (!(to_frac(r) == expect)) {
            detail = "operation " + std::to_string(i) + " diverged from the rational oracle";
            return false;
        }
        // Canonical uniqueness: renormalizing is the identity.
        if (Q25::make(r.mantissa(), r.pow2(), r.pow5()) != r) {
            detail = "normalization not idempotent";
            return false;
        }
        // Exact decimal round trip.
        auto back = Q25::parse_decimal(r.to_decimal());
        if (!back || *back != r) {
            detail = "decimal round trip failed for " + r.to_decimal();
            return false;
        }
    }
    detail = "100000 operations match the rational oracle; round trips exact";
    return true;
}

// ---- 9: hybrid rule ---------------------------------------------------------

bool hybrid_rule(std::string &detail) {
    // (a) small tree, low ratio: monolithic.
    {
        CnfFormula f = parse_dimacs(fixtures::kExampleCnf);
        DdnnfGraph g = parse_d4(fixtures::kExampleDdnnf);
        GenResult gen = generate(f, g, {});
        if (gen.stats.selected_mode != "mono") {
            detail = "case a selected " + gen.stats.selected_mode;
            return false;
        }
        if (check_proof(f, gen.steps, {}).verdict != VerdictKind::FullEquivalence) {
            detail = "case a rejected";
            return false;
        }
    }
    // (b) low ratio but a tree above a million: structural with a switch
    // to monolithic below the threshold.  A balanced conjunction tree over
    // 350001 unit clauses has ratio 1 and tree size over 10^6.
    {
        const Var n = 350001;
        CnfFormula f;
        f.var_count = n;
        for (Var v = 1; v <= n; v++)
            f.clauses.push_back({v});
        // Graph: one and node conjoining all variables via a single arc
        // carrying every literal would not give a big tree, so build a
        // balanced binary product tree explicitly.
        std::string text;
        int64_t next_id = 1;
        std::vector<std::pair<int64_t, Var>> layer; // (node id, var) leaves by id 0
        int64_t t_node = next_id++;
        text += "t " + std::to_string(t_node) + " 0\n";
        std::vector<std::string> arcs;
        std::vector<int64_t> nodes;
        // Leaves: and nodes with two literals each; one leftover literal
        // rides on the root arc when n is odd.
        for (Var v = 1; v + 1 <= n; v += 2) {
            int64_t id = next_id++;
            text += "a " + std::to_string(id) + " 0\n";
            arcs.push_back(std::to_string(id) + " " + std::to_string(t_node) + " " +
                           std::to_string(v) + " " + std::to_string(v + 1) + " 0");
            nodes.push_back(id);
        }
        while (nodes.size() > 2) {
            std::vector<int64_t> up;
            for (size_t i = 0; i + 1 < nodes.size(); i += 2) {
                int64_t id = next_id++;
                text += "a " + std::to_string(id) + " 0\n";
                arcs.push_back(std::to_string(id) + " " + std::to_string(nodes[i]) + " 0");
                arcs.push_back(std::to_string(id) + " " + std::to_string(nodes[i + 1]) + " 0");
                up.push_back(id);
            }
            if (nodes.size() % 2)
                up.push_back(nodes.back());
            nodes = std::move(up);
        }
        int64_t root = next_id++;
        text += "a " + std::to_string(root) + " 0\n";
        for (int64_t child : nodes)
            arcs.push_back(std::to_string(root) + " " + std::to_string(child) + " 0");
        arcs.push_back(std::to_string(root) + " " + std::to_string(t_node) + " " +
                       std::to_string(n) + " 0");
        for (const auto &a : arcs)
            text += a + "\n";
        DdnnfGraph g = parse_d4(text);
        GenResult gen = generate(f, g, {});
        if (gen.stats.selected_mode != "struct-mono") {
            detail = "case b selected " + gen.stats.selected_mode + " (ratio " +
                     gen.stats.tree_ratio + ")";
            return false;
        }
        CheckResult res = check_proof(f, gen.steps, {});
        if (res.verdict != VerdictKind::FullEquivalence) {
            detail = "case b rejected: " + res.reason;
            return false;
        }
        if (!(unweighted_count(res.pog, n) == BigInt::from_int(1))) {
            detail = "case b count wrong";
            return false;
        }
    }
    // (c) ratio above 5: structural throughout.
    {
        CnfFormula f = chain_cnf(16);
        DdnnfGraph g = parse_d4(chain_ddnnf(16));
        GenResult gen = generate(f, g, {});
        if (gen.stats.selected_mode != "struct") {
            detail = "case c selected " + gen.stats.selected_mode;
            return false;
        }
        if (check_proof(f, gen.steps, {}).verdict != VerdictKind::FullEquivalence) {
            detail = "case c rejected";
            return false;
        }
    }
    detail = "mono / struct-mono / struct selected as mandated";
    return true;
}

// ---- 10: checker throughput --------------------------------------------------

int64_t peak_rss_kb() {
    struct rusage usage{};
    if (getrusage(RUSAGE_SELF, &usage) != 0)
        return -1;
    return usage.ru_maxrss; // kilobytes on Linux
}

bool checker_throughput(std::string &detail) {
    // 62500 equality gadgets under one conjunction: 125000 variables,
    // 125000 input clauses, and a proof whose clause count crosses a
    // million.
    const int64_t pairs = 62500;
    const Var n = 2 * pairs;
    CnfFormula f;
    f.var_count = n;
    for (int64_t i = 0; i < pairs; i++) {
        Var a = 2 * i + 1, b = 2 * i + 2;
        f.clauses.push_back({-a, b});
        f.clauses.push_back({a, -b});
    }
    std::string text;
    {
        std::ostringstream os;
        os << "a 1 0\nt 2 0\n";
        for (int64_t i = 0; i < pairs; i++)
            os << "o " << i + 3 << " 0\n";
        for (int64_t i = 0; i < pairs; i++) {
            Var a = 2 * i + 1, b = 2 * i + 2;
            os << "1 " << i + 3 << " 0\n";
            os << i + 3 << " 2 -" << a << " -" << b << " 0\n";
            os << i + 3 << " 2 " << a << " " << b << " 0\n";
        }
        text = os.str();
    }
    GenOptions o;
    o.mode = GenMode::Structural;
    GenResult gen = generate(f, parse_d4(text), o);

    // The checker is what is being timed: parse the serialized proof and
    // replay it.
    std::string proof_text = serialize_cpog(gen.steps);
    auto start = Clock::now();
    auto steps = parse_cpog(proof_text);
    CheckResult res = check_proof(f, steps, {});
    double elapsed = seconds_since(start);
    if (res.verdict != VerdictKind::FullEquivalence) {
        detail = "rejected: " + res.reason;
        return false;
    }
    if (res.clause_count < 1000000) {
        detail = "only " + std::to_string(res.clause_count) + " clauses";
        return false;
    }
    int64_t rss_kb = peak_rss_kb();
    if (elapsed >= 60.0) {
        detail = "took " + std::to_string(elapsed) + "s";
        return false;
    }
    if (rss_kb < 0 || rss_kb > 2 * 1024 * 1024) {
        detail = "peak rss " + std::to_string(rss_kb) + " kB";
        return false;
    }
    // The count is 2^62500: one model per gadget valuation.
    BigInt count = unweighted_count(res.pog, n);
    BigInt expect = BigInt::from_int(1);
    expect.mul_pow(2, pairs);
    if (!(count == expect)) {
        detail = "count mismatch";
        return false;
    }
    detail = std::to_string(res.clause_count) + " clauses in " + std::to_string(elapsed) +
             "s, peak rss " + std::to_string(rss_kb / 1024) + " MB";
    return true;
}

} // namespace

int main(int argc, char **argv) {
    if (argc >= 2)
        g_cli = argv[1];
    if (argc >= 3)
        g_data = argv[2];

    std::vector<Criterion> criteria = {
        {1, "golden example verifies, counts 6, density 3/8", golden_example},
        {2, "lemma-mode generation matches the shared-node proof", lemma_example},
        {3, "soundness fuzz: 500 pipelines, exact counts", soundness_fuzz},
        {4, "spoof and mutation rejection", spoof_rejection},
        {5, "ring evaluation equals enumeration in both rings", evaluation_conformance},
        {6, "function hashing separates inequivalent pairs", function_hashing},
        {7, "lemmas keep shared-chain proofs linear", lemma_scaling},
        {8, "exact arithmetic matches the rational oracle", exact_arithmetic},
        {9, "hybrid strategy selection follows the size rule", hybrid_rule},
        {10, "checker throughput on a million-clause proof", checker_throughput},
    };

    bool all_ok = true;
    for (auto &c : criteria) {
        std::string detail;
        bool ok = false;
        try {
            ok = c.run(detail);
        } catch (const std::exception &e) {
            detail = std::string("exception: ") + e.what();
        }
        printf("%s  %2d  %s%s%s\n", ok ? "PASS" : "FAIL", c.number, c.name,
               detail.empty() ? "" : " -- ", detail.c_str());
        fflush(stdout);
        all_ok = all_ok && ok;
    }
    return all_ok ? 0 : 1;
}
