#include "doctest.h"

#include <cstring>
#include <random>

#include "checker.hh"
#include "fixtures.hh"
#include "oracle.hh"

using namespace cpog;

namespace {

CheckResult check_text(const char *cnf, const std::string &cpog, bool one_sided = false) {
    CnfFormula f = parse_dimacs(cnf);
    auto steps = parse_cpog(cpog);
    return check_proof(f, steps, CheckOptions{one_sided});
}

const char *kDecls =
    "6 p 5 -3 -4 0\n"
    "9 p 6 3 4 0\n"
    "12 s 7 5 6 7 10 0\n"
    "15 p 8 -1 7 0\n"
    "18 p 9 1 -2 7 0\n"
    "22 s 10 8 9 16 19 0\n"
    "r 10\n";

} // namespace

TEST_CASE("the full example proof verifies") {
    CheckResult res = check_text(fixtures::kExampleCnf, fixtures::kExampleCpog);
    CHECK(res.verdict == VerdictKind::FullEquivalence);
    CHECK(res.pog.nodes.size() == 6);
    CHECK(res.pog.root == 10);
    CHECK(res.pog.size() == 19);
    // The verified graph is extensionally equivalent to the formula.
    CHECK(equiv_over_x(fixtures::example_cnf(), res.pog));
}

TEST_CASE("one-sided proof yields the reverse-only verdict") {
    std::string text = std::string(kDecls) + "25 a 10 0 0\n"
                                             "d 1 25 8 10 12 16 21 22 0\n"
                                             "d 2 25 7 11 12 16 21 22 0\n"
                                             "d 3 25 8 10 12 17 21 22 0\n"
                                             "d 4 25 7 11 12 17 19 22 0\n"
                                             "d 5 25 16 20 22 0\n";
    CheckResult res = check_text(fixtures::kExampleCnf, text, true);
    CHECK(res.verdict == VerdictKind::ReverseOnly);
    // The same file without --one-sided is rejected at the assumption.
    CheckResult strict = check_text(fixtures::kExampleCnf, text, false);
    CHECK(strict.verdict == VerdictKind::Rejected);
    CHECK(strict.failed_step == 8);
}

TEST_CASE("strict hint semantics") {
    CnfFormula f = fixtures::example_cnf();
    Checker chk(f, {});
    for (const auto &st : parse_cpog(kDecls))
        REQUIRE(chk.apply(st) == std::nullopt);

    SUBCASE("a valid hint sequence propagates to a conflict") {
        CHECK(chk.apply(AddStep{25, {5, 1, 3}, {3, 6}}) == std::nullopt);
    }
    SUBCASE("a reordering that still propagates is fine") {
        // Under the seeds, clause 6 becomes the unit (4) and clause 3 then
        // conflicts: order flexibility, but every clause must contribute.
        CHECK(chk.apply(AddStep{25, {5, 1, 3}, {6, 3}}) == std::nullopt);
    }
    SUBCASE("a hint clause with two open literals fails") {
        auto err = chk.apply(AddStep{25, {5, 1, 3}, {15, 6}});
        REQUIRE(err.has_value());
        CHECK(err->find("neither propagates nor conflicts") != std::string::npos);
    }
    SUBCASE("hints that stop short of a conflict fail") {
        auto err = chk.apply(AddStep{25, {5, 1, 3}, {3}});
        REQUIRE(err.has_value());
        CHECK(err->find("no conflict") != std::string::npos);
    }
    SUBCASE("a conflict before the final hint fails") {
        CHECK(chk.apply(AddStep{25, {5, 1, 3}, {3, 6}}) == std::nullopt);
        // Clause 25 now conflicts immediately under its own negation; an
        // extra trailing hint cannot contribute.
        auto err = chk.apply(AddStep{26, {5, 1, 3}, {25, 6}});
        REQUIRE(err.has_value());
        CHECK(err->find("conflict before final hint") != std::string::npos);
    }
    SUBCASE("target duplicates are ignored") {
        CHECK(chk.apply(AddStep{25, {5, 5, 1, 3, 3}, {3, 6}}) == std::nullopt);
    }
    SUBCASE("empty hints are rejected outside one-sided mode") {
        auto err = chk.apply(AddStep{25, {10}, {}});
        REQUIRE(err.has_value());
        CHECK(err->find("empty hint") != std::string::npos);
    }
}

TEST_CASE("the unit root assertion of the example") {
    CnfFormula f = fixtures::example_cnf();
    Checker chk(f, {});
    auto steps = fixtures::example_steps();
    // Apply everything up to and including step 35's addition.
    size_t upto = 0;
    for (size_t i = 0; i < steps.size(); i++) {
        if (const auto *a = std::get_if<AddStep>(&steps[i]); a && a->id == 36) {
            upto = i;
            break;
        }
    }
    for (size_t i = 0; i < upto; i++)
        REQUIRE(chk.apply(steps[i]) == std::nullopt);
    CHECK(chk.apply(AddStep{36, {10}, {35, 24, 34}}) == std::nullopt);
}

TEST_CASE("clause ids must be allocated sequentially") {
    CheckResult res = check_text(fixtures::kExampleCnf, "7 p 5 -3 -4 0\nr 5\n");
    CHECK(res.verdict == VerdictKind::Rejected);
    CHECK(res.failed_step == 1);
    CHECK(res.reason.find("out of order") != std::string::npos);
}

TEST_CASE("declarations must use fresh extension variables") {
    // Reusing an input variable.
    CheckResult r1 = check_text(fixtures::kExampleCnf, "6 p 4 1 2 0\nr 4\n");
    CHECK(r1.verdict == VerdictKind::Rejected);
    CHECK(r1.reason.find("already in use") != std::string::npos);
    // Reusing an extension variable.
    CheckResult r2 = check_text(fixtures::kExampleCnf, "6 p 5 1 2 0\n9 p 5 3 0\nr 5\n");
    CHECK(r2.verdict == VerdictKind::Rejected);
    CHECK(r2.failed_step == 2);
    // Unknown argument variable.
    CheckResult r3 = check_text(fixtures::kExampleCnf, "6 p 5 1 9 0\nr 5\n");
    CHECK(r3.verdict == VerdictKind::Rejected);
    CHECK(r3.reason.find("unknown variable") != std::string::npos);
}

TEST_CASE("products require disjoint dependency sets") {
    CheckResult res = check_text(fixtures::kExampleCnf, "6 p 5 3 -3 0\nr 5\n");
    CHECK(res.verdict == VerdictKind::Rejected);
    CHECK(res.reason.find("share variable") != std::string::npos);

    // Overlap through children, not just direct literals.
    CheckResult res2 = check_text(fixtures::kExampleCnf,
                                  "6 p 5 3 4 0\n9 p 6 -4 0\n11 p 7 5 6 0\nr 7\n");
    CHECK(res2.verdict == VerdictKind::Rejected);
    CHECK(res2.failed_step == 3);
}

TEST_CASE("sum hints may cite only defining clauses") {
    std::string text =
        "6 p 5 -3 -4 0\n"
        "9 p 6 3 4 0\n"
        "12 s 7 5 6 3 10 0\n" // clause 3 is an input clause
        "r 7\n";
    CheckResult res = check_text(fixtures::kExampleCnf, text);
    CHECK(res.verdict == VerdictKind::Rejected);
    CHECK(res.failed_step == 3);
    CHECK(res.reason.find("non-defining") != std::string::npos);
}

TEST_CASE("sum over complementary literals verifies with an empty hint") {
    // The mutual-exclusion target (-1 | 1) seeds a contradiction directly;
    // deleting the tautological input clause works the same way.
    CheckResult res = check_text("p cnf 1 1\n1 -1 0\n",
                                 "2 s 2 1 -1 0\nr 2\n5 a 2 0 3 4 0\nd 1 0\n");
    CHECK(res.verdict == VerdictKind::FullEquivalence);
    CHECK(equiv_over_x(parse_dimacs("p cnf 1 1\n1 -1 0\n"), res.pog));
}

TEST_CASE("defining clauses cannot be deleted") {
    std::string text = std::string(fixtures::kExampleCpog) + "d 6 7 8 0\n";
    CheckResult res = check_text(fixtures::kExampleCnf, text);
    CHECK(res.verdict == VerdictKind::Rejected);
    CHECK(res.reason.find("defining") != std::string::npos);
}

TEST_CASE("deletions need a valid proof from the remaining clauses") {
    // Omit the root-unit hint from the first input deletion.
    std::string text(fixtures::kExampleCpog);
    size_t pos = text.find("d 1 36 8 10 12 16 21 22 0");
    REQUIRE(pos != std::string::npos);
    text.replace(pos, strlen("d 1 36 8 10 12 16 21 22 0"), "d 1 8 10 12 16 21 22 0");
    CheckResult res = check_text(fixtures::kExampleCnf, text);
    CHECK(res.verdict == VerdictKind::Rejected);
    CHECK(res.reason.find("deletion of clause 1 failed") != std::string::npos);
}

TEST_CASE("final conditions") {
    // Without input deletions: input clauses still active.
    std::string no_input_del(fixtures::kExampleCpog);
    size_t pos = no_input_del.find("d 1 ");
    no_input_del.resize(pos);
    CheckResult r1 = check_text(fixtures::kExampleCnf, no_input_del);
    CHECK(r1.verdict == VerdictKind::Rejected);
    CHECK(r1.failed_step == 0);
    CHECK(r1.reason.find("input clause") != std::string::npos);

    // Without deleting the asserted clauses: more than one remains.
    std::string no_assert_del(fixtures::kExampleCpog);
    pos = no_assert_del.find("d 35 ");
    size_t resume = no_assert_del.find("d 1 ");
    no_assert_del.erase(pos, resume - pos);
    CheckResult r2 = check_text(fixtures::kExampleCnf, no_assert_del);
    CHECK(r2.verdict == VerdictKind::Rejected);
    CHECK(r2.reason.find("asserted") != std::string::npos);

    // Root never declared: parse already rejects, so drive the checker
    // directly.
    CnfFormula f = parse_dimacs("p cnf 1 1\n1 0\n");
    std::vector<CpogStep> steps{AddStep{2, {1}, {1}}, DeleteStep{1, {2}}};
    CheckResult r3 = check_proof(f, steps, {});
    CHECK(r3.verdict == VerdictKind::Rejected);
    CHECK(r3.reason.find("root") != std::string::npos);
}

TEST_CASE("no proof can assert the model-dropping clause") {
    // Against (x1 | x3) over three variables, the clause (x2 | -x3)
    // preserves satisfiability but drops models, so every hint sequence
    // must fail.
    CnfFormula f = parse_dimacs("p cnf 3 1\n1 3 0\n");
    std::vector<std::vector<ClauseId>> hint_choices = {
        {}, {1}, {1, 1}, {1, 1, 1}};
    for (const auto &hints : hint_choices) {
        Checker chk(f, {});
        auto err = chk.apply(AddStep{2, {2, -3}, hints});
        CHECK(err.has_value());
    }
}

TEST_CASE("mutated proofs are never falsely accepted") {
    CnfFormula f = fixtures::example_cnf();
    auto steps = fixtures::example_steps();
    std::mt19937_64 rng(31337);
    int accepted = 0;
    for (int iter = 0; iter < 300; iter++) {
        auto mutated = steps;
        // Mutate until something actually changes: flip one literal, drop
        // one hint, or swap two distinct steps.
        for (;;) {
            size_t which = rng() % mutated.size();
            bool changed = false;
            switch (rng() % 3) {
            case 0:
                if (auto *a = std::get_if<AddStep>(&mutated[which]); a && !a->lits.empty()) {
                    a->lits[rng() % a->lits.size()] *= -1;
                    changed = true;
                } else if (auto *p = std::get_if<ProductStep>(&mutated[which]);
                           p && !p->args.empty()) {
                    p->args[rng() % p->args.size()] *= -1;
                    changed = true;
                } else if (auto *s = std::get_if<SumStep>(&mutated[which])) {
                    s->left *= -1;
                    changed = true;
                }
                break;
            case 1:
                if (auto *a = std::get_if<AddStep>(&mutated[which]); a && !a->hints.empty()) {
                    a->hints.erase(a->hints.begin() + (ptrdiff_t)(rng() % a->hints.size()));
                    changed = true;
                } else if (auto *d = std::get_if<DeleteStep>(&mutated[which]);
                           d && !d->hints.empty()) {
                    d->hints.erase(d->hints.begin() + (ptrdiff_t)(rng() % d->hints.size()));
                    changed = true;
                }
                break;
            default: {
                size_t other = rng() % mutated.size();
                if (other != which && !(mutated[which] == mutated[other])) {
                    std::swap(mutated[which], mutated[other]);
                    changed = true;
                }
                break;
            }
            }
            if (changed)
                break;
        }
        CheckResult res = check_proof(f, mutated, {});
        if (res.verdict == VerdictKind::Rejected)
            continue;
        accepted++;
        // An accepted mutant must still be extensionally correct.
        CHECK(equiv_over_x(f, res.pog));
    }
    // Almost all mutants must die; only commuting deletions may survive.
    CHECK(accepted < 40);
}
