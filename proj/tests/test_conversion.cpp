#include "covertt/conversion.hpp"
#include "covertt/driver.hpp"
#include "covertt/pretty.hpp"

#include "gen.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

using namespace covertt;
using namespace covertt::test;

namespace {

struct VecFixture : ::testing::Test {
    Program p = load_corpus("vec.ctt");
    const Signature& sig = p.sig;
};

}  // namespace

TEST_F(VecFixture, HeadOfConsReducesToHead) {
    Telescope gamma = tel_of(sig, {{"A", "Type"}, {"n", "Nat"}, {"h", "A"}, {"t", "Vec(A, n)"}});
    Term t = term_of(sig, names_of(gamma), "head A n cons(A, suc(n), n, h, t, refl(suc(n)))");
    EXPECT_TRUE(alpha_eq(whnf(sig, t), var(1)));
}

TEST_F(VecFixture, HeadOfOpenVectorIsStuck) {
    Telescope gamma = tel_of(sig, {{"A", "Type"}, {"n", "Nat"}, {"x", "Vec(A, suc(n))"}});
    Term t = whnf(sig, term_of(sig, names_of(gamma), "head A n x"));
    EXPECT_TRUE(t->is<Match>());
}

TEST_F(VecFixture, MatchBranchSolvesPatternVariables) {
    Telescope gamma = tel_of(sig, {{"A", "Type"}, {"m", "Nat"}, {"h", "A"}, {"t", "Vec(A, m)"}});
    auto scope = names_of(gamma);
    Term body = whnf(sig, apps(sig.def("head").body, {var(3), var(2), var(1)}));
    const Match& m = *body->as<Match>();
    Subst scrut{{var(3), var(2), term_of(sig, scope, "cons(A, suc(m), m, h, t, refl(suc(m)))")}, std::nullopt};
    auto r = match_branch(sig, scrut, m.branches);
    ASSERT_TRUE(std::holds_alternative<Matched>(r));
    const auto& got = std::get<Matched>(r);
    EXPECT_EQ(got.branch, 0u);
    EXPECT_TRUE(alpha_eq(got.solution.terms, identity_terms(4)));
}

TEST_F(VecFixture, ForcedIndexIsCheckedAfterConstructorFields) {
    // n = 1: the index position is solved from the cons field, then compared.
    Telescope gamma = tel_of(sig, {{"A", "Type"}, {"h", "A"}, {"t", "Vec(A, suc(zero))"}});
    auto scope = names_of(gamma);
    Term body = whnf(sig, apps(sig.def("head").body, {var(2), datacon("suc", {datacon("zero")}), var(0)}));
    const Match& m = *body->as<Match>();
    Subst scrut{{var(2), term_of(sig, scope, "suc(zero)"),
                 term_of(sig, scope, "cons(A, suc(suc(zero)), suc(zero), h, t, refl(suc(suc(zero))))")},
                std::nullopt};
    auto r = match_branch(sig, scrut, m.branches);
    ASSERT_TRUE(std::holds_alternative<Matched>(r));
    EXPECT_TRUE(alpha_eq(std::get<Matched>(r).solution.terms,
                         std::vector<Term>{var(2), term_of(sig, scope, "suc(zero)"), var(1), var(0)}));
}

TEST(Conversion, Foldr1OnTwoElementsUnfoldsToOneStep) {
    Program p = load_corpus("foldr1.ctt");
    const Signature& sig = p.sig;
    Telescope gamma = tel_of(sig, {{"A", "Type"},
                                   {"f", "A -> A -> A"},
                                   {"self", "(A -> A -> A) -> Vec(A, suc(zero)) -> A"},
                                   {"a", "A"},
                                   {"b", "A"}});
    auto scope = names_of(gamma);
    Term t = term_of(sig, scope,
                     "foldr1 A suc(zero) f cons(A, suc(suc(zero)), suc(zero), a, "
                     "cons(A, suc(zero), zero, b, nil(A, zero, refl(zero)), refl(suc(zero))), "
                     "refl(suc(suc(zero)))) self");
    Term want = term_of(sig, scope, "f a (self f cons(A, suc(zero), zero, b, nil(A, zero, refl(zero)), refl(suc(zero))))");
    Term nf = normalize(sig, t);
    EXPECT_TRUE(alpha_eq(nf, want)) << pretty(sig, nf, scope);
}

TEST(Conversion, NormalizeIsIdempotent) {
    Program p = load_program(kPrelude);
    Gen g(21);
    for (int i = 0; i < 500; ++i) {
        Ctx c = g.ctx(3);
        Term t = g.term(c, g.base(), 4);
        Term once = normalize(p.sig, t);
        ASSERT_TRUE(alpha_eq(normalize(p.sig, once), once)) << "case " << i;
    }
}

TEST(Conversion, BranchEquationHoldsForEveryCorpusClause) {
    std::size_t checked = 0;
    for (const auto& f : accepted_corpus()) {
        Program p = load_corpus(f);
        for (const auto& def : p.sig.def_order()) {
            for (const auto& site : match_sites(p.sig, def)) {
                const Match& m = *site.term->as<Match>();
                const Term gm = generic_match(m);
                for (const auto& b : m.branches) {
                    EXPECT_TRUE(conv(p.sig, b.tel, apply_subst(gm, b.pattern), b.body)) << f << " " << def;
                    ++checked;
                }
            }
        }
    }
    EXPECT_GT(checked, 20u);
}

TEST(Conversion, EtaFreeConvUpToBeta) {
    Program p = load_program(kPrelude);
    Telescope gamma = tel_of(p.sig, {{"b", "Bool"}});
    auto scope = names_of(gamma);
    EXPECT_TRUE(conv(p.sig, gamma, term_of(p.sig, scope, "(\\x. not x) b"), term_of(p.sig, scope, "not b")));
    EXPECT_TRUE(conv(p.sig, gamma, term_of(p.sig, scope, "not (not true)"), term_of(p.sig, scope, "true")));
    EXPECT_FALSE(conv(p.sig, gamma, term_of(p.sig, scope, "not b"), term_of(p.sig, scope, "b")));
}

TEST(Conversion, FuelRunsOut) {
    Program p = load_program(kPrelude);
    Term t = term_of(p.sig, {}, "not (not (not (not true)))");
    EXPECT_THROW(normalize(p.sig, t, 3), FuelExhausted);
    EXPECT_NO_THROW(normalize(p.sig, t));
}
