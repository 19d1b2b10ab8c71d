#include "covertt/conversion.hpp"
#include "covertt/driver.hpp"
#include "covertt/setmodel.hpp"

#include "gen.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

using namespace covertt;
using namespace covertt::test;
using namespace covertt::model;

namespace {

Bound depth(std::size_t d) {
    Bound b;
    b.max_depth = d;
    return b;
}

bool env_equal_helper(const Env& a, const Env& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!equal(a[i], b[i])) return false;
    return true;
}

}  // namespace

TEST(Enumerate, ShortVectorsOfBool) {
    Program p = load_corpus("vec.ctt");
    Model m(p.sig, depth(2));
    Telescope tel = tel_of(m.signature(), {{"n", "Nat"}, {"x", "Vec(Bool, n)"}});
    auto envs = m.enum_telescope(tel);
    // n = 0 with nil; n = 1 with cons of true or false over nil.
    ASSERT_EQ(envs.size(), 3u);
    EXPECT_EQ(show(envs[0][1]), "nil(refl)");
    for (const auto& e : envs) EXPECT_EQ(e.size(), 2u);
}

TEST(Enumerate, PaletteForTypeVariables) {
    Program p = load_corpus("vec.ctt");
    Model m(p.sig, depth(1));
    auto types = m.enum_type(v_universe(), 1);
    ASSERT_EQ(types.size(), 3u);
    EXPECT_EQ(show(types[0]), "Bool");
    EXPECT_EQ(show(types[2]), "Empty");
    EXPECT_TRUE(m.enum_type(v_tycon("Empty", {}), 3).empty());
}

TEST(Enumerate, EqualityIsExtensional) {
    Program p = load_corpus("vec.ctt");
    Model m(p.sig, depth(2));
    Telescope yes = tel_of(m.signature(), {{"e", "Eq(Nat, suc(zero), suc(zero))"}});
    Telescope no = tel_of(m.signature(), {{"e", "Eq(Nat, zero, suc(zero))"}});
    EXPECT_EQ(m.enum_telescope(yes).size(), 1u);
    EXPECT_TRUE(m.enum_telescope(no).empty());
}

TEST(Enumerate, FunctionSpacesAreGraphs) {
    Program p = load_program(kPrelude);
    Model m(p.sig, depth(2));
    auto fs = m.enum_telescope(tel_of(m.signature(), {{"f", "Bool -> Bool"}}));
    EXPECT_EQ(fs.size(), 4u);
    // Nat has 2 values at depth 2 and 3 at depth 3.
    EXPECT_EQ(m.enum_telescope(tel_of(m.signature(), {{"f", "Nat -> Nat"}})).size(), 4u);
    Model deeper(p.sig, depth(3));
    EXPECT_EQ(deeper.enum_telescope(tel_of(deeper.signature(), {{"f", "Nat -> Nat"}})).size(), 27u);
}

TEST(Enumerate, LargeFunctionSpace) {
    Program p = load_program(kPrelude);
    Bound strict = depth(3);
    strict.sample_functions = false;
    Model m(p.sig, strict);
    Telescope big = tel_of(m.signature(), {{"f", "Nat -> Nat -> Nat"}});
    try {
        m.enum_telescope(big);
        FAIL() << "enumerated";
    } catch (const OracleError& e) {
        EXPECT_EQ(e.kind, OracleError::Kind::FunctionSpaceTooLarge);
    }
    Model sampled(p.sig, depth(3));
    auto fs = sampled.enum_telescope(tel_of(sampled.signature(), {{"f", "Nat -> Nat -> Nat"}}));
    EXPECT_FALSE(fs.empty());
    EXPECT_LE(fs.size(), sampled.bound().max_fun);
}

TEST(Eval, HeadOfSingleton) {
    Program p = load_corpus("vec.ctt");
    Model m(p.sig, depth(2));
    Term t = term_of(m.signature(), {}, "head Bool zero cons(Bool, suc(zero), zero, true, nil(Bool, zero, refl(zero)), refl(suc(zero)))");
    EXPECT_EQ(show(m.eval({}, t)), "true");
}

TEST(Eval, AgreesWithNormalizeOnClosedTerms) {
    Program p = load_program(kPrelude);
    Model m(p.sig, depth(3));
    Gen g(41);
    for (int i = 0; i < 100; ++i) {
        Term t = g.term({}, Base::Bool, 4);
        ASSERT_TRUE(equal(m.eval({}, t), m.eval({}, normalize(p.sig, t)))) << "case " << i;
    }
}

TEST(Eval, OpenTermsUnderEnvironments) {
    Program p = load_program(kPrelude);
    Model m(p.sig, depth(2));
    Gen g(42);
    for (int i = 0; i < 50; ++i) {
        Ctx c = g.ctx(2);
        Term t = g.term(c, Base::Bool, 3);
        for (const auto& env : m.enum_telescope(c.telescope())) {
            Term closed = apply_subst(t, m.reify_env(c.telescope(), env));
            ASSERT_TRUE(equal(m.eval(env, t), m.eval({}, normalize(p.sig, closed)))) << "case " << i;
        }
    }
}

TEST(Reify, RoundTrips) {
    Program p = load_corpus("vec.ctt");
    Model m(p.sig, depth(2));
    Telescope tel = tel_of(m.signature(), {{"A", "Type"}, {"n", "Nat"}, {"x", "Vec(A, n)"}});
    for (const auto& env : m.enum_telescope(tel)) {
        auto terms = m.reify_env(tel, env);
        ASSERT_TRUE(env_equal_helper(m.eval_all({}, terms), env));
    }
}

TEST(Semantic, LeakingCoverHasInrCounterexample) {
    Program p = load_corpus("sum.ctt");
    Model m(p.sig, depth(2));
    Telescope xi = tel_of(m.signature(), {{"y", "Sum(Empty, Nat)"}});
    CoverLeaf inl{tel_of(m.signature(), {{"x", "Empty"}}),
                  Subst{{datacon("inl", {tycon("Empty"), tycon("Nat"), var(0)})}, std::nullopt}, 0,
                  Subst{{var(0)}, std::nullopt}};
    auto r = check_cover_semantic(m, xi, {inl});
    EXPECT_FALSE(r.covering);
    EXPECT_TRUE(r.disjoint);
    ASSERT_FALSE(r.uncovered.empty());
    EXPECT_EQ(show(r.uncovered[0]), "<inr(zero)>");
}

TEST(Semantic, HeadCoversDisjointly) {
    Program p = load_corpus("vec.ctt");
    Model m(p.sig, depth(2));
    auto sites = match_sites(p.sig, "head");
    const Match& mm = *sites.at(0).term->as<Match>();
    auto cov = check_cover(p.sig, mm.tel, clauses_of(mm));
    auto r = check_cover_semantic(m, mm.tel, leaves(std::get<CoverTree>(cov)));
    EXPECT_TRUE(r.covering);
    EXPECT_TRUE(r.disjoint);
    EXPECT_GT(r.environments, 0u);
}

TEST(Semantic, OverlapIsDetected) {
    Program p = load_program(kPrelude);
    Model m(p.sig, depth(2));
    Telescope xi = tel_of(m.signature(), {{"b", "Bool"}});
    CoverLeaf any{xi, Subst{{var(0)}, std::nullopt}, 0, Subst{{var(0)}, std::nullopt}};
    CoverLeaf tru{{}, Subst{{datacon("true")}, std::nullopt}, 1, Subst{{}, std::nullopt}};
    auto r = check_cover_semantic(m, xi, {any, tru});
    EXPECT_TRUE(r.covering);
    EXPECT_FALSE(r.disjoint);
    ASSERT_EQ(r.overlapping.size(), 1u);
    EXPECT_EQ(show(r.overlapping[0]), "<true>");
}

TEST(Amalgamate, HeadAgreesWithItsMatch) {
    Program p = load_corpus("vec.ctt");
    Model m(p.sig, depth(3));
    for (const auto& site : match_sites(p.sig, "head")) {
        auto r = oracle_site(m, site);
        EXPECT_TRUE(r.cover_ok);
        EXPECT_GT(r.agreement_checked, 0u);
        EXPECT_EQ(r.agreement_failed, 0u);
        EXPECT_EQ(r.normalizer_failed, 0u);
        EXPECT_TRUE(r.failures.empty());
    }
}

TEST(Amalgamate, ConflictingTablesAreReported) {
    Program p = load_program(kPrelude);
    Model m(p.sig, depth(2));
    Telescope xi = tel_of(m.signature(), {{"b", "Bool"}});
    CoverLeaf any{xi, Subst{{var(0)}, std::nullopt}, 0, Subst{{var(0)}, std::nullopt}};
    CoverLeaf tru{{}, Subst{{datacon("true")}, std::nullopt}, 1, Subst{{}, std::nullopt}};
    BranchTable t0, t1;
    for (const auto& e : m.enum_telescope(xi)) t0[show(e)] = v_con("false", {});
    t1[show(Env{})] = v_con("true", {});
    try {
        amalgamate(m, xi, {any, tru}, {t0, t1});
        FAIL() << "amalgamated";
    } catch (const OracleError& e) {
        EXPECT_EQ(e.kind, OracleError::Kind::ConflictingBranches);
    }
}
