#include "covertt/coverage.hpp"
#include "covertt/driver.hpp"
#include "covertt/explain.hpp"

#include "support.hpp"

#include <gtest/gtest.h>

using namespace covertt;
using namespace covertt::test;

namespace {

const CoverTree& tree_of(const CoverResult& r) {
    if (auto e = std::get_if<CoverError>(&r)) {
        static CoverTree none;
        ADD_FAILURE() << "not covered: " << e->kind_name();
        return none;
    }
    return std::get<CoverTree>(r);
}

// Clauses of the first match in a definition.
std::pair<Telescope, std::vector<Clause>> first_match(const Signature& sig, const std::string& def) {
    auto sites = match_sites(sig, def);
    const Match& m = *sites.at(0).term->as<Match>();
    return {m.tel, clauses_of(m)};
}

}  // namespace

TEST(Cover, IdentityClauseIsALeaf) {
    Program p = load_corpus("vec.ctt");
    Telescope xi = tel_of(p.sig, {{"x", "Nat"}});
    auto r = check_cover(p.sig, xi, {{xi, {var(0)}}});
    const auto& t = tree_of(r);
    EXPECT_EQ(t.rule, CoverRule::Leaf);
    EXPECT_EQ(t.clause, 0u);
}

TEST(Cover, HeadTree) {
    Program p = load_corpus("vec.ctt");
    auto [xi, clauses] = first_match(p.sig, "head");
    auto res = check_cover(p.sig, xi, clauses);
    const auto& t = tree_of(res);
    ASSERT_EQ(t.rule, CoverRule::SplitCon);
    EXPECT_EQ(t.var, 2u);
    ASSERT_EQ(t.children.size(), 2u);
    EXPECT_EQ(t.children[0].first, "nil");
    EXPECT_EQ(t.children[0].second.rule, CoverRule::Absurd);
    EXPECT_EQ(t.children[1].first, "cons");
    const auto& refl = t.children[1].second;
    ASSERT_EQ(refl.rule, CoverRule::SplitRefl);
    ASSERT_EQ(refl.children.size(), 1u);
    EXPECT_EQ(refl.children[0].second.rule, CoverRule::Leaf);

    auto ls = leaves(t);
    ASSERT_EQ(ls.size(), 1u);
    // Leaf context (A, n, h, t) with the cons/refl pattern.
    EXPECT_EQ(names_of(ls[0].tel), (std::vector<std::string>{"A", "n", "h", "t"}));
    auto sc = names_of(ls[0].tel);
    EXPECT_TRUE(alpha_eq(ls[0].pattern.terms,
                         std::vector<Term>{var(3), var(2), term_of(p.sig, sc, "cons(A, suc(n), n, h, t, refl(suc(n)))")}));
}

TEST(Cover, LeakingClauseMissesInr) {
    Program p = load_corpus("sum.ctt");
    Telescope xi = tel_of(p.sig, {{"y", "Sum(Empty, Nat)"}});
    Clause inl{tel_of(p.sig, {{"x", "Empty"}}), {datacon("inl", {tycon("Empty"), tycon("Nat"), var(0)})}};
    auto r = check_cover(p.sig, xi, {inl});
    ASSERT_TRUE(std::holds_alternative<CoverError>(r));
    const auto& e = std::get<CoverError>(r);
    EXPECT_EQ(e.kind, CoverError::Kind::MissingCase);
    EXPECT_EQ(e.witness.pattern.at(0)->as<DataConApp>()->name, "inr");
    EXPECT_EQ(describe(p.sig, e), "MissingCase: no clause matches (inr(Empty, Nat, b))");
}

TEST(Cover, EmptyDatatypePrunesEverything) {
    Program p = load_corpus("sum.ctt");
    Telescope xi = tel_of(p.sig, {{"e", "Empty"}});
    auto res = check_cover(p.sig, xi, {});
    const auto& t = tree_of(res);
    EXPECT_EQ(t.rule, CoverRule::Absurd);
}

TEST(Cover, InlOverEmptyIsPruned) {
    Program p = load_corpus("sum.ctt");
    auto [xi, clauses] = first_match(p.sig, "fromRight");
    auto res = check_cover(p.sig, xi, clauses);
    const auto& t = tree_of(res);
    ASSERT_EQ(t.rule, CoverRule::SplitCon);
    EXPECT_EQ(t.children[0].second.rule, CoverRule::Absurd);
    EXPECT_EQ(t.children[1].second.rule, CoverRule::Leaf);
}

TEST(Cover, OverlapAndMissing) {
    Program p = load_corpus("vec.ctt");
    Telescope xi = tel_of(p.sig, {{"x", "Nat"}});
    Clause any{xi, {var(0)}};
    Clause z{{}, {datacon("zero")}};
    auto overlap = check_cover(p.sig, xi, {any, z});
    ASSERT_TRUE(std::holds_alternative<CoverError>(overlap));
    EXPECT_EQ(std::get<CoverError>(overlap).kind, CoverError::Kind::Overlap);
    auto missing = check_cover(p.sig, xi, {z});
    ASSERT_TRUE(std::holds_alternative<CoverError>(missing));
    EXPECT_EQ(std::get<CoverError>(missing).kind, CoverError::Kind::MissingCase);
}

TEST(Cover, ClauseBelowAnAbsurdCaseIsUnreachable) {
    Program p = load_corpus("vec.ctt");
    Telescope xi = tel_of(p.sig, {{"A", "Type"}, {"n", "Nat"}, {"x", "Vec(A, suc(n))"}});
    auto [hx, clauses] = first_match(p.sig, "head");
    // nil can never match a vector of length suc n.
    Clause nil{tel_of(p.sig, {{"B", "Type"}, {"m", "Nat"}, {"e", "Eq(Nat, suc(m), zero)"}}),
               {var(2), var(1), datacon("nil", {var(2), datacon("suc", {var(1)}), var(0)})}};
    clauses.push_back(nil);
    auto r = check_cover(p.sig, xi, clauses);
    ASSERT_TRUE(std::holds_alternative<CoverError>(r));
    EXPECT_EQ(std::get<CoverError>(r).kind, CoverError::Kind::Unreachable);
    EXPECT_EQ(std::get<CoverError>(r).clause_a, 1u);
}

TEST(Split, VecFieldsAreForded) {
    Program p = load_corpus("vec.ctt");
    Telescope xi = tel_of(p.sig, {{"A", "Type"}, {"n", "Nat"}, {"x", "Vec(A, suc(n))"}});
    auto r = split_variable(p.sig, {xi, identity_terms(3)}, 2);
    ASSERT_TRUE((std::holds_alternative<std::vector<std::pair<std::string, CoverState>>>(r)));
    const auto& kids = std::get<0>(r);
    ASSERT_EQ(kids.size(), 2u);
    const auto& nil = kids[0].second;
    EXPECT_EQ(names_of(nil.tel), (std::vector<std::string>{"A", "n", "eq"}));
    EXPECT_TRUE(alpha_eq(nil.tel[2].type, term_of(p.sig, {"A", "n"}, "Eq(Nat, suc(n), zero)")));
    const auto& cons = kids[1].second;
    EXPECT_EQ(names_of(cons.tel), (std::vector<std::string>{"A", "n", "m", "h", "t", "eq"}));
    EXPECT_TRUE(alpha_eq(cons.tel[5].type, term_of(p.sig, {"A", "n", "m", "h", "t"}, "Eq(Nat, suc(n), suc(m))")));
}

TEST(Split, EmptyTypeIsAbsurd) {
    Program p = load_corpus("sum.ctt");
    Telescope xi = tel_of(p.sig, {{"e", "Empty"}});
    auto r = split_variable(p.sig, {xi, identity_terms(1)}, 0);
    EXPECT_TRUE(std::holds_alternative<AbsurdEvidence>(r));
}

TEST(Split, ReflClashIsAbsurd) {
    Program p = load_corpus("vec.ctt");
    Telescope st = tel_of(p.sig, {{"n", "Nat"}, {"eq", "Eq(Nat, suc(n), zero)"}});
    auto r = split_refl(p.sig, {st, identity_terms(2)}, 1);
    ASSERT_TRUE(std::holds_alternative<AbsurdEvidence>(r));
    EXPECT_NE(std::get<AbsurdEvidence>(r).reason.find("clash"), std::string::npos);
}

TEST(Split, ReflSolvesTheFreshIndex) {
    Program p = load_corpus("vec.ctt");
    Telescope st = tel_of(p.sig, {{"n", "Nat"}, {"m'", "Nat"}, {"eq", "Eq(Nat, suc(n), suc(m'))"}});
    auto r = split_refl(p.sig, {st, identity_terms(3)}, 2);
    ASSERT_TRUE(std::holds_alternative<CoverState>(r));
    const auto& s = std::get<CoverState>(r);
    EXPECT_EQ(names_of(s.tel), (std::vector<std::string>{"n"}));
    EXPECT_TRUE(alpha_eq(s.pattern, std::vector<Term>{var(0), var(0), refl(datacon("suc", {var(0)}))}));
}

TEST(Split, HeadSelectsTheVector) {
    Program p = load_corpus("vec.ctt");
    auto [xi, clauses] = first_match(p.sig, "head");
    auto sel = select_split(p.sig, {xi, identity_terms(3)}, clauses);
    ASSERT_TRUE(sel.has_value());
    EXPECT_EQ(*sel, 2u);
}

TEST(Cover, Foldr1SpineAndLeaves) {
    Program p = load_corpus("foldr1.ctt");
    auto [xi, clauses] = first_match(p.sig, "foldr1");
    auto res = check_cover(p.sig, xi, clauses);
    const auto& t = tree_of(res);
    auto ls = leaves(t);
    ASSERT_EQ(ls.size(), 2u);
    EXPECT_EQ(ls[0].clause, 0u);
    EXPECT_EQ(ls[1].clause, 1u);
    EXPECT_EQ(t.children[0].second.rule, CoverRule::Absurd);
    const auto& tail = t.children[1].second.children[0].second;
    EXPECT_EQ(tail.rule, CoverRule::SplitCon);
}

TEST(Cover, EveryCorpusMatchIsAccepted) {
    for (const auto& f : accepted_corpus()) {
        Program p = load_corpus(f);
        for (const auto& def : p.sig.def_order())
            for (const auto& site : match_sites(p.sig, def)) {
                const Match& m = *site.term->as<Match>();
                auto r = check_cover(p.sig, m.tel, clauses_of(m));
                EXPECT_TRUE(std::holds_alternative<CoverTree>(r)) << f << " " << def;
            }
    }
}
