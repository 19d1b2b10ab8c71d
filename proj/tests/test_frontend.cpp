#include "covertt/driver.hpp"
#include "covertt/explain.hpp"
#include "covertt/pretty.hpp"
#include "covertt/program.hpp"
#include "covertt/syntax.hpp"
#include "covertt/typecheck.hpp"

#include "support.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <sstream>

#include "json.hpp"

using namespace covertt;
using namespace covertt::test;

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run run(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

bool same_program(const Program& a, const Program& b) {
    if (a.decls.size() != b.decls.size()) return false;
    for (const auto& name : a.sig.tycon_order()) {
        const auto* other = b.sig.find_tycon(name);
        if (!other || !alpha_eq(a.sig.tycon(name).params, other->params)) return false;
        for (const auto& c : a.sig.tycon(name).datacons)
            if (!b.sig.find_datacon(c) || !alpha_eq(a.sig.datacon(c).fields, b.sig.datacon(c).fields)) return false;
    }
    for (const auto& name : a.sig.def_order()) {
        const auto* other = b.sig.find_def(name);
        if (!other || !alpha_eq(a.sig.def(name).type, other->type) || !alpha_eq(a.sig.def(name).body, other->body))
            return false;
    }
    return true;
}

}  // namespace

TEST(Parse, VecFileHasThreeDeclarations) {
    SourceFile f = parse(slurp(corpus_path("vec.ctt")));
    ASSERT_EQ(f.decls.size(), 3u);
    EXPECT_EQ(std::get<SData>(f.decls[0]).name, "Nat");
    EXPECT_EQ(std::get<SData>(f.decls[1]).name, "Vec");
    EXPECT_EQ(std::get<SData>(f.decls[1]).cons.size(), 2u);
    EXPECT_EQ(std::get<SDef>(f.decls[2]).name, "head");
}

TEST(Parse, TermForms) {
    auto t = parse_term("Pi (x : Nat)(y : Nat). Eq(Nat, x, y) -> Nat");
    EXPECT_EQ(t->kind, SExpr::Kind::Pi);
    auto l = parse_term("\\a b. f a (g b)");
    EXPECT_EQ(l->kind, SExpr::Kind::Lam);
    auto d = parse_term(".(suc(m))");
    EXPECT_EQ(d->kind, SExpr::Kind::Dot);
    auto c = parse_term("suc(zero)");
    EXPECT_EQ(c->kind, SExpr::Kind::Call);
    auto a = parse_term("suc (zero)");
    EXPECT_EQ(a->kind, SExpr::Kind::App);
}

TEST(Parse, ErrorsCarrySpans) {
    try {
        parse("data X (\n  x : Nat,\n");
        FAIL() << "parsed";
    } catch (const SyntaxError& e) {
        EXPECT_EQ(e.span.begin, 7u);
    }
    try {
        parse("def f : Nat := @");
        FAIL() << "parsed";
    } catch (const SyntaxError& e) {
        EXPECT_EQ(e.span.begin, 15u);
    }
}

TEST(Resolve, DuplicatesAndForwardReferences) {
    EXPECT_THROW(load_program("data A () { a() }\ndata A () { b() }"), SyntaxError);
    try {
        load_program("def f : Nat := zero\ndata Nat () { zero() }");
        FAIL() << "resolved";
    } catch (const TypeError& e) {
        EXPECT_EQ(e.kind, TypeError::Kind::UnboundVariable);
    }
}

TEST(Pretty, HeadLayoutMatchesGolden) {
    Program p = load_corpus("vec.ctt");
    EXPECT_EQ(pretty_program(p), slurp(golden_path("vec_pretty.ctt")));
}

TEST(Pretty, ForcedPositionsAreDotted) {
    Program p = load_corpus("foldr1.ctt");
    std::string text = pretty_program(p);
    EXPECT_NE(text.find("(B, .zero, f, "), std::string::npos);
    EXPECT_NE(text.find(".(suc(m))"), std::string::npos);
}

TEST(Pretty, ShadowedNamesAreRenamed) {
    Program p = load_corpus("vec.ctt");
    // \x. \x. x(outer)
    Term t = lam("x", lam("x", var(1)));
    EXPECT_EQ(pretty(p.sig, t), "\\x x1. x");
    // binders named like constructors are renamed too
    EXPECT_EQ(pretty(p.sig, lam("zero", var(0))), "\\zero1. zero1");
}

TEST(Pretty, RoundTripsEveryCorpusFile) {
    for (const auto& f : accepted_corpus()) {
        Program p = load_corpus(f);
        std::string once = pretty_program(p);
        Program q = load_program(once);
        EXPECT_TRUE(same_program(p, q)) << f << "\n" << once;
        EXPECT_EQ(pretty_program(q), once) << f;
    }
}

TEST(Diagnostics, LineAndColumn) {
    EXPECT_EQ(line_col("ab\ncd", 4), (std::pair<std::size_t, std::size_t>{2, 2}));
    Diagnostic d;
    d.kind = "NotCovering";
    d.message = "m";
    d.span = {3, 4};
    d.rule = "TyCase";
    EXPECT_EQ(format_diagnostic("f.ctt", "ab\ncd", d), "f.ctt:2:1: error: NotCovering: m [TyCase]");
}

TEST(Cli, CheckCorpus) {
    for (const auto& f : accepted_corpus()) EXPECT_EQ(run({"check", corpus_path(f)}).code, 0) << f;
}

TEST(Cli, RejectCorpus) {
    struct Want {
        const char* file;
        const char* needle;
    };
    for (const auto& w : {Want{"bad.ctt", "MissingCase: no clause matches (inr(Empty, Nat, b)) [TyCase]"},
                          Want{"bool_missing.ctt", "MissingCase: no clause matches (false)"},
                          Want{"dup.ctt", "Overlap: clauses 0 and 1"},
                          Want{"overlap_var.ctt", "Overlap"},
                          Want{"not_a_type.ctt", "NotAType"},
                          Want{"bad_subst.ctt", "TypeMismatch: in v:"},
                          Want{"unbound_field.ctt", "UnboundVariable: unbound name B [TyVar]"},
                          Want{"branch_type.ctt", "BranchTypeMismatch"},
                          Want{"syntax.ctt", "SyntaxError"}}) {
        auto r = run({"check", corpus_path(std::string("reject/") + w.file)});
        EXPECT_EQ(r.code, 1) << w.file;
        EXPECT_NE(r.err.find(w.needle), std::string::npos) << w.file << ": " << r.err;
        EXPECT_TRUE(r.out.empty());
    }
}

TEST(Cli, UsageErrorsExitTwo) {
    EXPECT_EQ(run({}).code, 2);
    EXPECT_EQ(run({"frobnicate"}).code, 2);
    EXPECT_EQ(run({"cover", corpus_path("vec.ctt")}).code, 2);  // --def is required
    EXPECT_EQ(run({"oracle", corpus_path("vec.ctt"), "--depth", "0"}).code, 2);
    auto help = run({"--help"});
    EXPECT_EQ(help.code, 0);
    EXPECT_NE(help.out.find("oracle"), std::string::npos);
}

TEST(Cli, Eval) {
    auto r = run({"eval", corpus_path("nat.ctt"), "--def", "pred", "--args", "suc(suc(zero))"});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "suc(zero)\n");
    auto x = run({"eval", corpus_path("bool.ctt"), "--def", "xor", "--args", "true", "true"});
    EXPECT_EQ(x.out, "false\n");
    auto bad = run({"eval", corpus_path("bool.ctt"), "--def", "xor", "--args", "zero"});
    EXPECT_EQ(bad.code, 1);
    auto missing = run({"eval", corpus_path("bool.ctt"), "--def", "nope"});
    EXPECT_EQ(missing.code, 1);
}

TEST(Cli, FuelFlagAndEnvironment) {
    // Checking nat.ctt needs no reduction; evaluating pred does.
    const std::string file = corpus_path("nat.ctt");
    const std::vector<std::string> eval = {"eval", file, "--def", "pred", "--args", "suc(zero)"};
    EXPECT_EQ(run({"--fuel", "1", "check", file}).code, 0);
    auto starved = run({"--fuel", "1", "eval", file, "--def", "pred", "--args", "suc(zero)"});
    EXPECT_EQ(starved.code, 1);
    EXPECT_NE(starved.err.find("FuelExhausted"), std::string::npos);
    ::setenv("COVERTT_FUEL", "1", 1);
    auto env = run(eval);
    ::unsetenv("COVERTT_FUEL");
    EXPECT_EQ(env.code, 1);
    ::setenv("COVERTT_FUEL", "lots", 1);
    auto garbage = run(eval);
    ::unsetenv("COVERTT_FUEL");
    EXPECT_EQ(garbage.code, 2);
    EXPECT_EQ(run(eval).code, 0);
}

TEST(Cli, CoverExplainAndJson) {
    auto ex = run({"cover", corpus_path("vec.ctt"), "--def", "head", "--explain"});
    EXPECT_EQ(ex.code, 0);
    EXPECT_NE(ex.out.find("SplitCon x : Vec(A, suc(n))  [coproduct cover]"), std::string::npos) << ex.out;
    EXPECT_NE(ex.out.find("[absurd cover]"), std::string::npos);
    EXPECT_NE(ex.out.find("[refl cover]"), std::string::npos);
    EXPECT_NE(ex.out.find("[identity cover]"), std::string::npos);
    auto js = run({"cover", corpus_path("vec.ctt"), "--def", "head", "--json"});
    auto j = nlohmann::json::parse(js.out);
    EXPECT_EQ(j["def"], "head");
    EXPECT_EQ(j["covers"][0]["tree"]["rule"], "SplitCon");
    auto bad = run({"cover", corpus_path("reject/bool_missing.ctt"), "--def", "not"});
    EXPECT_EQ(bad.code, 1);
    EXPECT_NE(bad.err.find("MissingCase"), std::string::npos);
}

TEST(Cli, OracleJson) {
    auto r = run({"oracle", corpus_path("vec.ctt"), "--depth", "2", "--json"});
    EXPECT_EQ(r.code, 0) << r.err;
    auto j = nlohmann::json::parse(r.out);
    EXPECT_TRUE(j["ok"].get<bool>());
    EXPECT_EQ(j["depth"], 2);
    ASSERT_EQ(j["sites"].size(), 1u);
    EXPECT_TRUE(j["sites"][0]["covering"].get<bool>());
    EXPECT_TRUE(j["sites"][0]["counterexamples"].empty());
}
