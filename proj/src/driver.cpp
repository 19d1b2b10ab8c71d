#include "covertt/driver.hpp"

#include "covertt/conversion.hpp"
#include "covertt/explain.hpp"
#include "covertt/pretty.hpp"
#include "covertt/program.hpp"
#include "covertt/subst.hpp"
#include "covertt/typecheck.hpp"

#include <cstdlib>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"

namespace covertt {

namespace {

void collect(Reducer& red, const Term& t, const Telescope& ctx, const std::optional<Term>& expected,
             std::vector<MatchSite>& out, const std::string& def) {
    auto plain = [&](const Term& s) { collect(red, s, ctx, std::nullopt, out, def); };
    if (auto l = t->as<Lam>()) {
        if (!expected) return;
        Term ty = red.whnf(*expected);
        if (auto p = ty->as<Pi>())
            collect(red, l->body, ctx.extended(l->name, p->domain), p->codomain, out, def);
        return;
    }
    if (auto m = t->as<Match>()) {
        out.push_back({def, out.size(), ctx, t});
        for (const auto& s : m->scrutinees) plain(s);
        collect(red, m->motive, m->tel, std::nullopt, out, def);
        for (const auto& b : m->branches)
            collect(red, b.body, b.tel, apply_subst(m->motive, b.pattern), out, def);
        return;
    }
    if (auto a = t->as<App>()) {
        plain(a->fun);
        plain(a->arg);
    } else if (auto p = t->as<Pi>()) {
        plain(p->domain);
        collect(red, p->codomain, ctx.extended(p->name, p->domain), std::nullopt, out, def);
    } else if (auto e = t->as<Eq>()) {
        plain(e->type);
        plain(e->lhs);
        plain(e->rhs);
    } else if (auto r = t->as<Refl>()) {
        plain(r->arg);
    } else if (auto c = t->as<TyConApp>()) {
        for (const auto& x : c->args) plain(x);
    } else if (auto c = t->as<DataConApp>()) {
        for (const auto& x : c->args) plain(x);
    } else if (auto in = t->as<Inacc>()) {
        plain(in->term);
    }
}

std::optional<std::string> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

std::vector<MatchSite> match_sites(const Signature& sig, const std::string& def, std::size_t fuel) {
    Reducer red(sig, fuel);
    const auto& d = sig.def(def);
    std::vector<MatchSite> out;
    collect(red, d.type, {}, std::nullopt, out, def);
    collect(red, d.body, {}, d.type, out, def);
    return out;
}

std::vector<Clause> clauses_of(const Match& m) {
    std::vector<Clause> out;
    for (const auto& b : m.branches) out.push_back({b.tel, b.pattern});
    return out;
}

Term generic_match(const Match& m) {
    return match(identity_terms(m.tel.size()), m.tel, m.motive, m.branches);
}

OracleSiteReport oracle_site(model::Model& m, const MatchSite& site, std::size_t fuel) {
    using model::OracleError;
    OracleSiteReport r;
    r.def = site.def;
    r.index = site.index;
    const Match& mm = *site.term->as<Match>();
    const Signature& sig = m.signature();
    auto cov = check_cover(sig, mm.tel, clauses_of(mm), fuel);
    if (auto err = std::get_if<CoverError>(&cov)) {
        r.cover_error = describe(sig, *err);
        return r;
    }
    r.cover_ok = true;
    const auto ls = leaves(std::get<CoverTree>(cov));
    try {
        r.semantic = model::check_cover_semantic(m, mm.tel, ls);
    } catch (const OracleError& e) {
        r.failures.push_back(std::string("enumeration: ") + e.what());
        return r;
    }
    if (!r.semantic.covering || !r.semantic.disjoint) return r;

    std::vector<model::BranchTable> tables(ls.size());
    for (std::size_t i = 0; i < ls.size(); ++i) {
        const Branch& br = mm.branches[ls[i].clause];
        for (const auto& delta : m.enum_telescope(ls[i].tel)) {
            try {
                tables[i][model::show(delta)] = m.eval(m.eval_all(delta, ls[i].renaming.terms), br.body);
            } catch (const OracleError&) {
                // Only environments that land in the enumerated part of Ξ are needed.
            }
        }
    }
    std::vector<std::pair<model::Env, model::VPtr>> amal;
    try {
        amal = model::amalgamate(m, mm.tel, ls, tables);
    } catch (const OracleError& e) {
        r.failures.push_back(std::string("amalgamation: ") + e.what());
        return r;
    }
    const Term gm = generic_match(mm);
    for (const auto& [env, value] : amal) {
        ++r.agreement_checked;
        model::VPtr direct;
        try {
            direct = m.eval(env, gm);
        } catch (const OracleError& e) {
            ++r.agreement_failed;
            r.failures.push_back(model::show(env) + ": " + e.what());
            continue;
        }
        if (!model::equal(direct, value)) {
            ++r.agreement_failed;
            r.failures.push_back(model::show(env) + ": match gives " + model::show(direct) +
                                 ", amalgamation gives " + model::show(value));
        }
        std::vector<Term> closed;
        try {
            closed = m.reify_env(mm.tel, env);
        } catch (const OracleError&) {
            ++r.normalizer_skipped;
            continue;
        }
        ++r.normalizer_checked;
        try {
            Term nf = normalize(sig, apply_subst(gm, closed), fuel);
            model::VPtr via = m.eval({}, nf);
            if (!model::equal(via, direct)) {
                ++r.normalizer_failed;
                r.failures.push_back(model::show(env) + ": normal form gives " + model::show(via));
            }
        } catch (const std::exception& e) {
            ++r.normalizer_failed;
            r.failures.push_back(model::show(env) + ": " + e.what());
        }
    }
    return r;
}

namespace {

bool site_ok(const OracleSiteReport& r) {
    return r.cover_ok && r.semantic.covering && r.semantic.disjoint && r.failures.empty() &&
           r.agreement_failed == 0 && r.normalizer_failed == 0;
}

nlohmann::json site_json(const OracleSiteReport& r) {
    nlohmann::json j;
    j["def"] = r.def;
    j["match"] = r.index;
    j["cover"] = r.cover_ok;
    if (!r.cover_ok) j["cover_error"] = r.cover_error;
    j["environments"] = r.semantic.environments;
    j["covering"] = r.semantic.covering;
    j["disjoint"] = r.semantic.disjoint;
    j["counterexamples"] = nlohmann::json::array();
    for (const auto& e : r.semantic.uncovered) j["counterexamples"].push_back("uncovered " + model::show(e));
    for (const auto& e : r.semantic.overlapping) j["counterexamples"].push_back("overlapping " + model::show(e));
    j["agreement"] = {{"checked", r.agreement_checked}, {"failed", r.agreement_failed}};
    j["normalizer"] = {
        {"checked", r.normalizer_checked}, {"failed", r.normalizer_failed}, {"skipped", r.normalizer_skipped}};
    j["failures"] = r.failures;
    j["ok"] = site_ok(r);
    return j;
}

std::string site_line(const OracleSiteReport& r) {
    std::ostringstream s;
    s << r.def << " match " << r.index << ": ";
    if (!r.cover_ok) {
        s << "not covered (" << r.cover_error << ")";
        return s.str();
    }
    const std::size_t cex = r.semantic.uncovered.size() + r.semantic.overlapping.size();
    s << r.semantic.environments << " environments, covering " << (r.semantic.covering ? "yes" : "no")
      << ", disjoint " << (r.semantic.disjoint ? "yes" : "no") << ", counterexamples " << cex
      << ", agreement " << (r.agreement_checked - r.agreement_failed) << "/" << r.agreement_checked
      << ", normalizer " << (r.normalizer_checked - r.normalizer_failed) << "/" << r.normalizer_checked
      << " (" << r.normalizer_skipped << " skipped)";
    return s.str();
}

struct Loaded {
    std::string text;
    Program prog;
};

class Session {
public:
    Session(std::string path, std::ostream& err, std::size_t fuel)
        : path_(std::move(path)), err_(err), fuel_(fuel) {}

    // Parses and resolves; false after reporting a diagnostic.
    bool load() {
        auto text = read_file(path_);
        if (!text) {
            err_ << path_ << ": error: cannot read file\n";
            return false;
        }
        loaded_.text = *text;
        try {
            loaded_.prog = load_program(loaded_.text);
        } catch (const std::exception& e) {
            report(e, nullptr);
            return false;
        }
        return true;
    }

    // Full signature check; `tolerate_cover` lets coverage errors through.
    bool check(bool tolerate_cover = false) {
        try {
            report_ = check_signature(loaded_.prog.sig, fuel_);
        } catch (const TypeError& e) {
            if (tolerate_cover && e.kind == TypeError::Kind::NotCovering) return true;
            report(e, &loaded_.prog.sig);
            return false;
        } catch (const std::exception& e) {
            report(e, &loaded_.prog.sig);
            return false;
        }
        return true;
    }

    void report(const std::exception& e, const Signature* sig) {
        err_ << format_diagnostic(path_, loaded_.text, diagnose(e, sig)) << "\n";
    }

    const Program& prog() const { return loaded_.prog; }
    const SignatureReport& sig_report() const { return report_; }
    const std::string& path() const { return path_; }
    std::size_t fuel() const { return fuel_; }

    bool has_def(const std::string& name) {
        if (loaded_.prog.sig.find_def(name)) return true;
        err_ << path_ << ": error: no definition named " << name << "\n";
        return false;
    }

private:
    std::string path_;
    std::ostream& err_;
    std::size_t fuel_;
    Loaded loaded_;
    SignatureReport report_;
};

int cmd_check(Session& s, std::ostream& out) {
    if (!s.load() || !s.check()) return 1;
    std::vector<std::string> rec;
    for (const auto& [name, r] : s.sig_report().recursive)
        if (r) rec.push_back(name);
    out << s.path() << ": ok (" << s.prog().decls.size() << " declarations";
    if (!rec.empty()) {
        out << "; recursive:";
        for (const auto& n : rec) out << " " << n;
    }
    out << ")\n";
    return 0;
}

int cmd_eval(Session& s, const std::string& def, const std::vector<std::string>& args, std::ostream& out,
             std::ostream& err) {
    if (!s.load() || !s.check() || !s.has_def(def)) return 1;
    const Signature& sig = s.prog().sig;
    Term t = constant(def);
    try {
        for (const auto& a : args) t = app(t, resolve_term(sig, {}, parse_term(a)));
        TypeChecker tc(sig, s.fuel());
        tc.infer({}, t);
        out << pretty(sig, normalize(sig, t, s.fuel())) << "\n";
    } catch (const std::exception& e) {
        Diagnostic d = diagnose(e, &sig);
        err << s.path() << ": error: in --args: " << d.kind << ": " << d.message << "\n";
        return 1;
    }
    return 0;
}

int cmd_cover(Session& s, const std::string& def, bool explain_flag, bool json, std::ostream& out,
              std::ostream& err) {
    if (!s.load() || !s.check(true) || !s.has_def(def)) return 1;
    const Signature& sig = s.prog().sig;
    nlohmann::json j;
    j["def"] = def;
    j["covers"] = nlohmann::json::array();
    int code = 0;
    for (const auto& site : match_sites(sig, def, s.fuel())) {
        const Match& m = *site.term->as<Match>();
        auto cov = check_cover(sig, m.tel, clauses_of(m), s.fuel());
        if (auto e = std::get_if<CoverError>(&cov)) {
            Diagnostic d;
            d.kind = "NotCovering";
            d.message = "in " + def + ": " + describe(sig, *e);
            d.span = site.term->span;
            d.rule = "TyCase";
            err << format_diagnostic(s.path(), read_file(s.path()).value_or(""), d) << "\n";
            code = 1;
            continue;
        }
        const auto& tree = std::get<CoverTree>(cov);
        if (json) {
            j["covers"].push_back({{"match", site.index}, {"telescope", pretty(sig, m.tel)},
                                   {"clauses", m.branches.size()}, {"tree", cover_json(sig, tree)}});
        } else if (explain_flag) {
            out << def << " match " << site.index << " over " << pretty(sig, m.tel) << "\n" << explain(sig, tree);
        } else {
            out << def << " match " << site.index << ": covered, " << leaves(tree).size() << " leaves\n";
        }
    }
    if (json) out << j.dump(2) << "\n";
    return code;
}

int cmd_oracle(Session& s, const std::string& def, std::size_t depth, bool json, std::ostream& out) {
    if (!s.load() || !s.check()) return 1;
    if (!def.empty() && !s.has_def(def)) return 1;
    const Signature& sig = s.prog().sig;
    model::Bound bound;
    bound.max_depth = depth;
    model::Model m(sig, bound);
    std::vector<std::string> defs = def.empty() ? sig.def_order() : std::vector<std::string>{def};
    nlohmann::json j;
    j["depth"] = depth;
    j["sites"] = nlohmann::json::array();
    bool ok = true;
    for (const auto& name : defs) {
        for (const auto& site : match_sites(sig, name, s.fuel())) {
            auto r = oracle_site(m, site, s.fuel());
            ok = ok && site_ok(r);
            if (json)
                j["sites"].push_back(site_json(r));
            else
                out << site_line(r) << "\n";
        }
    }
    j["ok"] = ok;
    if (json) out << j.dump(2) << "\n";
    return ok ? 0 : 1;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Type, coverage and model checker for CoverTT source files", "covertt"};
    app.fallthrough();
    app.require_subcommand(1);
    std::optional<std::size_t> fuel_opt;
    app.add_option("--fuel", fuel_opt, "Reduction step budget (default: $COVERTT_FUEL or 100000)");

    std::string file, def;
    std::vector<std::string> eval_args;
    bool explain_flag = false, json = false;
    std::size_t depth = 3;

    auto* check = app.add_subcommand("check", "Check declarations, definitions and coverage");
    check->add_option("FILE", file)->required();
    auto* ev = app.add_subcommand("eval", "Normalize a definition applied to arguments");
    ev->add_option("FILE", file)->required();
    ev->add_option("--def", def)->required();
    ev->add_option("--args", eval_args, "Argument terms");
    auto* cover = app.add_subcommand("cover", "Print the coverage derivation of a definition's matches");
    cover->add_option("FILE", file)->required();
    cover->add_option("--def", def)->required();
    cover->add_flag("--explain", explain_flag, "Print the derivation tree");
    cover->add_flag("--json", json, "Machine-readable output");
    auto* oracle = app.add_subcommand("oracle", "Check covers against the finite set model");
    oracle->add_option("FILE", file)->required();
    oracle->add_option("--def", def);
    oracle->add_option("--depth", depth, "Constructor depth bound")->check(CLI::PositiveNumber);
    oracle->add_flag("--json", json, "Machine-readable output");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n" << "run with --help for usage\n";
        return 2;
    }

    std::size_t fuel = kDefaultFuel;
    if (fuel_opt) {
        fuel = *fuel_opt;
    } else if (const char* env = std::getenv("COVERTT_FUEL")) {
        try {
            fuel = std::stoull(env);
        } catch (const std::exception&) {
            err << "usage error: COVERTT_FUEL is not a number\n";
            return 2;
        }
    }

    Session s(file, err, fuel);
    if (check->parsed()) return cmd_check(s, out);
    if (ev->parsed()) return cmd_eval(s, def, eval_args, out, err);
    if (cover->parsed()) return cmd_cover(s, def, explain_flag, json, out, err);
    if (oracle->parsed()) return cmd_oracle(s, def, depth, json, out);
    return 2;
}

}  // namespace covertt
