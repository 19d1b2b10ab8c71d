#include "covertt/typecheck.hpp"

#include "covertt/subst.hpp"

#include <functional>
#include <set>

namespace covertt {

const char* kind_name(TypeError::Kind kind) {
    using K = TypeError::Kind;
    switch (kind) {
        case K::UnboundVariable: return "UnboundVariable";
        case K::NotAFunction: return "NotAFunction";
        case K::TypeMismatch: return "TypeMismatch";
        case K::NotAType: return "NotAType";
        case K::BadConstructorArity: return "BadConstructorArity";
        case K::NotCovering: return "NotCovering";
        case K::BranchTypeMismatch: return "BranchTypeMismatch";
        case K::IllFormedTelescope: return "IllFormedTelescope";
        case K::UniverseHasNoType: return "UniverseHasNoType";
        case K::CannotInfer: return "CannotInfer";
    }
    return "?";
}

TypeError::TypeError(Kind k, Span s, const std::string& d)
    : std::runtime_error(std::string(covertt::kind_name(k)) + ": " + d), kind(k), span(s), detail(d) {}

std::string TypeError::kind_name() const { return covertt::kind_name(kind); }

namespace {

using K = TypeError::Kind;

// Fills in a missing span from the enclosing node on the way out.
template <class F>
auto with_fallback_span(const Term& t, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (TypeError& e) {
        if (e.span.empty()) e.span = t->span;
        throw;
    }
}

}  // namespace

Term TypeChecker::infer(const Telescope& gamma, const Term& t) {
    return with_fallback_span(t, [&] { return infer_node(gamma, t); });
}

void TypeChecker::check(const Telescope& gamma, const Term& t, const Term& type) {
    with_fallback_span(t, [&] { check_node(gamma, t, type); });
}

void TypeChecker::check_type(const Telescope& gamma, const Term& t) {
    if (unwrap_inacc(t)->is<Universe>()) return;
    Term ty;
    try {
        ty = infer(gamma, t);
    } catch (TypeError& e) {
        if (e.kind != K::CannotInfer) throw;
        throw TypeError(K::NotAType, t->span, "a function is not a type");
    }
    if (!red_.whnf(ty)->is<Universe>()) {
        TypeError e(K::NotAType, t->span, "expected a type, but this term is a value");
        e.got = ty;
        e.scope = gamma;
        throw e;
    }
}

void TypeChecker::check_telescope(const Telescope& gamma, const Telescope& tel) {
    Telescope ctx = gamma;
    for (const auto& entry : tel.entries) {
        check_type(ctx, entry.type);
        ctx.entries.push_back(entry);
    }
}

void TypeChecker::check_subst(const Telescope& gamma, const std::vector<Term>& terms,
                              const Telescope& delta, Span where) {
    if (terms.size() != delta.size())
        throw TypeError(K::IllFormedTelescope, where,
                        "expected " + std::to_string(delta.size()) + " terms, got " +
                            std::to_string(terms.size()));
    std::vector<Term> prefix;
    for (std::size_t k = 0; k < terms.size(); ++k) {
        check(gamma, terms[k], apply_subst(delta[k].type, prefix));
        prefix.push_back(terms[k]);
    }
}

void TypeChecker::expect_conv(const Telescope& gamma, const Term& expected, const Term& got, Span span) {
    if (red_.conv(expected, got)) return;
    TypeError e(K::TypeMismatch, span, "type mismatch");
    e.scope = gamma;
    e.expected = red_.normalize(expected);
    e.got = red_.normalize(got);
    throw e;
}

Term TypeChecker::infer_node(const Telescope& gamma, const Term& t) {
    const Span sp = t->span;
    if (auto v = t->as<Var>()) {
        if (v->index >= gamma.size())
            throw TypeError(K::UnboundVariable, sp, "variable #" + std::to_string(v->index));
        return lookup_type(gamma, v->index);
    }
    if (t->is<Universe>()) throw TypeError(K::UniverseHasNoType, sp, "Type has no type");
    if (auto p = t->as<Pi>()) {
        check_type(gamma, p->domain);
        check_type(gamma.extended(p->name, p->domain), p->codomain);
        return universe();
    }
    if (t->is<Lam>()) throw TypeError(K::CannotInfer, sp, "cannot infer the type of a lambda");
    if (auto a = t->as<App>()) {
        if (auto l = unwrap_inacc(a->fun)->as<Lam>()) {
            Term dom = infer(gamma, a->arg);
            Term cod = infer(gamma.extended(l->name, dom), l->body);
            return subst_top(cod, a->arg);
        }
        Term fty = red_.whnf(infer(gamma, a->fun));
        auto p = fty->as<Pi>();
        if (!p) {
            TypeError e(K::NotAFunction, a->fun->span, "applied term is not a function");
            e.got = fty;
            e.scope = gamma;
            throw e;
        }
        check(gamma, a->arg, p->domain);
        return subst_top(p->codomain, a->arg);
    }
    if (auto e = t->as<Eq>()) {
        check_type(gamma, e->type);
        check(gamma, e->lhs, e->type);
        check(gamma, e->rhs, e->type);
        return universe();
    }
    if (auto r = t->as<Refl>()) {
        Term ty = infer(gamma, r->arg);
        return eq(ty, r->arg, r->arg);
    }
    if (auto c = t->as<TyConApp>()) {
        const TyConDecl* d = sig_.find_tycon(c->name);
        if (!d) throw TypeError(K::UnboundVariable, sp, "unknown type constructor " + c->name);
        if (c->args.size() != d->params.size())
            throw TypeError(K::BadConstructorArity, sp,
                            c->name + " expects " + std::to_string(d->params.size()) + " arguments");
        check_subst(gamma, c->args, d->params, sp);
        return universe();
    }
    if (auto c = t->as<DataConApp>()) {
        const DataConDecl* d = sig_.find_datacon(c->name);
        if (!d) throw TypeError(K::UnboundVariable, sp, "unknown data constructor " + c->name);
        const auto& owner = sig_.tycon(d->owner);
        const std::size_t np = owner.params.size();
        if (c->args.size() != np + d->fields.size())
            throw TypeError(K::BadConstructorArity, sp,
                            c->name + " expects " + std::to_string(np + d->fields.size()) +
                                " arguments");
        check_subst(gamma, c->args, owner.params.concat(d->fields), sp);
        return tycon(d->owner, std::vector<Term>(c->args.begin(), c->args.begin() + np));
    }
    if (auto c = t->as<Const>()) {
        const DefDecl* d = sig_.find_def(c->name);
        if (!d) throw TypeError(K::UnboundVariable, sp, "unknown definition " + c->name);
        return d->type;
    }
    if (auto m = t->as<Match>()) return infer_match(gamma, t, *m);
    if (auto in = t->as<Inacc>()) return infer(gamma, in->term);
    throw TypeError(K::CannotInfer, sp, "unsupported term");
}

void TypeChecker::check_node(const Telescope& gamma, const Term& t, const Term& type) {
    if (auto l = t->as<Lam>()) {
        Term ty = red_.whnf(type);
        auto p = ty->as<Pi>();
        if (!p) {
            TypeError e(K::TypeMismatch, t->span, "a lambda needs a function type");
            e.expected = red_.normalize(type);
            e.scope = gamma;
            throw e;
        }
        check(gamma.extended(l->name, p->domain), l->body, p->codomain);
        return;
    }
    if (auto r = t->as<Refl>()) {
        Term ty = red_.whnf(type);
        auto e = ty->as<Eq>();
        if (!e) {
            TypeError err(K::TypeMismatch, t->span, "refl needs an equality type");
            err.expected = red_.normalize(type);
            err.got = eq(infer(gamma, r->arg), r->arg, r->arg);
            err.scope = gamma;
            throw err;
        }
        check(gamma, r->arg, e->type);
        expect_conv(gamma, type, eq(e->type, r->arg, r->arg), t->span);
        return;
    }
    if (auto in = t->as<Inacc>()) return check(gamma, in->term, type);
    expect_conv(gamma, type, infer(gamma, t), t->span);
}

Term TypeChecker::infer_match(const Telescope& gamma, const Term& t, const Match& m) {
    check_telescope({}, m.tel);
    check_subst(gamma, m.scrutinees, m.tel, t->span);
    check_type(m.tel, m.motive);
    std::vector<Clause> clauses;
    for (std::size_t j = 0; j < m.branches.size(); ++j) {
        const Branch& b = m.branches[j];
        check_telescope({}, b.tel);
        check_subst(b.tel, b.pattern, m.tel, b.body->span);
        try {
            check(b.tel, b.body, apply_subst(m.motive, b.pattern));
        } catch (TypeError& e) {
            if (e.kind != K::TypeMismatch) throw;
            TypeError err(K::BranchTypeMismatch, e.span, "branch " + std::to_string(j) + ": " + e.detail);
            err.branch = j;
            err.expected = e.expected;
            err.got = e.got;
            err.scope = e.scope;
            throw err;
        }
        clauses.push_back({b.tel, b.pattern});
    }
    auto cov = check_cover(sig_, m.tel, clauses, fuel_);
    if (auto err = std::get_if<CoverError>(&cov)) {
        TypeError e(K::NotCovering, t->span, err->kind_name());
        e.cover = *err;
        throw e;
    }
    return apply_subst(m.motive, m.scrutinees);
}

Term infer(const Signature& sig, const Telescope& gamma, const Term& t, std::size_t fuel) {
    return TypeChecker(sig, fuel).infer(gamma, t);
}

void check(const Signature& sig, const Telescope& gamma, const Term& t, const Term& type,
           std::size_t fuel) {
    TypeChecker(sig, fuel).check(gamma, t, type);
}

void check_telescope(const Signature& sig, const Telescope& gamma, std::size_t fuel) {
    TypeChecker(sig, fuel).check_telescope({}, gamma);
}

void check_subst(const Signature& sig, const Telescope& gamma, const Subst& env, const Telescope& delta,
                 std::size_t fuel) {
    TypeChecker(sig, fuel).check_subst(gamma, env.terms, delta);
}

namespace {

void collect_tycons(const Term& t, std::set<std::string>& out) {
    std::visit(
        [&](const auto& x) {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, TyConApp>) {
                out.insert(x.name);
                for (const auto& a : x.args) collect_tycons(a, out);
            } else if constexpr (std::is_same_v<T, DataConApp>) {
                for (const auto& a : x.args) collect_tycons(a, out);
            } else if constexpr (std::is_same_v<T, Pi>) {
                collect_tycons(x.domain, out);
                collect_tycons(x.codomain, out);
            } else if constexpr (std::is_same_v<T, Lam>) {
                collect_tycons(x.body, out);
            } else if constexpr (std::is_same_v<T, App>) {
                collect_tycons(x.fun, out);
                collect_tycons(x.arg, out);
            } else if constexpr (std::is_same_v<T, Eq>) {
                collect_tycons(x.type, out);
                collect_tycons(x.lhs, out);
                collect_tycons(x.rhs, out);
            } else if constexpr (std::is_same_v<T, Refl>) {
                collect_tycons(x.arg, out);
            } else if constexpr (std::is_same_v<T, Inacc>) {
                collect_tycons(x.term, out);
            } else if constexpr (std::is_same_v<T, Match>) {
                for (const auto& s : x.scrutinees) collect_tycons(s, out);
                for (const auto& e : x.tel.entries) collect_tycons(e.type, out);
                collect_tycons(x.motive, out);
                for (const auto& b : x.branches) {
                    for (const auto& e : b.tel.entries) collect_tycons(e.type, out);
                    for (const auto& p : b.pattern) collect_tycons(p, out);
                    collect_tycons(b.body, out);
                }
            }
        },
        t->data);
}

}  // namespace

SignatureReport check_signature(const Signature& sig, std::size_t fuel) {
    TypeChecker tc(sig, fuel);
    SignatureReport report;
    std::map<std::string, std::set<std::string>> edges;
    auto attach = [](TypeError& e, const std::string& name, Span span) {
        e.decl = name;
        if (e.span.empty()) e.span = span;
    };
    for (const auto& name : sig.tycon_order()) {
        const auto& d = sig.tycon(name);
        try {
            tc.check_telescope({}, d.params);
            for (const auto& cname : d.datacons) {
                const auto& c = sig.datacon(cname);
                try {
                    tc.check_telescope(d.params, c.fields);
                } catch (TypeError& e) {
                    attach(e, cname, c.span);
                    throw;
                }
                for (const auto& f : c.fields.entries) collect_tycons(f.type, edges[name]);
            }
        } catch (TypeError& e) {
            if (e.decl.empty()) attach(e, name, d.span);
            throw;
        }
    }
    for (const auto& name : sig.tycon_order()) {
        std::set<std::string> seen;
        std::function<bool(const std::string&)> reaches = [&](const std::string& from) {
            for (const auto& to : edges[from]) {
                if (to == name) return true;
                if (seen.insert(to).second && reaches(to)) return true;
            }
            return false;
        };
        report.recursive[name] = reaches(name);
    }
    for (const auto& name : sig.def_order()) {
        const auto& d = sig.def(name);
        try {
            tc.check_type({}, d.type);
            tc.check({}, d.body, d.type);
        } catch (TypeError& e) {
            attach(e, name, d.span);
            throw;
        }
    }
    return report;
}

}  // namespace covertt
