#include "covertt/term.hpp"

#include <functional>
#include <stdexcept>

namespace covertt {

Telescope Telescope::prefix(std::size_t n) const {
    Telescope out;
    out.entries.assign(entries.begin(), entries.begin() + static_cast<std::ptrdiff_t>(n));
    return out;
}

Telescope Telescope::extended(std::string name, Term type) const {
    Telescope out = *this;
    out.entries.push_back({std::move(name), std::move(type)});
    return out;
}

Telescope Telescope::concat(const Telescope& rest) const {
    Telescope out = *this;
    out.entries.insert(out.entries.end(), rest.entries.begin(), rest.entries.end());
    return out;
}

Term make(NodeData data, Span span) {
    return std::make_shared<const Node>(Node{std::move(data), span});
}

Term var(std::size_t index, Span span) { return make(Var{index}, span); }
Term universe(Span span) { return make(Universe{}, span); }
Term pi(std::string name, Term domain, Term codomain, Span span) {
    return make(Pi{std::move(name), std::move(domain), std::move(codomain)}, span);
}
Term arrow(Term domain, Term codomain) {
    return pi("_", std::move(domain), shift(codomain, 1));
}
Term lam(std::string name, Term body, Span span) {
    return make(Lam{std::move(name), std::move(body)}, span);
}
Term app(Term fun, Term arg, Span span) { return make(App{std::move(fun), std::move(arg)}, span); }
Term apps(Term fun, const std::vector<Term>& args) {
    for (const auto& a : args) fun = app(fun, a);
    return fun;
}
Term eq(Term type, Term lhs, Term rhs, Span span) {
    return make(Eq{std::move(type), std::move(lhs), std::move(rhs)}, span);
}
Term refl(Term arg, Span span) { return make(Refl{std::move(arg)}, span); }
Term tycon(std::string name, std::vector<Term> args, Span span) {
    return make(TyConApp{std::move(name), std::move(args)}, span);
}
Term datacon(std::string name, std::vector<Term> args, Span span) {
    return make(DataConApp{std::move(name), std::move(args)}, span);
}
Term constant(std::string name, Span span) { return make(Const{std::move(name)}, span); }
Term match(std::vector<Term> scrutinees, Telescope tel, Term motive, std::vector<Branch> branches,
           Span span) {
    return make(Match{std::move(scrutinees), std::move(tel), std::move(motive), std::move(branches)},
                span);
}
Term inacc(Term term, Span span) { return make(Inacc{std::move(term)}, span); }

Term with_span(const Term& t, Span span) { return make(t->data, span); }

const Term& unwrap_inacc(const Term& t) {
    const Term* cur = &t;
    while (auto in = (*cur)->as<Inacc>()) cur = &in->term;
    return *cur;
}

// Equality -----------------------------------------------------------------

namespace {

bool terms_eq(const std::vector<Term>& a, const std::vector<Term>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!alpha_eq(a[i], b[i])) return false;
    return true;
}

bool branch_eq(const Branch& a, const Branch& b) {
    return alpha_eq(a.tel, b.tel) && terms_eq(a.pattern, b.pattern) && alpha_eq(a.body, b.body);
}

}  // namespace

bool alpha_eq(const Term& a0, const Term& b0) {
    const Term& a = unwrap_inacc(a0);
    const Term& b = unwrap_inacc(b0);
    if (a == b) return true;
    if (a->data.index() != b->data.index()) return false;
    return std::visit(
        [&](const auto& x) -> bool {
            using T = std::decay_t<decltype(x)>;
            const auto& y = std::get<T>(b->data);
            if constexpr (std::is_same_v<T, Var>) {
                return x.index == y.index;
            } else if constexpr (std::is_same_v<T, Universe>) {
                return true;
            } else if constexpr (std::is_same_v<T, Pi>) {
                return alpha_eq(x.domain, y.domain) && alpha_eq(x.codomain, y.codomain);
            } else if constexpr (std::is_same_v<T, Lam>) {
                return alpha_eq(x.body, y.body);
            } else if constexpr (std::is_same_v<T, App>) {
                return alpha_eq(x.fun, y.fun) && alpha_eq(x.arg, y.arg);
            } else if constexpr (std::is_same_v<T, Eq>) {
                return alpha_eq(x.type, y.type) && alpha_eq(x.lhs, y.lhs) && alpha_eq(x.rhs, y.rhs);
            } else if constexpr (std::is_same_v<T, Refl>) {
                return alpha_eq(x.arg, y.arg);
            } else if constexpr (std::is_same_v<T, TyConApp> || std::is_same_v<T, DataConApp>) {
                return x.name == y.name && terms_eq(x.args, y.args);
            } else if constexpr (std::is_same_v<T, Const>) {
                return x.name == y.name;
            } else if constexpr (std::is_same_v<T, Match>) {
                if (!terms_eq(x.scrutinees, y.scrutinees) || !alpha_eq(x.tel, y.tel) ||
                    !alpha_eq(x.motive, y.motive) || x.branches.size() != y.branches.size())
                    return false;
                for (std::size_t i = 0; i < x.branches.size(); ++i)
                    if (!branch_eq(x.branches[i], y.branches[i])) return false;
                return true;
            } else {
                static_assert(std::is_same_v<T, Inacc>);
                return false;  // unreachable: unwrapped above
            }
        },
        a->data);
}

bool alpha_eq(const std::vector<Term>& a, const std::vector<Term>& b) { return terms_eq(a, b); }

bool alpha_eq(const Telescope& a, const Telescope& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!alpha_eq(a[i].type, b[i].type)) return false;
    return true;
}

// Variable traversal -------------------------------------------------------

namespace {

// Rebuilds t, replacing each free variable occurrence (index >= depth) with
// f(index, depth). Match telescopes, motives and branches are closed and are
// shared unchanged.
template <class F>
Term map_vars(const Term& t, std::size_t depth, const F& f) {
    return std::visit(
        [&](const auto& x) -> Term {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, Var>) {
                if (x.index < depth) return t;
                return f(x.index, depth, t->span);
            } else if constexpr (std::is_same_v<T, Universe> || std::is_same_v<T, Const>) {
                return t;
            } else if constexpr (std::is_same_v<T, Pi>) {
                return pi(x.name, map_vars(x.domain, depth, f), map_vars(x.codomain, depth + 1, f),
                          t->span);
            } else if constexpr (std::is_same_v<T, Lam>) {
                return lam(x.name, map_vars(x.body, depth + 1, f), t->span);
            } else if constexpr (std::is_same_v<T, App>) {
                return app(map_vars(x.fun, depth, f), map_vars(x.arg, depth, f), t->span);
            } else if constexpr (std::is_same_v<T, Eq>) {
                return eq(map_vars(x.type, depth, f), map_vars(x.lhs, depth, f),
                          map_vars(x.rhs, depth, f), t->span);
            } else if constexpr (std::is_same_v<T, Refl>) {
                return refl(map_vars(x.arg, depth, f), t->span);
            } else if constexpr (std::is_same_v<T, TyConApp> || std::is_same_v<T, DataConApp>) {
                T out{x.name, {}};
                out.args.reserve(x.args.size());
                for (const auto& a : x.args) out.args.push_back(map_vars(a, depth, f));
                return make(std::move(out), t->span);
            } else if constexpr (std::is_same_v<T, Match>) {
                Match out{{}, x.tel, x.motive, x.branches};
                out.scrutinees.reserve(x.scrutinees.size());
                for (const auto& s : x.scrutinees) out.scrutinees.push_back(map_vars(s, depth, f));
                return make(std::move(out), t->span);
            } else {
                static_assert(std::is_same_v<T, Inacc>);
                return inacc(map_vars(x.term, depth, f), t->span);
            }
        },
        t->data);
}

template <class F>
void visit_vars(const Term& t, std::size_t depth, const F& f) {
    std::visit(
        [&](const auto& x) {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, Var>) {
                if (x.index >= depth) f(x.index - depth);
            } else if constexpr (std::is_same_v<T, Universe> || std::is_same_v<T, Const>) {
            } else if constexpr (std::is_same_v<T, Pi>) {
                visit_vars(x.domain, depth, f);
                visit_vars(x.codomain, depth + 1, f);
            } else if constexpr (std::is_same_v<T, Lam>) {
                visit_vars(x.body, depth + 1, f);
            } else if constexpr (std::is_same_v<T, App>) {
                visit_vars(x.fun, depth, f);
                visit_vars(x.arg, depth, f);
            } else if constexpr (std::is_same_v<T, Eq>) {
                visit_vars(x.type, depth, f);
                visit_vars(x.lhs, depth, f);
                visit_vars(x.rhs, depth, f);
            } else if constexpr (std::is_same_v<T, Refl>) {
                visit_vars(x.arg, depth, f);
            } else if constexpr (std::is_same_v<T, TyConApp> || std::is_same_v<T, DataConApp>) {
                for (const auto& a : x.args) visit_vars(a, depth, f);
            } else if constexpr (std::is_same_v<T, Match>) {
                for (const auto& s : x.scrutinees) visit_vars(s, depth, f);
            } else {
                visit_vars(x.term, depth, f);
            }
        },
        t->data);
}

struct Strengthen {};

}  // namespace

Term shift(const Term& t, std::size_t by, std::size_t cutoff) {
    if (by == 0) return t;
    return map_vars(t, cutoff, [by](std::size_t i, std::size_t, Span s) { return var(i + by, s); });
}

std::optional<Term> strengthen(const Term& t, std::size_t by, std::size_t cutoff) {
    if (by == 0) return t;
    try {
        return map_vars(t, cutoff, [by](std::size_t i, std::size_t depth, Span s) {
            if (i < depth + by) throw Strengthen{};
            return var(i - by, s);
        });
    } catch (const Strengthen&) {
        return std::nullopt;
    }
}

Term subst_top(const Term& body, const Term& arg) {
    return map_vars(body, 0, [&](std::size_t i, std::size_t depth, Span s) {
        if (i == depth) return shift(arg, depth);
        return var(i - 1, s);
    });
}

bool occurs(const Term& t, std::size_t index) {
    bool found = false;
    visit_vars(t, 0, [&](std::size_t i) { found = found || i == index; });
    return found;
}

std::vector<bool> free_levels(const Term& t, std::size_t scope) {
    std::vector<bool> out(scope, false);
    visit_vars(t, 0, [&](std::size_t i) {
        if (i < scope) out[scope - 1 - i] = true;
    });
    return out;
}

std::size_t free_bound(const Term& t) {
    std::size_t bound = 0;
    visit_vars(t, 0, [&](std::size_t i) { bound = std::max(bound, i + 1); });
    return bound;
}

std::vector<Term> identity_terms(std::size_t n) {
    std::vector<Term> out;
    out.reserve(n);
    for (std::size_t l = 0; l < n; ++l) out.push_back(var(n - 1 - l));
    return out;
}

Term level_var(std::size_t scope, std::size_t level) {
    if (level >= scope) throw std::logic_error("level_var: level out of scope");
    return var(scope - 1 - level);
}

bool is_rigid(const Term& t0) {
    const Term& t = unwrap_inacc(t0);
    return t->is<Var>() || t->is<DataConApp>() || t->is<TyConApp>() || t->is<Refl>();
}

// Exposed for subst.cpp.
namespace detail {
Term map_free_vars(const Term& t,
                   const std::function<Term(std::size_t index, std::size_t depth, Span)>& f) {
    return map_vars(t, 0, f);
}
}  // namespace detail

}  // namespace covertt
