#include "covertt/unify.hpp"

#include "covertt/subst.hpp"

#include <deque>
#include <functional>

namespace covertt {

namespace {

const Term& unused_slot() {
    static const Term t = constant("?unused");
    return t;
}

}  // namespace

std::optional<UnifySuccess> solve_variable(const Telescope& delta, std::size_t x, const Term& value) {
    const std::size_t n = delta.size();
    const auto value_deps = free_levels(value, n);
    if (value_deps[x]) return std::nullopt;

    std::vector<std::vector<bool>> deps(n);
    for (std::size_t l = 0; l < n; ++l) {
        deps[l] = free_levels(delta[l].type, l);
        deps[l].resize(n, false);
        if (l > x && deps[l][x]) {
            deps[l][x] = false;
            for (std::size_t k = 0; k < n; ++k)
                if (value_deps[k]) deps[l][k] = true;
        }
    }

    // Stable topological order: always take the earliest ready entry.
    std::vector<std::size_t> order;
    std::vector<std::size_t> newpos(n, n);
    std::vector<bool> placed(n, false);
    placed[x] = true;
    while (order.size() + 1 < n) {
        bool progress = false;
        for (std::size_t l = 0; l < n; ++l) {
            if (placed[l]) continue;
            bool ready = true;
            for (std::size_t k = 0; k < n && ready; ++k)
                if (deps[l][k] && (k == x || !placed[k])) ready = false;
            if (!ready) continue;
            placed[l] = true;
            newpos[l] = order.size();
            order.push_back(l);
            progress = true;
            break;
        }
        if (!progress) return std::nullopt;
    }

    // Re-expresses a term scoped over the first `scope` original entries in the
    // first `target` entries of the new telescope.
    std::function<Term(const Term&, std::size_t, std::size_t)> translate =
        [&](const Term& t, std::size_t scope, std::size_t target) -> Term {
        const auto used = free_levels(t, scope);
        std::vector<Term> theta(scope, unused_slot());
        for (std::size_t k = 0; k < scope; ++k) {
            if (!used[k]) continue;
            if (k == x)
                theta[k] = translate(value, n, target);
            else
                theta[k] = level_var(target, newpos[k]);
        }
        return apply_subst(t, theta);
    };

    UnifySuccess out;
    for (std::size_t q = 0; q < order.size(); ++q) {
        const std::size_t l = order[q];
        out.tel.entries.push_back({delta[l].name, translate(delta[l].type, l, q)});
    }
    const std::size_t m = order.size();
    for (std::size_t k = 0; k < n; ++k)
        out.mgu.terms.push_back(k == x ? translate(value, n, m) : level_var(m, newpos[k]));
    out.mgu.codomain = delta;
    return out;
}

namespace {

std::string head_name(const Term& t0) {
    const Term& t = unwrap_inacc(t0);
    if (auto d = t->as<DataConApp>()) return d->name;
    if (auto c = t->as<TyConApp>()) return c->name;
    if (t->is<Refl>()) return "refl";
    if (t->is<Universe>()) return "Type";
    if (t->is<Pi>()) return "Pi";
    if (t->is<Eq>()) return "Eq";
    if (t->is<Var>()) return "variable";
    if (t->is<App>()) return "application";
    if (t->is<Match>()) return "match";
    if (t->is<Lam>()) return "lambda";
    if (auto c = t->as<Const>()) return c->name;
    return "?";
}

bool solvable_head(const Term& t) {
    return t->is<DataConApp>() || t->is<TyConApp>() || t->is<Refl>() || t->is<Universe>() ||
           t->is<Pi>() || t->is<Eq>() || t->is<Var>();
}

// Var{index} occurs in t under constructor applications only.
bool occurs_rigidly(const Term& t0, std::size_t index) {
    const Term& t = unwrap_inacc(t0);
    if (auto v = t->as<Var>()) return v->index == index;
    auto args_rigid = [&](const std::vector<Term>& args) {
        for (const auto& a : args)
            if (occurs_rigidly(a, index)) return true;
        return false;
    };
    if (auto d = t->as<DataConApp>()) return args_rigid(d->args);
    if (auto c = t->as<TyConApp>()) return args_rigid(c->args);
    return false;
}

struct Problem {
    Term ltype;
    Term rtype;
    Term lhs;
    Term rhs;
    std::size_t origin;
    std::string path;
};

class Unifier {
public:
    Unifier(const Signature& sig, const Telescope& gamma, std::size_t fuel)
        : sig_(sig), red_(sig, fuel), delta_(gamma), theta_(identity_terms(gamma.size())),
          gamma_(gamma) {}

    void push(const Equation& e, std::size_t origin) {
        queue_.push_back({e.type, e.type, e.lhs, e.rhs, origin, std::to_string(origin)});
    }

    UnifyOutcome run() {
        while (!queue_.empty()) {
            Problem p = std::move(queue_.front());
            queue_.pop_front();
            if (auto out = step(p)) return *out;
        }
        return UnifySuccess{delta_, Subst{theta_, gamma_}};
    }

private:
    std::optional<UnifyOutcome> step(const Problem& p) {
        if (!red_.conv(p.ltype, p.rtype))
            return UnifyStuck{"heterogeneous equation at " + p.path, p.origin};
        Term a = red_.whnf(p.lhs);
        Term b = red_.whnf(p.rhs);
        if (red_.conv(a, b)) return std::nullopt;

        auto av = a->as<Var>();
        auto bv = b->as<Var>();
        if (av && bv) {
            // Solve the more recently bound variable.
            const std::size_t la = level(av->index), lb = level(bv->index);
            return la > lb ? solve(la, b, p) : solve(lb, a, p);
        }
        if (av) return solve_against(*av, a, b, p, false);
        if (bv) return solve_against(*bv, b, a, p, true);

        auto ad = a->as<DataConApp>();
        auto bd = b->as<DataConApp>();
        if (ad && bd) {
            if (ad->name != bd->name) return UnifyClash{p.path, ad->name, bd->name, p.origin};
            const auto& con = sig_.datacon(ad->name);
            const std::size_t np = sig_.tycon(con.owner).params.size();
            std::vector<Problem> sub;
            for (std::size_t j = 0; j < con.fields.size(); ++j) {
                std::vector<Term> lpre(ad->args.begin(), ad->args.begin() + np + j);
                std::vector<Term> rpre(bd->args.begin(), bd->args.begin() + np + j);
                sub.push_back({apply_subst(con.fields[j].type, lpre),
                               apply_subst(con.fields[j].type, rpre), ad->args[np + j],
                               bd->args[np + j], p.origin, p.path + "." + std::to_string(np + j)});
            }
            queue_.insert(queue_.begin(), sub.begin(), sub.end());
            return std::nullopt;
        }
        auto at = a->as<TyConApp>();
        auto bt = b->as<TyConApp>();
        if (at && bt) {
            if (at->name != bt->name) return UnifyClash{p.path, at->name, bt->name, p.origin};
            const auto& params = sig_.tycon(at->name).params;
            std::vector<Problem> sub;
            for (std::size_t j = 0; j < params.size(); ++j) {
                std::vector<Term> lpre(at->args.begin(), at->args.begin() + j);
                std::vector<Term> rpre(bt->args.begin(), bt->args.begin() + j);
                sub.push_back({apply_subst(params[j].type, lpre), apply_subst(params[j].type, rpre),
                               at->args[j], bt->args[j], p.origin, p.path + "." + std::to_string(j)});
            }
            queue_.insert(queue_.begin(), sub.begin(), sub.end());
            return std::nullopt;
        }
        if (a->is<Refl>() && b->is<Refl>()) return std::nullopt;
        if (solvable_head(a) && solvable_head(b) && !a->is<Pi>() && !b->is<Pi>() &&
            !a->is<Eq>() && !b->is<Eq>())
            return UnifyClash{p.path, head_name(a), head_name(b), p.origin};
        return UnifyStuck{"cannot unify " + head_name(a) + " with " + head_name(b) + " at " + p.path,
                          p.origin};
    }

    std::optional<UnifyOutcome> solve_against(const Var& v, const Term& self, const Term& other,
                                              const Problem& p, bool flipped) {
        if (!solvable_head(other))
            return UnifyStuck{"non-constructor head " + head_name(other) + " at " + p.path, p.origin};
        if (occurs(other, v.index)) {
            if (occurs_rigidly(other, v.index)) {
                std::string name = delta_[level(v.index)].name;
                return flipped ? UnifyClash{p.path, head_name(other), name, p.origin}
                               : UnifyClash{p.path, name, head_name(other), p.origin};
            }
            return UnifyStuck{"variable occurs under a non-constructor at " + p.path, p.origin};
        }
        (void)self;
        return solve(level(v.index), other, p);
    }

    std::optional<UnifyOutcome> solve(std::size_t lvl, const Term& value, const Problem& p) {
        Term vtype = lookup_type(delta_, delta_.size() - 1 - lvl);
        if (!red_.conv(vtype, p.ltype))
            return UnifyStuck{"variable type differs from equation type at " + p.path, p.origin};
        auto r = solve_variable(delta_, lvl, value);
        if (!r) return UnifyStuck{"no dependency-respecting order at " + p.path, p.origin};
        const auto& rho = r->mgu.terms;
        for (auto& t : theta_) t = apply_subst(t, rho);
        for (auto& q : queue_) {
            q.ltype = apply_subst(q.ltype, rho);
            q.rtype = apply_subst(q.rtype, rho);
            q.lhs = apply_subst(q.lhs, rho);
            q.rhs = apply_subst(q.rhs, rho);
        }
        delta_ = std::move(r->tel);
        return std::nullopt;
    }

    std::size_t level(std::size_t index) const { return delta_.size() - 1 - index; }

    const Signature& sig_;
    Reducer red_;
    Telescope delta_;
    std::vector<Term> theta_;
    Telescope gamma_;
    std::deque<Problem> queue_;
};

}  // namespace

UnifyOutcome unify(const Signature& sig, const Telescope& gamma, const Term& type, const Term& t1,
                   const Term& t2, std::size_t fuel) {
    return solve_telescope_eqs(sig, gamma, {Equation{type, t1, t2}}, fuel);
}

UnifyOutcome solve_telescope_eqs(const Signature& sig, const Telescope& gamma,
                                 const std::vector<Equation>& eqs, std::size_t fuel) {
    Unifier u(sig, gamma, fuel);
    for (std::size_t i = 0; i < eqs.size(); ++i) u.push(eqs[i], i);
    return u.run();
}

}  // namespace covertt
