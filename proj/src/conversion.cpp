#include "covertt/conversion.hpp"

#include <optional>

namespace covertt {

void Reducer::tick() {
    if (fuel_ == 0) throw FuelExhausted();
    --fuel_;
}

Term Reducer::whnf(const Term& t0, bool unfold) {
    Term t = t0;
    for (;;) {
        if (auto in = t->as<Inacc>()) {
            t = in->term;
        } else if (auto a = t->as<App>()) {
            Term fun = whnf(a->fun, unfold);
            if (auto l = fun->as<Lam>()) {
                tick();
                t = subst_top(l->body, a->arg);
            } else {
                return fun == a->fun ? t : app(fun, a->arg, t->span);
            }
        } else if (auto c = t->as<Const>()) {
            const DefDecl* d = unfold ? sig_.find_def(c->name) : nullptr;
            if (!d) return t;
            tick();
            t = d->body;
        } else if (auto m = t->as<Match>()) {
            auto r = match_branch(m->scrutinees, m->branches);
            auto hit = std::get_if<Matched>(&r);
            if (!hit) return t;
            tick();
            t = apply_subst(m->branches[hit->branch].body, hit->solution);
        } else {
            return t;
        }
    }
}

Term Reducer::normalize_pattern(const Term& p, bool unfold) {
    if (auto in = p->as<Inacc>()) return inacc(normalize(in->term, unfold), p->span);
    if (auto d = p->as<DataConApp>()) {
        std::vector<Term> args;
        for (const auto& a : d->args) args.push_back(normalize_pattern(a, unfold));
        return datacon(d->name, std::move(args), p->span);
    }
    if (auto r = p->as<Refl>()) return refl(normalize_pattern(r->arg, unfold), p->span);
    return normalize(p, unfold);
}

Term Reducer::normalize(const Term& t0, bool unfold) {
    Term t = whnf(t0, unfold);
    auto norm = [&](const Term& x) { return normalize(x, unfold); };
    auto norm_tel = [&](const Telescope& tel) {
        Telescope out;
        for (const auto& e : tel.entries) out.entries.push_back({e.name, norm(e.type)});
        return out;
    };
    return std::visit(
        [&](const auto& x) -> Term {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, Pi>) {
                return pi(x.name, norm(x.domain), norm(x.codomain), t->span);
            } else if constexpr (std::is_same_v<T, Lam>) {
                return lam(x.name, norm(x.body), t->span);
            } else if constexpr (std::is_same_v<T, App>) {
                return app(norm(x.fun), norm(x.arg), t->span);
            } else if constexpr (std::is_same_v<T, Eq>) {
                return eq(norm(x.type), norm(x.lhs), norm(x.rhs), t->span);
            } else if constexpr (std::is_same_v<T, Refl>) {
                return refl(norm(x.arg), t->span);
            } else if constexpr (std::is_same_v<T, TyConApp> || std::is_same_v<T, DataConApp>) {
                T out{x.name, {}};
                for (const auto& a : x.args) out.args.push_back(norm(a));
                return make(std::move(out), t->span);
            } else if constexpr (std::is_same_v<T, Match>) {
                Match out{{}, norm_tel(x.tel), norm(x.motive), {}};
                for (const auto& s : x.scrutinees) out.scrutinees.push_back(norm(s));
                for (const auto& b : x.branches) {
                    Branch nb{norm_tel(b.tel), {}, norm(b.body)};
                    for (const auto& p : b.pattern) nb.pattern.push_back(normalize_pattern(p, unfold));
                    out.branches.push_back(std::move(nb));
                }
                return make(std::move(out), t->span);
            } else {
                return t;
            }
        },
        t->data);
}

bool Reducer::conv(const Term& a, const Term& b) {
    if (alpha_eq(a, b)) return true;
    if (alpha_eq(normalize(a, false), normalize(b, false))) return true;
    return alpha_eq(normalize(a, true), normalize(b, true));
}

namespace {

enum class Step { Yes, No, Stuck };

class BranchMatcher {
public:
    BranchMatcher(Reducer& red, std::size_t nvars) : red_(red), bound_(nvars) {}

    Step accessible(const Term& q, const Term& v) {
        if (q->is<Inacc>()) return Step::Yes;
        if (auto x = q->as<Var>()) {
            auto& slot = bound_[level(x->index)];
            if (!slot) slot = v;
            return Step::Yes;
        }
        if (auto d = q->as<DataConApp>()) {
            Term w = red_.whnf(v);
            auto wd = w->as<DataConApp>();
            if (!wd) return Step::Stuck;
            if (wd->name != d->name || wd->args.size() != d->args.size()) return Step::No;
            const auto& owner = red_.signature().datacon(d->name).owner;
            const std::size_t nparams = red_.signature().tycon(owner).params.size();
            Step out = Step::Yes;
            for (std::size_t k = nparams; k < d->args.size(); ++k) {
                Step s = accessible(d->args[k], wd->args[k]);
                if (s == Step::No) return Step::No;
                if (s == Step::Stuck) out = Step::Stuck;
            }
            return out;
        }
        if (q->is<Refl>()) return red_.whnf(v)->is<Refl>() ? Step::Yes : Step::Stuck;
        return Step::Yes;  // any other term is a forced position
    }

    // Binds variables that occur only at forced positions.
    void forced(const Term& q, const Term& v) {
        const Term& p = unwrap_inacc(q);
        if (auto x = p->as<Var>()) {
            auto& slot = bound_[level(x->index)];
            if (!slot) slot = v;
        } else if (auto d = p->as<DataConApp>()) {
            Term w = red_.whnf(v);
            auto wd = w->as<DataConApp>();
            if (!wd || wd->name != d->name || wd->args.size() != d->args.size()) return;
            for (std::size_t k = 0; k < d->args.size(); ++k) forced(d->args[k], wd->args[k]);
        } else if (auto r = p->as<Refl>()) {
            Term w = red_.whnf(v);
            if (auto wr = w->as<Refl>()) forced(r->arg, wr->arg);
        }
    }

    std::optional<std::vector<Term>> solution() const {
        std::vector<Term> out;
        for (const auto& b : bound_) {
            if (!b) return std::nullopt;
            out.push_back(*b);
        }
        return out;
    }

private:
    std::size_t level(std::size_t index) const { return bound_.size() - 1 - index; }

    Reducer& red_;
    std::vector<std::optional<Term>> bound_;
};

}  // namespace

MatchResult Reducer::match_branch(const std::vector<Term>& scrutinee,
                                  const std::vector<Branch>& branches) {
    bool stuck = false;
    for (std::size_t j = 0; j < branches.size(); ++j) {
        const Branch& br = branches[j];
        if (br.pattern.size() != scrutinee.size()) continue;
        BranchMatcher m(*this, br.tel.size());
        Step step = Step::Yes;
        for (std::size_t k = 0; k < scrutinee.size() && step != Step::No; ++k) {
            Step s = m.accessible(br.pattern[k], scrutinee[k]);
            if (s == Step::No)
                step = Step::No;
            else if (s == Step::Stuck)
                step = Step::Stuck;
        }
        if (step == Step::No) continue;
        if (step == Step::Stuck) {
            stuck = true;
            continue;
        }
        for (std::size_t k = 0; k < scrutinee.size(); ++k) m.forced(br.pattern[k], scrutinee[k]);
        auto sol = m.solution();
        if (!sol) {
            stuck = true;
            continue;
        }
        bool ok = true;
        for (std::size_t k = 0; k < scrutinee.size() && ok; ++k)
            ok = conv(apply_subst(br.pattern[k], *sol), scrutinee[k]);
        if (!ok) {
            stuck = true;
            continue;
        }
        return Matched{j, Subst{std::move(*sol), br.tel}};
    }
    if (stuck) return MatchStuck{};
    return NoBranch{};
}

Term whnf(const Signature& sig, const Term& t, std::size_t fuel) { return Reducer(sig, fuel).whnf(t); }

Term normalize(const Signature& sig, const Term& t, std::size_t fuel) {
    return Reducer(sig, fuel).normalize(t);
}

bool conv(const Signature& sig, const Telescope&, const Term& a, const Term& b, std::size_t fuel) {
    return Reducer(sig, fuel).conv(a, b);
}

MatchResult match_branch(const Signature& sig, const Subst& scrutinee,
                         const std::vector<Branch>& branches, std::size_t fuel) {
    return Reducer(sig, fuel).match_branch(scrutinee.terms, branches);
}

}  // namespace covertt
