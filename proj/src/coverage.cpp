#include "covertt/coverage.hpp"

#include "covertt/subst.hpp"
#include "covertt/unify.hpp"

#include <algorithm>
#include <set>

namespace covertt {

const char* rule_name(CoverRule r) {
    switch (r) {
        case CoverRule::Leaf: return "Leaf";
        case CoverRule::SplitCon: return "SplitCon";
        case CoverRule::SplitRefl: return "SplitRefl";
        case CoverRule::Absurd: return "Absurd";
    }
    return "?";
}

std::string CoverError::kind_name() const {
    switch (kind) {
        case Kind::MissingCase: return "MissingCase";
        case Kind::Unreachable: return "Unreachable";
        case Kind::Overlap: return "Overlap";
        case Kind::Undecidable: return "Undecidable";
    }
    return "?";
}

namespace {

std::vector<Term> substitute_all(const std::vector<Term>& ts, const std::vector<Term>& rho) {
    std::vector<Term> out;
    out.reserve(ts.size());
    for (const auto& t : ts) out.push_back(apply_subst(t, rho));
    return out;
}

struct ReflOutcome {
    CoverState state;
    std::vector<Term> rho;  // new tel -> old tel
};

std::variant<ReflOutcome, AbsurdEvidence, SplitUndecidable> refl_impl(const Signature& sig,
                                                                      const CoverState& st,
                                                                      std::size_t e,
                                                                      std::size_t fuel) {
    Reducer red(sig, fuel);
    Term ty = red.whnf(st.tel[e].type);
    auto eqt = ty->as<Eq>();
    if (!eqt) return SplitUndecidable{"variable " + st.tel[e].name + " does not have an equality type"};
    const std::size_t n = st.tel.size();
    const std::size_t up = n - e;
    auto out = unify(sig, st.tel, shift(eqt->type, up), shift(eqt->lhs, up), shift(eqt->rhs, up), fuel);
    if (auto c = std::get_if<UnifyClash>(&out))
        return AbsurdEvidence{"clash " + c->lhs_head + " vs " + c->rhs_head + " in " + st.tel[e].name};
    if (auto s = std::get_if<UnifyStuck>(&out)) return SplitUndecidable{s->reason};
    auto& ok = std::get<UnifySuccess>(out);
    const Term& eimg = ok.mgu.terms[e];
    auto ev = eimg->as<Var>();
    if (!ev) return SplitUndecidable{"equality proof " + st.tel[e].name + " was solved by unification"};
    const std::size_t e1 = ok.tel.size() - 1 - ev->index;
    Term proof = refl(apply_subst(shift(eqt->lhs, up), ok.mgu.terms));
    auto fin = solve_variable(ok.tel, e1, proof);
    if (!fin) return SplitUndecidable{"cannot instantiate " + st.tel[e].name + " with refl"};
    std::vector<Term> rho = substitute_all(ok.mgu.terms, fin->mgu.terms);
    return ReflOutcome{CoverState{fin->tel, substitute_all(st.pattern, rho)}, std::move(rho)};
}

// Outcome of matching one clause against a node's pattern.
struct ClauseMatch {
    enum class Kind { Yes, No, Block, Fail } kind = Kind::Yes;
    std::vector<std::size_t> blocks;  // levels of the node telescope
    std::vector<Term> solution;       // Yes: clause variables over the node telescope
    std::string reason;               // Fail
};

class ClauseMatcher {
public:
    ClauseMatcher(Reducer& red, const CoverState& st, const Clause& cl)
        : red_(red), st_(st), cl_(cl), bound_(cl.tel.size()) {}

    ClauseMatch run() {
        ClauseMatch out;
        for (std::size_t k = 0; k < cl_.pattern.size(); ++k) {
            accessible(cl_.pattern[k], st_.pattern[k], out);
            if (out.kind == ClauseMatch::Kind::No) return out;
        }
        if (out.kind != ClauseMatch::Kind::Yes) return out;
        for (std::size_t k = 0; k < cl_.pattern.size(); ++k) forced(cl_.pattern[k], st_.pattern[k]);
        for (std::size_t l = 0; l < bound_.size(); ++l) {
            if (!bound_[l]) {
                out.kind = ClauseMatch::Kind::Fail;
                out.reason = "pattern variable " + cl_.tel[l].name + " is never bound";
                return out;
            }
            out.solution.push_back(*bound_[l]);
        }
        for (std::size_t k = 0; k < cl_.pattern.size(); ++k) {
            if (!red_.conv(apply_subst(cl_.pattern[k], out.solution), st_.pattern[k])) {
                out.kind = ClauseMatch::Kind::Fail;
                out.reason = "forced pattern at position " + std::to_string(k) +
                             " does not agree with the inferred value";
                return out;
            }
        }
        return out;
    }

private:
    void block(ClauseMatch& out, const Term& w) {
        const std::size_t lvl = st_.tel.size() - 1 - w->as<Var>()->index;
        if (out.kind == ClauseMatch::Kind::Yes) out.kind = ClauseMatch::Kind::Block;
        if (out.kind == ClauseMatch::Kind::Block) out.blocks.push_back(lvl);
    }

    void fail(ClauseMatch& out, std::string why) {
        if (out.kind == ClauseMatch::Kind::Yes || out.kind == ClauseMatch::Kind::Block) {
            out.kind = ClauseMatch::Kind::Fail;
            out.reason = std::move(why);
        }
    }

    void accessible(const Term& q, const Term& v, ClauseMatch& out) {
        if (q->is<Inacc>()) return;
        if (auto x = q->as<Var>()) {
            auto& slot = bound_[cl_.tel.size() - 1 - x->index];
            if (!slot) slot = v;
            return;
        }
        if (auto d = q->as<DataConApp>()) {
            Term w = red_.whnf(v);
            if (w->is<Var>()) return block(out, w);
            auto wd = w->as<DataConApp>();
            if (!wd) return fail(out, "cannot inspect a non-constructor value against " + d->name);
            if (wd->name != d->name || wd->args.size() != d->args.size()) {
                out.kind = ClauseMatch::Kind::No;
                return;
            }
            const auto& owner = red_.signature().datacon(d->name).owner;
            const std::size_t np = red_.signature().tycon(owner).params.size();
            for (std::size_t k = np; k < d->args.size(); ++k) {
                accessible(d->args[k], wd->args[k], out);
                if (out.kind == ClauseMatch::Kind::No) return;
            }
            return;
        }
        if (q->is<Refl>()) {
            Term w = red_.whnf(v);
            if (w->is<Var>()) return block(out, w);
            if (!w->is<Refl>()) fail(out, "cannot inspect a non-refl proof");
        }
    }

    void forced(const Term& q0, const Term& v) {
        const Term& q = unwrap_inacc(q0);
        if (auto x = q->as<Var>()) {
            auto& slot = bound_[cl_.tel.size() - 1 - x->index];
            if (!slot) slot = v;
        } else if (auto d = q->as<DataConApp>()) {
            Term w = red_.whnf(v);
            auto wd = w->as<DataConApp>();
            if (!wd || wd->name != d->name || wd->args.size() != d->args.size()) return;
            for (std::size_t k = 0; k < d->args.size(); ++k) forced(d->args[k], wd->args[k]);
        } else if (auto r = q->as<Refl>()) {
            Term w = red_.whnf(v);
            if (auto wr = w->as<Refl>()) forced(r->arg, wr->arg);
        }
    }

    Reducer& red_;
    const CoverState& st_;
    const Clause& cl_;
    std::vector<std::optional<Term>> bound_;
};

std::size_t pattern_size(const Term& t0) {
    const Term& t = unwrap_inacc(t0);
    std::size_t n = 1;
    if (auto d = t->as<DataConApp>())
        for (const auto& a : d->args) n += pattern_size(a);
    if (auto r = t->as<Refl>()) n += pattern_size(r->arg);
    return n;
}

class CoverBuilder {
public:
    CoverBuilder(const Signature& sig, const std::vector<Clause>& clauses, std::size_t fuel)
        : sig_(sig), clauses_(clauses), fuel_(fuel), red_(sig, fuel) {
        for (const auto& c : clauses)
            for (const auto& p : c.pattern) max_depth_ = std::max(max_depth_, pattern_size(p));
        max_depth_ += 1;
    }

    CoverResult build(const CoverState& st, std::size_t depth) {
        std::vector<std::size_t> yes;
        std::vector<std::size_t> blocked;
        std::vector<ClauseMatch> results;
        for (std::size_t i = 0; i < clauses_.size(); ++i) {
            results.push_back(ClauseMatcher(red_, st, clauses_[i]).run());
            const auto& r = results.back();
            switch (r.kind) {
                case ClauseMatch::Kind::Yes: yes.push_back(i); break;
                case ClauseMatch::Kind::Block: blocked.push_back(i); break;
                case ClauseMatch::Kind::No: break;
                case ClauseMatch::Kind::Fail:
                    return undecidable("clause " + std::to_string(i) + ": " + r.reason);
            }
        }
        if (yes.size() >= 2) {
            CoverError e{CoverError::Kind::Overlap, st, yes[0], yes[1], {}};
            return e;
        }
        if (yes.size() == 1 && blocked.empty()) {
            CoverTree leaf;
            leaf.rule = CoverRule::Leaf;
            leaf.state = st;
            leaf.clause = yes[0];
            leaf.renaming = Subst{results[yes[0]].solution, clauses_[yes[0]].tel};
            return leaf;
        }
        if (yes.empty() && blocked.empty()) return prune_or_missing(st);

        if (depth >= max_depth_) return undecidable("split depth bound exceeded");
        std::size_t level = st.tel.size();
        for (auto i : blocked)
            for (auto l : results[i].blocks) level = std::min(level, l);
        return split_at(st, level, depth);
    }

private:
    CoverResult undecidable(std::string why) {
        CoverError e{CoverError::Kind::Undecidable, {}, 0, 0, std::move(why)};
        return e;
    }

    CoverResult prune_or_missing(const CoverState& st) {
        for (std::size_t l = 0; l < st.tel.size(); ++l) {
            Term ty = red_.whnf(st.tel[l].type);
            if (auto tc = ty->as<TyConApp>()) {
                if (sig_.tycon(tc->name).datacons.empty()) {
                    CoverTree t;
                    t.rule = CoverRule::Absurd;
                    t.state = st;
                    t.var = l;
                    t.reason = "empty datatype " + tc->name;
                    return t;
                }
            } else if (ty->is<Eq>()) {
                auto r = refl_impl(sig_, st, l, fuel_);
                if (auto a = std::get_if<AbsurdEvidence>(&r)) {
                    CoverTree t;
                    t.rule = CoverRule::Absurd;
                    t.state = st;
                    t.var = l;
                    t.reason = a->reason;
                    return t;
                }
            }
        }
        CoverError e{CoverError::Kind::MissingCase, st, 0, 0, {}};
        return e;
    }

    CoverResult split_at(const CoverState& st, std::size_t level, std::size_t depth) {
        Term ty = red_.whnf(st.tel[level].type);
        if (ty->is<Eq>()) {
            auto r = refl_impl(sig_, st, level, fuel_);
            return refl_node(st, level, r, [&](const ReflOutcome& o) { return build(o.state, depth + 1); });
        }
        auto split = split_variable(sig_, st, level, fuel_);
        if (auto u = std::get_if<SplitUndecidable>(&split)) return undecidable(u->reason);
        if (auto a = std::get_if<AbsurdEvidence>(&split)) {
            CoverTree t;
            t.rule = CoverRule::Absurd;
            t.state = st;
            t.var = level;
            t.reason = a->reason;
            return t;
        }
        const auto& tc = *ty->as<TyConApp>();
        const auto& cons = sig_.tycon(tc.name).datacons;
        CoverTree node;
        node.rule = CoverRule::SplitCon;
        node.state = st;
        node.var = level;
        const auto& children = std::get<0>(split);
        for (std::size_t c = 0; c < children.size(); ++c) {
            const std::size_t nf = sig_.datacon(cons[c]).fields.size();
            std::vector<std::size_t> fresh;
            for (std::size_t j = 0; j < nf; ++j) fresh.push_back(level + j);
            auto sub = eager_refl(children[c].second, fresh, depth);
            if (auto e = std::get_if<CoverError>(&sub)) return *e;
            node.children.emplace_back(children[c].first, std::move(std::get<CoverTree>(sub)));
        }
        return node;
    }

    // Refl-splits the Eq-typed fields introduced by a constructor split, in
    // order, before any further constructor split.
    CoverResult eager_refl(const CoverState& st, std::vector<std::size_t> fresh, std::size_t depth) {
        while (!fresh.empty()) {
            const std::size_t l = fresh.front();
            fresh.erase(fresh.begin());
            if (!red_.whnf(st.tel[l].type)->is<Eq>()) continue;
            auto r = refl_impl(sig_, st, l, fuel_);
            return refl_node(st, l, r, [&](const ReflOutcome& o) {
                std::vector<std::size_t> moved;
                for (auto f : fresh)
                    if (auto v = o.rho[f]->as<Var>()) moved.push_back(o.state.tel.size() - 1 - v->index);
                return eager_refl(o.state, moved, depth);
            });
        }
        return build(st, depth + 1);
    }

    template <class K>
    CoverResult refl_node(const CoverState& st, std::size_t level,
                          const std::variant<ReflOutcome, AbsurdEvidence, SplitUndecidable>& r,
                          K&& continue_with) {
        if (auto u = std::get_if<SplitUndecidable>(&r)) return undecidable(u->reason);
        CoverTree t;
        t.state = st;
        t.var = level;
        if (auto a = std::get_if<AbsurdEvidence>(&r)) {
            t.rule = CoverRule::Absurd;
            t.reason = a->reason;
            return t;
        }
        auto sub = continue_with(std::get<ReflOutcome>(r));
        if (auto e = std::get_if<CoverError>(&sub)) return *e;
        t.rule = CoverRule::SplitRefl;
        t.children.emplace_back("", std::move(std::get<CoverTree>(sub)));
        return t;
    }

    const Signature& sig_;
    const std::vector<Clause>& clauses_;
    std::size_t fuel_;
    Reducer red_;
    std::size_t max_depth_ = 0;
};

void collect_leaves(const CoverTree& t, std::vector<CoverLeaf>& out) {
    if (t.rule == CoverRule::Leaf) {
        out.push_back({t.state.tel, Subst{t.state.pattern, std::nullopt}, t.clause, t.renaming});
        return;
    }
    for (const auto& [_, c] : t.children) collect_leaves(c, out);
}

}  // namespace

ConSplit split_variable(const Signature& sig, const CoverState& st, std::size_t x, std::size_t fuel) {
    Reducer red(sig, fuel);
    Term ty = red.whnf(st.tel[x].type);
    auto tc = ty->as<TyConApp>();
    if (!tc) return SplitUndecidable{"variable " + st.tel[x].name + " does not have a datatype"};
    const auto& decl = sig.tycon(tc->name);
    if (decl.datacons.empty()) return AbsurdEvidence{"empty datatype " + tc->name};

    const std::size_t n = st.tel.size();
    std::vector<std::pair<std::string, CoverState>> out;
    for (const auto& cname : decl.datacons) {
        const auto& con = sig.datacon(cname);
        Telescope fields = instantiate_telescope(con.fields, tc->args);
        const std::size_t nf = fields.size();
        auto con_at = [&](std::size_t scope) {
            std::vector<Term> args;
            for (const auto& p : tc->args) args.push_back(shift(p, scope - x));
            for (std::size_t j = 0; j < nf; ++j) args.push_back(level_var(scope, x + j));
            return datacon(cname, std::move(args));
        };
        auto rho_at = [&](std::size_t scope, std::size_t upto) {
            std::vector<Term> rho;
            for (std::size_t k = 0; k < upto; ++k) {
                if (k < x)
                    rho.push_back(level_var(scope, k));
                else if (k == x)
                    rho.push_back(con_at(scope));
                else
                    rho.push_back(level_var(scope, k - 1 + nf));
            }
            return rho;
        };
        CoverState child;
        child.tel = st.tel.prefix(x).concat(fields);
        for (std::size_t l = x + 1; l < n; ++l) {
            const std::size_t q = l - 1 + nf;
            child.tel.entries.push_back({st.tel[l].name, apply_subst(st.tel[l].type, rho_at(q, l))});
        }
        child.pattern = substitute_all(st.pattern, rho_at(child.tel.size(), n));
        out.emplace_back(cname, std::move(child));
    }
    return out;
}

ReflSplit split_refl(const Signature& sig, const CoverState& state, std::size_t level,
                     std::size_t fuel) {
    auto r = refl_impl(sig, state, level, fuel);
    if (auto o = std::get_if<ReflOutcome>(&r)) return o->state;
    if (auto a = std::get_if<AbsurdEvidence>(&r)) return *a;
    return std::get<SplitUndecidable>(r);
}

std::optional<std::size_t> select_split(const Signature& sig, const CoverState& state,
                                        const std::vector<Clause>& clauses, std::size_t fuel) {
    Reducer red(sig, fuel);
    std::optional<std::size_t> best;
    for (const auto& c : clauses) {
        auto r = ClauseMatcher(red, state, c).run();
        if (r.kind != ClauseMatch::Kind::Block) continue;
        for (auto l : r.blocks)
            if (!best || l < *best) best = l;
    }
    return best;
}

CoverResult check_cover(const Signature& sig, const Telescope& xi, const std::vector<Clause>& clauses,
                        std::size_t fuel) {
    CoverBuilder b(sig, clauses, fuel);
    CoverState root{xi, identity_terms(xi.size())};
    auto out = b.build(root, 0);
    auto tree = std::get_if<CoverTree>(&out);
    if (!tree) return out;
    std::set<std::size_t> used;
    for (const auto& l : leaves(*tree)) used.insert(l.clause);
    for (std::size_t i = 0; i < clauses.size(); ++i) {
        if (!used.count(i)) {
            CoverError e{CoverError::Kind::Unreachable, {}, i, 0, {}};
            return e;
        }
    }
    return out;
}

std::vector<CoverLeaf> leaves(const CoverTree& tree) {
    std::vector<CoverLeaf> out;
    collect_leaves(tree, out);
    return out;
}

}  // namespace covertt
