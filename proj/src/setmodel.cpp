#include "covertt/setmodel.hpp"

#include <sstream>
#include <unordered_map>

namespace covertt::model {

namespace {

VPtr finish(Value v) { return std::make_shared<const Value>(std::move(v)); }

std::string join_keys(const std::vector<VPtr>& vs) {
    std::string out;
    for (std::size_t k = 0; k < vs.size(); ++k) {
        if (k) out += ", ";
        out += vs[k]->key;
    }
    return out;
}

}  // namespace

VPtr v_universe() {
    static const VPtr u = finish({Value::Kind::Universe, "", {}, {}, {}, nullptr, "Type"});
    return u;
}

VPtr v_tycon(std::string name, std::vector<VPtr> params) {
    std::string key = params.empty() ? name : name + "(" + join_keys(params) + ")";
    return finish({Value::Kind::TyCon, std::move(name), std::move(params), {}, {}, nullptr, std::move(key)});
}

VPtr v_con(std::string name, std::vector<VPtr> fields) {
    std::string key = fields.empty() ? name : name + "(" + join_keys(fields) + ")";
    return finish({Value::Kind::Con, std::move(name), std::move(fields), {}, {}, nullptr, std::move(key)});
}

VPtr v_refl() {
    static const VPtr r = finish({Value::Kind::Refl, "", {}, {}, {}, nullptr, "refl"});
    return r;
}

namespace {

VPtr v_eqty(VPtr type, VPtr lhs, VPtr rhs) {
    std::string key = "Eq(" + type->key + ", " + lhs->key + ", " + rhs->key + ")";
    return finish({Value::Kind::EqTy, "", {std::move(type), std::move(lhs), std::move(rhs)}, {}, {}, nullptr,
                   std::move(key)});
}

VPtr v_fun(std::vector<std::pair<VPtr, VPtr>> graph) {
    std::string key = "{";
    for (std::size_t k = 0; k < graph.size(); ++k) {
        if (k) key += ", ";
        key += graph[k].first->key + " -> " + graph[k].second->key;
    }
    key += "}";
    return finish({Value::Kind::Fun, "", {}, std::move(graph), {}, nullptr, std::move(key)});
}

VPtr v_closure(Env env, Term body) {
    static std::size_t counter = 0;
    std::string key = "<closure " + std::to_string(counter++) + ">";
    return finish({Value::Kind::Closure, "", {}, {}, std::move(env), std::move(body), std::move(key)});
}

void add_if_missing(Signature& sig, const std::string& name, std::vector<std::string> cons) {
    if (sig.has_name(name)) return;
    for (const auto& c : cons)
        if (sig.has_name(c)) return;
    sig.add_tycon({name, {}, {}, {}});
    for (auto& c : cons) sig.add_datacon({c, name, {}, {}});
}

}  // namespace

bool equal(const VPtr& a, const VPtr& b) { return a->key == b->key; }

std::string show(const VPtr& v) { return v->key; }

std::string show(const Env& env) { return "<" + join_keys(env) + ">"; }

Signature with_palette(const Signature& sig) {
    Signature out = sig;
    add_if_missing(out, "Bool", {"true", "false"});
    add_if_missing(out, "Unit", {"tt"});
    add_if_missing(out, "Empty", {});
    return out;
}

Model::Model(const Signature& sig, Bound bound) : sig_(with_palette(sig)), bound_(bound) {}

std::vector<Env> Model::enum_telescope(const Telescope& tel, const Env& prefix) {
    return enum_entries(tel, prefix, bound_.max_depth);
}

std::vector<Env> Model::enum_entries(const Telescope& tel, const Env& prefix, std::size_t depth) {
    std::vector<Env> envs{prefix};
    for (const auto& entry : tel.entries) {
        std::vector<Env> next;
        for (const auto& env : envs) {
            VPtr code = eval(env, entry.type);
            for (const auto& v : enum_type(code, depth)) {
                Env e = env;
                e.push_back(v);
                next.push_back(std::move(e));
            }
        }
        envs = std::move(next);
        if (envs.empty()) break;
    }
    return envs;
}

const std::vector<VPtr>& Model::enum_type(const VPtr& code, std::size_t depth) {
    const std::string ck = code->key + "@" + std::to_string(depth);
    if (auto it = cache_.find(ck); it != cache_.end()) return it->second;
    std::vector<VPtr> out;
    switch (code->kind) {
        case Value::Kind::Universe:
            out = {v_tycon("Bool", {}), v_tycon("Unit", {}), v_tycon("Empty", {})};
            break;
        case Value::Kind::TyCon: {
            if (depth == 0) break;
            const auto& decl = sig_.tycon(code->name);
            for (const auto& cname : decl.datacons) {
                const auto& con = sig_.datacon(cname);
                for (const auto& env : enum_entries(con.fields, code->args, depth - 1))
                    out.push_back(v_con(cname, Env(env.begin() + code->args.size(), env.end())));
            }
            break;
        }
        case Value::Kind::EqTy:
            if (equal(code->args[1], code->args[2])) out.push_back(v_refl());
            break;
        case Value::Kind::PiTy:
            out = enum_functions(code, depth);
            break;
        default:
            throw OracleError(OracleError::Kind::Unsupported, "not a type: " + code->key);
    }
    return cache_.emplace(ck, std::move(out)).first->second;
}

std::vector<VPtr> Model::enum_functions(const VPtr& code, std::size_t depth) {
    const std::vector<VPtr> dom = enum_type(code->args[0], depth);
    std::vector<std::vector<VPtr>> fibers;
    std::size_t total = 1;
    std::size_t widest = 0;
    for (const auto& x : dom) {
        Env env = code->env;
        env.push_back(x);
        fibers.push_back(enum_type(eval(env, code->body), depth));
        const std::size_t n = fibers.back().size();
        if (n == 0) return {};
        widest = std::max(widest, n);
        total = total > bound_.max_fun ? total : total * n;
    }
    std::vector<VPtr> out;
    if (total <= bound_.max_fun) {
        std::vector<std::size_t> digit(dom.size(), 0);
        for (std::size_t count = 0; count < total; ++count) {
            std::vector<std::pair<VPtr, VPtr>> graph;
            for (std::size_t k = 0; k < dom.size(); ++k) graph.emplace_back(dom[k], fibers[k][digit[k]]);
            out.push_back(v_fun(std::move(graph)));
            for (std::size_t k = dom.size(); k-- > 0;) {
                if (++digit[k] < fibers[k].size()) break;
                digit[k] = 0;
            }
        }
        return out;
    }
    if (!bound_.sample_functions)
        throw OracleError(OracleError::Kind::FunctionSpaceTooLarge,
                          "function space " + code->key + " exceeds " + std::to_string(bound_.max_fun));
    const std::size_t samples = std::min(bound_.max_fun, widest);
    for (std::size_t s = 0; s < samples; ++s) {
        std::vector<std::pair<VPtr, VPtr>> graph;
        for (std::size_t k = 0; k < dom.size(); ++k)
            graph.emplace_back(dom[k], fibers[k][s % fibers[k].size()]);
        out.push_back(v_fun(std::move(graph)));
    }
    return out;
}

VPtr Model::apply(const VPtr& f, const VPtr& x) {
    if (f->kind == Value::Kind::Closure) {
        Env env = f->env;
        env.push_back(x);
        return eval(env, f->body);
    }
    if (f->kind == Value::Kind::Fun) {
        for (const auto& [a, b] : f->graph)
            if (a->key == x->key) return b;
        throw OracleError(OracleError::Kind::BoundExceeded, "argument " + x->key + " outside the enumerated domain");
    }
    throw OracleError(OracleError::Kind::Unsupported, "applying a non-function " + f->key);
}

Env Model::eval_all(const Env& env, const std::vector<Term>& ts) {
    Env out;
    out.reserve(ts.size());
    for (const auto& t : ts) out.push_back(eval(env, t));
    return out;
}

VPtr Model::eval(const Env& env, const Term& t) {
    if (auto v = t->as<Var>()) {
        if (v->index >= env.size()) throw OracleError(OracleError::Kind::Unsupported, "unbound variable");
        return env[env.size() - 1 - v->index];
    }
    if (t->is<Universe>()) return v_universe();
    if (auto p = t->as<Pi>()) {
        VPtr dom = eval(env, p->domain);
        // The key lists the codomain at every domain element.
        std::string key = "Pi(" + dom->key + ")[";
        const auto& xs = enum_type(dom, bound_.max_depth);
        for (std::size_t k = 0; k < xs.size(); ++k) {
            Env e = env;
            e.push_back(xs[k]);
            key += (k ? "; " : "") + eval(e, p->codomain)->key;
        }
        key += "]";
        return finish({Value::Kind::PiTy, "", {dom}, {}, env, p->codomain, std::move(key)});
    }
    if (auto l = t->as<Lam>()) return v_closure(env, l->body);
    if (auto a = t->as<App>()) return apply(eval(env, a->fun), eval(env, a->arg));
    if (auto e = t->as<Eq>()) return v_eqty(eval(env, e->type), eval(env, e->lhs), eval(env, e->rhs));
    if (t->is<Refl>()) return v_refl();
    if (auto c = t->as<TyConApp>()) return v_tycon(c->name, eval_all(env, c->args));
    if (auto c = t->as<DataConApp>()) {
        const std::size_t np = sig_.tycon(sig_.datacon(c->name).owner).params.size();
        Env fields;
        for (std::size_t k = np; k < c->args.size(); ++k) fields.push_back(eval(env, c->args[k]));
        return v_con(c->name, std::move(fields));
    }
    if (auto c = t->as<Const>()) {
        if (auto it = defs_.find(c->name); it != defs_.end()) return it->second;
        VPtr v = eval({}, sig_.def(c->name).body);
        defs_.emplace(c->name, v);
        return v;
    }
    if (auto in = t->as<Inacc>()) return eval(env, in->term);
    if (auto m = t->as<Match>()) return eval_match(env, *m);
    throw OracleError(OracleError::Kind::Unsupported, "cannot evaluate term");
}

Term Model::reify_code(const VPtr& code) {
    switch (code->kind) {
        case Value::Kind::Universe: return universe();
        case Value::Kind::TyCon: {
            const auto& decl = sig_.tycon(code->name);
            return tycon(code->name, reify_env(decl.params, code->args));
        }
        case Value::Kind::EqTy:
            return eq(reify_code(code->args[0]), reify(code->args[1], code->args[0]),
                      reify(code->args[2], code->args[0]));
        default:
            throw OracleError(OracleError::Kind::Unsupported, "cannot reify " + code->key);
    }
}

Term Model::reify(const VPtr& v, const VPtr& code) {
    switch (code->kind) {
        case Value::Kind::Universe: return reify_code(v);
        case Value::Kind::TyCon: {
            const auto& decl = sig_.tycon(code->name);
            const auto& con = sig_.datacon(v->name);
            std::vector<Term> args = reify_env(decl.params, code->args);
            Env env = code->args;
            for (std::size_t k = 0; k < v->args.size(); ++k) {
                args.push_back(reify(v->args[k], eval(env, con.fields[k].type)));
                env.push_back(v->args[k]);
            }
            return datacon(v->name, std::move(args));
        }
        case Value::Kind::EqTy: return refl(reify(code->args[1], code->args[0]));
        default:
            throw OracleError(OracleError::Kind::Unsupported, "cannot reify a value of " + code->key);
    }
}

std::vector<Term> Model::reify_env(const Telescope& tel, const Env& env) {
    std::vector<Term> out;
    for (std::size_t k = 0; k < tel.size(); ++k)
        out.push_back(reify(env[k], eval(Env(env.begin(), env.begin() + k), tel[k].type)));
    return out;
}

namespace {

class Inverter {
public:
    Inverter(const Signature& sig, std::size_t n) : sig_(sig), bound_(n) {}

    bool accessible(const Term& q, const VPtr& v) {
        if (q->is<Inacc>()) return true;
        if (auto x = q->as<Var>()) {
            auto& slot = bound_[bound_.size() - 1 - x->index];
            if (!slot) slot = v;
            return true;
        }
        if (auto d = q->as<DataConApp>()) {
            if (v->kind != Value::Kind::Con || v->name != d->name) return false;
            const std::size_t np = sig_.tycon(sig_.datacon(d->name).owner).params.size();
            if (d->args.size() != np + v->args.size()) return false;
            for (std::size_t k = 0; k < v->args.size(); ++k)
                if (!accessible(d->args[np + k], v->args[k])) return false;
            return true;
        }
        if (q->is<Refl>()) return v->kind == Value::Kind::Refl;
        return true;
    }

    void forced(const Term& q0, const VPtr& v) {
        const Term& q = unwrap_inacc(q0);
        if (auto x = q->as<Var>()) {
            auto& slot = bound_[bound_.size() - 1 - x->index];
            if (!slot) slot = v;
        } else if (auto d = q->as<DataConApp>()) {
            if (v->kind != Value::Kind::Con || v->name != d->name) return;
            const std::size_t np = sig_.tycon(sig_.datacon(d->name).owner).params.size();
            if (d->args.size() != np + v->args.size()) return;
            for (std::size_t k = 0; k < v->args.size(); ++k) forced(d->args[np + k], v->args[k]);
        }
    }

    std::optional<Env> solution() const {
        Env out;
        for (const auto& b : bound_) {
            if (!b) return std::nullopt;
            out.push_back(b);
        }
        return out;
    }

private:
    const Signature& sig_;
    std::vector<VPtr> bound_;
};

bool same(const Env& a, const Env& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t k = 0; k < a.size(); ++k)
        if (!equal(a[k], b[k])) return false;
    return true;
}

}  // namespace

std::optional<Env> Model::invert(const Branch& br, const Env& scrutinee) {
    if (br.pattern.size() != scrutinee.size()) return std::nullopt;
    Inverter inv(sig_, br.tel.size());
    for (std::size_t k = 0; k < scrutinee.size(); ++k)
        if (!inv.accessible(br.pattern[k], scrutinee[k])) return std::nullopt;
    for (std::size_t k = 0; k < scrutinee.size(); ++k) inv.forced(br.pattern[k], scrutinee[k]);
    if (auto sigma = inv.solution()) {
        if (same(eval_all(*sigma, br.pattern), scrutinee)) return sigma;
        return std::nullopt;
    }
    for (auto& sigma : enum_telescope(br.tel))
        if (same(eval_all(sigma, br.pattern), scrutinee)) return sigma;
    return std::nullopt;
}

VPtr Model::eval_match(const Env& env, const Match& m) {
    const Env vs = eval_all(env, m.scrutinees);
    std::optional<std::pair<std::size_t, Env>> hit;
    for (std::size_t j = 0; j < m.branches.size(); ++j) {
        auto sigma = invert(m.branches[j], vs);
        if (!sigma) continue;
        if (hit)
            throw OracleError(OracleError::Kind::NoSemanticBranch,
                              "two branches denote " + show(vs));
        hit.emplace(j, std::move(*sigma));
    }
    if (!hit) throw OracleError(OracleError::Kind::NoSemanticBranch, "no branch denotes " + show(vs));
    return eval(hit->second, m.branches[hit->first].body);
}

SemanticReport check_cover_semantic(Model& m, const Telescope& xi, const std::vector<CoverLeaf>& leaves) {
    const auto envs = m.enum_telescope(xi);
    std::unordered_map<std::string, std::size_t> index;
    for (std::size_t k = 0; k < envs.size(); ++k) index.emplace(show(envs[k]), k);
    std::vector<std::size_t> hits(envs.size(), 0);
    for (const auto& leaf : leaves) {
        for (const auto& delta : m.enum_telescope(leaf.tel)) {
            auto it = index.find(show(m.eval_all(delta, leaf.pattern.terms)));
            if (it != index.end()) ++hits[it->second];
        }
    }
    SemanticReport r;
    r.environments = envs.size();
    for (std::size_t k = 0; k < envs.size(); ++k) {
        if (hits[k] == 0) r.uncovered.push_back(envs[k]);
        if (hits[k] > 1) r.overlapping.push_back(envs[k]);
    }
    r.covering = r.uncovered.empty();
    r.disjoint = r.overlapping.empty();
    return r;
}

std::vector<std::pair<Env, VPtr>> amalgamate(Model& m, const Telescope& xi,
                                             const std::vector<CoverLeaf>& leaves,
                                             const std::vector<BranchTable>& tables) {
    const auto envs = m.enum_telescope(xi);
    std::unordered_map<std::string, std::size_t> index;
    for (std::size_t k = 0; k < envs.size(); ++k) index.emplace(show(envs[k]), k);
    std::vector<VPtr> out(envs.size());
    for (std::size_t i = 0; i < leaves.size(); ++i) {
        for (const auto& delta : m.enum_telescope(leaves[i].tel)) {
            auto it = index.find(show(m.eval_all(delta, leaves[i].pattern.terms)));
            if (it == index.end()) continue;
            auto row = tables[i].find(show(delta));
            if (row == tables[i].end())
                throw OracleError(OracleError::Kind::BoundExceeded, "branch table misses " + show(delta));
            VPtr& slot = out[it->second];
            if (slot && !equal(slot, row->second))
                throw OracleError(OracleError::Kind::ConflictingBranches,
                                  "branches disagree at " + show(envs[it->second]));
            slot = row->second;
        }
    }
    std::vector<std::pair<Env, VPtr>> result;
    for (std::size_t k = 0; k < envs.size(); ++k) {
        if (!out[k])
            throw OracleError(OracleError::Kind::NoSemanticBranch, "no branch covers " + show(envs[k]));
        result.emplace_back(envs[k], out[k]);
    }
    return result;
}

std::vector<Env> enum_telescope(const Signature& sig, const Telescope& tel, Bound bound) {
    return Model(sig, bound).enum_telescope(tel);
}

VPtr eval(const Signature& sig, const Env& env, const Term& t, Bound bound) {
    return Model(sig, bound).eval(env, t);
}

SemanticReport check_cover_semantic(const Signature& sig, const Telescope& xi,
                                    const std::vector<CoverLeaf>& leaves, Bound bound) {
    Model m(sig, bound);
    return check_cover_semantic(m, xi, leaves);
}

}  // namespace covertt::model
