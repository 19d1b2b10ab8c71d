#include "covertt/pretty.hpp"

#include <algorithm>
#include <sstream>

namespace covertt {

std::string Printer::fresh(const std::string& base0, const std::vector<std::string>& scope) const {
    const std::string base = base0.empty() || base0 == "_" ? "x" : base0;
    auto taken = [&](const std::string& n) {
        return std::find(scope.begin(), scope.end(), n) != scope.end() || sig_.has_name(n) ||
               n == "data" || n == "def" || n == "match" || n == "to" || n == "Pi" || n == "Type" ||
               n == "Eq" || n == "refl";
    };
    if (!taken(base)) return base;
    for (int k = 1;; ++k) {
        std::string cand = base + std::to_string(k);
        if (!taken(cand)) return cand;
    }
}

std::string Printer::term(const Term& t, std::vector<std::string>& scope) { return go(t, scope, 0); }

std::string Printer::telescope(const Telescope& tel, std::vector<std::string>& scope) {
    std::string out = "(";
    for (std::size_t k = 0; k < tel.size(); ++k) {
        if (k) out += ", ";
        std::string ty = go(tel[k].type, scope, 0);
        std::string n = fresh(tel[k].name, scope);
        out += n + " : " + ty;
        scope.push_back(n);
    }
    return out + ")";
}

std::string Printer::tuple(const std::vector<Term>& ts, std::vector<std::string>& scope) {
    std::string out = "(";
    for (std::size_t k = 0; k < ts.size(); ++k) {
        if (k) out += ", ";
        out += go(ts[k], scope, 0);
    }
    return out + ")";
}

std::string Printer::go(const Term& t, std::vector<std::string>& scope, int prec) {
    auto paren = [&](std::string s, int level) { return prec > level ? "(" + s + ")" : s; };
    auto args_of = [&](const std::string& head, const std::vector<Term>& args) {
        return args.empty() ? head : head + tuple(args, scope);
    };
    if (auto v = t->as<Var>()) {
        if (v->index < scope.size()) return scope[scope.size() - 1 - v->index];
        return "#" + std::to_string(v->index);
    }
    if (t->is<Universe>()) return "Type";
    if (auto p = t->as<Pi>()) {
        if (!occurs(p->codomain, 0)) {
            std::string dom = go(p->domain, scope, 1);
            scope.push_back("_");
            std::string cod = go(p->codomain, scope, 0);
            scope.pop_back();
            return paren(dom + " -> " + cod, 0);
        }
        std::string out = "Pi ";
        std::size_t pushed = 0;
        const Node* cur = t.get();
        Term body = t;
        while (auto q = cur->as<Pi>()) {
            if (!occurs(q->codomain, 0)) break;
            std::string dom = go(q->domain, scope, 0);
            std::string n = fresh(q->name, scope);
            out += "(" + n + " : " + dom + ")";
            scope.push_back(n);
            ++pushed;
            body = q->codomain;
            cur = body.get();
        }
        out += ". " + go(body, scope, 0);
        scope.resize(scope.size() - pushed);
        return paren(out, 0);
    }
    if (t->is<Lam>()) {
        std::string out = "\\";
        std::size_t pushed = 0;
        Term body = t;
        while (auto l = body->as<Lam>()) {
            std::string n = fresh(l->name, scope);
            out += (pushed ? " " : "") + n;
            scope.push_back(n);
            ++pushed;
            body = l->body;
        }
        out += ". " + go(body, scope, 0);
        scope.resize(scope.size() - pushed);
        return paren(out, 0);
    }
    if (auto a = t->as<App>()) return paren(go(a->fun, scope, 1) + " " + go(a->arg, scope, 2), 1);
    if (auto e = t->as<Eq>()) return "Eq" + tuple({e->type, e->lhs, e->rhs}, scope);
    if (auto r = t->as<Refl>()) return "refl(" + go(r->arg, scope, 0) + ")";
    if (auto c = t->as<TyConApp>()) return args_of(c->name, c->args);
    if (auto c = t->as<DataConApp>()) return args_of(c->name, c->args);
    if (auto c = t->as<Const>()) return c->name;
    if (auto in = t->as<Inacc>()) {
        const Term& u = in->term;
        auto con = u->as<DataConApp>();
        auto ty = u->as<TyConApp>();
        const bool atomic = u->is<Var>() || u->is<Const>() || u->is<Universe>() || (con && con->args.empty()) ||
                            (ty && ty->args.empty());
        return atomic ? "." + go(u, scope, 2) : ".(" + go(u, scope, 0) + ")";
    }
    if (auto m = t->as<Match>()) return paren(match_expr(*m, scope), 0);
    return "?";
}

std::string Printer::match_expr(const Match& m, std::vector<std::string>& scope) {
    std::string out = "match " + tuple(m.scrutinees, scope) + " : ";
    std::vector<std::string> inner;
    out += telescope(m.tel, inner);
    out += " to " + go(m.motive, inner, 0) + " {\n";
    indent_ += 2;
    for (const auto& b : m.branches) {
        std::vector<std::string> bscope;
        out += std::string(indent_, ' ') + "| ";
        out += telescope(b.tel, bscope) + ". ";
        out += tuple(b.pattern, bscope) + " => ";
        out += go(b.body, bscope, 0) + "\n";
    }
    indent_ -= 2;
    return out + std::string(indent_, ' ') + "}";
}

std::string pretty(const Signature& sig, const Term& t, const std::vector<std::string>& scope) {
    std::vector<std::string> s = scope;
    return Printer(sig).term(t, s);
}

std::string pretty(const Signature& sig, const Telescope& tel) {
    std::vector<std::string> s;
    return Printer(sig).telescope(tel, s);
}

std::string pretty_program(const Program& prog) {
    Printer pr(prog.sig);
    std::ostringstream out;
    bool first = true;
    for (const auto& d : prog.decls) {
        if (!first) out << "\n";
        first = false;
        if (d.kind == DeclInfo::Kind::Data) {
            const auto& tc = prog.sig.tycon(d.name);
            std::vector<std::string> scope;
            out << "data " << d.name << " " << pr.telescope(tc.params, scope) << " {\n";
            for (std::size_t k = 0; k < tc.datacons.size(); ++k) {
                std::vector<std::string> cscope = scope;
                const auto& dc = prog.sig.datacon(tc.datacons[k]);
                out << "  " << dc.name << pr.telescope(dc.fields, cscope)
                    << (k + 1 < tc.datacons.size() ? ";" : "") << "\n";
            }
            out << "}\n";
        } else {
            const auto& def = prog.sig.def(d.name);
            std::vector<std::string> scope;
            std::string body = pr.term(def.body, scope);
            for (std::size_t k = body.find('\n'); k != std::string::npos; k = body.find('\n', k + 3))
                body.replace(k, 1, "\n  ");
            out << "def " << d.name << " : " << pr.term(def.type, scope) << " :=\n  " << body << "\n";
        }
    }
    return out.str();
}

}  // namespace covertt
