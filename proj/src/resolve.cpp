#include "covertt/program.hpp"

#include "covertt/typecheck.hpp"

namespace covertt {

namespace {

class Resolver {
public:
    explicit Resolver(const Signature& sig) : sig_(sig) {}

    Term term(std::vector<std::string>& scope, const SPtr& e) {
        using Kind = SExpr::Kind;
        const Span sp = e->span;
        switch (e->kind) {
            case Kind::Type: return universe(sp);
            case Kind::Name: return name(scope, e->name, {}, sp);
            case Kind::Call: {
                std::vector<Term> args;
                for (const auto& a : e->args) args.push_back(term(scope, a));
                return name(scope, e->name, std::move(args), sp);
            }
            case Kind::Pi: {
                Term dom = term(scope, e->args[0]);
                scope.push_back(e->name);
                Term cod = term(scope, e->args[1]);
                scope.pop_back();
                return pi(e->name, dom, cod, sp);
            }
            case Kind::Lam: {
                scope.push_back(e->name);
                Term body = term(scope, e->args[0]);
                scope.pop_back();
                return lam(e->name, body, sp);
            }
            case Kind::App: return app(term(scope, e->args[0]), term(scope, e->args[1]), sp);
            case Kind::Eq:
                return eq(term(scope, e->args[0]), term(scope, e->args[1]), term(scope, e->args[2]), sp);
            case Kind::Refl: return refl(term(scope, e->args[0]), sp);
            case Kind::Dot: return inacc(term(scope, e->args[0]), sp);
            case Kind::Match: return match_expr(scope, *e);
        }
        throw TypeError(TypeError::Kind::CannotInfer, sp, "unknown syntax");
    }

    Telescope telescope(std::vector<std::string>& scope, const std::vector<SBinder>& bs) {
        Telescope tel;
        for (const auto& b : bs) {
            tel.entries.push_back({b.name, term(scope, b.type)});
            scope.push_back(b.name);
        }
        return tel;
    }

private:
    Term name(const std::vector<std::string>& scope, const std::string& n, std::vector<Term> args,
              Span sp) {
        for (std::size_t k = scope.size(); k-- > 0;) {
            if (scope[k] == n && n != "_") {
                Term head = var(scope.size() - 1 - k, sp);
                for (auto& a : args) head = app(head, a, sp);
                return head;
            }
        }
        if (sig_.find_datacon(n)) return datacon(n, std::move(args), sp);
        if (sig_.find_tycon(n)) return tycon(n, std::move(args), sp);
        if (sig_.find_def(n)) {
            Term head = constant(n, sp);
            for (auto& a : args) head = app(head, a, sp);
            return head;
        }
        throw TypeError(TypeError::Kind::UnboundVariable, sp, "unbound name " + n);
    }

    Term match_expr(std::vector<std::string>& scope, const SExpr& e) {
        std::vector<Term> scrut;
        for (std::size_t k = 0; k + 1 < e.args.size(); ++k) scrut.push_back(term(scope, e.args[k]));
        std::vector<std::string> inner;
        Telescope tel = telescope(inner, e.tel);
        Term motive = term(inner, e.args.back());
        std::vector<Branch> branches;
        for (const auto& b : e.branches) {
            std::vector<std::string> bscope;
            Branch br;
            br.tel = telescope(bscope, b.tel);
            for (const auto& p : b.pattern) br.pattern.push_back(term(bscope, p));
            br.body = term(bscope, b.body);
            branches.push_back(std::move(br));
        }
        return match(std::move(scrut), std::move(tel), motive, std::move(branches), e.span);
    }

    const Signature& sig_;
};

}  // namespace

Term resolve_term(const Signature& sig, const std::vector<std::string>& scope, const SPtr& e) {
    std::vector<std::string> s = scope;
    return Resolver(sig).term(s, e);
}

Program elaborate(const SourceFile& file) {
    Program prog;
    for (const auto& decl : file.decls) {
        if (auto d = std::get_if<SData>(&decl)) {
            if (prog.sig.has_name(d->name)) throw SyntaxError(d->span, "duplicate declaration " + d->name);
            std::vector<std::string> scope;
            TyConDecl tc{d->name, {}, {}, d->span};
            tc.params = Resolver(prog.sig).telescope(scope, d->params);
            prog.sig.add_tycon(tc);
            for (const auto& c : d->cons) {
                if (prog.sig.has_name(c.name))
                    throw SyntaxError(c.span, "duplicate declaration " + c.name);
                std::vector<std::string> cscope = scope;
                DataConDecl dc{c.name, d->name, Resolver(prog.sig).telescope(cscope, c.fields), c.span};
                prog.sig.add_datacon(std::move(dc));
            }
            prog.decls.push_back({DeclInfo::Kind::Data, d->name, d->span});
        } else {
            const auto& f = std::get<SDef>(decl);
            if (prog.sig.has_name(f.name)) throw SyntaxError(f.span, "duplicate declaration " + f.name);
            Term type = resolve_term(prog.sig, {}, f.type);
            Term body = resolve_term(prog.sig, {}, f.body);
            prog.sig.add_def({f.name, type, body, f.span});
            prog.decls.push_back({DeclInfo::Kind::Def, f.name, f.span});
        }
    }
    return prog;
}

Program load_program(std::string_view text) { return elaborate(parse(text)); }

}  // namespace covertt
