#include "covertt/explain.hpp"

#include "covertt/conversion.hpp"
#include "covertt/pretty.hpp"
#include "covertt/syntax.hpp"
#include "covertt/typecheck.hpp"

#include <sstream>

namespace covertt {

namespace {

const char* type_rule(TypeError::Kind k) {
    using K = TypeError::Kind;
    switch (k) {
        case K::UnboundVariable: return "TyVar";
        case K::NotAFunction: return "TyApp";
        case K::TypeMismatch: return "TypeConv";
        case K::NotAType: return "CtxCons";
        case K::BadConstructorArity: return "TyCtor";
        case K::NotCovering: return "TyCase";
        case K::BranchTypeMismatch: return "TyCase";
        case K::IllFormedTelescope: return "EnvCons";
        case K::UniverseHasNoType: return "TyInd";
        case K::CannotInfer: return "";
    }
    return "";
}

// Names for a telescope's entries as the printer would choose them.
std::vector<std::string> names_of(const Signature& sig, const Telescope& tel) {
    std::vector<std::string> scope;
    Printer(sig).telescope(tel, scope);
    return scope;
}

struct NodeText {
    std::string context;
    std::vector<std::string> names;
};

NodeText node_text(const Signature& sig, const CoverState& st) {
    std::vector<std::string> scope;
    std::string ctx = Printer(sig).telescope(st.tel, scope);
    return {ctx, scope};
}

std::string var_type(const Signature& sig, const CoverState& st, const std::vector<std::string>& names,
                     std::size_t level) {
    std::vector<std::string> prefix(names.begin(), names.begin() + level);
    return Printer(sig).term(st.tel[level].type, prefix);
}

void explain_into(const Signature& sig, const CoverTree& t, int depth, std::ostringstream& out) {
    const std::string pad(depth * 2, ' ');
    auto text = node_text(sig, t.state);
    Printer pr(sig);
    switch (t.rule) {
        case CoverRule::Leaf: {
            auto scope = text.names;
            out << pad << "Leaf clause " << t.clause << ": " << text.context << ". "
                << pr.tuple(t.state.pattern, scope) << "  [" << rule_tag(t.rule) << "]\n";
            return;
        }
        case CoverRule::Absurd:
            out << pad << "Absurd " << text.names[t.var] << " : " << var_type(sig, t.state, text.names, t.var)
                << "  (" << t.reason << ")  [" << rule_tag(t.rule) << "]\n";
            return;
        case CoverRule::SplitRefl:
        case CoverRule::SplitCon:
            out << pad << rule_name(t.rule) << " " << text.names[t.var] << " : "
                << var_type(sig, t.state, text.names, t.var) << "  [" << rule_tag(t.rule) << "]\n";
            for (const auto& [con, child] : t.children) {
                if (!con.empty()) {
                    out << pad << "  " << con << ":\n";
                    explain_into(sig, child, depth + 2, out);
                } else {
                    explain_into(sig, child, depth + 1, out);
                }
            }
            return;
    }
}

}  // namespace

std::pair<std::size_t, std::size_t> line_col(std::string_view text, std::size_t offset) {
    std::size_t line = 1, col = 1;
    for (std::size_t k = 0; k < offset && k < text.size(); ++k) {
        if (text[k] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

const char* rule_tag(CoverRule r) {
    switch (r) {
        case CoverRule::Leaf: return "identity cover";
        case CoverRule::SplitCon: return "coproduct cover";
        case CoverRule::SplitRefl: return "refl cover";
        case CoverRule::Absurd: return "absurd cover";
    }
    return "";
}

std::string describe(const Signature& sig, const CoverError& err) {
    using K = CoverError::Kind;
    auto pattern = [&] {
        std::vector<std::string> scope;
        Printer pr(sig);
        pr.telescope(err.witness.tel, scope);
        return pr.tuple(err.witness.pattern, scope);
    };
    switch (err.kind) {
        case K::MissingCase: return "MissingCase: no clause matches " + pattern();
        case K::Overlap:
            return "Overlap: clauses " + std::to_string(err.clause_a) + " and " +
                   std::to_string(err.clause_b) + " both match " + pattern();
        case K::Unreachable:
            return "Unreachable: clause " + std::to_string(err.clause_a) + " matches no case";
        case K::Undecidable: return "Undecidable: " + err.reason;
    }
    return "";
}

Diagnostic diagnose(const std::exception& e, const Signature* sig) {
    Diagnostic d;
    if (auto se = dynamic_cast<const SyntaxError*>(&e)) {
        d.kind = "SyntaxError";
        d.message = se->what();
        d.span = se->span;
        return d;
    }
    if (auto te = dynamic_cast<const TypeError*>(&e)) {
        d.kind = te->kind_name();
        d.span = te->span;
        d.rule = type_rule(te->kind);
        d.decl = te->decl;
        std::string msg = te->detail;
        if (te->cover && sig) msg = describe(*sig, *te->cover);
        if (sig && (te->expected || te->got)) {
            std::vector<std::string> scope = names_of(*sig, te->scope);
            Printer pr(*sig);
            if (te->expected) msg += "; expected " + pr.term(te->expected, scope);
            if (te->got) msg += (te->expected ? ", got " : "; got ") + pr.term(te->got, scope);
        }
        if (!te->decl.empty()) msg = "in " + te->decl + ": " + msg;
        d.message = msg;
        return d;
    }
    if (dynamic_cast<const FuelExhausted*>(&e)) {
        d.kind = "FuelExhausted";
        d.message = "reduction did not finish within the fuel budget";
        return d;
    }
    d.kind = "Error";
    d.message = e.what();
    return d;
}

std::string format_diagnostic(const std::string& path, std::string_view text, const Diagnostic& d) {
    auto [line, col] = line_col(text, d.span.begin);
    std::string out = path + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + d.severity + ": " +
                      d.kind + ": " + d.message;
    if (!d.rule.empty()) out += " [" + d.rule + "]";
    return out;
}

std::string explain(const Signature& sig, const CoverTree& tree) {
    std::ostringstream out;
    explain_into(sig, tree, 0, out);
    return out.str();
}

nlohmann::json cover_json(const Signature& sig, const CoverTree& t) {
    auto text = node_text(sig, t.state);
    nlohmann::json j;
    j["rule"] = rule_name(t.rule);
    j["tag"] = rule_tag(t.rule);
    j["context"] = text.context;
    if (t.rule == CoverRule::Leaf) {
        auto scope = text.names;
        j["clause"] = t.clause;
        j["pattern"] = Printer(sig).tuple(t.state.pattern, scope);
        return j;
    }
    j["var"] = text.names[t.var];
    j["pos"] = t.var;
    j["type"] = var_type(sig, t.state, text.names, t.var);
    if (t.rule == CoverRule::Absurd) {
        j["reason"] = t.reason;
        return j;
    }
    j["children"] = nlohmann::json::array();
    for (const auto& [con, child] : t.children) {
        nlohmann::json c = cover_json(sig, child);
        if (!con.empty()) c["con"] = con;
        j["children"].push_back(std::move(c));
    }
    return j;
}

}  // namespace covertt
