#pragma once

#include "covertt/term.hpp"

#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace covertt {

class SyntaxError : public std::runtime_error {
public:
    SyntaxError(Span span, const std::string& msg) : std::runtime_error(msg), span(span) {}
    Span span;
};

struct SExpr;
using SPtr = std::shared_ptr<const SExpr>;

struct SBinder {
    std::string name;
    SPtr type;
    Span span;
};

struct SBranch {
    std::vector<SBinder> tel;
    std::vector<SPtr> pattern;
    SPtr body;
    Span span;
};

/// Surface expression. Names are unresolved.
struct SExpr {
    enum class Kind {
        Name,   // name
        Type,
        Pi,     // name, args = {domain, codomain}; name "_" for S -> T
        Lam,    // name, args = {body}
        App,    // args = {fun, arg}
        Call,   // name(args...)
        Eq,     // args = {type, lhs, rhs}
        Refl,   // args = {arg}
        Match,  // args = scrutinees then the motive; tel, branches
        Dot,    // args = {inner}
    };
    Kind kind;
    Span span;
    std::string name;
    std::vector<SPtr> args;
    std::vector<SBinder> tel = {};  // Match: scrutinee telescope
    std::vector<SBranch> branches = {};
};

struct SCon {
    std::string name;
    std::vector<SBinder> fields;
    Span span;
};

struct SData {
    std::string name;
    std::vector<SBinder> params;
    std::vector<SCon> cons;
    Span span;
};

struct SDef {
    std::string name;
    SPtr type;
    SPtr body;
    Span span;
};

using SDecl = std::variant<SData, SDef>;

struct SourceFile {
    std::vector<SDecl> decls;
};

/// Parses a whole file. Throws SyntaxError.
SourceFile parse(std::string_view text);

/// Parses a single term (used for command-line arguments).
SPtr parse_term(std::string_view text);

}  // namespace covertt
