#pragma once

#include "covertt/program.hpp"
#include "covertt/signature.hpp"
#include "covertt/term.hpp"

#include <string>
#include <vector>

namespace covertt {

/// Prints kernel terms in the surface grammar. Binders that would shadow a
/// visible name are renamed, so the output resolves back to the same term.
class Printer {
public:
    explicit Printer(const Signature& sig) : sig_(sig) {}

    /// `scope` lists the names of the enclosing binders, outermost first.
    std::string term(const Term& t, std::vector<std::string>& scope);
    /// Prints "(x : A, y : B)" and pushes the chosen names onto `scope`.
    std::string telescope(const Telescope& tel, std::vector<std::string>& scope);
    /// Prints "(t1, ..., tn)".
    std::string tuple(const std::vector<Term>& ts, std::vector<std::string>& scope);

    std::string fresh(const std::string& base, const std::vector<std::string>& scope) const;

private:
    std::string go(const Term& t, std::vector<std::string>& scope, int prec);
    std::string match_expr(const Match& m, std::vector<std::string>& scope);

    const Signature& sig_;
    int indent_ = 0;
};

std::string pretty(const Signature& sig, const Term& t, const std::vector<std::string>& scope = {});
std::string pretty(const Signature& sig, const Telescope& tel);

/// Whole program in declaration order; parses back to the same program.
std::string pretty_program(const Program& prog);

}  // namespace covertt
