#pragma once

#include "covertt/conversion.hpp"
#include "covertt/coverage.hpp"
#include "covertt/signature.hpp"
#include "covertt/term.hpp"

#include <map>
#include <optional>
#include <stdexcept>
#include <string>

namespace covertt {

class TypeError : public std::runtime_error {
public:
    enum class Kind {
        UnboundVariable,
        NotAFunction,
        TypeMismatch,
        NotAType,
        BadConstructorArity,
        NotCovering,
        BranchTypeMismatch,
        IllFormedTelescope,
        UniverseHasNoType,
        CannotInfer,
    };

    TypeError(Kind kind, Span span, const std::string& detail);

    Kind kind;
    Span span;
    std::string detail;
    std::string decl;  // enclosing declaration, when known
    Term expected;     // TypeMismatch, BranchTypeMismatch, NotAType
    Term got;
    Telescope scope;   // context of expected and got
    std::size_t branch = 0;             // BranchTypeMismatch
    std::optional<CoverError> cover;    // NotCovering

    std::string kind_name() const;
};

const char* kind_name(TypeError::Kind kind);

/// Bidirectional checker: Lam and Refl are checked against an expected type,
/// everything else is inferred and compared by conversion.
class TypeChecker {
public:
    explicit TypeChecker(const Signature& sig, std::size_t fuel = kDefaultFuel)
        : sig_(sig), red_(sig, fuel), fuel_(fuel) {}

    Term infer(const Telescope& gamma, const Term& t);
    void check(const Telescope& gamma, const Term& t, const Term& type);
    /// Accepts Type itself or any term whose type is Type.
    void check_type(const Telescope& gamma, const Term& t);
    /// Checks `tel` as an extension of `gamma`.
    void check_telescope(const Telescope& gamma, const Telescope& tel);
    void check_subst(const Telescope& gamma, const std::vector<Term>& terms, const Telescope& delta,
                     Span where = {});

    Reducer& reducer() { return red_; }

private:
    Term infer_node(const Telescope& gamma, const Term& t);
    void check_node(const Telescope& gamma, const Term& t, const Term& type);
    Term infer_match(const Telescope& gamma, const Term& t, const Match& m);
    void expect_conv(const Telescope& gamma, const Term& expected, const Term& got, Span span);

    const Signature& sig_;
    Reducer red_;
    std::size_t fuel_;
};

Term infer(const Signature& sig, const Telescope& gamma, const Term& t, std::size_t fuel = kDefaultFuel);
void check(const Signature& sig, const Telescope& gamma, const Term& t, const Term& type,
           std::size_t fuel = kDefaultFuel);
void check_telescope(const Signature& sig, const Telescope& gamma, std::size_t fuel = kDefaultFuel);
void check_subst(const Signature& sig, const Telescope& gamma, const Subst& env, const Telescope& delta,
                 std::size_t fuel = kDefaultFuel);

struct SignatureReport {
    std::map<std::string, bool> recursive;  // per type constructor
};

/// Checks every parameter and field telescope and every definition in
/// declaration order. Errors carry the declaration name.
SignatureReport check_signature(const Signature& sig, std::size_t fuel = kDefaultFuel);

}  // namespace covertt
