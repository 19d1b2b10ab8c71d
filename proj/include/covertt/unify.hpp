#pragma once

#include "covertt/conversion.hpp"
#include "covertt/signature.hpp"
#include "covertt/term.hpp"

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace covertt {

/// `mgu` maps the original telescope Γ into `tel`: its terms are scoped over
/// `tel` and there is one per entry of Γ.
struct UnifySuccess {
    Telescope tel;
    Subst mgu;
};

/// Rigid heads disagree (or a variable occurs under constructors of its own
/// solution). `equation` indexes the input list for solve_telescope_eqs.
struct UnifyClash {
    std::string path;
    std::string lhs_head;
    std::string rhs_head;
    std::size_t equation = 0;
};

struct UnifyStuck {
    std::string reason;
    std::size_t equation = 0;
};

using UnifyOutcome = std::variant<UnifySuccess, UnifyClash, UnifyStuck>;

struct Equation {
    Term type;
    Term lhs;
    Term rhs;
};

/// First-order unification of t1 and t2 (both of type T over Γ). Data and type
/// constructors are injective and pairwise disjoint.
UnifyOutcome unify(const Signature& sig, const Telescope& gamma, const Term& type, const Term& t1,
                   const Term& t2, std::size_t fuel = kDefaultFuel);

/// Solves the equations left to right, each over the telescope left by the
/// previous solutions.
UnifyOutcome solve_telescope_eqs(const Signature& sig, const Telescope& gamma,
                                 const std::vector<Equation>& eqs, std::size_t fuel = kDefaultFuel);

/// Removes the entry at `level` from Δ by setting it to `value` (scoped over Δ,
/// not mentioning the entry). Later entries that depend on it are moved after
/// the variables of `value`. Returns Δ' and the substitution Δ' → Δ, or
/// nullopt when no dependency-respecting order exists.
std::optional<UnifySuccess> solve_variable(const Telescope& delta, std::size_t level,
                                           const Term& value);

}  // namespace covertt
