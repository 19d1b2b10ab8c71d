#pragma once

#include "covertt/signature.hpp"
#include "covertt/subst.hpp"
#include "covertt/term.hpp"

#include <stdexcept>
#include <variant>

namespace covertt {

inline constexpr std::size_t kDefaultFuel = 100000;

/// Reduction ran out of steps. Recursive definitions are accepted without a
/// termination check, so this is how divergence surfaces.
class FuelExhausted : public std::runtime_error {
public:
    FuelExhausted() : std::runtime_error("reduction fuel exhausted") {}
};

struct Matched {
    std::size_t branch;
    Subst solution;  // scoped over the scrutinee's context, into the branch telescope
};
struct MatchStuck {};
struct NoBranch {};
using MatchResult = std::variant<Matched, MatchStuck, NoBranch>;

/// β-reduction, match reduction and definition unfolding over one signature,
/// with a shared step budget.
class Reducer {
public:
    explicit Reducer(const Signature& sig, std::size_t fuel = kDefaultFuel)
        : sig_(sig), fuel_(fuel) {}

    Term whnf(const Term& t, bool unfold = true);
    Term normalize(const Term& t, bool unfold = true);
    bool conv(const Term& a, const Term& b);
    MatchResult match_branch(const std::vector<Term>& scrutinee, const std::vector<Branch>& branches);

    const Signature& signature() const { return sig_; }
    std::size_t fuel_left() const { return fuel_; }

private:
    void tick();
    Term normalize_pattern(const Term& p, bool unfold);

    const Signature& sig_;
    std::size_t fuel_;
};

Term whnf(const Signature& sig, const Term& t, std::size_t fuel = kDefaultFuel);
Term normalize(const Signature& sig, const Term& t, std::size_t fuel = kDefaultFuel);
bool conv(const Signature& sig, const Telescope& gamma, const Term& a, const Term& b,
          std::size_t fuel = kDefaultFuel);
MatchResult match_branch(const Signature& sig, const Subst& scrutinee,
                         const std::vector<Branch>& branches, std::size_t fuel = kDefaultFuel);

}  // namespace covertt
