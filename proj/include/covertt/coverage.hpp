#pragma once

#include "covertt/conversion.hpp"
#include "covertt/signature.hpp"
#include "covertt/term.hpp"

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace covertt {

/// A clause left-hand side: pattern variables and a pattern into Ξ.
struct Clause {
    Telescope tel;
    std::vector<Term> pattern;
};

/// A node's current refinement of Ξ: `pattern` has one term per entry of Ξ,
/// each scoped over `tel`.
struct CoverState {
    Telescope tel;
    std::vector<Term> pattern;
};

enum class CoverRule { Leaf, SplitCon, SplitRefl, Absurd };

const char* rule_name(CoverRule r);

struct CoverTree {
    CoverRule rule = CoverRule::Leaf;
    CoverState state;
    std::size_t var = 0;  // level in state.tel; unused for Leaf
    std::size_t clause = 0;  // Leaf only
    Subst renaming;          // Leaf only: clause variables in terms of state.tel
    std::string reason;      // Absurd only
    /// SplitCon: one child per data constructor, keyed by its name.
    /// SplitRefl: a single child with an empty key.
    std::vector<std::pair<std::string, CoverTree>> children;
};

struct CoverError {
    enum class Kind { MissingCase, Unreachable, Overlap, Undecidable };
    Kind kind;
    CoverState witness;  // MissingCase, Overlap
    std::size_t clause_a = 0;
    std::size_t clause_b = 0;
    std::string reason;  // Undecidable

    std::string kind_name() const;
};

using CoverResult = std::variant<CoverTree, CoverError>;

/// Builds a case tree from constructor splits, refl splits (via unification)
/// and absurd pruning whose leaves are exactly the clauses.
CoverResult check_cover(const Signature& sig, const Telescope& xi, const std::vector<Clause>& clauses,
                        std::size_t fuel = kDefaultFuel);

struct AbsurdEvidence {
    std::string reason;
};
struct SplitUndecidable {
    std::string reason;
};

using ConSplit = std::variant<std::vector<std::pair<std::string, CoverState>>, AbsurdEvidence,
                              SplitUndecidable>;
using ReflSplit = std::variant<CoverState, AbsurdEvidence, SplitUndecidable>;

/// Replaces the variable at `level` by each data constructor of its type over
/// fresh field variables, which are inserted at `level`.
ConSplit split_variable(const Signature& sig, const CoverState& state, std::size_t level,
                        std::size_t fuel = kDefaultFuel);

/// Replaces an Eq-typed variable by refl after unifying the two sides.
ReflSplit split_refl(const Signature& sig, const CoverState& state, std::size_t level,
                     std::size_t fuel = kDefaultFuel);

/// Leftmost variable of `state` at which a compatible clause is rigid.
std::optional<std::size_t> select_split(const Signature& sig, const CoverState& state,
                                        const std::vector<Clause>& clauses,
                                        std::size_t fuel = kDefaultFuel);

struct CoverLeaf {
    Telescope tel;
    Subst pattern;
    std::size_t clause;
    Subst renaming;  // clause variables over `tel`
};

/// Leaf contexts and their patterns into Ξ, left to right.
std::vector<CoverLeaf> leaves(const CoverTree& tree);

}  // namespace covertt
