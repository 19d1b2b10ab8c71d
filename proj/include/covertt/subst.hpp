#pragma once

#include "covertt/term.hpp"

#include <stdexcept>

namespace covertt {

/// Raised when a substitution's arity disagrees with the telescope it is
/// applied over. Always an internal invariant breach.
class ArityError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Simultaneous substitution: `t` is scoped over a telescope of length
/// theta.size(); the k-th entry (level k) is replaced by theta[k]. Binders
/// inside `t` are respected.
Term apply_subst(const Term& t, const Subst& theta);
Term apply_subst(const Term& t, const std::vector<Term>& theta);

/// Pointwise application: each term of `theta` (a substitution into Δ whose
/// terms are scoped over Γ) is substituted by `sigma` (scoped over Ξ, into Γ).
/// The result maps Ξ into Δ.
Subst compose_subst(const Subst& theta, const Subst& sigma);

/// Applies a substitution over Δ to every type of a telescope that extends Δ.
Telescope apply_subst(const Telescope& tel, const std::vector<Term>& theta);

/// Reindexes `t` (scoped over Γ) to Γ extended by `by` entries.
Term weaken(const Term& t, const Telescope& by);
Term weaken(const Term& t, std::size_t by);

/// Identity substitution on Δ, carrying Δ as its codomain.
Subst id_subst(const Telescope& delta);

/// θ extended by t : T. The codomain, when present, is extended by T.
Subst extend_subst(const Subst& theta, Term t, Term type, std::string name = "x");

/// θ without its last component.
Subst drop_last(const Subst& theta);

/// Instantiates a telescope whose entries are scoped over a prefix of
/// `args.size()` binders: the result's entries are scoped over the scope of
/// `args` followed by the earlier result entries.
Telescope instantiate_telescope(const Telescope& tel, const std::vector<Term>& args);

/// Type of variable `index` in context Γ, scoped over the whole of Γ.
Term lookup_type(const Telescope& gamma, std::size_t index);

}  // namespace covertt
