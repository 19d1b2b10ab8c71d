#include "covertt/subst.hpp"

#include <functional>

namespace covertt {

namespace detail {
Term map_free_vars(const Term& t,
                   const std::function<Term(std::size_t index, std::size_t depth, Span)>& f);
}

Term apply_subst(const Term& t, const std::vector<Term>& theta) {
    const std::size_t n = theta.size();
    return detail::map_free_vars(t, [&](std::size_t index, std::size_t depth, Span) -> Term {
        const std::size_t rel = index - depth;
        if (rel >= n)
            throw ArityError("apply_subst: variable " + std::to_string(rel) +
                             " outside a substitution of length " + std::to_string(n));
        return shift(theta[n - 1 - rel], depth);
    });
}

Term apply_subst(const Term& t, const Subst& theta) {
    if (theta.codomain && theta.codomain->size() != theta.size())
        throw ArityError("apply_subst: substitution does not match its codomain telescope");
    return apply_subst(t, theta.terms);
}

Subst compose_subst(const Subst& theta, const Subst& sigma) {
    if (sigma.codomain && sigma.codomain->size() != sigma.size())
        throw ArityError("compose_subst: substitution does not match its codomain telescope");
    Subst out;
    out.terms.reserve(theta.size());
    for (const auto& t : theta.terms) out.terms.push_back(apply_subst(t, sigma.terms));
    out.codomain = theta.codomain;
    return out;
}

Telescope apply_subst(const Telescope& tel, const std::vector<Term>& theta) {
    Telescope out;
    for (std::size_t i = 0; i < tel.size(); ++i) {
        // Earlier entries of `tel` map to themselves, one level further out.
        std::vector<Term> sub;
        sub.reserve(theta.size() + i);
        for (const auto& t : theta) sub.push_back(shift(t, i));
        for (std::size_t j = 0; j < i; ++j) sub.push_back(var(i - 1 - j));
        out.entries.push_back({tel[i].name, apply_subst(tel[i].type, sub)});
    }
    return out;
}

Term weaken(const Term& t, const Telescope& by) { return shift(t, by.size()); }
Term weaken(const Term& t, std::size_t by) { return shift(t, by); }

Subst id_subst(const Telescope& delta) { return Subst{identity_terms(delta.size()), delta}; }

Subst extend_subst(const Subst& theta, Term t, Term type, std::string name) {
    Subst out = theta;
    out.terms.push_back(std::move(t));
    if (out.codomain) out.codomain = out.codomain->extended(std::move(name), std::move(type));
    return out;
}

Subst drop_last(const Subst& theta) {
    if (theta.terms.empty()) throw ArityError("drop_last: empty substitution");
    Subst out = theta;
    out.terms.pop_back();
    if (out.codomain) out.codomain = out.codomain->prefix(out.codomain->size() - 1);
    return out;
}

Telescope instantiate_telescope(const Telescope& tel, const std::vector<Term>& args) {
    // `tel` is scoped over args.size() binders followed by its own entries;
    // apply_subst on telescopes handles exactly that shape.
    return apply_subst(tel, args);
}

Term lookup_type(const Telescope& gamma, std::size_t index) {
    if (index >= gamma.size()) throw ArityError("lookup_type: unbound variable");
    const std::size_t level = gamma.size() - 1 - index;
    return shift(gamma[level].type, index + 1);
}

}  // namespace covertt
