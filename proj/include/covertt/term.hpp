#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace covertt {

/// Byte range in a source file. An empty span (begin == end == 0) marks a
/// synthesized node.
struct Span {
    std::size_t begin = 0;
    std::size_t end = 0;

    bool empty() const { return begin == 0 && end == 0; }
};

struct Node;
using Term = std::shared_ptr<const Node>;

/// A typed binder. `type` is scoped over all earlier entries of the telescope.
struct Entry {
    std::string name;
    Term type;
};

/// Dependency-ordered binders, most recent last.
struct Telescope {
    std::vector<Entry> entries;

    std::size_t size() const { return entries.size(); }
    bool empty() const { return entries.empty(); }
    const Entry& operator[](std::size_t level) const { return entries[level]; }

    /// Entries [0, n).
    Telescope prefix(std::size_t n) const;
    Telescope extended(std::string name, Term type) const;
    Telescope concat(const Telescope& rest) const;
};

/// Dependency-ordered terms inhabiting a telescope. `codomain` is filled in
/// once the substitution has been checked.
struct Subst {
    std::vector<Term> terms;
    std::optional<Telescope> codomain;

    std::size_t size() const { return terms.size(); }
    const Term& operator[](std::size_t i) const { return terms[i]; }
};

/// One clause of a match: pattern variables, a pattern into the scrutinee
/// telescope, and a body. Pattern and body are scoped over `tel` only.
struct Branch {
    Telescope tel;
    std::vector<Term> pattern;
    Term body;
};

// Variables are de Bruijn indices: Var{0} is the innermost binder. Over a
// telescope of length n, the entry at level l is Var{n - 1 - l}.
struct Var {
    std::size_t index;
};
struct Universe {};
struct Pi {
    std::string name;
    Term domain;
    Term codomain;  // binds one variable
};
struct Lam {
    std::string name;
    Term body;  // binds one variable
};
struct App {
    Term fun;
    Term arg;
};
struct Eq {
    Term type;
    Term lhs;
    Term rhs;
};
struct Refl {
    Term arg;
};
/// Type constructor applied to its parameters.
struct TyConApp {
    std::string name;
    std::vector<Term> args;
};
/// Data constructor applied to its owner's parameters followed by its fields.
struct DataConApp {
    std::string name;
    std::vector<Term> args;
};
/// Reference to a top-level definition.
struct Const {
    std::string name;
};
/// Motive is scoped over `tel`; branches are closed over their own telescopes.
struct Match {
    std::vector<Term> scrutinees;
    Telescope tel;
    Term motive;
    std::vector<Branch> branches;
};
/// Forced (dot) pattern position. Transparent everywhere except for clause
/// matching, where it is checked by conversion instead of being inspected.
struct Inacc {
    Term term;
};

using NodeData = std::variant<Var, Universe, Pi, Lam, App, Eq, Refl, TyConApp, DataConApp, Const,
                              Match, Inacc>;

struct Node {
    NodeData data;
    Span span;

    template <class T>
    const T* as() const {
        return std::get_if<T>(&data);
    }
    template <class T>
    bool is() const {
        return std::holds_alternative<T>(data);
    }
};

// Constructors -------------------------------------------------------------

Term make(NodeData data, Span span = {});
Term var(std::size_t index, Span span = {});
Term universe(Span span = {});
Term pi(std::string name, Term domain, Term codomain, Span span = {});
Term arrow(Term domain, Term codomain);
Term lam(std::string name, Term body, Span span = {});
Term app(Term fun, Term arg, Span span = {});
Term apps(Term fun, const std::vector<Term>& args);
Term eq(Term type, Term lhs, Term rhs, Span span = {});
Term refl(Term arg, Span span = {});
Term tycon(std::string name, std::vector<Term> args = {}, Span span = {});
Term datacon(std::string name, std::vector<Term> args = {}, Span span = {});
Term constant(std::string name, Span span = {});
Term match(std::vector<Term> scrutinees, Telescope tel, Term motive, std::vector<Branch> branches,
           Span span = {});
Term inacc(Term term, Span span = {});

/// Same node with a different span.
Term with_span(const Term& t, Span span);

/// Strips any Inacc wrappers at the head.
const Term& unwrap_inacc(const Term& t);

// Structure ----------------------------------------------------------------

/// Syntactic equality up to binder names, spans and Inacc markers. Since
/// variables are nameless this is alpha-equivalence.
bool alpha_eq(const Term& a, const Term& b);
bool alpha_eq(const std::vector<Term>& a, const std::vector<Term>& b);
bool alpha_eq(const Telescope& a, const Telescope& b);

/// Adds `by` to every variable index >= cutoff.
Term shift(const Term& t, std::size_t by, std::size_t cutoff = 0);

/// Subtracts `by` from every variable index >= cutoff; nullopt if a variable
/// in [cutoff, cutoff + by) occurs.
std::optional<Term> strengthen(const Term& t, std::size_t by, std::size_t cutoff = 0);

/// Replaces Var{0} by `arg` and lowers the remaining free variables.
Term subst_top(const Term& body, const Term& arg);

/// Whether Var{index} occurs free in t.
bool occurs(const Term& t, std::size_t index);

/// Free variables of a term scoped over a telescope of length `scope`, as
/// levels. Variables outside the scope are ignored.
std::vector<bool> free_levels(const Term& t, std::size_t scope);

/// Largest free variable index + 1 (0 for closed terms).
std::size_t free_bound(const Term& t);

/// Identity substitution on a telescope of length n: Var{n-1}, ..., Var{0}.
std::vector<Term> identity_terms(std::size_t n);

/// Var referring to `level` in a scope of length `scope`.
Term level_var(std::size_t scope, std::size_t level);

/// Whether the term is a Var, a constructor application, or Refl.
bool is_rigid(const Term& t);

}  // namespace covertt
