#pragma once

#include "covertt/coverage.hpp"
#include "covertt/signature.hpp"
#include "covertt/term.hpp"

#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace covertt::model {

struct Value;
using VPtr = std::shared_ptr<const Value>;
using Env = std::vector<VPtr>;  // one value per telescope entry, level order

/// Element of the finite set model. Type codes (Universe, TyCon, EqTy, PiTy)
/// are values too, since Type is interpreted as a small palette of codes.
struct Value {
    enum class Kind { Universe, TyCon, EqTy, PiTy, Con, Refl, Fun, Closure };
    Kind kind;
    std::string name;                           // TyCon, Con
    std::vector<VPtr> args;                     // TyCon params, Con fields, EqTy {type, lhs, rhs}, PiTy {domain}
    std::vector<std::pair<VPtr, VPtr>> graph;   // Fun
    Env env;                                    // PiTy codomain, Closure body
    Term body;
    std::string key;                            // canonical printed form; equal values have equal keys
};

struct Bound {
    std::size_t max_depth = 3;  // constructor nesting
    std::size_t max_fun = 64;   // largest function space enumerated in full
    /// Past max_fun, sample "constant" choice functions instead of failing.
    bool sample_functions = true;
};

class OracleError : public std::runtime_error {
public:
    enum class Kind { FunctionSpaceTooLarge, BoundExceeded, NoSemanticBranch, ConflictingBranches, Unsupported };
    OracleError(Kind kind, const std::string& msg) : std::runtime_error(msg), kind(kind) {}
    Kind kind;
};

bool equal(const VPtr& a, const VPtr& b);
std::string show(const VPtr& v);
std::string show(const Env& env);

/// Copy of `sig` with Bool, Unit and Empty declared if missing.
Signature with_palette(const Signature& sig);

class Model {
public:
    Model(const Signature& sig, Bound bound);

    const Signature& signature() const { return sig_; }
    const Bound& bound() const { return bound_; }

    /// All environments of a closed telescope (or one extending `prefix`),
    /// within the bound, in deterministic order. Returned environments
    /// include the prefix.
    std::vector<Env> enum_telescope(const Telescope& tel, const Env& prefix = {});
    /// Inhabitants of a type code with constructor depth at most `depth`.
    const std::vector<VPtr>& enum_type(const VPtr& code, std::size_t depth);

    VPtr eval(const Env& env, const Term& t);
    Env eval_all(const Env& env, const std::vector<Term>& ts);
    VPtr apply(const VPtr& f, const VPtr& x);

    /// Closed term denoting `v` at type `code`. Functions are not reifiable.
    Term reify(const VPtr& v, const VPtr& code);
    Term reify_code(const VPtr& code);
    /// Closed terms for an environment of a closed telescope.
    std::vector<Term> reify_env(const Telescope& tel, const Env& env);

    /// Solution of a match branch for the given scrutinee values, if the
    /// branch pattern denotes them.
    std::optional<Env> invert(const Branch& br, const Env& scrutinee);

private:
    std::vector<Env> enum_entries(const Telescope& tel, const Env& prefix, std::size_t depth);
    std::vector<VPtr> enum_functions(const VPtr& code, std::size_t depth);
    VPtr eval_match(const Env& env, const Match& m);

    Signature sig_;
    Bound bound_;
    std::map<std::string, std::vector<VPtr>> cache_;
    std::map<std::string, VPtr> defs_;
};

// Value constructors.
VPtr v_universe();
VPtr v_tycon(std::string name, std::vector<VPtr> params);
VPtr v_con(std::string name, std::vector<VPtr> fields);
VPtr v_refl();

struct SemanticReport {
    bool covering = true;
    bool disjoint = true;
    std::size_t environments = 0;
    std::vector<Env> uncovered;
    std::vector<Env> overlapping;
};

/// Counts, for every environment of Ξ, the leaf instantiations landing on it.
SemanticReport check_cover_semantic(Model& m, const Telescope& xi, const std::vector<CoverLeaf>& leaves);

/// Per-leaf table from leaf environments (by key) to values.
using BranchTable = std::map<std::string, VPtr>;

/// The function on ⟦Ξ⟧ that restricts to each table along its leaf pattern,
/// as (environment, value) pairs in enumeration order.
std::vector<std::pair<Env, VPtr>> amalgamate(Model& m, const Telescope& xi,
                                             const std::vector<CoverLeaf>& leaves,
                                             const std::vector<BranchTable>& tables);

// Convenience forms over a fresh model.
std::vector<Env> enum_telescope(const Signature& sig, const Telescope& tel, Bound bound = {});
VPtr eval(const Signature& sig, const Env& env, const Term& t, Bound bound = {});
SemanticReport check_cover_semantic(const Signature& sig, const Telescope& xi,
                                    const std::vector<CoverLeaf>& leaves, Bound bound = {});

}  // namespace covertt::model
