#pragma once

#include "covertt/coverage.hpp"
#include "covertt/setmodel.hpp"
#include "covertt/signature.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace covertt {

/// A match occurring in a definition, with the context its scrutinees are
/// scoped over.
struct MatchSite {
    std::string def;
    std::size_t index = 0;  // among the definition's matches, in traversal order
    Telescope context;
    Term term;  // a Match node
};

/// Matches in a definition's type and body. Lambdas are typed from the
/// declared Pi type; matches under untyped binders are skipped.
std::vector<MatchSite> match_sites(const Signature& sig, const std::string& def,
                                   std::size_t fuel = kDefaultFuel);

std::vector<Clause> clauses_of(const Match& m);

/// The match re-scoped over its own scrutinee telescope.
Term generic_match(const Match& m);

struct OracleSiteReport {
    std::string def;
    std::size_t index = 0;
    bool cover_ok = false;
    std::string cover_error;
    model::SemanticReport semantic;
    std::size_t agreement_checked = 0;  // eval(match) vs amalgamation
    std::size_t agreement_failed = 0;
    std::size_t normalizer_checked = 0;  // eval(match) vs eval(normalize(match[env]))
    std::size_t normalizer_failed = 0;
    std::size_t normalizer_skipped = 0;  // environments holding functions
    std::vector<std::string> failures;
};

OracleSiteReport oracle_site(model::Model& m, const MatchSite& site, std::size_t fuel = kDefaultFuel);

/// Entry point of the command-line tool. Returns the exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace covertt
