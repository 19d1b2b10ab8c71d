#pragma once

#include "covertt/coverage.hpp"
#include "covertt/signature.hpp"

#include <exception>
#include <string>
#include <string_view>

#include "json.hpp"

namespace covertt {

/// One user-facing error. `rule` names the typing or coverage rule that
/// failed, when there is one.
struct Diagnostic {
    std::string severity = "error";
    std::string kind;
    std::string message;
    Span span;
    std::string rule;
    std::string decl;
};

/// Converts a SyntaxError, TypeError, FuelExhausted or signature error.
Diagnostic diagnose(const std::exception& e, const Signature* sig);

/// "path:line:col: error: Kind: message [rule]"
std::string format_diagnostic(const std::string& path, std::string_view text, const Diagnostic& d);

/// 1-based line and column of a byte offset.
std::pair<std::size_t, std::size_t> line_col(std::string_view text, std::size_t offset);

/// Short description of a rule's role in a derivation.
const char* rule_tag(CoverRule r);

std::string describe(const Signature& sig, const CoverError& err);

/// Indented derivation, one node per line.
std::string explain(const Signature& sig, const CoverTree& tree);

nlohmann::json cover_json(const Signature& sig, const CoverTree& tree);

}  // namespace covertt
