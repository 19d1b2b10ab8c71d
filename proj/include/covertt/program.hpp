#pragma once

#include "covertt/signature.hpp"
#include "covertt/syntax.hpp"
#include "covertt/term.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace covertt {

struct DeclInfo {
    enum class Kind { Data, Def };
    Kind kind;
    std::string name;
    Span span;
};

/// A resolved source file: the signature plus declarations in file order.
struct Program {
    Signature sig;
    std::vector<DeclInfo> decls;
};

/// Resolves names against the declarations seen so far. Unknown names raise
/// TypeError(UnboundVariable); duplicate declarations raise SyntaxError.
Program elaborate(const SourceFile& file);

/// Resolves a term under local names listed outermost first.
Term resolve_term(const Signature& sig, const std::vector<std::string>& scope, const SPtr& e);

Program load_program(std::string_view text);

}  // namespace covertt
