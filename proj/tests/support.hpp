#pragma once

#include "covertt/program.hpp"
#include "covertt/syntax.hpp"

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace covertt::test {

inline std::string corpus_path(const std::string& rel) { return std::string(COVERTT_CORPUS) + "/" + rel; }
inline std::string golden_path(const std::string& rel) { return std::string(COVERTT_GOLDEN) + "/" + rel; }

inline std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline Program load_corpus(const std::string& rel) { return load_program(slurp(corpus_path(rel))); }

inline const std::vector<std::string>& accepted_corpus() {
    static const std::vector<std::string> files = {"bool.ctt", "eq.ctt",  "foldr1.ctt",
                                                   "nat.ctt",  "sum.ctt", "vec.ctt"};
    return files;
}

/// Resolves a surface term under local names, outermost first.
inline Term term_of(const Signature& sig, const std::vector<std::string>& scope, const std::string& text) {
    return resolve_term(sig, scope, parse_term(text));
}

/// Builds a telescope from (name, type text) pairs.
inline Telescope tel_of(const Signature& sig, const std::vector<std::pair<std::string, std::string>>& entries) {
    Telescope tel;
    std::vector<std::string> scope;
    for (const auto& [name, ty] : entries) {
        tel = tel.extended(name, term_of(sig, scope, ty));
        scope.push_back(name);
    }
    return tel;
}

inline std::vector<std::string> names_of(const Telescope& tel) {
    std::vector<std::string> out;
    for (const auto& e : tel.entries) out.push_back(e.name);
    return out;
}

}  // namespace covertt::test
