#pragma once

#include "covertt/term.hpp"

#include <map>
#include <string>
#include <vector>

namespace covertt {

struct TyConDecl {
    std::string name;
    Telescope params;                   // closed
    std::vector<std::string> datacons;  // declaration order
    Span span;
};

struct DataConDecl {
    std::string name;
    std::string owner;
    Telescope fields;  // scoped over the owner's params
    Span span;
};

struct DefDecl {
    std::string name;
    Term type;
    Term body;
    Span span;
};

/// Top-level datatypes and definitions. Lookups throw std::out_of_range for
/// unknown names; use the `find_*` variants to probe.
class Signature {
public:
    void add_tycon(TyConDecl decl);
    void add_datacon(DataConDecl decl);  // owner must already be declared
    void add_def(DefDecl decl);

    const TyConDecl* find_tycon(const std::string& name) const;
    const DataConDecl* find_datacon(const std::string& name) const;
    const DefDecl* find_def(const std::string& name) const;

    const TyConDecl& tycon(const std::string& name) const;
    const DataConDecl& datacon(const std::string& name) const;
    const DefDecl& def(const std::string& name) const;

    bool has_name(const std::string& name) const;

    /// Declaration order.
    const std::vector<std::string>& tycon_order() const { return tycon_order_; }
    const std::vector<std::string>& def_order() const { return def_order_; }

    /// Total argument count of a data constructor (params + fields).
    std::size_t datacon_arity(const std::string& name) const;

private:
    std::map<std::string, TyConDecl> tycons_;
    std::map<std::string, DataConDecl> datacons_;
    std::map<std::string, DefDecl> defs_;
    std::vector<std::string> tycon_order_;
    std::vector<std::string> def_order_;
};

}  // namespace covertt
