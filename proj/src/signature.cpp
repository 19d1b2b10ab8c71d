#include "covertt/signature.hpp"

#include <stdexcept>

namespace covertt {

void Signature::add_tycon(TyConDecl decl) {
    if (has_name(decl.name)) throw std::invalid_argument("duplicate declaration: " + decl.name);
    tycon_order_.push_back(decl.name);
    auto name = decl.name;
    tycons_.emplace(std::move(name), std::move(decl));
}

void Signature::add_datacon(DataConDecl decl) {
    if (has_name(decl.name)) throw std::invalid_argument("duplicate declaration: " + decl.name);
    auto it = tycons_.find(decl.owner);
    if (it == tycons_.end()) throw std::invalid_argument("unknown datatype: " + decl.owner);
    it->second.datacons.push_back(decl.name);
    auto name = decl.name;
    datacons_.emplace(std::move(name), std::move(decl));
}

void Signature::add_def(DefDecl decl) {
    if (has_name(decl.name)) throw std::invalid_argument("duplicate declaration: " + decl.name);
    def_order_.push_back(decl.name);
    auto name = decl.name;
    defs_.emplace(std::move(name), std::move(decl));
}

const TyConDecl* Signature::find_tycon(const std::string& name) const {
    auto it = tycons_.find(name);
    return it == tycons_.end() ? nullptr : &it->second;
}

const DataConDecl* Signature::find_datacon(const std::string& name) const {
    auto it = datacons_.find(name);
    return it == datacons_.end() ? nullptr : &it->second;
}

const DefDecl* Signature::find_def(const std::string& name) const {
    auto it = defs_.find(name);
    return it == defs_.end() ? nullptr : &it->second;
}

const TyConDecl& Signature::tycon(const std::string& name) const { return tycons_.at(name); }
const DataConDecl& Signature::datacon(const std::string& name) const { return datacons_.at(name); }
const DefDecl& Signature::def(const std::string& name) const { return defs_.at(name); }

bool Signature::has_name(const std::string& name) const {
    return tycons_.count(name) || datacons_.count(name) || defs_.count(name);
}

std::size_t Signature::datacon_arity(const std::string& name) const {
    const auto& d = datacon(name);
    return tycon(d.owner).params.size() + d.fields.size();
}

}  // namespace covertt
