#include "bvred/table.hpp"

#include <unordered_set>

namespace bvred {

const char* flavorName(Flavor f) {
    switch (f) {
    case Flavor::Field: return "field";
    case Flavor::Antifield: return "antifield";
    case Flavor::Ghost: return "ghost";
    case Flavor::Antighost: return "antighost";
    case Flavor::Multiplier: return "multiplier";
    case Flavor::Fiber: return "fiber";
    case Flavor::FormSymbol: return "form-symbol";
    }
    return "?";
}

GeneratorTable::GeneratorTable(std::vector<Generator> gens) : gens_(std::move(gens)) {
    std::unordered_set<std::string> seen;
    for (const auto& g : gens_) {
        if (g.name.empty())
            throw Error("generator with empty name");
        if (!seen.insert(g.name).second)
            throw Error("duplicate generator name: " + g.name);
    }
    for (const auto& g : gens_) {
        if (g.conjugate && *g.conjugate >= gens_.size())
            throw Error("conjugate index out of range for " + g.name);
    }
}

uint32_t GeneratorTable::index(const std::string& name) const {
    auto i = tryIndex(name);
    if (!i)
        throw Error("unknown generator name: " + name);
    return *i;
}

std::optional<uint32_t> GeneratorTable::tryIndex(const std::string& name) const {
    for (uint32_t i = 0; i < gens_.size(); ++i)
        if (gens_[i].name == name)
            return i;
    return std::nullopt;
}

bool GeneratorTable::hasWeights() const {
    for (const auto& g : gens_)
        if (!g.weight)
            return false;
    return !gens_.empty();
}

TablePtr makeTable(std::vector<Generator> gens) {
    return std::make_shared<const GeneratorTable>(std::move(gens));
}

} // namespace bvred
