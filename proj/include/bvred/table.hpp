#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace bvred {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Flavor {
    Field,      // degree 0 coordinates
    Antifield,  // Koszul generators (xi)
    Ghost,      // Chevalley generators (c)
    Antighost,  // Tate generators (t)
    Multiplier, // Lagrange multipliers / fiber coordinates of a constraint target
    Fiber,      // cotangent-fiber conjugates at general shift
    FormSymbol, // de Rham symbols (delta g)
};

const char* flavorName(Flavor f);

struct Generator {
    std::string name;
    int degree = 0;
    Flavor flavor = Flavor::Field;
    std::optional<int> weight;    // auxiliary weight, if declared
    int formWeight = 0;           // 1 for de Rham symbols
    std::optional<uint32_t> conjugate; // index of the conjugate partner
    bool starConj = false;             // true on the adjoined-conjugate slot
};

// Ordered list of generators; the declaration order is the canonical
// monomial order. Immutable after construction.
class GeneratorTable {
  public:
    explicit GeneratorTable(std::vector<Generator> gens);

    size_t size() const { return gens_.size(); }
    const Generator& gen(uint32_t i) const { return gens_.at(i); }
    const std::vector<Generator>& gens() const { return gens_; }

    uint32_t index(const std::string& name) const;
    std::optional<uint32_t> tryIndex(const std::string& name) const;
    bool odd(uint32_t i) const { return (gens_[i].degree & 1) != 0; }

    bool hasWeights() const;

  private:
    std::vector<Generator> gens_;
};

using TablePtr = std::shared_ptr<const GeneratorTable>;

TablePtr makeTable(std::vector<Generator> gens);

} // namespace bvred
