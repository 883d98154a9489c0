#pragma once

#include "bvred/cdga.hpp"

namespace bvred {

// Structure constants f^c_{ab}, antisymmetric in the lower pair.
struct LieAlgebra {
    uint32_t dim = 0;
    std::vector<std::vector<std::vector<Rational>>> f; // f[a][b][c] = f^c_{ab}

    static LieAlgebra abelian(uint32_t dim);
    void set(uint32_t a, uint32_t b, uint32_t c, const Rational& v); // also sets -f^c_{ba}
    Rational at(uint32_t a, uint32_t b, uint32_t c) const;
    bool isAbelian() const;
};

// Validated input: fields, g-action, invariant potential, optional character
// and constraint map. All polynomial data lives over `base` (degree-0 fields).
struct GaugeSystem {
    std::string name;
    TablePtr base;                           // the x_i, degree 0
    std::vector<std::optional<int>> fieldWeights;
    LieAlgebra algebra;
    std::vector<std::vector<Element>> action; // action[a][i] = rho_a^i over base
    Element potential;                        // S over base
    std::vector<Rational> character;          // chi, size dim (zero default)

    struct Constraint {
        TablePtr yBase;                        // the y_j, degree 0
        std::vector<Element> components;       // p^j over the x-base
        std::vector<std::vector<Element>> yAction; // rho-bar[a][j] over yBase
    };
    std::optional<Constraint> constraint;

    uint32_t fieldCount() const { return uint32_t(base->size()); }
    Element rho(uint32_t a, const Element& e) const; // the vector field rho_a applied to e
};

GaugeSystem makeGaugeSystem(std::string name, std::vector<std::string> fields,
                            std::vector<std::optional<int>> weights, LieAlgebra g);

// Substitutes y_j -> images[j]; images live over any table.
Element substitute(const Element& overY, const TablePtr& targetTable,
                   const std::vector<Element>& images);

struct Violation {
    std::string identity; // e.g. "invariance violated: rho_1(S) = x1"
};

// Exact checks: antisymmetry, Jacobi, closure of the action, invariance of S,
// infinitesimal character condition, equivariance of the constraint.
std::vector<Violation> validateGaugeSystem(const GaugeSystem& gs);

} // namespace bvred
