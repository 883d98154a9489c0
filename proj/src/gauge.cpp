#include "bvred/gauge.hpp"

namespace bvred {

LieAlgebra LieAlgebra::abelian(uint32_t dim) {
    LieAlgebra g;
    g.dim = dim;
    g.f.assign(dim, std::vector<std::vector<Rational>>(dim, std::vector<Rational>(dim, Rational(0))));
    return g;
}

void LieAlgebra::set(uint32_t a, uint32_t b, uint32_t c, const Rational& v) {
    f.at(a).at(b).at(c) = v;
    f.at(b).at(a).at(c) = -v;
}

Rational LieAlgebra::at(uint32_t a, uint32_t b, uint32_t c) const {
    return f.at(a).at(b).at(c);
}

bool LieAlgebra::isAbelian() const {
    for (const auto& pa : f)
        for (const auto& pb : pa)
            for (const auto& v : pb)
                if (v != 0)
                    return false;
    return true;
}

GaugeSystem makeGaugeSystem(std::string name, std::vector<std::string> fields,
                            std::vector<std::optional<int>> weights, LieAlgebra g) {
    GaugeSystem gs;
    gs.name = std::move(name);
    std::vector<Generator> gens;
    for (size_t i = 0; i < fields.size(); ++i) {
        Generator gen;
        gen.name = fields[i];
        gen.degree = 0;
        gen.flavor = Flavor::Field;
        if (i < weights.size())
            gen.weight = weights[i];
        gens.push_back(gen);
    }
    gs.base = makeTable(std::move(gens));
    gs.fieldWeights = std::move(weights);
    gs.fieldWeights.resize(fields.size());
    gs.potential = Element(gs.base);
    gs.character.assign(g.dim, Rational(0));
    gs.action.assign(g.dim, std::vector<Element>(gs.base->size(), Element(gs.base)));
    gs.algebra = std::move(g);
    return gs;
}

Element GaugeSystem::rho(uint32_t a, const Element& e) const {
    Derivation d = Derivation::zero(base, 0);
    for (uint32_t i = 0; i < base->size(); ++i)
        d.set(i, action.at(a).at(i));
    return applyDerivation(d, e);
}

Element substitute(const Element& overY, const TablePtr& targetTable,
                   const std::vector<Element>& images) {
    Element out(targetTable);
    for (const auto& [m, c] : overY.terms()) {
        Element prod(targetTable, c);
        for (const auto& [g, e] : m.factors)
            for (uint32_t k = 0; k < e; ++k)
                prod = prod * images.at(g);
        out = out + prod;
    }
    return out;
}

std::vector<Violation> validateGaugeSystem(const GaugeSystem& gs) {
    std::vector<Violation> out;
    const uint32_t m = gs.algebra.dim;
    const uint32_t n = gs.fieldCount();

    for (uint32_t a = 0; a < m; ++a)
        for (uint32_t b = 0; b < m; ++b)
            for (uint32_t c = 0; c < m; ++c)
                if (gs.algebra.at(a, b, c) != -gs.algebra.at(b, a, c)) {
                    out.push_back({"structure constants not antisymmetric at f^" +
                                   std::to_string(c + 1) + "_{" + std::to_string(a + 1) +
                                   "," + std::to_string(b + 1) + "}"});
                    return out;
                }

    // Jacobi: sum_d f^d_{ab} f^e_{dc} + cyclic = 0
    for (uint32_t a = 0; a < m; ++a)
        for (uint32_t b = a + 1; b < m; ++b)
            for (uint32_t c = b + 1; c < m; ++c)
                for (uint32_t e = 0; e < m; ++e) {
                    Rational s = 0;
                    for (uint32_t d = 0; d < m; ++d)
                        s += gs.algebra.at(a, b, d) * gs.algebra.at(d, c, e) +
                             gs.algebra.at(b, c, d) * gs.algebra.at(d, a, e) +
                             gs.algebra.at(c, a, d) * gs.algebra.at(d, b, e);
                    if (s != 0) {
                        out.push_back({"Jacobi identity violated at (a,b,c,e)=(" +
                                       std::to_string(a + 1) + "," + std::to_string(b + 1) +
                                       "," + std::to_string(c + 1) + "," +
                                       std::to_string(e + 1) + "): residue " + s.str()});
                    }
                }

    // closure: [rho_a, rho_b]^i = sum_c f^c_{ab} rho_c^i
    for (uint32_t a = 0; a < m; ++a)
        for (uint32_t b = a + 1; b < m; ++b)
            for (uint32_t i = 0; i < n; ++i) {
                Element lhs = gs.rho(a, gs.action[b][i]) - gs.rho(b, gs.action[a][i]);
                Element rhs(gs.base);
                for (uint32_t c = 0; c < m; ++c)
                    rhs = rhs + gs.action[c][i] * gs.algebra.at(a, b, c);
                Element res = lhs - rhs;
                if (!res.zero())
                    out.push_back({"closure violated: [rho_" + std::to_string(a + 1) +
                                   ", rho_" + std::to_string(b + 1) + "] - f*rho at " +
                                   gs.base->gen(i).name + " = " + res.str()});
            }

    for (uint32_t a = 0; a < m; ++a) {
        Element res = gs.rho(a, gs.potential);
        if (!res.zero())
            out.push_back({"invariance violated: rho_" + std::to_string(a + 1) +
                           "(S) = " + res.str()});
    }

    for (uint32_t a = 0; a < m; ++a)
        for (uint32_t b = 0; b < m; ++b) {
            Rational s = 0;
            for (uint32_t c = 0; c < m; ++c)
                s += gs.algebra.at(a, b, c) * gs.character.at(c);
            if (s != 0) {
                out.push_back({"character condition violated: sum_c f^c_{" +
                               std::to_string(a + 1) + "," + std::to_string(b + 1) +
                               "} chi_c = " + s.str()});
            }
        }

    if (gs.constraint) {
        const auto& cons = *gs.constraint;
        for (uint32_t a = 0; a < m; ++a)
            for (uint32_t j = 0; j < cons.components.size(); ++j) {
                Element lhs = gs.rho(a, cons.components[j]);
                Element rhs = substitute(cons.yAction.at(a).at(j), gs.base, cons.components);
                Element res = lhs - rhs;
                if (!res.zero())
                    out.push_back({"equivariance violated: rho_" + std::to_string(a + 1) +
                                   "(p^" + std::to_string(j + 1) + ") - rhobar(p) = " +
                                   res.str()});
            }
    }
    return out;
}

} // namespace bvred
