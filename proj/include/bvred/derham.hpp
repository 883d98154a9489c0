#pragma once

#include "bvred/homology.hpp"

namespace bvred {

// Mixed de Rham complex of a semi-free cdga: one form symbol d(g) of degree
// |g|+1 and form-weight 1 per base generator, internal differential extended
// by d(d(g)) = -delta(d g), mixed differential delta of degree +1 and
// form-weight +1 (signs.hpp rule 6).
struct DeRhamAlgebra {
    std::shared_ptr<const SemiFreeCdga> base;
    std::shared_ptr<const SemiFreeCdga> total; // base generators then form symbols
    Derivation delta;

    uint32_t symbolOf(uint32_t baseGen) const { return uint32_t(base->table->size()) + baseGen; }
    bool isSymbol(uint32_t totalGen) const { return totalGen >= base->table->size(); }

    Element promote(const Element& baseElem) const; // base -> total
    Element applyDelta(const Element& a) const { return applyDerivation(delta, a); }
    Element applyD(const Element& a) const { return applyDerivation(total->d, a); }
};

std::shared_ptr<const DeRhamAlgebra> buildDeRham(std::shared_ptr<const SemiFreeCdga> A);

// A closed p-form of degree n: components (w_p, ..., w_q), w_i of form-weight
// i, every component in total cohomological degree n+p, with d w_p = 0,
// delta w_i + d w_{i+1} = 0, delta w_q = 0.
struct ClosedFormSequence {
    std::shared_ptr<const DeRhamAlgebra> dr;
    int weightStart = 2; // p
    int shift = 0;       // n
    std::vector<Element> components;

    const Element& bottom() const { return components.at(0); }
};

struct CocycleCert {
    bool pass = false;
    std::string failure; // human-readable location of the first bad component
    Element residue;
};

CocycleCert checkClosed(const ClosedFormSequence& f);

// Constant-coefficient pairing criterion for nondegeneracy. The full derived
// nondegeneracy condition is out of scope; forms with a non-constant 2-symbol
// part are rejected as unsupported.
struct SymplecticCert {
    bool pass = false;
    std::string failure;
    ClosedFormSequence form;
    // (baseGen u, baseGen v) -> coefficient of d(u) d(v) in the bottom form
    std::vector<std::tuple<uint32_t, uint32_t, Rational>> pairing;
};

SymplecticCert checkSymplectic(const ClosedFormSequence& f, int shift);

// lambda = sum_g gv d(g) over paired base slots; omega = delta(lambda).
struct TautologicalForms {
    Element lambda;
    SymplecticCert omega;
};

// `pairs` maps plain-slot generator -> conjugate; both live in dr->base.
TautologicalForms tautologicalForms(std::shared_ptr<const DeRhamAlgebra> dr, int shift);

// Extends a base morphism to the de Rham algebras: d(g) -> delta(phi(g)).
CdgaMorphism extendToForms(const DeRhamAlgebra& src, const DeRhamAlgebra& tgt,
                           const CdgaMorphism& phi);

// Pullback with the cocycle condition re-checked, never assumed.
ClosedFormSequence pullbackForm(const CdgaMorphism& phi,
                                std::shared_ptr<const DeRhamAlgebra> srcDr,
                                std::shared_ptr<const DeRhamAlgebra> tgtDr,
                                const ClosedFormSequence& f);

struct IsotropyCert {
    bool pass = false;
    std::string failure;
    std::vector<Element> primitive; // components h_2, h_3, ... over the target DR
    Element residue;
};

// Verifies (d+delta)h = pulled componentwise; when h is absent tries h = 0,
// then a windowed linear solve weight by weight.
IsotropyCert checkIsotropy(const CdgaMorphism& phi,
                           std::shared_ptr<const DeRhamAlgebra> ambientDr,
                           std::shared_ptr<const DeRhamAlgebra> legDr,
                           const ClosedFormSequence& omega,
                           const std::optional<std::vector<Element>>& h = {});

// Exact polynomial test d_i alpha_j = d_j alpha_i on a degree-0 base.
bool closedOneFormCheck(const SemiFreeCdga& base, const std::vector<Element>& alpha);

// Euler contraction: on delta-closed input of positive generator count,
// returns P with delta(P) = input (char 0).
std::optional<Element> deltaPrimitive(const DeRhamAlgebra& dr, const Element& closed);

} // namespace bvred
