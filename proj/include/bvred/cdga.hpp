#pragma once

#include "bvred/element.hpp"

namespace bvred {

// Degree-homogeneous derivation, determined by its values on generators and
// extended by the left Leibniz rule (signs.hpp rule 3).
struct Derivation {
    TablePtr table;
    int degree = 0;
    std::vector<Element> onGen;

    static Derivation zero(TablePtr t, int degree);
    void set(uint32_t gen, Element value);
    const Element& at(uint32_t gen) const { return onGen.at(gen); }
};

Element applyDerivation(const Derivation& D, const Element& a);

// Left partial with dL_g(h) = delta_{gh}; degree -|g|.
Element partialLeft(uint32_t g, const Element& a);
// Right partial, per homogeneous component: (-1)^{|g|(|a|+1)} dL_g(a).
Element partialRight(uint32_t g, const Element& a);

// Graded commutator [D1,D2] = D1 D2 - (-1)^{deg1 deg2} D2 D1 on generators.
Derivation commutator(const Derivation& a, const Derivation& b);

struct SemiFreeCdga {
    TablePtr table;
    Derivation d; // degree +1

    Element gen(uint32_t i) const { return Element::generator(table, i); }
    Element gen(const std::string& name) const { return gen(table->index(name)); }
};

struct DifferentialCert {
    bool pass = false;
    std::optional<uint32_t> generator; // first failing generator
    Element residue;                   // d(d(generator))
};

// pass iff d(d(g)) = 0 for all generators (d o d is a derivation, so this
// suffices); also rejects inhomogeneous or weight-inhomogeneous values.
DifferentialCert checkDifferential(const SemiFreeCdga& A);

struct CdgaMorphism {
    std::shared_ptr<const SemiFreeCdga> source;
    std::shared_ptr<const SemiFreeCdga> target;
    std::vector<Element> onGen; // indexed by source generators

    const Element& at(uint32_t g) const { return onGen.at(g); }
};

Element applyMorphism(const CdgaMorphism& f, const Element& a);

struct ChainMapCert {
    bool pass = false;
    std::optional<uint32_t> generator;
    Element residue; // f(d g) - d f(g)
};

ChainMapCert checkChainMap(const CdgaMorphism& f);

// Generator-matching morphism by name; every source generator must exist in
// the target with the same degree.
CdgaMorphism generatorMatching(std::shared_ptr<const SemiFreeCdga> source,
                               std::shared_ptr<const SemiFreeCdga> target);

CdgaMorphism identityMorphism(std::shared_ptr<const SemiFreeCdga> A);
CdgaMorphism compose(const CdgaMorphism& g, const CdgaMorphism& f); // g after f

} // namespace bvred
