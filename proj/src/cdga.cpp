#include "bvred/cdga.hpp"

namespace bvred {

Derivation Derivation::zero(TablePtr t, int degree) {
    Derivation d;
    d.degree = degree;
    d.onGen.assign(t->size(), Element(t));
    d.table = std::move(t);
    return d;
}

void Derivation::set(uint32_t gen, Element value) {
    if (!value.zero()) {
        auto dv = value.degree();
        if (!dv)
            throw Error("derivation value must be degree-homogeneous on " + table->gen(gen).name);
        if (*dv != table->gen(gen).degree + degree)
            throw Error("derivation value has wrong degree on " + table->gen(gen).name);
    }
    onGen.at(gen) = std::move(value);
}

Element applyDerivation(const Derivation& D, const Element& a) {
    if (D.table.get() != a.table().get())
        throw Error("derivation applied across tables");
    const auto& t = *D.table;
    Element out(a.table());
    for (const auto& [m, q] : a.terms()) {
        int prefixDeg = 0;
        for (size_t j = 0; j < m.factors.size(); ++j) {
            auto [g, e] = m.factors[j];
            const Element& Dg = D.onGen[g];
            if (!Dg.zero()) {
                int sign = ((D.degree & 1) && (prefixDeg & 1)) ? -1 : 1;
                Monomial left, right;
                for (size_t l = 0; l < j; ++l)
                    left.factors.push_back(m.factors[l]);
                if (e > 1)
                    left.factors.emplace_back(g, e - 1);
                for (size_t l = j + 1; l < m.factors.size(); ++l)
                    right.factors.push_back(m.factors[l]);
                Element term =
                    Element::monomial(a.table(), left, q * int(e) * sign) * Dg *
                    Element::monomial(a.table(), right, 1);
                out = out + term;
            }
            prefixDeg += t.gen(g).degree * int(e);
        }
    }
    return out;
}

Element partialLeft(uint32_t g, const Element& a) {
    if (!a.table())
        return a;
    Derivation D = Derivation::zero(a.table(), -a.table()->gen(g).degree);
    D.set(g, Element(a.table(), 1));
    return applyDerivation(D, a);
}

Element partialRight(uint32_t g, const Element& a) {
    if (!a.table() || a.zero())
        return a;
    const int dg = a.table()->gen(g).degree;
    Element out(a.table());
    for (int deg : a.degreesPresent()) {
        Element part = partialLeft(g, a.component(deg));
        int sign = ((dg & 1) && ((deg + 1) & 1)) ? -1 : 1;
        out = out + part * Rational(sign);
    }
    return out;
}

Derivation commutator(const Derivation& a, const Derivation& b) {
    if (a.table.get() != b.table.get())
        throw Error("commutator across tables");
    Derivation out = Derivation::zero(a.table, a.degree + b.degree);
    int sign = ((a.degree & 1) && (b.degree & 1)) ? -1 : 1;
    for (uint32_t g = 0; g < a.table->size(); ++g) {
        Element v = applyDerivation(a, b.onGen[g]) -
                    Rational(sign) * applyDerivation(b, a.onGen[g]);
        out.set(g, std::move(v));
    }
    return out;
}

DifferentialCert checkDifferential(const SemiFreeCdga& A) {
    DifferentialCert cert;
    const auto& t = *A.table;
    for (uint32_t g = 0; g < t.size(); ++g) {
        const Element& dg = A.d.onGen[g];
        if (!dg.zero() && t.hasWeights()) {
            // weight homogeneity of weight 0
            for (const auto& [m, c] : dg.terms()) {
                if (monomialWeight(t, m) != *t.gen(g).weight) {
                    cert.generator = g;
                    cert.residue = dg;
                    return cert;
                }
            }
        }
        Element dd = applyDerivation(A.d, dg);
        if (!dd.zero()) {
            cert.generator = g;
            cert.residue = std::move(dd);
            return cert;
        }
    }
    cert.pass = true;
    return cert;
}

Element applyMorphism(const CdgaMorphism& f, const Element& a) {
    const TablePtr& tgt = f.target->table;
    Element out(tgt);
    for (const auto& [m, q] : a.terms()) {
        Element prod(tgt, q);
        for (const auto& [g, e] : m.factors) {
            for (uint32_t k = 0; k < e; ++k)
                prod = prod * f.onGen.at(g);
            if (prod.zero())
                break;
        }
        out = out + prod;
    }
    return out;
}

ChainMapCert checkChainMap(const CdgaMorphism& f) {
    ChainMapCert cert;
    const auto& src = *f.source;
    for (uint32_t g = 0; g < src.table->size(); ++g) {
        const Element& img = f.onGen.at(g);
        if (!img.zero()) {
            auto dv = img.degree();
            if (!dv || *dv != src.table->gen(g).degree) {
                cert.generator = g;
                cert.residue = img;
                return cert;
            }
        }
        Element lhs = applyMorphism(f, src.d.onGen[g]);
        Element rhs = applyDerivation(f.target->d, img);
        Element res = lhs - rhs;
        if (!res.zero()) {
            cert.generator = g;
            cert.residue = std::move(res);
            return cert;
        }
    }
    cert.pass = true;
    return cert;
}

CdgaMorphism generatorMatching(std::shared_ptr<const SemiFreeCdga> source,
                               std::shared_ptr<const SemiFreeCdga> target) {
    CdgaMorphism f;
    f.source = std::move(source);
    f.target = std::move(target);
    for (uint32_t g = 0; g < f.source->table->size(); ++g) {
        const auto& gen = f.source->table->gen(g);
        uint32_t tg = f.target->table->index(gen.name);
        if (f.target->table->gen(tg).degree != gen.degree)
            throw Error("generator-matching degree mismatch at " + gen.name);
        f.onGen.push_back(Element::generator(f.target->table, tg));
    }
    return f;
}

CdgaMorphism identityMorphism(std::shared_ptr<const SemiFreeCdga> A) {
    return generatorMatching(A, A);
}

CdgaMorphism compose(const CdgaMorphism& g, const CdgaMorphism& f) {
    if (f.target->table.get() != g.source->table.get())
        throw Error("compose: mismatched middle model");
    CdgaMorphism out;
    out.source = f.source;
    out.target = g.target;
    for (const Element& img : f.onGen)
        out.onGen.push_back(applyMorphism(g, img));
    return out;
}

} // namespace bvred
