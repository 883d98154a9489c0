#include "bvred/derham.hpp"

#include "bvred/antibracket.hpp"

#include <algorithm>

namespace bvred {

Element DeRhamAlgebra::promote(const Element& baseElem) const {
    return remapByName(baseElem, total->table);
}

std::shared_ptr<const DeRhamAlgebra> buildDeRham(std::shared_ptr<const SemiFreeCdga> A) {
    const auto& bt = *A->table;
    std::vector<Generator> gens = bt.gens();
    for (uint32_t i = 0; i < bt.size(); ++i) {
        Generator s;
        s.name = "d(" + bt.gen(i).name + ")";
        s.degree = bt.gen(i).degree + 1;
        s.flavor = Flavor::FormSymbol;
        s.weight = bt.gen(i).weight;
        s.formWeight = 1;
        gens.push_back(s);
    }
    auto dr = std::make_shared<DeRhamAlgebra>();
    dr->base = std::move(A);
    auto tt = makeTable(std::move(gens));
    const uint32_t n = uint32_t(bt.size());

    dr->delta = Derivation::zero(tt, 1);
    for (uint32_t i = 0; i < n; ++i)
        dr->delta.set(i, Element::generator(tt, n + i));

    auto total = std::make_shared<SemiFreeCdga>();
    total->table = tt;
    total->d = Derivation::zero(tt, 1);
    for (uint32_t i = 0; i < n; ++i) {
        Element dg = remapByName(dr->base->d.onGen[i], tt);
        total->d.set(i, dg);
        total->d.set(n + i, -applyDerivation(dr->delta, dg));
    }
    dr->total = std::move(total);
    return dr;
}

namespace {

bool isBidegree(const DeRhamAlgebra& dr, const Element& e, int degree, int formWeight) {
    for (const auto& [m, c] : e.terms()) {
        if (monomialDegree(*dr.total->table, m) != degree)
            return false;
        if (monomialFormWeight(*dr.total->table, m) != formWeight)
            return false;
    }
    return true;
}

} // namespace

CocycleCert checkClosed(const ClosedFormSequence& f) {
    CocycleCert cert;
    const auto& dr = *f.dr;
    const int p = f.weightStart, n = f.shift;
    // every component sits in total degree n + p; the mixed differential
    // raises the weight and the internal one cancels it one degree up
    for (size_t i = 0; i < f.components.size(); ++i) {
        if (!isBidegree(dr, f.components[i], n + p, p + int(i))) {
            cert.failure = "component " + std::to_string(p + i) + " has a wrong bidegree";
            cert.residue = f.components[i];
            return cert;
        }
    }
    auto at = [&](int i) {
        return (i >= 0 && i < int(f.components.size())) ? f.components[i]
                                                        : Element(dr.total->table);
    };
    // weight-w component of (d + delta) f is d f_w + delta f_{w-1}
    for (int w = p; w <= p + int(f.components.size()); ++w) {
        Element res = dr.applyD(at(w - p)) + dr.applyDelta(at(w - 1 - p));
        if (!res.zero()) {
            cert.failure = "total cocycle fails in weight " + std::to_string(w);
            cert.residue = std::move(res);
            return cert;
        }
    }
    cert.pass = true;
    return cert;
}

SymplecticCert checkSymplectic(const ClosedFormSequence& f, int shift) {
    SymplecticCert cert;
    cert.form = f;
    const auto& dr = *f.dr;
    if (f.weightStart != 2) {
        cert.failure = "not a 2-form sequence";
        return cert;
    }
    auto closed = checkClosed(f);
    if (!closed.pass) {
        cert.failure = closed.failure;
        return cert;
    }
    const uint32_t n = uint32_t(dr.base->table->size());
    // the bottom component must be a constant pairing of two form symbols
    std::vector<std::vector<Rational>> mat(n, std::vector<Rational>(n, Rational(0)));
    for (const auto& [m, c] : f.bottom().terms()) {
        std::vector<std::pair<uint32_t, uint32_t>> syms;
        bool constant = true;
        for (const auto& [g, e] : m.factors) {
            if (dr.isSymbol(g))
                syms.emplace_back(g - n, e);
            else
                constant = false;
        }
        int symCount = 0;
        for (auto& [g, e] : syms)
            symCount += int(e);
        if (!constant || symCount != 2) {
            cert.failure = "non-constant shifted 2-form: the constant-pairing "
                           "criterion does not apply (unsupported)";
            return cert;
        }
        if (syms.size() == 2) {
            uint32_t u = syms[0].first, v = syms[1].first;
            int du = dr.base->table->gen(u).degree, dv = dr.base->table->gen(v).degree;
            if (du + dv != shift) {
                cert.failure = "pairing does not match the declared shift";
                return cert;
            }
            int swap = (((du + 1) & 1) && ((dv + 1) & 1)) ? -1 : 1;
            mat[u][v] += c;
            mat[v][u] += Rational(swap) * c;
            cert.pairing.emplace_back(u, v, c);
        } else { // (d g)^2 for an even symbol
            uint32_t u = syms[0].first;
            if (2 * dr.base->table->gen(u).degree != shift) {
                cert.failure = "pairing does not match the declared shift";
                return cert;
            }
            mat[u][u] += 2 * c;
            cert.pairing.emplace_back(u, u, c);
        }
    }
    SparseMat sm;
    sm.rows = sm.cols = n;
    sm.entries.assign(n, {});
    for (uint32_t r = 0; r < n; ++r)
        for (uint32_t c2 = 0; c2 < n; ++c2)
            sm.set(r, c2, mat[r][c2]);
    if (rankRational(sm) != long(n)) {
        cert.failure = "constant pairing matrix is singular";
        return cert;
    }
    cert.pass = true;
    return cert;
}

TautologicalForms tautologicalForms(std::shared_ptr<const DeRhamAlgebra> dr, int shift) {
    const auto& bt = *dr->base->table;
    Element lambda(dr->total->table);
    uint32_t paired = 0;
    for (uint32_t i = 0; i < bt.size(); ++i) {
        const auto& g = bt.gen(i);
        if (!g.conjugate) {
            throw Error("tautologicalForms: unpaired generator " + g.name);
        }
        if (starSlot(g))
            continue; // handled from the plain slot
        uint32_t conj = *g.conjugate;
        // the parity sign makes delta(lambda) a strict cocycle for the
        // transported differential at every shift
        int sign = ((shift & 1) && (g.degree & 1)) ? -1 : 1;
        lambda = lambda + Rational(sign) * Element::generator(dr->total->table, conj) *
                              Element::generator(dr->total->table, dr->symbolOf(i));
        ++paired;
    }
    if (2 * paired != bt.size())
        throw Error("tautologicalForms: pairing does not cover the table");
    TautologicalForms out;
    out.lambda = lambda;
    ClosedFormSequence omega;
    omega.dr = dr;
    omega.weightStart = 2;
    omega.shift = shift;
    omega.components = {applyDerivation(dr->delta, lambda)};
    out.omega = checkSymplectic(omega, shift);
    if (!out.omega.pass)
        throw Error("tautological form failed its own certificate: " + out.omega.failure);
    return out;
}

CdgaMorphism extendToForms(const DeRhamAlgebra& src, const DeRhamAlgebra& tgt,
                           const CdgaMorphism& phi) {
    CdgaMorphism out;
    out.source = src.total;
    out.target = tgt.total;
    const uint32_t n = uint32_t(src.base->table->size());
    out.onGen.resize(src.total->table->size(), Element(tgt.total->table));
    for (uint32_t i = 0; i < n; ++i) {
        Element img = remapByName(phi.onGen.at(i), tgt.total->table);
        out.onGen[i] = img;
        out.onGen[src.symbolOf(i)] = applyDerivation(tgt.delta, img);
    }
    return out;
}

ClosedFormSequence pullbackForm(const CdgaMorphism& phi,
                                std::shared_ptr<const DeRhamAlgebra> srcDr,
                                std::shared_ptr<const DeRhamAlgebra> tgtDr,
                                const ClosedFormSequence& f) {
    CdgaMorphism ext = extendToForms(*srcDr, *tgtDr, phi);
    ClosedFormSequence out;
    out.dr = tgtDr;
    out.weightStart = f.weightStart;
    out.shift = f.shift;
    for (const auto& c : f.components)
        out.components.push_back(applyMorphism(ext, c));
    while (out.components.size() > 1 && out.components.back().zero())
        out.components.pop_back();
    auto cert = checkClosed(out);
    if (!cert.pass)
        throw Error("pullback broke the cocycle condition (" + cert.failure +
                    "): sign or morphism bug");
    return out;
}

std::optional<Element> deltaPrimitive(const DeRhamAlgebra& dr, const Element& closed) {
    if (closed.zero())
        return Element(dr.total->table);
    // Euler contraction: iota(d(g)) = g, scaled by the factor count per monomial
    const uint32_t n = uint32_t(dr.base->table->size());
    Derivation iota = Derivation::zero(dr.total->table, -1);
    for (uint32_t i = 0; i < n; ++i)
        iota.set(n + i, Element::generator(dr.total->table, i));
    Element out(dr.total->table);
    for (const auto& [m, c] : closed.terms()) {
        int count = monomialExponentTotal(m);
        if (count == 0)
            return std::nullopt; // constants are closed but not exact
        Element piece = applyDerivation(iota, Element::monomial(dr.total->table, m, c));
        out = out + piece * Rational(1, count);
    }
    if (!(applyDerivation(dr.delta, out) == closed))
        return std::nullopt;
    return out;
}

namespace {

// monomial basis of the de Rham algebra at (degree, formWeight), sliced by
// auxiliary weight when available, else by a total-exponent bound
std::vector<Monomial> drBasis(const DeRhamAlgebra& dr, int degree, int formWeight,
                              std::optional<int> auxWeight, std::optional<int> bound) {
    const auto& t = *dr.total->table;
    // termination: every even generator must be capped by one of the budgets
    for (uint32_t i = 0; i < t.size() && !bound; ++i) {
        if (t.odd(i))
            continue;
        bool capped = t.gen(i).formWeight > 0 ||
                      (auxWeight && t.gen(i).weight && *t.gen(i).weight > 0);
        if (!capped)
            throw Error("infinite de Rham bidegree without a bound");
    }
    std::vector<Monomial> out;
    Monomial cur;
    auto rec = [&](auto&& self, uint32_t i, int rdeg, int rfw, int rw, int rexp) -> void {
        if (rfw < 0)
            return;
        if (i == t.size()) {
            if (rdeg == 0 && rfw == 0 && (!auxWeight || rw == 0))
                out.push_back(cur);
            return;
        }
        const auto& g = t.gen(i);
        int wt = g.weight ? *g.weight : 0;
        int maxE;
        if (t.odd(i))
            maxE = 1;
        else if (g.formWeight > 0)
            maxE = rfw / g.formWeight;
        else if (bound)
            maxE = rexp;
        else
            maxE = (wt > 0 && auxWeight) ? std::max(rw, 0) / wt : 0;
        for (int e = 0; e <= maxE; ++e) {
            if (bound && e > rexp)
                break;
            if (auxWeight && !bound && wt > 0 && rw - e * wt < 0)
                break;
            if (e > 0)
                cur.factors.emplace_back(i, uint32_t(e));
            self(self, i + 1, rdeg - e * g.degree, rfw - e * g.formWeight,
                 rw - e * wt, rexp - e);
            if (e > 0)
                cur.factors.pop_back();
        }
    };
    int startW = auxWeight.value_or(0);
    rec(rec, 0, degree, formWeight, startW, bound.value_or(0));
    std::sort(out.begin(), out.end());
    return out;
}

// solve d(h) = target with h of the given form weight; when strict, also
// demands delta(h) = 0 so the primitive sequence terminates
std::optional<Element> solveDEquation(const DeRhamAlgebra& dr, const Element& target,
                                      int formWeight, bool strict) {
    if (target.zero())
        return Element(dr.total->table);
    auto dtv = target.degree();
    if (!dtv)
        return std::nullopt;
    const auto& t = *dr.total->table;

    bool weighted = t.hasWeights() && weightHomogeneous(*dr.total);
    std::vector<int> slices;
    if (weighted) {
        for (const auto& [m, c] : target.terms()) {
            int w = monomialWeight(t, m);
            if (std::find(slices.begin(), slices.end(), w) == slices.end())
                slices.push_back(w);
        }
    } else {
        slices.push_back(0);
    }
    std::optional<int> bound;
    if (!weighted) {
        int maxExp = 0;
        for (const auto& [m, c] : target.terms())
            maxExp = std::max(maxExp, monomialExponentTotal(m));
        bound = maxExp + 2;
    }

    Element h(dr.total->table);
    for (int w : slices) {
        Element slice(dr.total->table);
        for (const auto& [m, c] : target.terms())
            if (!weighted || monomialWeight(t, m) == w)
                slice.add(m, c);
        std::optional<int> aux = weighted ? std::optional<int>(w) : std::nullopt;
        std::vector<Monomial> srcBasis;
        try {
            srcBasis = drBasis(dr, *dtv - 1, formWeight, aux, bound);
        } catch (const Error&) {
            // retry in bound mode
            int maxExp = 0;
            for (const auto& [m, c] : slice.terms())
                maxExp = std::max(maxExp, monomialExponentTotal(m));
            srcBasis = drBasis(dr, *dtv - 1, formWeight, std::nullopt, maxExp + 2);
        }
        if (srcBasis.empty())
            return std::nullopt;
        // assemble the target index from images and the slice support
        std::map<Monomial, uint32_t> index;
        std::map<Monomial, uint32_t> indexDelta;
        std::vector<Element> images, deltas;
        for (const auto& m : srcBasis) {
            Element one = Element::monomial(dr.total->table, m, Rational(1));
            Element img = dr.applyD(one);
            for (const auto& [mm, cc] : img.terms())
                if (!index.count(mm))
                    index.emplace(mm, uint32_t(index.size()));
            images.push_back(std::move(img));
            if (strict) {
                Element dlt = dr.applyDelta(one);
                for (const auto& [mm, cc] : dlt.terms())
                    if (!indexDelta.count(mm))
                        indexDelta.emplace(mm, uint32_t(indexDelta.size()));
                deltas.push_back(std::move(dlt));
            }
        }
        for (const auto& [mm, cc] : slice.terms())
            if (!index.count(mm))
                index.emplace(mm, uint32_t(index.size()));
        SparseMat M;
        M.rows = index.size() + indexDelta.size();
        M.cols = srcBasis.size();
        M.entries.assign(M.rows, {});
        for (uint32_t j = 0; j < srcBasis.size(); ++j) {
            for (const auto& [mm, cc] : images[j].terms())
                M.set(index.at(mm), j, cc);
            if (strict)
                for (const auto& [mm, cc] : deltas[j].terms())
                    M.set(index.size() + indexDelta.at(mm), j, cc);
        }
        std::vector<Rational> b(M.rows, Rational(0));
        for (const auto& [mm, cc] : slice.terms())
            b[index.at(mm)] = cc;
        auto sol = solveLinear(M, b);
        if (!sol)
            return std::nullopt;
        for (uint32_t j = 0; j < srcBasis.size(); ++j)
            if ((*sol)[j] != 0)
                h.add(srcBasis[j], (*sol)[j]);
    }
    return h;
}

IsotropyCert verifyPrimitive(const DeRhamAlgebra& dr, const ClosedFormSequence& pulled,
                             const std::vector<Element>& h) {
    IsotropyCert cert;
    cert.primitive = h;
    const int p = pulled.weightStart;
    for (size_t i = 0; i < h.size(); ++i) {
        if (!isBidegree(dr, h[i], pulled.shift + p - 1, p + int(i))) {
            cert.failure = "primitive component " + std::to_string(p + i) +
                           " has a wrong bidegree";
            return cert;
        }
    }
    auto pc = [&](int w) {
        int i = w - p;
        return (i >= 0 && i < int(pulled.components.size()))
                   ? pulled.components[i]
                   : Element(dr.total->table);
    };
    auto hc = [&](int w) {
        int i = w - p;
        return (i >= 0 && i < int(h.size())) ? h[i] : Element(dr.total->table);
    };
    int maxW = p + int(std::max(pulled.components.size(), h.size()));
    for (int w = p; w <= maxW + 1; ++w) {
        Element res = pc(w) - dr.applyD(hc(w)) - dr.applyDelta(hc(w - 1));
        if (!res.zero()) {
            cert.failure = "isotropy residue in weight " + std::to_string(w) +
                           ", degree " + std::to_string(res.degreesPresent().front());
            cert.residue = std::move(res);
            return cert;
        }
    }
    cert.pass = true;
    return cert;
}

} // namespace

IsotropyCert checkIsotropy(const CdgaMorphism& phi,
                           std::shared_ptr<const DeRhamAlgebra> ambientDr,
                           std::shared_ptr<const DeRhamAlgebra> legDr,
                           const ClosedFormSequence& omega,
                           const std::optional<std::vector<Element>>& h) {
    ClosedFormSequence pulled = pullbackForm(phi, ambientDr, legDr, omega);
    if (h)
        return verifyPrimitive(*legDr, pulled, *h);

    bool allZero = true;
    for (const auto& c : pulled.components)
        allZero = allZero && c.zero();
    if (allZero)
        return verifyPrimitive(*legDr, pulled, {});

    // windowed linear solve, weight by weight: d h_w = pulled_w - delta h_{w-1},
    // preferring solutions with delta h_w = 0 so the sequence terminates
    std::vector<Element> solved;
    const int p = pulled.weightStart;
    Element carry(legDr->total->table);
    bool ok = true;
    const int cap = p + int(pulled.components.size()) + 8;
    for (int w = p; w <= cap; ++w) {
        int i = w - p;
        Element tgt = (i < int(pulled.components.size())) ? pulled.components[i]
                                                          : Element(legDr->total->table);
        tgt = tgt - carry;
        bool lastKnown = i + 1 >= int(pulled.components.size());
        auto hw = solveDEquation(*legDr, tgt, w, lastKnown);
        if (!hw && lastKnown)
            hw = solveDEquation(*legDr, tgt, w, false);
        if (!hw) {
            ok = false;
            break;
        }
        solved.push_back(*hw);
        carry = legDr->applyDelta(*hw);
        if (carry.zero() && i + 1 >= int(pulled.components.size()))
            break;
    }
    ok = ok && carry.zero();
    if (ok)
        return verifyPrimitive(*legDr, pulled, solved);
    IsotropyCert cert;
    cert.failure = "no primitive found (isotropy fails or solver window too small)";
    cert.residue = pulled.bottom();
    return cert;
}

bool closedOneFormCheck(const SemiFreeCdga& base, const std::vector<Element>& alpha) {
    const auto& t = *base.table;
    uint32_t n = uint32_t(alpha.size());
    for (uint32_t i = 0; i < n; ++i)
        if (t.gen(i).degree != 0)
            throw Error("closedOneFormCheck expects a degree-0 affine base");
    for (uint32_t i = 0; i < n; ++i)
        for (uint32_t j = i + 1; j < n; ++j)
            if (!(partialLeft(i, alpha[j]) == partialLeft(j, alpha[i])))
                return false;
    return true;
}

} // namespace bvred
