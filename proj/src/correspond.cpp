#include "bvred/correspond.hpp"

#include <algorithm>

namespace bvred {

uint32_t CotangentModel::conjugateOf(uint32_t baseGen) const {
    return *model->table->gen(baseGen).conjugate;
}

CotangentModel shiftedCotangent(std::shared_ptr<const SemiFreeCdga> base, int n,
                                const std::string& conjPrefix,
                                std::optional<int> weightOfS) {
    CotangentModel out;
    out.base = base;
    out.shift = n;
    std::vector<std::string> names;
    for (uint32_t i = 0; i < base->table->size(); ++i)
        names.push_back(conjPrefix + base->table->gen(i).name);
    out.model = cotangentExtension(base, n, names, weightOfS);
    out.dr = buildDeRham(out.model);
    auto tf = tautologicalForms(out.dr, n);
    out.lambda = tf.lambda;
    out.omega = std::move(tf.omega);
    return out;
}

LagrangianModel graphLagrangian(const CotangentModel& X, std::vector<Element> values) {
    const uint32_t n = uint32_t(X.base->table->size());
    if (values.size() != n)
        throw Error("graphLagrangian: one value per base generator");
    LagrangianModel L;
    L.ambient = X.model;
    L.ambientDr = X.dr;
    L.ambientOmega = X.omega.form;
    L.ambientShift = X.shift;
    L.leg = X.base;
    CdgaMorphism f;
    f.source = X.model;
    f.target = X.base;
    f.onGen.resize(X.model->table->size(), Element(X.base->table));
    bool allZero = true;
    for (uint32_t i = 0; i < n; ++i) {
        f.onGen[i] = Element::generator(X.base->table, i);
        f.onGen[X.conjugateOf(i)] = values[i];
        allZero = allZero && values[i].zero();
    }
    auto chain = checkChainMap(f);
    if (!chain.pass)
        throw Error("graph section is not a chain map at " +
                    X.model->table->gen(*chain.generator).name +
                    " (is the 1-form closed / equivariant?)");
    L.map = std::move(f);
    L.shape = allZero ? LagrangianShape::ZeroSection : LagrangianShape::Graph;
    auto legDr = buildDeRham(L.leg);
    L.isotropy = checkIsotropy(L.map, L.ambientDr, legDr, L.ambientOmega);
    if (!L.isotropy.pass)
        throw Error("graph lagrangian failed its isotropy certificate: " +
                    L.isotropy.failure);
    return L;
}

LagrangianModel zeroSection(const CotangentModel& X) {
    std::vector<Element> zeros(X.base->table->size(), Element(X.base->table));
    return graphLagrangian(X, std::move(zeros));
}

std::optional<SectionShape> detectSection(const CdgaMorphism& phi) {
    SectionShape shape;
    shape.keptImage.assign(phi.source->table->size(), std::nullopt);
    std::vector<bool> used(phi.target->table->size(), false);
    for (uint32_t i = 0; i < phi.source->table->size(); ++i) {
        const Element& img = phi.onGen.at(i);
        bool kept = false;
        if (img.termCount() == 1) {
            const auto& [mono, coeff] = *img.terms().begin();
            if (coeff == 1 && mono.factors.size() == 1 && mono.factors[0].second == 1) {
                uint32_t tgt = mono.factors[0].first;
                if (!used[tgt]) {
                    used[tgt] = true;
                    shape.keptImage[i] = tgt;
                    kept = true;
                }
            }
        }
        if (!kept)
            shape.extras.push_back(i);
    }
    return shape;
}

namespace {

// d_M(v) = B_v + sum_w A_{v,w} w, extras moved to the right; nullopt when
// some monomial is nonlinear in the extras.
struct LinearDecomp {
    Element keptPart;                       // B_v
    std::map<uint32_t, Element> linear;     // w -> A_{v,w}
};

std::optional<LinearDecomp> decomposeLinear(const SemiFreeCdga& M,
                                            const std::vector<bool>& isExtra,
                                            const Element& dv) {
    LinearDecomp out;
    out.keptPart = Element(M.table);
    for (const auto& [mono, coeff] : dv.terms()) {
        uint32_t extra = UINT32_MAX;
        int count = 0;
        for (const auto& [g, e] : mono.factors)
            if (isExtra[g]) {
                extra = g;
                count += int(e);
            }
        if (count == 0) {
            out.keptPart.add(mono, coeff);
        } else if (count == 1) {
            // strip the extra, moving it to the right with its Koszul sign
            Monomial rest;
            int passed = 0; // parity of degrees to the right of the extra
            for (auto it = mono.factors.rbegin(); it != mono.factors.rend(); ++it) {
                if (it->first == extra)
                    break;
                passed += M.table->gen(it->first).degree * int(it->second);
            }
            for (const auto& [g, e] : mono.factors)
                if (g != extra)
                    rest.factors.emplace_back(g, e);
            int sign = ((M.table->gen(extra).degree & 1) && (passed & 1)) ? -1 : 1;
            auto it = out.linear.find(extra);
            if (it == out.linear.end())
                it = out.linear.emplace(extra, Element(M.table)).first;
            it->second.add(rest, coeff * sign);
        } else {
            return std::nullopt;
        }
    }
    return out;
}

} // namespace

FiberProduct sectionFiberProduct(const CdgaMorphism& legA, const CdgaMorphism& legB,
                                 const std::vector<std::string>& resolventNames) {
    if (legA.source->table.get() != legB.source->table.get())
        throw Error("fiber product legs must share the base");
    auto shape = detectSection(legA);
    if (!shape)
        throw Error("unresolvable presentation: leg is not section-like");
    const auto& M = *legA.source;
    const auto& tM = *M.table;
    std::vector<bool> isExtra(tM.size(), false);
    for (uint32_t v : shape->extras)
        isExtra[v] = true;

    // carried generators of O(L): those not hit by a kept generator
    std::vector<bool> hit(legA.target->table->size(), false);
    for (uint32_t i = 0; i < tM.size(); ++i)
        if (shape->keptImage[i])
            hit[*shape->keptImage[i]] = true;

    std::vector<Generator> gens = legB.target->table->gens();
    const uint32_t nB = uint32_t(gens.size());
    std::vector<uint32_t> carried;                   // L-gen indices
    std::map<uint32_t, uint32_t> carriedIndex;       // L-gen -> R-gen
    for (uint32_t j = 0; j < legA.target->table->size(); ++j) {
        if (hit[j])
            continue;
        Generator g = legA.target->table->gen(j);
        g.conjugate.reset();
        std::string want = g.name;
        for (const auto& existing : gens)
            if (existing.name == want) {
                want += "_l";
                break;
            }
        g.name = want;
        carriedIndex[j] = uint32_t(gens.size());
        carried.push_back(j);
        gens.push_back(g);
    }
    std::vector<uint32_t> resolventIdx;
    for (size_t k = 0; k < shape->extras.size(); ++k) {
        uint32_t v = shape->extras[k];
        Generator e;
        e.name = resolventNames.size() == shape->extras.size()
                     ? resolventNames[k]
                     : "e_" + tM.gen(v).name;
        for (const auto& existing : gens)
            if (existing.name == e.name) {
                e.name += "_r";
                break;
            }
        e.degree = tM.gen(v).degree - 1;
        e.flavor = e.degree == -1 ? Flavor::Antifield
                   : e.degree == -2 ? Flavor::Antighost
                                    : Flavor::Multiplier;
        e.starConj = true;
        e.weight = tM.gen(v).weight;
        resolventIdx.push_back(uint32_t(gens.size()));
        gens.push_back(e);
    }
    auto tR = makeTable(std::move(gens));

    // tau : O(L) -> R by kept-image -> psi(kept), carried -> carried
    std::vector<Element> tauImages(legA.target->table->size(), Element(tR));
    for (uint32_t i = 0; i < tM.size(); ++i)
        if (shape->keptImage[i])
            tauImages[*shape->keptImage[i]] = remapByName(legB.onGen.at(i), tR);
    for (uint32_t j : carried)
        tauImages[j] = Element::generator(tR, carriedIndex[j]);
    auto tau = [&](const Element& overL) {
        Element out(tR);
        for (const auto& [mono, c] : overL.terms()) {
            Element prod(tR, c);
            for (const auto& [g, e] : mono.factors)
                for (uint32_t r = 0; r < e; ++r)
                    prod = prod * tauImages[g];
            out = out + prod;
        }
        return out;
    };

    auto R = std::make_shared<SemiFreeCdga>();
    R->table = tR;
    R->d = Derivation::zero(tR, 1);
    for (uint32_t j = 0; j < nB; ++j)
        R->d.set(j, remapByName(legB.target->d.onGen[j], tR));
    for (uint32_t j : carried)
        R->d.set(carriedIndex[j], tau(legA.target->d.onGen[j]));
    // resolvent differentials: d eps_v = psi(v) - tau(phi(v)) - corrections
    for (size_t k = 0; k < shape->extras.size(); ++k) {
        uint32_t v = shape->extras[k];
        auto decomp = decomposeLinear(M, isExtra, M.d.onGen[v]);
        if (!decomp)
            throw Error("unresolvable presentation: differential nonlinear in the "
                        "fiber directions at " + tM.gen(v).name);
        Element dv = remapByName(legB.onGen.at(v), tR) -
                     tau(legA.onGen.at(v));
        for (const auto& [w, A] : decomp->linear) {
            size_t pos = std::find(shape->extras.begin(), shape->extras.end(), w) -
                         shape->extras.begin();
            auto adeg = A.degree();
            int sign = (adeg && (*adeg & 1)) ? -1 : 1;
            // A lives in the kept subalgebra of O(M); transfer through psi
            Element At = applyMorphism(legB, A);
            dv = dv - Rational(sign) * remapByName(At, tR) *
                          Element::generator(tR, resolventIdx[pos]);
        }
        R->d.set(resolventIdx[k], std::move(dv));
    }
    auto cert = checkDifferential(*R);
    if (!cert.pass) {
        // weights may fail to extend; retry without them
        if (tR->hasWeights()) {
            std::vector<Generator> plain = tR->gens();
            bool had = false;
            for (auto& g : plain) {
                had = had || g.weight.has_value();
                g.weight.reset();
            }
            if (had) {
                // rebuild both legs unweighted is overkill; strip on R only
                auto tR2 = makeTable(std::move(plain));
                auto R2 = std::make_shared<SemiFreeCdga>();
                R2->table = tR2;
                R2->d = Derivation::zero(tR2, 1);
                for (uint32_t j = 0; j < tR2->size(); ++j)
                    R2->d.set(j, remapByName(R->d.onGen[j], tR2));
                auto cert2 = checkDifferential(*R2);
                if (cert2.pass) {
                    R = std::move(R2);
                    cert = cert2;
                }
            }
        }
        if (!cert.pass)
            throw Error("unresolvable presentation: resolvent corrections do not "
                        "close (d^2 != 0 at " +
                        R->table->gen(*cert.generator).name + ")");
    }

    FiberProduct out;
    out.model = R;
    out.fromLegB.source = legB.target;
    out.fromLegB.target = R;
    for (uint32_t j = 0; j < nB; ++j)
        out.fromLegB.onGen.push_back(Element::generator(R->table, j));
    auto chainB = checkChainMap(out.fromLegB);
    if (!chainB.pass)
        throw Error("fiber product inclusion is not a chain map");
    out.fromBase = compose(out.fromLegB, legB);
    for (uint32_t idx : resolventIdx)
        out.resolvents.push_back(idx);
    return out;
}

FiberProduct doublingFiberProduct(const CdgaMorphism& legA, const CdgaMorphism& legB) {
    const auto& M = *legA.source;
    for (uint32_t i = 0; i < M.table->size(); ++i)
        if (!M.d.onGen[i].zero())
            throw Error("unresolvable presentation: doubling needs a "
                        "zero-differential base");
    std::vector<Generator> gens;
    auto addAll = [&](const GeneratorTable& t, const char* suffix,
                      std::vector<uint32_t>& index) {
        for (uint32_t i = 0; i < t.size(); ++i) {
            Generator g = t.gen(i);
            g.conjugate.reset();
            auto taken = [&](const std::string& n) {
                return std::any_of(gens.begin(), gens.end(),
                                   [&](const Generator& e) { return e.name == n; });
            };
            while (taken(g.name))
                g.name += suffix;
            index.push_back(uint32_t(gens.size()));
            gens.push_back(g);
        }
    };
    std::vector<uint32_t> idxA, idxB;
    addAll(*legA.target->table, "_a", idxA);
    addAll(*legB.target->table, "_b", idxB);
    std::vector<uint32_t> eps;
    for (uint32_t i = 0; i < M.table->size(); ++i) {
        Generator e;
        e.name = "e_" + M.table->gen(i).name;
        auto taken = [&](const std::string& n) {
            return std::any_of(gens.begin(), gens.end(),
                               [&](const Generator& g) { return g.name == n; });
        };
        while (taken(e.name))
            e.name += "_r";
        e.degree = M.table->gen(i).degree - 1;
        e.flavor = Flavor::Antifield;
        e.starConj = true;
        e.weight = M.table->gen(i).weight;
        eps.push_back(uint32_t(gens.size()));
        gens.push_back(e);
    }
    auto tR = makeTable(std::move(gens));
    auto mapInto = [&](const CdgaMorphism& leg, const std::vector<uint32_t>& idx,
                       const Element& e) {
        Element out(tR);
        for (const auto& [mono, c] : e.terms()) {
            std::vector<std::pair<uint32_t, uint32_t>> raw;
            for (const auto& [g, ex] : mono.factors)
                raw.emplace_back(idx[g], ex);
            auto [s, canon] = normalizeMonomial(*tR, raw);
            out.add(canon, c * s);
        }
        return out;
    };
    auto R = std::make_shared<SemiFreeCdga>();
    R->table = tR;
    R->d = Derivation::zero(tR, 1);
    for (uint32_t i = 0; i < legA.target->table->size(); ++i)
        R->d.set(idxA[i], mapInto(legA, idxA, legA.target->d.onGen[i]));
    for (uint32_t i = 0; i < legB.target->table->size(); ++i)
        R->d.set(idxB[i], mapInto(legB, idxB, legB.target->d.onGen[i]));
    for (uint32_t i = 0; i < M.table->size(); ++i)
        R->d.set(eps[i], mapInto(legA, idxA, legA.onGen.at(i)) -
                             mapInto(legB, idxB, legB.onGen.at(i)));
    auto cert = checkDifferential(*R);
    if (!cert.pass)
        throw Error("doubling fiber product failed d^2 = 0");
    FiberProduct out;
    out.model = R;
    out.fromLegB.source = legB.target;
    out.fromLegB.target = R;
    for (uint32_t i = 0; i < legB.target->table->size(); ++i)
        out.fromLegB.onGen.push_back(Element::generator(tR, idxB[i]));
    out.fromBase = compose(out.fromLegB, legB);
    out.resolvents = eps;
    return out;
}

FiberProduct derivedFiberProduct(const CdgaMorphism& legA, const CdgaMorphism& legB) {
    if (detectSection(legA))
        return sectionFiberProduct(legA, legB, {});
    if (detectSection(legB))
        return sectionFiberProduct(legB, legA, {});
    return doublingFiberProduct(legA, legB);
}

namespace {

// transported fiber differential coefficients of a pure cotangent model:
// d(conj_j) = sum_h coeff * conj_h
std::map<uint32_t, Element> conjugateLinear(const CotangentModel& T, uint32_t baseGen) {
    const auto& t = *T.model->table;
    std::vector<bool> isConj(t.size(), false);
    for (uint32_t i = 0; i < T.base->table->size(); ++i)
        isConj[T.conjugateOf(i)] = true;
    auto decomp = decomposeLinear(*T.model, isConj, T.model->d.onGen[T.conjugateOf(baseGen)]);
    if (!decomp || !decomp->keptPart.zero())
        throw Error("cotangent differential is not fiber-linear");
    return decomp->linear;
}

} // namespace

LagrangianModel pushforwardLagrangian(const CdgaMorphism& baseMap,
                                      const CotangentModel& TX,
                                      const CotangentModel& TY,
                                      const LagrangianModel& L) {
    if (L.shape != LagrangianShape::Graph && L.shape != LagrangianShape::ZeroSection &&
        L.shape != LagrangianShape::SectionLike)
        throw Error("pushforward supports section-like lagrangians only");
    const uint32_t nX = uint32_t(TX.base->table->size());
    const uint32_t nY = uint32_t(TY.base->table->size());

    // pullCot = O(X)[eta_j], the pulled cotangent of Y
    std::vector<Generator> gens = TX.base->table->gens();
    std::vector<uint32_t> eta(nY);
    for (uint32_t j = 0; j < nY; ++j) {
        Generator g;
        g.name = "eta_" + TY.base->table->gen(j).name;
        auto taken = [&](const std::string& n) {
            return std::any_of(gens.begin(), gens.end(),
                               [&](const Generator& e) { return e.name == n; });
        };
        while (taken(g.name))
            g.name += "_";
        g.degree = TY.shift - TY.base->table->gen(j).degree;
        g.flavor = Flavor::Multiplier;
        g.weight = TY.model->table->gen(TY.conjugateOf(j)).weight;
        eta[j] = uint32_t(gens.size());
        gens.push_back(g);
    }
    auto tP = makeTable(std::move(gens));
    auto P = std::make_shared<SemiFreeCdga>();
    P->table = tP;
    P->d = Derivation::zero(tP, 1);
    for (uint32_t i = 0; i < nX; ++i)
        P->d.set(i, remapByName(TX.base->d.onGen[i], tP));
    for (uint32_t j = 0; j < nY; ++j) {
        Element v(tP);
        for (const auto& [conjIdx, coeff] : conjugateLinear(TY, j)) {
            // conjIdx = conjugate of some y_h
            uint32_t h = *TY.model->table->gen(conjIdx).conjugate;
            Element pulled = remapByName(applyMorphism(baseMap, remapByName(coeff, TY.base->table)), tP);
            v = v + pulled * Element::generator(tP, eta[h]);
        }
        P->d.set(eta[j], std::move(v));
    }
    if (!checkDifferential(*P).pass)
        throw Error("pulled cotangent failed d^2 = 0");

    // psi : O(T*X) -> O(pullCot): x -> x, xv_i -> sum_j dL_i(phi(y_j)) eta_j
    CdgaMorphism psi;
    psi.source = TX.model;
    psi.target = P;
    psi.onGen.resize(TX.model->table->size(), Element(tP));
    for (uint32_t i = 0; i < nX; ++i)
        psi.onGen[i] = Element::generator(tP, i);
    for (uint32_t i = 0; i < nX; ++i) {
        Element v(tP);
        for (uint32_t j = 0; j < nY; ++j) {
            Element der = partialLeft(i, baseMap.onGen.at(j));
            if (!der.zero())
                v = v + remapByName(der, tP) * Element::generator(tP, eta[j]);
        }
        psi.onGen[TX.conjugateOf(i)] = std::move(v);
    }
    auto chain = checkChainMap(psi);
    if (!chain.pass)
        throw Error("cotangent transpose is not a chain map at " +
                    TX.model->table->gen(*chain.generator).name);

    // resolve the section leg of L over psi
    std::vector<std::string> names;
    auto sec = detectSection(L.map);
    if (!sec)
        throw Error("pushforward: lagrangian is not section-like");
    for (uint32_t v : sec->extras) {
        const auto& g = TX.model->table->gen(v);
        if (g.conjugate && !starSlot(TX.model->table->gen(*g.conjugate)))
            names.push_back(antifieldName(TX.model->table->gen(*g.conjugate).name));
        else
            names.push_back("e_" + g.name);
    }
    FiberProduct R = sectionFiberProduct(L.map, psi, names);

    LagrangianModel out;
    out.ambient = TY.model;
    out.ambientDr = TY.dr;
    out.ambientOmega = TY.omega.form;
    out.ambientShift = TY.shift;
    out.leg = R.model;
    CdgaMorphism f;
    f.source = TY.model;
    f.target = R.model;
    f.onGen.resize(TY.model->table->size(), Element(R.model->table));
    for (uint32_t j = 0; j < nY; ++j) {
        f.onGen[j] = applyMorphism(R.fromLegB,
                                   remapByName(applyMorphism(baseMap,
                                                             Element::generator(TY.base->table, j)),
                                               P->table));
        f.onGen[TY.conjugateOf(j)] =
            applyMorphism(R.fromLegB, Element::generator(P->table, eta[j]));
    }
    auto chain2 = checkChainMap(f);
    if (!chain2.pass)
        throw Error("pushforward morphism is not a chain map at " +
                    TY.model->table->gen(*chain2.generator).name);
    out.map = std::move(f);
    out.shape = LagrangianShape::SectionLike;
    auto legDr = buildDeRham(out.leg);
    out.isotropy = checkIsotropy(out.map, out.ambientDr, legDr, out.ambientOmega);
    if (!out.isotropy.pass)
        throw Error("pushforward lost the isotropy certificate: " + out.isotropy.failure);
    return out;
}

LagrangianModel pullbackLagrangian(const CdgaMorphism& baseMap,
                                   const CotangentModel& TX,
                                   const CotangentModel& TY,
                                   const LagrangianModel& L) {
    if (L.shape != LagrangianShape::Graph && L.shape != LagrangianShape::ZeroSection)
        throw Error("pullback supports graphs and zero sections only");
    // f^dagger(Graph(alpha)) = Graph(f* alpha)
    const uint32_t nX = uint32_t(TX.base->table->size());
    const uint32_t nY = uint32_t(TY.base->table->size());
    std::vector<Element> values;
    for (uint32_t i = 0; i < nX; ++i) {
        Element v(TX.base->table);
        for (uint32_t j = 0; j < nY; ++j) {
            // beta_j = value of the Y-graph on the conjugate of y_j
            Element beta = L.map.onGen.at(TY.conjugateOf(j));
            Element pulled = applyMorphism(baseMap, beta);
            Element der = partialLeft(i, baseMap.onGen.at(j));
            if (!der.zero() && !pulled.zero())
                v = v + der * pulled;
        }
        values.push_back(std::move(v));
    }
    return graphLagrangian(TX, std::move(values));
}

Strictified cancelAcyclicPairs(std::shared_ptr<const SemiFreeCdga> model) {
    Strictified out;
    out.model = std::move(model);
    out.projection = identityMorphism(out.model);
    for (;;) {
        const auto& t = *out.model->table;
        std::optional<std::pair<uint32_t, uint32_t>> found; // (u, v)
        Rational cval;
        Element rest;
        for (uint32_t u = 0; u < t.size() && !found; ++u) {
            const Element& du = out.model->d.onGen[u];
            for (const auto& [mono, c] : du.terms()) {
                if (mono.factors.size() != 1 || mono.factors[0].second != 1)
                    continue;
                uint32_t v = mono.factors[0].first;
                if (v == u)
                    continue;
                // rest with u -> 0 must avoid v
                Element r(out.model->table);
                bool ok = true;
                for (const auto& [m2, c2] : du.terms()) {
                    if (m2 == mono)
                        continue;
                    bool hasU = false, hasV = false;
                    for (const auto& [g, e] : m2.factors) {
                        hasU = hasU || g == u;
                        hasV = hasV || g == v;
                    }
                    if (hasU)
                        continue; // killed by u -> 0
                    if (hasV) {
                        ok = false;
                        break;
                    }
                    r.add(m2, c2);
                }
                if (!ok)
                    continue;
                found = {u, v};
                cval = c;
                rest = std::move(r);
                break;
            }
        }
        if (!found)
            return out;
        auto [u, v] = *found;
        std::vector<Generator> gens;
        std::vector<std::optional<uint32_t>> newIndex(t.size());
        for (uint32_t i = 0; i < t.size(); ++i) {
            if (i == u || i == v)
                continue;
            Generator g = t.gen(i);
            if (g.conjugate && (*g.conjugate == u || *g.conjugate == v))
                g.conjugate.reset();
            else if (g.conjugate) {
                // re-linked after the table is assembled
            }
            newIndex[i] = uint32_t(gens.size());
            gens.push_back(g);
        }
        for (auto& g : gens)
            if (g.conjugate)
                g.conjugate = newIndex[*g.conjugate];
        auto tS = makeTable(std::move(gens));
        CdgaMorphism r;
        r.source = out.model;
        r.onGen.resize(t.size(), Element(tS));
        for (uint32_t i = 0; i < t.size(); ++i) {
            if (i == u)
                continue; // zero
            if (i == v) {
                Element img(tS);
                for (const auto& [m2, c2] : rest.terms()) {
                    std::vector<std::pair<uint32_t, uint32_t>> raw;
                    for (const auto& [g, e] : m2.factors)
                        raw.emplace_back(*newIndex[g], e);
                    auto [s, canon] = normalizeMonomial(*tS, raw);
                    img.add(canon, c2 * s);
                }
                r.onGen[i] = img * Rational(-1) * (Rational(1) / cval);
                continue;
            }
            r.onGen[i] = Element::generator(tS, *newIndex[i]);
        }
        auto S = std::make_shared<SemiFreeCdga>();
        S->table = tS;
        S->d = Derivation::zero(tS, 1);
        r.target = S; // d not final yet; applyMorphism only needs the table
        for (uint32_t i = 0; i < t.size(); ++i) {
            if (i == u || i == v)
                continue;
            S->d.set(*newIndex[i], applyMorphism(r, out.model->d.onGen[i]));
        }
        auto cert = checkDifferential(*S);
        if (!cert.pass)
            throw Error("acyclic-pair cancellation broke d^2 = 0");
        auto chain = checkChainMap(r);
        if (!chain.pass)
            throw Error("acyclic-pair projection is not a chain map");
        out.projection = compose(r, out.projection);
        out.model = S;
        ++out.cancelled;
    }
}

std::shared_ptr<const SemiFreeCdga>
renameGenerators(const std::shared_ptr<const SemiFreeCdga>& model,
                 const std::vector<std::pair<std::string, std::string>>& renames) {
    std::vector<Generator> gens = model->table->gens();
    for (const auto& [from, to] : renames) {
        bool hit = false;
        for (auto& g : gens)
            if (g.name == from) {
                g.name = to;
                hit = true;
            }
        if (!hit)
            throw Error("rename: no generator named " + from);
    }
    auto t = makeTable(std::move(gens));
    auto out = std::make_shared<SemiFreeCdga>();
    out->table = t;
    out->d = Derivation::zero(t, 1);
    for (uint32_t i = 0; i < t->size(); ++i) {
        Element v(t);
        for (const auto& [m, c] : model->d.onGen[i].terms())
            v.add(m, c); // same indices, same canonical order
        out->d.set(i, std::move(v));
    }
    return out;
}

} // namespace bvred
