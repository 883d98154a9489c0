#include "bvred/bv.hpp"

#include "bvred/signs.hpp"

#include <algorithm>

namespace bvred {

namespace {

std::string freshName(const std::vector<Generator>& gens, std::string want) {
    auto taken = [&](const std::string& n) {
        return std::any_of(gens.begin(), gens.end(),
                           [&](const Generator& g) { return g.name == n; });
    };
    while (taken(want))
        want += "_";
    return want;
}

std::shared_ptr<const SemiFreeCdga> zeroModel(TablePtr t) {
    auto A = std::make_shared<SemiFreeCdga>();
    A->table = t;
    A->d = Derivation::zero(t, 1);
    return A;
}

// weight of a homogeneous element, nullopt for 0 / inhomogeneous / unweighted
std::optional<int> weightOf(const Element& e) {
    if (e.zero() || !e.table() || !e.table()->hasWeights())
        return std::nullopt;
    std::optional<int> w;
    for (const auto& [m, c] : e.terms()) {
        int mw = monomialWeight(*e.table(), m);
        if (w && *w != mw)
            return std::nullopt;
        w = mw;
    }
    return w;
}

std::shared_ptr<const SemiFreeCdga> stripWeights(const SemiFreeCdga& A) {
    std::vector<Generator> gens = A.table->gens();
    for (auto& g : gens)
        g.weight.reset();
    auto t = makeTable(std::move(gens));
    auto B = std::make_shared<SemiFreeCdga>();
    B->table = t;
    B->d = Derivation::zero(t, 1);
    for (uint32_t i = 0; i < t->size(); ++i)
        B->d.set(i, remapByName(A.d.onGen[i], t));
    return B;
}

// weight of S for the auto-weighting rule, nullopt when inconsistent
std::optional<int> potentialWeight(const GaugeSystem& gs) {
    if (!gs.base->hasWeights())
        return std::nullopt;
    auto s = weightOf(gs.potential);
    if (gs.potential.zero() || !s)
        return std::nullopt;
    for (uint32_t a = 0; a < gs.algebra.dim; ++a)
        for (uint32_t i = 0; i < gs.fieldCount(); ++i) {
            const Element& r = gs.action[a][i];
            if (r.zero())
                continue;
            auto w = weightOf(r);
            if (!w || *w != *gs.base->gen(i).weight)
                return std::nullopt;
        }
    for (uint32_t i = 0; i < gs.fieldCount(); ++i)
        if (*s - *gs.base->gen(i).weight < 0)
            return std::nullopt;
    return s;
}

} // namespace

std::vector<uint32_t> BvModel::gensOfFlavor(Flavor f) const {
    std::vector<uint32_t> out;
    for (uint32_t i = 0; i < model->table->size(); ++i)
        if (model->table->gen(i).flavor == f)
            out.push_back(i);
    return out;
}

Element masterResidue(const BvModel& m) {
    if (!m.masterAction)
        return Element(m.model->table);
    return antibracket(*m.masterAction, *m.masterAction);
}

Element modGhostIdeal(const BvModel& m, const Element& e) {
    Element out(e.table());
    for (const auto& [mono, c] : e.terms()) {
        bool hasGhost = false;
        for (const auto& [g, exp] : mono.factors)
            hasGhost = hasGhost || e.table()->gen(g).flavor == Flavor::Ghost;
        if (!hasGhost)
            out.add(mono, c);
    }
    return out;
}

std::string antifieldName(const std::string& field) { return "xi_" + field; }

std::shared_ptr<const SemiFreeCdga>
cotangentExtension(const std::shared_ptr<const SemiFreeCdga>& base, int shift,
                   const std::vector<std::string>& names,
                   std::optional<int> weightOfS) {
    const auto& bt = *base->table;
    if (names.size() != bt.size())
        throw Error("cotangentExtension: one conjugate name per base generator");
    std::vector<Generator> gens = bt.gens();
    const uint32_t n = uint32_t(bt.size());
    for (uint32_t i = 0; i < n; ++i) {
        Generator c;
        c.name = freshName(gens, names[i]);
        c.degree = shift - bt.gen(i).degree;
        if (shift == -1)
            c.flavor = bt.gen(i).flavor == Flavor::Ghost ? Flavor::Antighost
                                                         : Flavor::Antifield;
        else
            c.flavor = Flavor::Fiber;
        c.starConj = true;
        if (weightOfS && bt.gen(i).weight)
            c.weight = *weightOfS - *bt.gen(i).weight;
        c.conjugate = i;
        gens.push_back(c);
        gens[i].conjugate = n + i;
        gens[i].starConj = false; // a base slot of the new pairing is plain
    }
    auto t = makeTable(std::move(gens));
    auto M = std::make_shared<SemiFreeCdga>();
    M->table = t;
    M->d = Derivation::zero(t, 1);
    for (uint32_t i = 0; i < n; ++i)
        M->d.set(i, remapByName(base->d.onGen[i], t));
    // transported differential on the conjugates (signs.hpp rule 5)
    for (uint32_t g = 0; g < n; ++g) {
        Element v(t);
        for (uint32_t h = 0; h < n; ++h) {
            if (base->d.onGen[h].zero())
                continue;
            Element coeff = partialRight(g, base->d.onGen[h]);
            if (coeff.zero())
                continue;
            int sign = ((bt.gen(g).degree & 1) && ((bt.gen(h).degree + 1) & 1)) ? -1 : 1;
            v = v - Rational(sign) * remapByName(coeff, t) * Element::generator(t, n + h);
        }
        M->d.set(n + g, std::move(v));
    }
    auto cert = checkDifferential(*M);
    if (!cert.pass) {
        if (t->hasWeights())
            return cotangentExtension(stripWeights(*base), shift, names, std::nullopt);
        throw Error("cotangent transport failed d^2 = 0 at " +
                    t->gen(*cert.generator).name + ": " + cert.residue.str());
    }
    return M;
}

std::shared_ptr<const SemiFreeCdga>
adjoinGhostsCE(const std::shared_ptr<const SemiFreeCdga>& base,
               const std::vector<Derivation>& actions, const LieAlgebra& g,
               const std::vector<std::string>& ghostNames) {
    const auto& bt = *base->table;
    std::vector<Generator> gens = bt.gens();
    const uint32_t n = uint32_t(bt.size());
    const uint32_t m = g.dim;
    std::vector<uint32_t> cIdx;
    for (uint32_t a = 0; a < m; ++a) {
        Generator c;
        c.name = freshName(gens, ghostNames.at(a));
        c.degree = 1;
        c.flavor = Flavor::Ghost;
        if (bt.hasWeights())
            c.weight = 0;
        gens.push_back(c);
        cIdx.push_back(n + a);
    }
    auto t = makeTable(std::move(gens));
    auto M = std::make_shared<SemiFreeCdga>();
    M->table = t;
    M->d = Derivation::zero(t, 1);
    for (uint32_t i = 0; i < n; ++i) {
        Element v = remapByName(base->d.onGen[i], t);
        for (uint32_t a = 0; a < m; ++a) {
            const Element& La = actions.at(a).onGen.at(i);
            if (!La.zero())
                v = v + Rational(signs::kCE) * Element::generator(t, cIdx[a]) *
                            remapByName(La, t);
        }
        M->d.set(i, std::move(v));
    }
    for (uint32_t a = 0; a < m; ++a) {
        Element v(t);
        for (uint32_t b = 0; b < m; ++b)
            for (uint32_t c = 0; c < m; ++c) {
                Rational f = g.at(b, c, a);
                if (f != 0)
                    v = v - Rational(1, 2) * f * Element::generator(t, cIdx[b]) *
                                Element::generator(t, cIdx[c]);
            }
        M->d.set(cIdx[a], std::move(v));
    }
    return M;
}

void finalizeSymplectic(BvModel& m) {
    if (m.model->table->hasWeights() && !weightHomogeneous(*m.model)) {
        auto stripped = stripWeights(*m.model);
        if (m.masterAction)
            m.masterAction = remapByName(*m.masterAction, stripped->table);
        std::vector<Element> mus;
        for (const auto& mu : m.moments)
            mus.push_back(remapByName(mu, stripped->table));
        m.moments = std::move(mus);
        m.model = std::move(stripped);
    }
    m.dr = buildDeRham(m.model);
    auto tf = tautologicalForms(m.dr, m.shift);
    m.lambda = tf.lambda;
    m.omega = std::move(tf.omega);
}

BvModel buildCrit(const GaugeSystem& gs) {
    auto violations = validateGaugeSystem(gs);
    if (!violations.empty())
        throw Error("invalid gauge system: " + violations.front().identity);
    auto s = potentialWeight(gs);
    std::vector<Generator> gens = gs.base->gens();
    if (!s)
        for (auto& g : gens)
            g.weight.reset();
    const uint32_t n = uint32_t(gens.size());
    for (uint32_t i = 0; i < n; ++i) {
        Generator xi;
        xi.name = freshName(gens, antifieldName(gens[i].name));
        xi.degree = -1;
        xi.flavor = Flavor::Antifield;
        xi.starConj = true;
        if (s)
            xi.weight = *s - *gens[i].weight;
        xi.conjugate = i;
        gens.push_back(xi);
        gens[i].conjugate = n + i;
    }
    auto t = makeTable(std::move(gens));
    BvModel m;
    m.shift = -1;
    m.masterAction = remapByName(gs.potential, t);
    auto M = std::make_shared<SemiFreeCdga>();
    M->table = t;
    M->d = hamiltonianDerivation(*m.masterAction);
    m.model = std::move(M);
    finalizeSymplectic(m);
    return m;
}

BvModel buildZeroLocus(const GaugeSystem& gs, const std::vector<Element>& alpha) {
    if (alpha.size() != gs.fieldCount())
        throw Error("one 1-form component per field expected");
    if (!closedOneFormCheck(*zeroModel(gs.base), alpha))
        throw Error("Z(alpha) requires a closed 1-form: d_i alpha_j != d_j alpha_i");
    // consistent antifield weights from the components
    std::optional<int> s;
    bool consistent = gs.base->hasWeights();
    for (uint32_t i = 0; consistent && i < alpha.size(); ++i) {
        if (alpha[i].zero())
            continue;
        auto w = weightOf(alpha[i]);
        if (!w) {
            consistent = false;
            break;
        }
        int cand = *w + *gs.base->gen(i).weight;
        if (s && *s != cand)
            consistent = false;
        else
            s = cand;
    }
    if (!consistent)
        s.reset();
    std::vector<Generator> gens = gs.base->gens();
    if (!s)
        for (auto& g : gens)
            g.weight.reset();
    const uint32_t n = uint32_t(gens.size());
    for (uint32_t i = 0; i < n; ++i) {
        Generator xi;
        xi.name = freshName(gens, antifieldName(gens[i].name));
        xi.degree = -1;
        xi.flavor = Flavor::Antifield;
        xi.starConj = true;
        if (s)
            xi.weight = *s - *gens[i].weight;
        xi.conjugate = i;
        gens.push_back(xi);
        gens[i].conjugate = n + i;
    }
    auto t = makeTable(std::move(gens));
    auto M = std::make_shared<SemiFreeCdga>();
    M->table = t;
    M->d = Derivation::zero(t, 1);
    for (uint32_t i = 0; i < n; ++i)
        M->d.set(n + i, remapByName(alpha[i], t));
    BvModel m;
    m.shift = -1;
    m.model = std::move(M);
    finalizeSymplectic(m);
    return m;
}

std::vector<Element> momentMapComponents(const BvModel& crit, const GaugeSystem& gs) {
    const auto& t = crit.model->table;
    std::vector<Element> mu;
    for (uint32_t a = 0; a < gs.algebra.dim; ++a) {
        Element v(t);
        for (uint32_t i = 0; i < gs.fieldCount(); ++i) {
            if (gs.action[a][i].zero())
                continue;
            uint32_t xi = t->index(antifieldName(gs.base->gen(i).name));
            v = v + remapByName(gs.action[a][i], t) * Element::generator(t, xi);
        }
        Element dmu = applyDerivation(crit.model->d, v);
        if (!dmu.zero())
            throw Error("d mu_" + std::to_string(a + 1) +
                        " != 0: invariance was violated upstream");
        mu.push_back(std::move(v));
    }
    return mu;
}

MomentClosureCert momentClosure(const BvModel& crit, const GaugeSystem& gs,
                                const std::vector<Element>& mu) {
    MomentClosureCert cert;
    for (uint32_t a = 0; a < gs.algebra.dim; ++a)
        for (uint32_t b = 0; b < gs.algebra.dim; ++b) {
            Element lhs = antibracket(mu[a], mu[b]);
            Element rhs(crit.model->table);
            for (uint32_t c = 0; c < gs.algebra.dim; ++c)
                rhs = rhs + mu[c] * (Rational(signs::kMomentClosure) * gs.algebra.at(a, b, c));
            if (!(lhs == rhs)) {
                cert.detail = "{mu_" + std::to_string(a + 1) + ", mu_" +
                              std::to_string(b + 1) + "} - " +
                              (signs::kMomentClosure > 0 ? "" : "(-)") +
                              "f^c_{ab} mu_c = " + (lhs - rhs).str();
                return cert;
            }
        }
    cert.pass = true;
    return cert;
}

BvModel adjoinTate(const BvModel& crit, const GaugeSystem& gs,
                   const std::vector<Element>& mu) {
    const auto& ot = *crit.model->table;
    std::vector<Generator> gens = ot.gens();
    const uint32_t n = uint32_t(gens.size());
    std::vector<Element> targets;
    for (uint32_t a = 0; a < gs.algebra.dim; ++a) {
        Element target = mu[a] - Element(crit.model->table, gs.character[a]);
        auto deg = target.degree();
        if (!target.zero() && !deg)
            throw Error("Tate target mu - chi must be degree-homogeneous "
                        "(a nonzero character only twists a shift-0 moment)");
        Generator t;
        t.name = freshName(gens, "t" + std::to_string(a + 1));
        t.degree = target.zero() ? -2 : *deg - 1;
        t.flavor = Flavor::Antighost;
        t.starConj = true;
        if (ot.hasWeights())
            t.weight = weightOf(target).value_or(0);
        gens.push_back(t);
        targets.push_back(std::move(target));
    }
    auto t = makeTable(std::move(gens));
    auto M = std::make_shared<SemiFreeCdga>();
    M->table = t;
    M->d = Derivation::zero(t, 1);
    for (uint32_t i = 0; i < n; ++i)
        M->d.set(i, remapByName(crit.model->d.onGen[i], t));
    for (uint32_t a = 0; a < gs.algebra.dim; ++a)
        M->d.set(n + a, remapByName(targets[a], t));
    auto cert = checkDifferential(*M);
    if (!cert.pass)
        throw Error("Tate stage failed d^2 = 0 at " + t->gen(*cert.generator).name);
    BvModel out;
    out.shift = crit.shift;
    out.model = std::move(M);
    for (auto& tg : targets)
        out.moments.push_back(remapByName(tg, t));
    if (crit.masterAction)
        out.masterAction = remapByName(*crit.masterAction, t);
    // apex of a correspondence: no ambient form of its own
    return out;
}

BvModel adjoinChevalley(const BvModel& tate, const GaugeSystem& gs) {
    const auto& ot = *tate.model->table;
    const uint32_t m = gs.algebra.dim;
    std::vector<Generator> gens = ot.gens();
    const uint32_t n = uint32_t(gens.size());
    std::vector<uint32_t> tIdx;
    for (uint32_t i = 0; i < n; ++i)
        if (gens[i].flavor == Flavor::Antighost)
            tIdx.push_back(i);
    if (tIdx.size() != m)
        throw Error("Chevalley stage expects one Tate generator per algebra basis element");
    for (uint32_t a = 0; a < m; ++a) {
        Generator c;
        c.name = freshName(gens, "c" + std::to_string(a + 1));
        c.degree = -1 - gens[tIdx[a]].degree;
        c.flavor = Flavor::Ghost;
        if (ot.hasWeights())
            c.weight = 0;
        c.conjugate = tIdx[a];
        gens[tIdx[a]].conjugate = n + a;
        gens.push_back(c);
    }
    auto t = makeTable(std::move(gens));
    if (!tate.masterAction)
        throw Error("Chevalley stage needs the potential of the critical locus");
    Element sbv = remapByName(*tate.masterAction, t);
    for (uint32_t a = 0; a < m; ++a)
        sbv = sbv - Element::generator(t, n + a) * remapByName(tate.moments[a], t);
    for (uint32_t a = 0; a < m; ++a)
        for (uint32_t b = 0; b < m; ++b)
            for (uint32_t c = 0; c < m; ++c) {
                Rational f = gs.algebra.at(a, b, c);
                if (f != 0)
                    sbv = sbv + Rational(signs::kGhostCubic) * Rational(1, 2) * f *
                                    Element::generator(t, n + a) *
                                    Element::generator(t, n + b) *
                                    Element::generator(t, tIdx[c]);
            }
    Element residue = antibracket(sbv, sbv);
    if (!residue.zero())
        throw Error("master equation violated: {S_BV, S_BV} = " + residue.str() +
                    " (an input identity must have failed)");
    auto M = std::make_shared<SemiFreeCdga>();
    M->table = t;
    M->d = hamiltonianDerivation(sbv);
    BvModel out;
    out.shift = tate.shift;
    out.model = std::move(M);
    out.masterAction = std::move(sbv);
    for (const auto& mu : tate.moments)
        out.moments.push_back(remapByName(mu, t));
    // postconditions: d c^a = -1/2 f^a_{bc} c^b c^c, and the old differential
    // is recovered modulo the ghost ideal
    for (uint32_t a = 0; a < m; ++a) {
        Element want(t);
        for (uint32_t b = 0; b < m; ++b)
            for (uint32_t c = 0; c < m; ++c) {
                Rational f = gs.algebra.at(b, c, a);
                if (f != 0)
                    want = want - Rational(1, 2) * f * Element::generator(t, n + b) *
                                      Element::generator(t, n + c);
            }
        if (!(out.model->d.onGen[n + a] == want))
            throw Error("ghost differential disagrees with the CE formula");
    }
    for (uint32_t i = 0; i < n; ++i) {
        Element old = remapByName(tate.model->d.onGen[i], t);
        if (!(modGhostIdeal(out, out.model->d.onGen[i]) == old))
            throw Error("reduced differential does not restrict to the Tate stage at " +
                        t->gen(i).name);
    }
    finalizeSymplectic(out);
    return out;
}

BvModel buildReduced(const GaugeSystem& gs) {
    BvModel crit = buildCrit(gs);
    auto mu = momentMapComponents(crit, gs);
    BvModel tate = adjoinTate(crit, gs, mu);
    return adjoinChevalley(tate, gs);
}

BvModel reduceCotangent(const GaugeSystem& gs) {
    auto violations = validateGaugeSystem(gs);
    if (!violations.empty())
        throw Error("invalid gauge system: " + violations.front().identity);
    const uint32_t n = gs.fieldCount();
    const uint32_t m = gs.algebra.dim;
    std::vector<std::string> names;
    for (uint32_t i = 0; i < n; ++i)
        names.push_back("p_" + gs.base->gen(i).name);
    auto cot = cotangentExtension(zeroModel(gs.base), 0, names, potentialWeight(gs));
    const auto& ct = cot->table;

    // Tate generators against mu_a - chi_a
    std::vector<Generator> gens = ct->gens();
    std::vector<Element> targets;
    for (uint32_t a = 0; a < m; ++a) {
        Element mu(ct);
        for (uint32_t i = 0; i < n; ++i)
            if (!gs.action[a][i].zero())
                mu = mu + remapByName(gs.action[a][i], ct) * Element::generator(ct, n + i);
        targets.push_back(mu - Element(ct, gs.character[a]));
        Generator t;
        t.name = freshName(gens, "t" + std::to_string(a + 1));
        t.degree = -1;
        t.flavor = Flavor::Antighost;
        t.starConj = true;
        if (ct->hasWeights())
            t.weight = weightOf(targets[a]).value_or(0);
        gens.push_back(t);
    }
    auto tt = makeTable(std::move(gens));
    auto tate = std::make_shared<SemiFreeCdga>();
    tate->table = tt;
    tate->d = Derivation::zero(tt, 1);
    for (uint32_t i = 0; i < ct->size(); ++i)
        tate->d.set(i, remapByName(cot->d.onGen[i], tt));
    for (uint32_t a = 0; a < m; ++a)
        tate->d.set(uint32_t(ct->size()) + a, remapByName(targets[a], tt));

    // g-action: rho on the base, its cotangent lift on the fibers, the
    // coadjoint action on the Tate generators
    std::vector<Derivation> actions;
    for (uint32_t a = 0; a < m; ++a) {
        Derivation L = Derivation::zero(tt, 0);
        for (uint32_t i = 0; i < n; ++i)
            L.set(i, remapByName(gs.action[a][i], tt));
        for (uint32_t i = 0; i < n; ++i) {
            Element v(tt);
            for (uint32_t l = 0; l < n; ++l) {
                Element dr = partialLeft(i, gs.action[a][l]);
                if (!dr.zero())
                    v = v - remapByName(dr, tt) * Element::generator(tt, n + l);
            }
            L.set(n + i, std::move(v));
        }
        for (uint32_t b = 0; b < m; ++b) {
            Element v(tt);
            for (uint32_t cc = 0; cc < m; ++cc) {
                Rational f = gs.algebra.at(a, b, cc);
                if (f != 0)
                    v = v - f * Element::generator(tt, uint32_t(ct->size()) + cc);
            }
            L.set(uint32_t(ct->size()) + b, std::move(v));
        }
        actions.push_back(std::move(L));
    }
    std::vector<std::string> ghostNames;
    for (uint32_t a = 0; a < m; ++a)
        ghostNames.push_back("c" + std::to_string(a + 1));
    auto red = adjoinGhostsCE(tate, actions, gs.algebra, ghostNames);
    // link the pairs (x, p) and (c, t)
    std::vector<Generator> linked = red->table->gens();
    for (uint32_t i = 0; i < n; ++i) {
        linked[i].conjugate = n + i;
        linked[n + i].conjugate = i;
    }
    for (uint32_t a = 0; a < m; ++a) {
        uint32_t tIdx = 2 * n + a;
        uint32_t cIdx = 2 * n + m + a;
        linked[tIdx].conjugate = cIdx;
        linked[cIdx].conjugate = tIdx;
    }
    auto lt = makeTable(std::move(linked));
    auto M = std::make_shared<SemiFreeCdga>();
    M->table = lt;
    M->d = Derivation::zero(lt, 1);
    for (uint32_t i = 0; i < lt->size(); ++i)
        M->d.set(i, remapByName(red->d.onGen[i], lt));
    auto cert = checkDifferential(*M);
    if (!cert.pass)
        throw Error("cotangent reduction failed d^2 = 0 at " +
                    lt->gen(*cert.generator).name + ": " + cert.residue.str());
    BvModel out;
    out.shift = 0;
    out.model = std::move(M);
    for (auto& tg : targets)
        out.moments.push_back(remapByName(tg, lt));
    finalizeSymplectic(out);
    return out;
}

std::shared_ptr<const SemiFreeCdga> ceQuotientModel(const GaugeSystem& gs) {
    auto base = zeroModel(gs.base);
    std::vector<Derivation> actions;
    for (uint32_t a = 0; a < gs.algebra.dim; ++a) {
        Derivation L = Derivation::zero(gs.base, 0);
        for (uint32_t i = 0; i < gs.fieldCount(); ++i)
            L.set(i, gs.action[a][i]);
        actions.push_back(std::move(L));
    }
    std::vector<std::string> names;
    for (uint32_t a = 0; a < gs.algebra.dim; ++a)
        names.push_back("c" + std::to_string(a + 1));
    auto M = adjoinGhostsCE(base, actions, gs.algebra, names);
    auto cert = checkDifferential(*M);
    if (!cert.pass)
        throw Error("CE quotient model failed d^2 = 0 at " +
                    M->table->gen(*cert.generator).name);
    return M;
}

BvModel buildOrderSwap(const GaugeSystem& gs) {
    auto violations = validateGaugeSystem(gs);
    if (!violations.empty())
        throw Error("invalid gauge system: " + violations.front().identity);
    auto ceq = ceQuotientModel(gs);
    auto s = potentialWeight(gs);
    if (!s)
        ceq = stripWeights(*ceq);
    std::vector<std::string> names;
    for (uint32_t i = 0; i < ceq->table->size(); ++i) {
        const auto& g = ceq->table->gen(i);
        names.push_back(g.flavor == Flavor::Ghost
                            ? "t" + g.name.substr(1)
                            : antifieldName(g.name));
    }
    auto cot = cotangentExtension(ceq, -1, names, s);
    const auto& t = cot->table;
    const uint32_t n = uint32_t(gs.fieldCount());
    const uint32_t m = gs.algebra.dim;

    // deform by the same master action
    Element sbv = remapByName(gs.potential, t);
    for (uint32_t a = 0; a < m; ++a) {
        Element mu(t);
        for (uint32_t i = 0; i < n; ++i)
            if (!gs.action[a][i].zero())
                mu = mu + remapByName(gs.action[a][i], t) *
                              Element::generator(t, t->index(antifieldName(
                                                     gs.base->gen(i).name)));
        Element target = mu - Element(t, gs.character[a]);
        sbv = sbv - Element::generator(t, n + a) * target;
    }
    for (uint32_t a = 0; a < m; ++a)
        for (uint32_t b = 0; b < m; ++b)
            for (uint32_t c = 0; c < m; ++c) {
                Rational f = gs.algebra.at(a, b, c);
                if (f != 0)
                    sbv = sbv + Rational(signs::kGhostCubic) * Rational(1, 2) * f *
                                    Element::generator(t, n + a) *
                                    Element::generator(t, n + b) *
                                    Element::generator(t, t->index("t" + std::to_string(c + 1)));
            }
    Element residue = antibracket(sbv, sbv);
    if (!residue.zero())
        throw Error("master equation violated on the physics-order model");

    Derivation dFull = hamiltonianDerivation(sbv);
    // contract: {S_BV, -} restricts to the cotangent transport of the CE
    // differential plus the potential deformation
    Derivation dPot = hamiltonianDerivation(remapByName(gs.potential, t));
    bool chiZero = std::all_of(gs.character.begin(), gs.character.end(),
                               [](const Rational& q) { return q == 0; });
    for (uint32_t i = 0; i < t->size(); ++i) {
        Element split = cot->d.onGen[i] + dPot.onGen[i];
        if (chiZero && !(dFull.onGen[i] == split))
            throw Error("order-swap differential disagrees with the transport at " +
                        t->gen(i).name + ": " + (dFull.onGen[i] - split).str());
    }

    auto M = std::make_shared<SemiFreeCdga>();
    M->table = t;
    M->d = std::move(dFull);
    BvModel out;
    out.shift = -1;
    out.model = std::move(M);
    out.masterAction = std::move(sbv);
    finalizeSymplectic(out);
    return out;
}

OrderSwapCert compareOrders(const BvModel& mathOrder, const BvModel& physicsOrder) {
    OrderSwapCert cert;
    const auto& ta = *mathOrder.model->table;
    const auto& tb = *physicsOrder.model->table;
    if (ta.size() != tb.size()) {
        cert.detail = "generator counts differ";
        return cert;
    }
    for (uint32_t i = 0; i < ta.size(); ++i) {
        auto j = tb.tryIndex(ta.gen(i).name);
        if (!j || tb.gen(*j).degree != ta.gen(i).degree ||
            tb.gen(*j).flavor != ta.gen(i).flavor) {
            cert.detail = "no matching generator for " + ta.gen(i).name;
            cert.firstMismatch = ta.gen(i).name;
            return cert;
        }
    }
    auto fw = generatorMatching(mathOrder.model, physicsOrder.model);
    auto bw = generatorMatching(physicsOrder.model, mathOrder.model);
    for (auto* f : {&fw, &bw}) {
        auto chain = checkChainMap(*f);
        if (!chain.pass) {
            cert.firstMismatch = f->source->table->gen(*chain.generator).name;
            cert.detail = "generator map fails to commute with d at " +
                          *cert.firstMismatch + " (residue " + chain.residue.str() +
                          "): sign-convention bug";
            return cert;
        }
    }
    if (mathOrder.masterAction && physicsOrder.masterAction) {
        if (!(remapByName(*mathOrder.masterAction, physicsOrder.model->table) ==
              *physicsOrder.masterAction)) {
            cert.detail = "master actions differ";
            return cert;
        }
    }
    if (mathOrder.omega && physicsOrder.omega) {
        Element wa = remapByName(mathOrder.omega->form.bottom(),
                                 physicsOrder.dr->total->table);
        if (!(wa == physicsOrder.omega->form.bottom())) {
            cert.detail = "symplectic forms differ under the generator matching";
            return cert;
        }
    }
    cert.pass = true;
    return cert;
}

ConstrainedCrit buildConstrainedCrit(const GaugeSystem& gs) {
    if (!gs.constraint)
        throw Error("buildConstrainedCrit needs a constraint map");
    auto violations = validateGaugeSystem(gs);
    if (!violations.empty())
        throw Error("invalid gauge system: " + violations.front().identity);
    const auto& cons = *gs.constraint;
    const uint32_t n = gs.fieldCount();
    const uint32_t k = uint32_t(cons.components.size());

    auto s = potentialWeight(gs);
    // multiplier weights need homogeneous constraint components
    std::vector<std::optional<int>> pw(k);
    if (s) {
        for (uint32_t j = 0; j < k; ++j) {
            pw[j] = weightOf(cons.components[j]);
            if (!pw[j] || *s - *pw[j] < 0)
                s.reset();
        }
    }
    std::vector<Generator> gens = gs.base->gens();
    if (!s)
        for (auto& g : gens)
            g.weight.reset();
    for (uint32_t j = 0; j < k; ++j) {
        Generator th;
        th.name = freshName(gens, "th" + std::to_string(j + 1));
        th.degree = 0;
        th.flavor = Flavor::Multiplier;
        if (s)
            th.weight = *s - *pw[j];
        gens.push_back(th);
    }
    for (uint32_t i = 0; i < n; ++i) {
        Generator xi;
        xi.name = freshName(gens, antifieldName(gs.base->gen(i).name));
        xi.degree = -1;
        xi.flavor = Flavor::Antifield;
        xi.starConj = true;
        if (s)
            xi.weight = *s - *gens[i].weight;
        xi.conjugate = i;
        gens.push_back(xi);
        gens[i].conjugate = n + k + i;
    }
    auto t = makeTable(std::move(gens));
    Element sc = remapByName(gs.potential, t);
    for (uint32_t j = 0; j < k; ++j)
        sc = sc - Element::generator(t, n + j) * remapByName(cons.components[j], t);
    auto M = std::make_shared<SemiFreeCdga>();
    M->table = t;
    M->d = hamiltonianDerivation(sc);

    ConstrainedCrit out;
    out.apex.shift = -1;
    out.apex.model = std::move(M);
    out.apex.masterAction = std::move(sc);
    if (out.apex.model->table->hasWeights() && !weightHomogeneous(*out.apex.model)) {
        auto stripped = stripWeights(*out.apex.model);
        out.apex.masterAction = remapByName(*out.apex.masterAction, stripped->table);
        out.apex.model = std::move(stripped);
    }
    const auto& at = out.apex.model->table;

    // shift-0 cotangent of Y with its lagrangian morphism into the apex
    auto yModel = zeroModel(cons.yBase);
    std::vector<std::string> etas;
    for (uint32_t j = 0; j < k; ++j)
        etas.push_back("eta_" + cons.yBase->gen(j).name);
    out.cotangentY = cotangentExtension(yModel, 0, etas);
    CdgaMorphism f;
    f.source = out.cotangentY;
    f.target = out.apex.model;
    for (uint32_t j = 0; j < k; ++j)
        f.onGen.push_back(remapByName(cons.components[j], at));
    for (uint32_t j = 0; j < k; ++j)
        f.onGen.push_back(Element::generator(at, at->index("th" + std::to_string(j + 1))));
    auto chain = checkChainMap(f);
    if (!chain.pass)
        throw Error("constrained critical locus: T*Y morphism is not a chain map");
    out.fromCotangentY = std::move(f);
    return out;
}

std::vector<Derivation> constrainedActions(const GaugeSystem& gs,
                                           const std::shared_ptr<const SemiFreeCdga>& apex) {
    const auto& t = apex->table;
    const auto& cons = *gs.constraint;
    const uint32_t k = uint32_t(cons.components.size());
    std::vector<Derivation> out;
    for (uint32_t a = 0; a < gs.algebra.dim; ++a) {
        Derivation L = Derivation::zero(t, 0);
        for (uint32_t i = 0; i < gs.fieldCount(); ++i)
            L.set(t->index(gs.base->gen(i).name), remapByName(gs.action[a][i], t));
        // dual action on the fiber coordinates: L(th_j) = -sum_k d(rhobar^k)/dy_j o p * th_k
        for (uint32_t j = 0; j < k; ++j) {
            Element v(t);
            for (uint32_t l = 0; l < k; ++l) {
                Element dref = partialLeft(j, cons.yAction[a][l]);
                if (dref.zero())
                    continue;
                Element pulled = substitute(dref, t, [&] {
                    std::vector<Element> imgs;
                    for (uint32_t q = 0; q < k; ++q)
                        imgs.push_back(remapByName(cons.components[q], t));
                    return imgs;
                }());
                v = v - pulled * Element::generator(t, t->index("th" + std::to_string(l + 1)));
            }
            L.set(t->index("th" + std::to_string(j + 1)), std::move(v));
        }
        // dual action on the antifields: L(xi_i) = -sum_k d(rho^k)/dx_i xi_k
        for (uint32_t i = 0; i < gs.fieldCount(); ++i) {
            Element v(t);
            for (uint32_t l = 0; l < gs.fieldCount(); ++l) {
                Element dr = partialLeft(i, gs.action[a][l]);
                if (dr.zero())
                    continue;
                v = v - remapByName(dr, t) *
                        Element::generator(t, t->index(antifieldName(gs.base->gen(l).name)));
            }
            L.set(t->index(antifieldName(gs.base->gen(i).name)), std::move(v));
        }
        out.push_back(std::move(L));
    }
    return out;
}

} // namespace bvred
