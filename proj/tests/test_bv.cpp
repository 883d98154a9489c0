#include "doctest.h"
#include "testutil.hpp"

#include "bvred/bv.hpp"

using namespace bvred;

namespace {

GaugeSystem abelianWeightSystem() {
    auto gs = makeGaugeSystem("abelian", {"x1", "x2"}, {1, 1}, LieAlgebra::abelian(1));
    Element x1 = Element::generator(gs.base, 0), x2 = Element::generator(gs.base, 1);
    gs.action[0][0] = x1;
    gs.action[0][1] = -x2;
    gs.potential = x1 * x2;
    return gs;
}

GaugeSystem sl2Casimir() {
    // basis (e,h,f): [e,f]=h, [h,e]=2e, [h,f]=-2f; coordinates a1,a2,a3
    LieAlgebra g = LieAlgebra::abelian(3);
    g.set(0, 2, 1, 1);  // f^2_{13} = 1
    g.set(1, 0, 0, 2);  // f^1_{21} = 2
    g.set(1, 2, 2, -2); // f^3_{23} = -2
    auto gs = makeGaugeSystem("sl2", {"a1", "a2", "a3"}, {1, 1, 1}, std::move(g));
    Element a1 = Element::generator(gs.base, 0), a2 = Element::generator(gs.base, 1),
            a3 = Element::generator(gs.base, 2);
    // rho_a = -ad_{e_a} so that [rho_a, rho_b] = +f^c_{ab} rho_c
    gs.action[0] = {Rational(2) * a2, -a3, Element(gs.base)};
    gs.action[1] = {Rational(-2) * a1, Element(gs.base), Rational(2) * a3};
    gs.action[2] = {Element(gs.base), a1, Rational(-2) * a2};
    gs.potential = a2 * a2 + a1 * a3; // Casimir (Killing form up to scale)
    return gs;
}

GaugeSystem constrainedAbelian() {
    auto gs = abelianWeightSystem();
    GaugeSystem::Constraint cons;
    Generator y;
    y.name = "y1";
    y.degree = 0;
    y.flavor = Flavor::Field;
    y.weight = 2;
    cons.yBase = makeTable({y});
    cons.components = {gs.potential}; // p = x1 x2, invariant
    cons.yAction = {{Element(cons.yBase)}}; // trivial action on Y
    gs.constraint = std::move(cons);
    gs.potential = gs.potential * gs.potential; // S = (x1 x2)^2, still invariant
    return gs;
}

} // namespace

TEST_CASE("gauge system validation catches each identity") {
    auto good = abelianWeightSystem();
    CHECK(validateGaugeSystem(good).empty());

    auto sl2 = sl2Casimir();
    CHECK(validateGaugeSystem(sl2).empty());

    SUBCASE("non-invariant potential") {
        auto gs = abelianWeightSystem();
        gs.potential = Element::generator(gs.base, 0); // S = x1
        auto v = validateGaugeSystem(gs);
        REQUIRE(!v.empty());
        CHECK(v.front().identity.find("invariance violated") != std::string::npos);
        CHECK(v.front().identity.find("x1") != std::string::npos);
    }
    SUBCASE("Jacobi failure") {
        LieAlgebra g = LieAlgebra::abelian(3);
        g.set(0, 1, 2, 1);
        g.set(1, 2, 0, 1);
        g.set(2, 0, 1, 1);
        g.set(0, 2, 0, 1); // spoils Jacobi
        auto gs = makeGaugeSystem("bad", {"x1"}, {1}, std::move(g));
        auto v = validateGaugeSystem(gs);
        REQUIRE(!v.empty());
        CHECK(v.front().identity.find("Jacobi") != std::string::npos);
    }
    SUBCASE("sl2 rejects a nonzero character") {
        auto gs = sl2Casimir();
        gs.character = {Rational(1), Rational(0), Rational(0)};
        auto v = validateGaugeSystem(gs);
        REQUIRE(!v.empty());
        CHECK(v.front().identity.find("character") != std::string::npos);
    }
    SUBCASE("closure failure") {
        auto gs = abelianWeightSystem();
        gs.action[0][1] = Element::generator(gs.base, 0); // not closed under brackets? breaks invariance too
        auto v = validateGaugeSystem(gs);
        CHECK(!v.empty());
    }
}

TEST_CASE("buildCrit and the moment map on the abelian system") {
    auto gs = abelianWeightSystem();
    BvModel crit = buildCrit(gs);
    REQUIRE(crit.model->table->size() == 4);
    CHECK(checkDifferential(*crit.model).pass);
    CHECK(crit.omega->pass);
    Element x1 = crit.gen("x1"), x2 = crit.gen("x2");
    Element xi1 = crit.gen("xi_x1"), xi2 = crit.gen("xi_x2");
    CHECK(applyDerivation(crit.model->d, xi1) == x2);
    CHECK(applyDerivation(crit.model->d, xi2) == x1);

    auto mu = momentMapComponents(crit, gs);
    REQUIRE(mu.size() == 1);
    CHECK(mu[0] == x1 * xi1 - x2 * xi2);
    CHECK(momentClosure(crit, gs, mu).pass);
}

TEST_CASE("Tate and Chevalley stages on the abelian system") {
    auto gs = abelianWeightSystem();
    BvModel crit = buildCrit(gs);
    auto mu = momentMapComponents(crit, gs);
    BvModel tate = adjoinTate(crit, gs, mu);
    CHECK(tate.model->table->size() == 5);
    CHECK(tate.model->table->gen(4).degree == -2);
    CHECK(checkDifferential(*tate.model).pass);

    BvModel red = adjoinChevalley(tate, gs);
    CHECK(red.model->table->size() == 6);
    CHECK(checkDifferential(*red.model).pass);
    CHECK(masterResidue(red).zero());
    CHECK(red.omega->pass);

    // full differential carries the CE piece on fields
    Element x1 = red.gen("x1"), c = red.gen("c1");
    CHECK(applyDerivation(red.model->d, x1) == c * x1);
}

TEST_CASE("order swap matches on the abelian system") {
    auto gs = abelianWeightSystem();
    BvModel red = buildReduced(gs);
    BvModel swap = buildOrderSwap(gs);
    auto cert = compareOrders(red, swap);
    INFO(cert.detail);
    CHECK(cert.pass);
}

TEST_CASE("order swap matches on sl2 with the cubic ghost term") {
    auto gs = sl2Casimir();
    BvModel red = buildReduced(gs);
    CHECK(masterResidue(red).zero());
    CHECK(checkDifferential(*red.model).pass);
    CHECK(red.omega->pass);

    // the cubic ghost term is present
    bool cubic = false;
    for (const auto& [m, c] : red.masterAction->terms())
        if (m.factors.size() == 3 && monomialDegree(*red.model->table, m) == 0) {
            int ghosts = 0;
            for (auto& [g, e] : m.factors)
                ghosts += red.model->table->gen(g).flavor == Flavor::Ghost ? int(e) : 0;
            cubic = cubic || ghosts == 2;
        }
    CHECK(cubic);

    BvModel swap = buildOrderSwap(gs);
    auto cert = compareOrders(red, swap);
    INFO(cert.detail);
    CHECK(cert.pass);

    auto crit = buildCrit(gs);
    auto mu = momentMapComponents(crit, gs);
    CHECK(momentClosure(crit, gs, mu).pass);
}

TEST_CASE("degenerate order swap with trivial algebra") {
    auto gs = makeGaugeSystem("free", {"x1", "x2"}, {1, 1}, LieAlgebra::abelian(0));
    Element x1 = Element::generator(gs.base, 0), x2 = Element::generator(gs.base, 1);
    gs.potential = Rational(1, 2) * (x1 * x1 + x2 * x2);
    BvModel red = buildReduced(gs);
    BvModel crit = buildCrit(gs);
    CHECK(red.model->table->size() == crit.model->table->size());
    BvModel swap = buildOrderSwap(gs);
    CHECK(compareOrders(red, swap).pass);
}

TEST_CASE("zero locus agrees with buildCrit on exact forms and rejects non-closed ones") {
    auto gs = abelianWeightSystem();
    Element x1 = Element::generator(gs.base, 0), x2 = Element::generator(gs.base, 1);
    BvModel viaS = buildCrit(gs);
    BvModel viaAlpha = buildZeroLocus(gs, {x2, x1}); // alpha = dS
    CHECK(viaAlpha.model->table->size() == viaS.model->table->size());
    for (uint32_t i = 0; i < viaS.model->table->size(); ++i)
        CHECK(viaS.model->d.onGen[i] ==
              remapByName(viaAlpha.model->d.onGen[i], viaS.model->table));
    CHECK(remapByName(viaAlpha.omega->form.bottom(), viaS.dr->total->table) ==
          viaS.omega->form.bottom());

    CHECK_THROWS_AS(buildZeroLocus(gs, {x2, Element(gs.base)}), Error);
}

TEST_CASE("constrained critical locus carries the Lagrange system") {
    auto gs = constrainedAbelian();
    REQUIRE(validateGaugeSystem(gs).empty());
    auto cc = buildConstrainedCrit(gs);
    CHECK(checkDifferential(*cc.apex.model).pass);
    // d xi_i = dS/dx_i - th * dp/dx_i
    Element x1 = cc.apex.gen("x1"), x2 = cc.apex.gen("x2"), th = cc.apex.gen("th1");
    Element got = applyDerivation(cc.apex.model->d, cc.apex.gen("xi_x1"));
    Element want = Rational(2) * x1 * x2 * x2 - th * x2;
    CHECK(got == want);
    CHECK(checkChainMap(cc.fromCotangentY).pass);

    // classical Lagrange-multiplier example: S = x1, p = x1^2 + x2^2, trivial algebra
    auto lgs = makeGaugeSystem("lagrange", {"x1", "x2"}, {1, 1}, LieAlgebra::abelian(0));
    Element y1 = Element::generator(lgs.base, 0), y2 = Element::generator(lgs.base, 1);
    lgs.potential = y1;
    GaugeSystem::Constraint cons;
    Generator y;
    y.name = "y1";
    y.degree = 0;
    y.flavor = Flavor::Field;
    y.weight = 2;
    cons.yBase = makeTable({y});
    cons.components = {y1 * y1 + y2 * y2};
    cons.yAction = {};
    lgs.constraint = std::move(cons);
    auto lc = buildConstrainedCrit(lgs);
    Element gxi1 = applyDerivation(lc.apex.model->d, lc.apex.gen("xi_x1"));
    Element gxi2 = applyDerivation(lc.apex.model->d, lc.apex.gen("xi_x2"));
    Element X1 = lc.apex.gen("x1"), X2 = lc.apex.gen("x2"), TH = lc.apex.gen("th1");
    CHECK(gxi1 == Element(lc.apex.model->table, 1) - Rational(2) * TH * X1);
    CHECK(gxi2 == -Rational(2) * TH * X2);
}

TEST_CASE("CE reduction of the constrained model closes") {
    auto gs = constrainedAbelian();
    auto cc = buildConstrainedCrit(gs);
    auto actions = constrainedActions(gs, cc.apex.model);
    auto red = adjoinGhostsCE(cc.apex.model, actions, gs.algebra, {"c1"});
    CHECK(checkDifferential(*red).pass);
}
