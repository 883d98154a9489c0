#include "doctest.h"
#include "testutil.hpp"

#include "bvred/correspond.hpp"

using namespace bvred;

namespace {

GaugeSystem gl1OnLine() {
    auto gs = makeGaugeSystem("gl1", {"q"}, {1}, LieAlgebra::abelian(1));
    gs.action[0][0] = Element::generator(gs.base, 0); // weight-1 scaling
    return gs;
}

// O((T*A^1)/g): q, p, c1 with the CE differential
std::shared_ptr<const SemiFreeCdga> quotientOfCotangent() {
    auto t = makeTable({{"q", 0, Flavor::Field, {}, 0, {}},
                        {"p_q", 0, Flavor::Fiber, {}, 0, {}},
                        {"c1", 1, Flavor::Ghost, {}, 0, {}}});
    auto A = std::make_shared<SemiFreeCdga>();
    A->table = t;
    A->d = Derivation::zero(t, 1);
    A->d.set(0, Element::generator(t, 2) * Element::generator(t, 0));
    A->d.set(1, -(Element::generator(t, 2) * Element::generator(t, 1)));
    return A;
}

} // namespace

TEST_CASE("moment-map magic cube for the abelian weight-1 action on T*A^1") {
    // X0 = T*[1]Bg, the coadjoint model
    std::vector<Generator> cg(1);
    cg[0] = {"c1", 1, Flavor::Ghost, {}, 0, {}};
    auto BG = std::make_shared<SemiFreeCdga>();
    BG->table = makeTable(std::move(cg));
    BG->d = Derivation::zero(BG->table, 1);
    auto X0 = shiftedCotangent(BG, 1, "t_");
    REQUIRE(X0.omega.pass);

    // L01 = (T*A^1)/g with the reduced moment map: c -> c, t -> qp
    auto XQ = quotientOfCotangent();
    LagrangianModel L01;
    L01.ambient = X0.model;
    L01.ambientDr = X0.dr;
    L01.ambientOmega = X0.omega.form;
    L01.ambientShift = X0.shift;
    L01.leg = XQ;
    {
        CdgaMorphism f;
        f.source = X0.model;
        f.target = XQ;
        Element q = Element::generator(XQ->table, 0), p = Element::generator(XQ->table, 1);
        f.onGen = {Element::generator(XQ->table, 2), q * p};
        REQUIRE(checkChainMap(f).pass);
        L01.map = std::move(f);
        L01.shape = LagrangianShape::SectionLike;
        auto dr = buildDeRham(XQ);
        L01.isotropy = checkIsotropy(L01.map, X0.dr, dr, X0.omega.form);
        REQUIRE(L01.isotropy.pass);
        REQUIRE(!L01.isotropy.primitive.empty());
    }
    auto L02 = zeroSection(X0);
    auto L03 = cotangentFiber(X0, {Element(BG->table)});

    auto cube = magicCube(X0, L01, L02, L03);
    CHECK(cube.omega12.pass);
    CHECK(cube.omegaX123.pass);
    CHECK(cube.apexIsotropy.pass);

    // corner 12 is the reduction model of T*A^1
    auto red = reduceCotangent(gl1OnLine());
    auto c12 = renameGenerators(cube.corner12, {{"e2_t_c1", "t1"}});
    auto fw = generatorMatching(red.model, c12);
    CHECK(checkChainMap(fw).pass);

    // the apex strictifies to Z(mu): q, p, tau with d tau = qp
    auto strictApex = cancelAcyclicPairs(cube.apex);
    REQUIRE(strictApex.model->table->size() == 3);
    auto zt = makeTable({{"q", 0, Flavor::Field, {}, 0, {}},
                         {"p_q", 0, Flavor::Fiber, {}, 0, {}},
                         {"e2_t_c1", -1, Flavor::Antighost, {}, 0, {}}});
    auto Z = std::make_shared<SemiFreeCdga>();
    Z->table = zt;
    Z->d = Derivation::zero(zt, 1);
    Z->d.set(2, Element::generator(zt, 0) * Element::generator(zt, 1));
    auto cmp = generatorMatching(Z, strictApex.model);
    CHECK(checkChainMap(cmp).pass);
}

TEST_CASE("Beck-Chevalley on the quotient square") {
    auto gs = makeGaugeSystem("abelian", {"x1", "x2"}, {1, 1}, LieAlgebra::abelian(1));
    Element x1 = Element::generator(gs.base, 0), x2 = Element::generator(gs.base, 1);
    gs.action[0][0] = x1;
    gs.action[0][1] = -x2;
    gs.potential = x1 * x2;
    auto cert = beckChevalleyQuotient(gs);
    INFO(cert.detail);
    CHECK(cert.pass);
}

TEST_CASE("Beck-Chevalley on the Lagrange-multiplier square") {
    auto gs = makeGaugeSystem("lagrange", {"x1", "x2"}, {1, 1}, LieAlgebra::abelian(0));
    Element x1 = Element::generator(gs.base, 0), x2 = Element::generator(gs.base, 1);
    gs.potential = x1;
    GaugeSystem::Constraint cons;
    Generator y;
    y.name = "y1";
    y.degree = 0;
    y.flavor = Flavor::Field;
    cons.yBase = makeTable({y});
    cons.components = {x1 * x1 + x2 * x2};
    gs.constraint = std::move(cons);
    auto cert = beckChevalleyLagrange(gs, Rational(1));
    INFO(cert.detail);
    CHECK(cert.pass);
}
