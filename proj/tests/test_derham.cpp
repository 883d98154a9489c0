#include "doctest.h"
#include "testutil.hpp"

#include "bvred/derham.hpp"

using namespace bvred;
using bvtest::Rng;

namespace {

std::shared_ptr<const SemiFreeCdga> model(TablePtr t) {
    auto A = std::make_shared<SemiFreeCdga>();
    A->table = t;
    A->d = Derivation::zero(t, 1);
    return A;
}

} // namespace

TEST_CASE("de Rham algebra of Q[x]") {
    auto t = makeTable({{"x", 0, Flavor::Field, {}, 0, {}}});
    auto dr = buildDeRham(model(t));
    const auto& tt = dr->total->table;
    CHECK(tt->size() == 2);
    CHECK(tt->gen(1).name == "d(x)");
    CHECK(tt->gen(1).degree == 1);
    CHECK(tt->gen(1).formWeight == 1);
    Element x = Element::generator(tt, 0), dx = Element::generator(tt, 1);
    CHECK((dx * dx).zero()); // classical one-form squares to zero
    CHECK(dr->applyDelta(x * x * x) == Rational(3) * x * x * dx);
}

TEST_CASE("abelian CE ghost: d(c) has degree 2 and is even") {
    auto t = makeTable({{"c", 1, Flavor::Ghost, {}, 0, {}}});
    auto dr = buildDeRham(model(t));
    const auto& tt = dr->total->table;
    CHECK(tt->gen(1).degree == 2);
    Element dc = Element::generator(tt, 1);
    CHECK(!(dc * dc).zero()); // Sym of a shifted line: delta c is polynomial
}

TEST_CASE("mixed differential anticommutes with the internal one") {
    // d xi = x
    auto t = makeTable({{"x", 0, Flavor::Field, {}, 0, {}},
                        {"xi", -1, Flavor::Antifield, {}, 0, {}}});
    auto A = std::make_shared<SemiFreeCdga>();
    A->table = t;
    A->d = Derivation::zero(t, 1);
    A->d.set(1, Element::generator(t, 0));
    auto dr = buildDeRham(A);
    const auto& tt = dr->total->table;
    Element dxi = Element::generator(tt, dr->symbolOf(1));
    Element dx = Element::generator(tt, dr->symbolOf(0));
    CHECK(dr->applyD(dxi) == -dx);
    CHECK(checkDifferential(*dr->total).pass);

    Rng rng(31);
    for (int k = 0; k < 60; ++k) {
        Element a = bvtest::randomHomogeneous(tt, rng);
        CHECK((dr->applyD(dr->applyDelta(a)) + dr->applyDelta(dr->applyD(a))).zero());
        CHECK(dr->applyDelta(dr->applyDelta(a)).zero());
    }
}

TEST_CASE("tautological forms on shift -1 cotangent models") {
    auto t1 = makeTable({{"x", 0, Flavor::Field, {}, 0, 1u},
                         {"xi", -1, Flavor::Antifield, {}, 0, 0u, true}});
    auto dr1 = buildDeRham(model(t1));
    auto tf1 = tautologicalForms(dr1, -1);
    const auto& tt = dr1->total->table;
    CHECK(tf1.lambda == Element::generator(tt, 1) * Element::generator(tt, 2));
    CHECK(tf1.omega.pass);
    REQUIRE(tf1.omega.pairing.size() == 1);

    auto t2 = bvtest::abelianBvTable();
    auto dr2 = buildDeRham(model(t2));
    auto tf2 = tautologicalForms(dr2, -1);
    CHECK(tf2.omega.pass);
    CHECK(tf2.omega.pairing.size() == 3);
    auto deg = tf2.omega.form.bottom().degree();
    REQUIRE(deg.has_value());
    CHECK(*deg == 1); // a 2-form of degree -1 sits in total degree +1
}

TEST_CASE("pullbacks of the symplectic form") {
    auto amb = bvtest::abelianBvTable();
    auto ambModel = model(amb);
    auto dr = buildDeRham(ambModel);
    auto tf = tautologicalForms(dr, -1);

    auto id = identityMorphism(ambModel);
    auto back = pullbackForm(id, dr, dr, tf.omega.form);
    CHECK(back.components.at(0) == tf.omega.form.bottom());

    // zero section: xi, t -> 0 into the base Q[x1,x2,c]... keep it affine
    auto baseT = makeTable({{"x1", 0, Flavor::Field, {}, 0, {}},
                            {"x2", 0, Flavor::Field, {}, 0, {}}});
    auto tX = makeTable({{"x1", 0, Flavor::Field, {}, 0, 2u},
                         {"x2", 0, Flavor::Field, {}, 0, 3u},
                         {"xi1", -1, Flavor::Antifield, {}, 0, 0u, true},
                         {"xi2", -1, Flavor::Antifield, {}, 0, 1u, true}});
    auto X = model(tX);
    auto drX = buildDeRham(X);
    auto tfX = tautologicalForms(drX, -1);
    auto L = model(baseT);
    auto drL = buildDeRham(L);
    CdgaMorphism zero;
    zero.source = X;
    zero.target = L;
    zero.onGen = {Element::generator(baseT, 0), Element::generator(baseT, 1),
                  Element(baseT), Element(baseT)};
    REQUIRE(checkChainMap(zero).pass);
    auto pulled = pullbackForm(zero, drX, drL, tfX.omega.form);
    for (const auto& c : pulled.components)
        CHECK(c.zero());
    auto iso = checkIsotropy(zero, drX, drL, tfX.omega.form);
    CHECK(iso.pass);

    // shift-0 cotangent for the graph examples
    auto tP = makeTable({{"x1", 0, Flavor::Field, {}, 0, 2u},
                         {"x2", 0, Flavor::Field, {}, 0, 3u},
                         {"p1", 0, Flavor::Fiber, {}, 0, 0u, true},
                         {"p2", 0, Flavor::Fiber, {}, 0, 1u, true}});
    auto P = model(tP);
    auto drP = buildDeRham(P);
    auto tfP = tautologicalForms(drP, 0);

    // graph of dS for S = x1^2: strictly isotropic
    CdgaMorphism graph;
    graph.source = P;
    graph.target = L;
    Element x1 = Element::generator(baseT, 0);
    graph.onGen = {x1, Element::generator(baseT, 1), Rational(2) * x1, Element(baseT)};
    REQUIRE(checkChainMap(graph).pass);
    auto iso2 = checkIsotropy(graph, drP, drL, tfP.omega.form);
    CHECK(iso2.pass);

    // graph of the non-closed alpha = x2 dx1 fails
    CdgaMorphism bad;
    bad.source = P;
    bad.target = L;
    bad.onGen = {x1, Element::generator(baseT, 1), Element::generator(baseT, 1),
                 Element(baseT)};
    REQUIRE(checkChainMap(bad).pass);
    auto iso3 = checkIsotropy(bad, drP, drL, tfP.omega.form);
    CHECK(!iso3.pass);
    CHECK(!iso3.residue.zero());
}

TEST_CASE("closedOneFormCheck") {
    auto t = makeTable({{"x1", 0, Flavor::Field, {}, 0, {}},
                        {"x2", 0, Flavor::Field, {}, 0, {}}});
    auto A = model(t);
    Element x1 = Element::generator(t, 0), x2 = Element::generator(t, 1);
    // alpha = dS for S = x1^3 + x1 x2
    CHECK(closedOneFormCheck(*A, {Rational(3) * x1 * x1 + x2, x1}));
    CHECK(closedOneFormCheck(*A, {x2, x1}));
    CHECK(!closedOneFormCheck(*A, {x2, Element(t)}));
}

TEST_CASE("deltaPrimitive inverts delta on exact forms") {
    auto t = makeTable({{"x1", 0, Flavor::Field, {}, 0, {}},
                        {"x2", 0, Flavor::Field, {}, 0, {}},
                        {"xi", -1, Flavor::Antifield, {}, 0, {}}});
    auto dr = buildDeRham(model(t));
    Rng rng(77);
    for (int k = 0; k < 40; ++k) {
        Element a = bvtest::randomHomogeneous(dr->total->table, rng);
        Element closed = dr->applyDelta(a);
        auto p = deltaPrimitive(*dr, closed);
        REQUIRE(p.has_value());
        CHECK(dr->applyDelta(*p) == closed);
    }
    CHECK(!deltaPrimitive(*dr, Element(dr->total->table, Rational(1))).has_value());
}
