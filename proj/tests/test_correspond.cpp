#include "doctest.h"
#include "testutil.hpp"

#include "bvred/correspond.hpp"
#include "bvred/homology.hpp"

using namespace bvred;

namespace {

std::shared_ptr<const SemiFreeCdga> affine(const std::vector<std::string>& names,
                                           std::optional<int> wt = 1) {
    std::vector<Generator> g;
    for (const auto& n : names) {
        Generator gen;
        gen.name = n;
        gen.degree = 0;
        gen.flavor = Flavor::Field;
        gen.weight = wt;
        g.push_back(gen);
    }
    auto t = makeTable(std::move(g));
    auto A = std::make_shared<SemiFreeCdga>();
    A->table = t;
    A->d = Derivation::zero(t, 1);
    return A;
}

} // namespace

TEST_CASE("shifted cotangent models at several shifts") {
    auto A = affine({"x"});
    auto T0 = shiftedCotangent(A, 0);
    CHECK(T0.model->table->gen(1).name == "p_x");
    CHECK(T0.model->table->gen(1).degree == 0);
    CHECK(T0.omega.pass);

    auto Tm1 = shiftedCotangent(A, -1);
    CHECK(Tm1.model->table->gen(1).degree == -1);
    CHECK(Tm1.omega.pass);

    // CE of a 1-dim abelian algebra: T*[1]Bg has the coadjoint pairing (1,0)
    std::vector<Generator> cg(1);
    cg[0] = {"c", 1, Flavor::Ghost, {}, 0, {}};
    auto ce = std::make_shared<SemiFreeCdga>();
    ce->table = makeTable(std::move(cg));
    ce->d = Derivation::zero(ce->table, 1);
    auto T1 = shiftedCotangent(ce, 1, "t_");
    CHECK(T1.model->table->gen(1).degree == 0);
    CHECK(T1.omega.pass);
}

TEST_CASE("transported differential on a Koszul base") {
    // base M: x even, w odd with d w = p(x) - a
    auto t = makeTable({{"x", 0, Flavor::Field, {}, 0, {}},
                        {"w", -1, Flavor::Antifield, {}, 0, {}}});
    auto M = std::make_shared<SemiFreeCdga>();
    M->table = t;
    M->d = Derivation::zero(t, 1);
    Element x = Element::generator(t, 0);
    M->d.set(1, x * x - Element(t, Rational(1))); // d w = x^2 - 1
    auto TM = shiftedCotangent(M, 0);
    CHECK(TM.omega.pass);
    CHECK(checkDifferential(*TM.model).pass);
    // d(p_x) = -2x p_w under rule 5
    Element px = TM.model->gen("p_x"), pw = TM.model->gen("p_w");
    Element X = TM.model->gen("x");
    CHECK(applyDerivation(TM.model->d, px) == Rational(-2) * X * pw);
    CHECK(applyDerivation(TM.model->d, pw).zero());
}

TEST_CASE("graphs and zero sections are isotropic, non-closed forms refused") {
    auto A = affine({"x1", "x2"});
    auto T = shiftedCotangent(A, 0);
    Element x1 = Element::generator(A->table, 0), x2 = Element::generator(A->table, 1);
    auto L = graphLagrangian(T, {Rational(3) * x1 * x1 + x2, x1}); // alpha = d(x1^3 + x1 x2)
    CHECK(L.isotropy.pass);
    auto Z = zeroSection(T);
    CHECK(Z.isotropy.pass);
    CHECK(Z.shape == LagrangianShape::ZeroSection);
    CHECK_THROWS_AS(graphLagrangian(T, {x2, Element(A->table)}), Error);
}

TEST_CASE("pushforward to a point recovers the zero locus") {
    auto A = affine({"x1", "x2"});
    auto T = shiftedCotangent(A, 0);
    // S = (x1^2 + x2^2)/2 : values dS
    Element x1 = Element::generator(A->table, 0), x2 = Element::generator(A->table, 1);
    auto L = graphLagrangian(T, {x1, x2});
    auto P = affine({}, std::nullopt); // the point
    auto TP = shiftedCotangent(P, 0);
    CdgaMorphism toPt;
    toPt.source = P;
    toPt.target = A;
    auto pushed = pushforwardLagrangian(toPt, T, TP, L);
    // the leg is the Koszul model of Crit(S)
    const auto& t = *pushed.leg->table;
    REQUIRE(t.size() == 4);
    CHECK(t.gen(2).name == "xi_x1");
    CHECK(t.gen(2).degree == -1);
    Element dxi = applyDerivation(pushed.leg->d, Element::generator(pushed.leg->table, 2));
    // resolvent orientation: d xi = psi(xv) - value = -x1
    CHECK(dxi == -Element::generator(pushed.leg->table, 0));
    CHECK(pushed.isotropy.pass);
}

TEST_CASE("pushforward of a zero section is the shifted conormal") {
    auto A = affine({"x1", "x2"});
    auto Y = affine({"y1"}, 2);
    auto TX = shiftedCotangent(A, 0);
    auto TY = shiftedCotangent(Y, 0);
    Element x1 = Element::generator(A->table, 0), x2 = Element::generator(A->table, 1);
    CdgaMorphism p;
    p.source = Y;
    p.target = A;
    p.onGen = {x1 * x1 + x2 * x2};
    auto con = pushforwardLagrangian(p, TX, TY, zeroSection(TX));
    CHECK(con.isotropy.pass);
    // d xi_i = 2 x_i eta
    Element eta = con.leg->gen("eta_y1");
    CHECK(applyDerivation(con.leg->d, con.leg->gen("xi_x1")) ==
          Rational(2) * con.leg->gen("x1") * eta);
    CHECK(applyDerivation(con.leg->d, con.leg->gen("xi_x2")) ==
          Rational(2) * con.leg->gen("x2") * eta);
}

TEST_CASE("pullback of a graph is the graph of the pulled form") {
    auto A = affine({"x"});
    auto B = affine({"y1", "y2"});
    auto TA = shiftedCotangent(A, 0);
    auto TB = shiftedCotangent(B, 0);
    Element y1 = Element::generator(B->table, 0), y2 = Element::generator(B->table, 1);
    auto L = graphLagrangian(TB, {y2, y1}); // alpha = d(y1 y2)
    CdgaMorphism f; // x -> (x, x^2)
    f.source = B;
    f.target = A;
    Element x = Element::generator(A->table, 0);
    f.onGen = {x, x * x};
    auto pulled = pullbackLagrangian(f, TA, TB, L);
    // f*(d(y1 y2)) = d(x * x^2) = 3x^2 dx
    CHECK(pulled.map.onGen.at(TA.conjugateOf(0)) == Rational(3) * x * x);
    CHECK(pulled.isotropy.pass);

    auto idPull = pullbackLagrangian(identityMorphism(B), TB, TB, L);
    CHECK(idPull.map.onGen.at(TB.conjugateOf(0)) == y2);
    CHECK(idPull.map.onGen.at(TB.conjugateOf(1)) == y1);
}

TEST_CASE("derived fiber products") {
    // pt x_{A^1, 0, 0} pt -> Q[eps], |eps| = -1, d eps = 0
    auto line = affine({"y"});
    auto P = affine({}, std::nullopt);
    CdgaMorphism at0a, at0b;
    at0a.source = line;
    at0a.target = P;
    at0a.onGen = {Element(P->table)};
    at0b = at0a;
    auto F = derivedFiberProduct(at0a, at0b);
    REQUIRE(F.model->table->size() == 1);
    CHECK(F.model->table->gen(0).degree == -1);
    CHECK(F.model->d.onGen[0].zero());

    // Graph(dS) x_{T*X} zero section -> the Koszul model of Crit(S)
    auto A = affine({"x1", "x2"});
    auto T = shiftedCotangent(A, 0);
    Element x1 = Element::generator(A->table, 0), x2 = Element::generator(A->table, 1);
    auto L = graphLagrangian(T, {x1, x2});
    auto Z = zeroSection(T);
    auto C = derivedFiberProduct(L.map, Z.map);
    REQUIRE(C.model->table->size() == 4);
    CHECK(checkDifferential(*C.model).pass);
    uint32_t e1 = 2; // resolvent of p_x1
    CHECK(C.model->table->gen(e1).degree == -1);
    Element de = applyDerivation(C.model->d, Element::generator(C.model->table, e1));
    CHECK(de == -Element::generator(C.model->table, 0));
}

TEST_CASE("self-intersection of zero sections inside T*[n+1] matches T*[n] (Betti)") {
    auto A = affine({"x"});
    auto T1 = shiftedCotangent(A, 1);
    auto zs = zeroSection(T1);
    auto zs2 = zeroSection(T1);
    auto F = derivedFiberProduct(zs.map, zs2.map);
    CHECK(checkDifferential(*F.model).pass);

    auto T0 = shiftedCotangent(A, 0);
    Window w{-2, 1, {}, {}, 5};
    auto bF = betti(*F.model, w);
    auto bT = betti(*T0.model, w);
    for (int k = -2; k <= 1; ++k)
        CHECK(bF.betti.at({k, 0}) == bT.betti.at({k, 0}));
}

TEST_CASE("acyclic pair cancellation") {
    auto t = makeTable({{"x", 0, Flavor::Field, {}, 0, {}},
                        {"u", 0, Flavor::Field, {}, 0, {}},
                        {"v", 1, Flavor::Ghost, {}, 0, {}},
                        {"k", 1, Flavor::Ghost, {}, 0, {}},
                        {"xi", -1, Flavor::Antifield, {}, 0, {}}});
    auto A = std::make_shared<SemiFreeCdga>();
    A->table = t;
    A->d = Derivation::zero(t, 1);
    Element x = Element::generator(t, 0);
    A->d.set(1, Element::generator(t, 2) + x * Element::generator(t, 3)); // d u = v + x k
    A->d.set(4, x);                                                       // d xi = x
    auto S = cancelAcyclicPairs(A);
    CHECK(S.cancelled >= 2);
    CHECK(checkChainMap(S.projection).pass);
    // (u, v) cancels with v -> -x k; (xi, x) cancels; only k survives
    REQUIRE(S.model->table->size() == 1);
    CHECK(S.model->table->gen(0).name == "k");
}
