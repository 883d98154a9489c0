#include "doctest.h"
#include "testutil.hpp"

#include "bvred/antibracket.hpp"

using namespace bvred;
using bvtest::Rng;

namespace {

TablePtr twoFieldsTwoXi() {
    std::vector<Generator> g(4);
    g[0] = {"x1", 0, Flavor::Field, {}, 0, 2u};
    g[1] = {"x2", 0, Flavor::Field, {}, 0, 3u};
    g[2] = {"xi1", -1, Flavor::Antifield, {}, 0, 0u};
    g[3] = {"xi2", -1, Flavor::Antifield, {}, 0, 1u};
    return makeTable(std::move(g));
}

} // namespace

TEST_CASE("normalizeMonomial sorts with Koszul signs") {
    auto t = twoFieldsTwoXi();
    // xi2 * xi1 -> -(xi1 xi2)
    auto [s1, m1] = normalizeMonomial(*t, {{3, 1}, {2, 1}});
    CHECK(s1 == -1);
    CHECK(monomialStr(*t, m1) == "xi1*xi2");
    // xi1 * xi1 -> 0
    auto [s2, m2] = normalizeMonomial(*t, {{2, 1}, {2, 1}});
    CHECK(s2 == 0);
    // x2 * x1 -> +(x1 x2)
    auto [s3, m3] = normalizeMonomial(*t, {{1, 1}, {0, 1}});
    CHECK(s3 == 1);
    CHECK(monomialStr(*t, m3) == "x1*x2");
}

TEST_CASE("mul: odd squares vanish, even ones do not") {
    auto t = bvtest::abelianBvTable();
    Element c = Element::generator(t, 4);
    Element tt = Element::generator(t, 5);
    CHECK((c * c).zero());
    CHECK(!(tt * tt).zero());

    Element x1 = Element::generator(t, 0);
    Element xi1 = Element::generator(t, 2);
    CHECK((x1 + xi1) * xi1 == x1 * xi1);
}

TEST_CASE("graded commutativity on random homogeneous pairs") {
    auto t = bvtest::abelianBvTable();
    Rng rng(42);
    for (int k = 0; k < 200; ++k) {
        Element a = bvtest::randomHomogeneous(t, rng);
        Element b = bvtest::randomHomogeneous(t, rng);
        if (a.zero() || b.zero())
            continue;
        int da = *a.degree(), db = *b.degree();
        int sign = ((da & 1) && (db & 1)) ? -1 : 1;
        CHECK(a * b == b * a * Rational(sign));
    }
}

TEST_CASE("mul is associative on random triples") {
    auto t = bvtest::abelianBvTable();
    Rng rng(7);
    for (int k = 0; k < 60; ++k) {
        Element a = bvtest::randomHomogeneous(t, rng);
        Element b = bvtest::randomHomogeneous(t, rng);
        Element c = bvtest::randomHomogeneous(t, rng);
        CHECK((a * b) * c == a * (b * c));
    }
}

TEST_CASE("applyDerivation matches the spec examples") {
    auto t = twoFieldsTwoXi();
    Element x1 = Element::generator(t, 0), x2 = Element::generator(t, 1);
    Element xi1 = Element::generator(t, 2), xi2 = Element::generator(t, 3);

    Derivation d = Derivation::zero(t, 1);
    d.set(2, x2); // d xi1 = x2
    CHECK(applyDerivation(d, x1 * xi1) == x1 * x2);
    CHECK(applyDerivation(d, Element(t, Rational(5))).zero());

    // d xi^i = dS/dx_i for S = (x1^2+x2^2)/2
    Derivation dS = Derivation::zero(t, 1);
    dS.set(2, x1);
    dS.set(3, x2);
    CHECK(applyDerivation(dS, xi1 * xi2) == x1 * xi2 - x2 * xi1);
}

TEST_CASE("Leibniz rule on random products") {
    auto t = bvtest::abelianBvTable();
    Rng rng(99);
    Derivation d = Derivation::zero(t, 1);
    d.set(2, Element::generator(t, 1));                             // d xi1 = x2
    d.set(5, Element::generator(t, 0) * Element::generator(t, 2)); // d t = x1 xi1
    for (int k = 0; k < 100; ++k) {
        Element a = bvtest::randomHomogeneous(t, rng);
        Element b = bvtest::randomHomogeneous(t, rng);
        if (a.zero())
            continue;
        int sign = (*a.degree() & 1) ? -1 : 1; // deg d = 1
        Element lhs = applyDerivation(d, a * b);
        Element rhs = applyDerivation(d, a) * b + Rational(sign) * a * applyDerivation(d, b);
        CHECK(lhs == rhs);
    }
}

TEST_CASE("checkDifferential") {
    auto t = makeTable({{"x", 0, Flavor::Field, {}, 0, 1u},
                        {"xi", -1, Flavor::Antifield, {}, 0, 0u},
                        {"t", -2, Flavor::Antighost, {}, 0, {}}});
    SemiFreeCdga koszul{t, Derivation::zero(t, 1)};
    koszul.d.set(1, Element::generator(t, 0) * Rational(2)); // d xi = 2x
    CHECK(checkDifferential(koszul).pass);

    SemiFreeCdga bad{t, Derivation::zero(t, 1)};
    bad.d.set(1, Element::generator(t, 0));  // d xi = x
    bad.d.set(2, Element::generator(t, 1));  // d t = xi
    auto cert = checkDifferential(bad);
    CHECK(!cert.pass);
    CHECK(*cert.generator == 2);
    CHECK(cert.residue == Element::generator(t, 0));
}

TEST_CASE("sl2 Chevalley model has a square-zero differential") {
    // basis (e,h,f): [e,f]=h, [h,e]=2e, [h,f]=-2f
    auto t = makeTable({{"c1", 1, Flavor::Ghost, {}, 0, {}},
                        {"c2", 1, Flavor::Ghost, {}, 0, {}},
                        {"c3", 1, Flavor::Ghost, {}, 0, {}}});
    Element c1 = Element::generator(t, 0), c2 = Element::generator(t, 1),
            c3 = Element::generator(t, 2);
    SemiFreeCdga ce{t, Derivation::zero(t, 1)};
    // d c^a = -1/2 f^a_{bc} c^b c^c
    ce.d.set(0, Rational(2) * c1 * c2); // f^1_{21}=2
    ce.d.set(1, -(c1 * c3));            // f^2_{13}=1
    ce.d.set(2, Rational(2) * c2 * c3); // f^3_{32}=2
    CHECK(checkDifferential(ce).pass);
}

TEST_CASE("antibracket pairing and symmetry") {
    auto t = bvtest::abelianBvTable();
    Element x1 = Element::generator(t, 0), x2 = Element::generator(t, 1);
    Element xi1 = Element::generator(t, 2), xi2 = Element::generator(t, 3);

    CHECK(antibracket(x1, xi1) == Element(t, 1));
    CHECK(antibracket(xi1, x1) == Element(t, -1));
    CHECK(antibracket(x1, xi2).zero());

    Rng rng(1234);
    for (int k = 0; k < 120; ++k) {
        Element a = bvtest::randomHomogeneous(t, rng);
        Element b = bvtest::randomHomogeneous(t, rng);
        if (a.zero() || b.zero())
            continue;
        int sa = *a.degree() + 1, sb = *b.degree() + 1;
        int sign = ((sa & 1) && (sb & 1)) ? -1 : 1;
        CHECK(antibracket(a, b) == -Rational(sign) * antibracket(b, a));
    }
}

TEST_CASE("antibracket is a biderivation in its second slot") {
    auto t = bvtest::abelianBvTable();
    Rng rng(555);
    for (int k = 0; k < 80; ++k) {
        Element a = bvtest::randomHomogeneous(t, rng);
        Element b = bvtest::randomHomogeneous(t, rng);
        Element c = bvtest::randomHomogeneous(t, rng);
        if (a.zero() || b.zero())
            continue;
        int sign = (((*a.degree() + 1) & 1) && (*b.degree() & 1)) ? -1 : 1;
        Element lhs = antibracket(a, b * c);
        Element rhs = antibracket(a, b) * c + Rational(sign) * b * antibracket(a, c);
        CHECK(lhs == rhs);
    }
}

TEST_CASE("abelian master action satisfies the master equation") {
    auto t = bvtest::abelianBvTable();
    Element x1 = Element::generator(t, 0), x2 = Element::generator(t, 1);
    Element xi1 = Element::generator(t, 2), xi2 = Element::generator(t, 3);
    Element c = Element::generator(t, 4);

    Element mu = x1 * xi1 - x2 * xi2;
    Element sbv = x1 * x2 - c * mu; // signs.hpp rule 8, abelian case
    CHECK(antibracket(sbv, sbv).zero());

    Derivation d = hamiltonianDerivation(sbv);
    CHECK(d.degree == 1);
    CHECK(applyDerivation(d, x1) == c * x1);
    CHECK(applyDerivation(d, Element::generator(t, 5)) == mu);
    SemiFreeCdga model{t, d};
    CHECK(checkDifferential(model).pass);

    // the weight-(1,-1) abelian spec example: {sbv, sbv} = 0 term by term
    CHECK(antibracket(x1 * x2 + c * (x1 * xi1 - x2 * xi2),
                      x1 * x2 + c * (x1 * xi1 - x2 * xi2))
              .zero());
}

TEST_CASE("remapByName recomputes signs under permuted declaration order") {
    auto t = bvtest::abelianBvTable();
    std::vector<Generator> rev(t->gens().rbegin(), t->gens().rend());
    for (auto& g : rev)
        g.conjugate.reset();
    auto t2 = makeTable(rev);

    Element xi1 = Element::generator(t, 2), xi2 = Element::generator(t, 3);
    Element p = xi1 * xi2;
    Element q = remapByName(p, t2);
    // xi1*xi2 reads xi2*xi1 in the reversed table
    auto [s, m] = normalizeMonomial(*t2, {{t2->index("xi1"), 1}, {t2->index("xi2"), 1}});
    CHECK(s == -1);
    CHECK(q == Element::monomial(t2, m, -1));
    CHECK(remapByName(q, t) == p);
}
