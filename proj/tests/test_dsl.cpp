#include "doctest.h"
#include "testutil.hpp"

#include "bvred/dsl.hpp"

using namespace bvred;

static const char* kAbelian = R"(
# the abelian weight-(1,-1) example
system abelian_weight {
  fields x1 x2;
  weights x1=1 x2=1;
  algebra dim 1 { f = 0; };
  action e1 = x1*d(x1) - x2*d(x2);
  potential S = x1*x2;
  window degree -4..2 weight 0..8;
  targets thm-a master-equation;
}
)";

TEST_CASE("parse, print, re-parse is the identity on the content") {
    auto r = parseSystem(kAbelian);
    REQUIRE(r.ok());
    const SystemFile& sf = *r.file;
    CHECK(sf.gs.name == "abelian_weight");
    CHECK(sf.gs.fieldCount() == 2);
    CHECK(sf.gs.algebra.dim == 1);
    CHECK(sf.targets == std::vector<std::string>{"thm-a", "master-equation"});
    Element x1 = Element::generator(sf.gs.base, 0), x2 = Element::generator(sf.gs.base, 1);
    CHECK(sf.gs.potential == x1 * x2);
    CHECK(sf.gs.action[0][0] == x1);
    CHECK(sf.gs.action[0][1] == -x2);
    CHECK(sf.window.weightMax == 8);

    auto r2 = parseSystem(sf.print());
    REQUIRE(r2.ok());
    CHECK(sf.sameContent(*r2.file));
    CHECK(r2.file->sameContent(sf));

    auto perm = sf.permuted();
    CHECK(perm.gs.base->gen(0).name == "x2");
    CHECK(validateGaugeSystem(perm.gs).empty());
}

TEST_CASE("semantic rejection prints the violated identity") {
    std::string bad = R"(system bad {
  fields x1 x2;
  algebra dim 1 { f = 0; };
  action e1 = x1*d(x1) - x2*d(x2);
  potential S = x1;
})";
    auto r = parseSystem(bad);
    CHECK(!r.ok());
    REQUIRE(!r.errors.empty());
    CHECK(r.errors[0].message.find("invariance violated") != std::string::npos);
    CHECK(r.errors[0].message.find("x1") != std::string::npos);

    std::string badForm = R"(system badform {
  fields x1 x2;
  oneform alpha = (x2, 0);
})";
    auto r2 = parseSystem(badForm);
    CHECK(!r2.ok());
    CHECK(r2.errors[0].message.find("not closed") != std::string::npos);

    std::string syntax = "system s { fields x1\n  potential S = x1; }";
    auto r3 = parseSystem(syntax);
    CHECK(!r3.ok());
    CHECK(r3.errors[0].line == 2);
}

TEST_CASE("empty algebra block gives a valid system with trivial symmetries") {
    std::string txt = R"(system free {
  fields x1;
  potential S = x1^2;
})";
    auto r = parseSystem(txt);
    REQUIRE(r.ok());
    CHECK(r.file->gs.algebra.dim == 0);
}

TEST_CASE("constraint and character stanzas") {
    std::string txt = R"(system constrained {
  fields x1 x2;
  weights x1=1 x2=1;
  algebra dim 1 { f = 0; };
  action e1 = x1*d(x1) - x2*d(x2);
  potential S = x1^2*x2^2;
  character chi = (0);
  constraint p : Y(dim 1, action 0) = (x1*x2) at 1;
  targets thm-b;
})";
    auto r = parseSystem(txt);
    REQUIRE(r.ok());
    REQUIRE(r.file->gs.constraint.has_value());
    CHECK(r.file->constraintValue == Rational(1));
    auto r2 = parseSystem(r.file->print());
    REQUIRE(r2.ok());
    CHECK(r.file->sameContent(*r2.file));
}

TEST_CASE("sl2 structure constants parse") {
    std::string txt = R"(system sl2 {
  fields a1 a2 a3;
  weights a1=1 a2=1 a3=1;
  algebra dim 3 { f[1,3,2] = 1; f[2,1,1] = 2; f[2,3,3] = -2; };
  action e1 = 2*a2*d(a1) - a3*d(a2);
  action e2 = -2*a1*d(a1) + 2*a3*d(a3);
  action e3 = a1*d(a2) - 2*a2*d(a3);
  potential S = a2^2 + a1*a3;
})";
    auto r = parseSystem(txt);
    REQUIRE(r.ok());
    CHECK(r.file->gs.algebra.at(0, 2, 1) == 1);
    CHECK(r.file->gs.algebra.at(2, 0, 1) == -1);
    auto r2 = parseSystem(r.file->print());
    REQUIRE(r2.ok());
    CHECK(r.file->sameContent(*r2.file));
}
