#pragma once

#include "bvred/rational.hpp"
#include "bvred/table.hpp"

#include <map>
#include <vector>

namespace bvred {

// Canonical monomial: factors sorted by generator index, exponents >= 1,
// odd generators capped at exponent 1 structurally.
struct Monomial {
    std::vector<std::pair<uint32_t, uint32_t>> factors;

    bool operator==(const Monomial&) const = default;
    auto operator<=>(const Monomial&) const = default;

    bool trivial() const { return factors.empty(); }
    uint32_t exponent(uint32_t genIndex) const;
};

int monomialDegree(const GeneratorTable& t, const Monomial& m);
int monomialWeight(const GeneratorTable& t, const Monomial& m);    // requires weights
int monomialFormWeight(const GeneratorTable& t, const Monomial& m);
int monomialExponentTotal(const Monomial& m);

// Koszul sign for concatenating two canonical monomials: 0 if an odd
// generator squares, else +-1.
int mulSign(const GeneratorTable& t, const Monomial& a, const Monomial& b);

// Sorts a raw factor sequence into canonical order. Returns sign 0 and an
// empty monomial when an odd generator squares.
std::pair<int, Monomial> normalizeMonomial(
    const GeneratorTable& t,
    const std::vector<std::pair<uint32_t, uint32_t>>& raw);

// Finitely supported rational combination of canonical monomials.
class Element {
  public:
    Element() = default;
    explicit Element(TablePtr table) : table_(std::move(table)) {}
    Element(TablePtr table, const Rational& scalar);

    static Element generator(TablePtr table, uint32_t i);
    static Element monomial(TablePtr table, Monomial m, Rational coeff);

    const TablePtr& table() const { return table_; }
    const std::map<Monomial, Rational>& terms() const { return terms_; }
    bool zero() const { return terms_.empty(); }
    size_t termCount() const { return terms_.size(); }

    // nullopt for 0 or inhomogeneous elements
    std::optional<int> degree() const;
    bool homogeneous() const { return zero() || degree().has_value(); }
    Element component(int degree) const;        // degree-homogeneous part
    std::vector<int> degreesPresent() const;

    void add(const Monomial& m, const Rational& c); // fuses + drops zeros

    Element operator+(const Element& o) const;
    Element operator-(const Element& o) const;
    Element operator-() const;
    Element operator*(const Element& o) const;
    Element operator*(const Rational& c) const;
    bool operator==(const Element& o) const;

    std::string str() const;

  private:
    void requireSameTable(const Element& o) const;

    TablePtr table_;
    std::map<Monomial, Rational> terms_;
};

Element operator*(const Rational& c, const Element& e);

// Remaps an element into another table by generator name; fails on a
// missing name. Signs recompute for the new canonical order.
Element remapByName(const Element& e, const TablePtr& target);

std::string monomialStr(const GeneratorTable& t, const Monomial& m);

} // namespace bvred
