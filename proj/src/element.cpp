#include "bvred/element.hpp"

#include <algorithm>
#include <sstream>

namespace bvred {

uint32_t Monomial::exponent(uint32_t genIndex) const {
    for (const auto& [g, e] : factors)
        if (g == genIndex)
            return e;
    return 0;
}

int monomialDegree(const GeneratorTable& t, const Monomial& m) {
    int d = 0;
    for (const auto& [g, e] : m.factors)
        d += t.gen(g).degree * int(e);
    return d;
}

int monomialWeight(const GeneratorTable& t, const Monomial& m) {
    int w = 0;
    for (const auto& [g, e] : m.factors) {
        if (!t.gen(g).weight)
            throw Error("generator without weight: " + t.gen(g).name);
        w += *t.gen(g).weight * int(e);
    }
    return w;
}

int monomialFormWeight(const GeneratorTable& t, const Monomial& m) {
    int w = 0;
    for (const auto& [g, e] : m.factors)
        w += t.gen(g).formWeight * int(e);
    return w;
}

int monomialExponentTotal(const Monomial& m) {
    int n = 0;
    for (const auto& [g, e] : m.factors)
        n += int(e);
    return n;
}

int mulSign(const GeneratorTable& t, const Monomial& a, const Monomial& b) {
    int sign = 1;
    for (const auto& [gb, eb] : b.factors) {
        if (!t.odd(gb))
            continue;
        for (const auto& [ga, ea] : a.factors) {
            if (!t.odd(ga))
                continue;
            if (ga == gb)
                return 0; // odd square
            if (ga > gb)
                sign = -sign;
        }
    }
    return sign;
}

static Monomial mergeMono(const Monomial& a, const Monomial& b) {
    Monomial out;
    out.factors.reserve(a.factors.size() + b.factors.size());
    size_t i = 0, j = 0;
    while (i < a.factors.size() || j < b.factors.size()) {
        if (j == b.factors.size() || (i < a.factors.size() && a.factors[i].first < b.factors[j].first)) {
            out.factors.push_back(a.factors[i++]);
        } else if (i == a.factors.size() || b.factors[j].first < a.factors[i].first) {
            out.factors.push_back(b.factors[j++]);
        } else {
            out.factors.emplace_back(a.factors[i].first, a.factors[i].second + b.factors[j].second);
            ++i, ++j;
        }
    }
    return out;
}

std::pair<int, Monomial> normalizeMonomial(
    const GeneratorTable& t,
    const std::vector<std::pair<uint32_t, uint32_t>>& raw) {
    int sign = 1;
    Monomial acc;
    for (const auto& [g, e] : raw) {
        if (g >= t.size())
            throw Error("generator index out of range");
        if (e == 0)
            continue;
        if (t.odd(g) && e >= 2)
            return {0, Monomial{}};
        Monomial single{{{g, e}}};
        int s = mulSign(t, acc, single);
        if (s == 0)
            return {0, Monomial{}};
        sign *= s;
        acc = mergeMono(acc, single);
    }
    return {sign, acc};
}

Element::Element(TablePtr table, const Rational& scalar) : table_(std::move(table)) {
    if (scalar != 0)
        terms_[Monomial{}] = scalar;
}

Element Element::generator(TablePtr table, uint32_t i) {
    if (i >= table->size())
        throw Error("generator index out of range");
    Element e(table);
    e.terms_[Monomial{{{i, 1}}}] = 1;
    return e;
}

Element Element::monomial(TablePtr table, Monomial m, Rational coeff) {
    Element e(std::move(table));
    if (coeff != 0)
        e.terms_[std::move(m)] = std::move(coeff);
    return e;
}

std::optional<int> Element::degree() const {
    if (terms_.empty())
        return std::nullopt;
    int d = monomialDegree(*table_, terms_.begin()->first);
    for (const auto& [m, c] : terms_)
        if (monomialDegree(*table_, m) != d)
            return std::nullopt;
    return d;
}

Element Element::component(int degree) const {
    Element out(table_);
    for (const auto& [m, c] : terms_)
        if (monomialDegree(*table_, m) == degree)
            out.terms_[m] = c;
    return out;
}

std::vector<int> Element::degreesPresent() const {
    std::vector<int> ds;
    for (const auto& [m, c] : terms_) {
        int d = monomialDegree(*table_, m);
        if (std::find(ds.begin(), ds.end(), d) == ds.end())
            ds.push_back(d);
    }
    std::sort(ds.begin(), ds.end());
    return ds;
}

void Element::add(const Monomial& m, const Rational& c) {
    if (c == 0)
        return;
    auto it = terms_.find(m);
    if (it == terms_.end()) {
        terms_.emplace(m, c);
    } else {
        it->second += c;
        if (it->second == 0)
            terms_.erase(it);
    }
}

void Element::requireSameTable(const Element& o) const {
    if (table_.get() != o.table_.get())
        throw Error("elements over different generator tables");
}

Element Element::operator+(const Element& o) const {
    requireSameTable(o);
    Element out = *this;
    for (const auto& [m, c] : o.terms_)
        out.add(m, c);
    return out;
}

Element Element::operator-(const Element& o) const {
    requireSameTable(o);
    Element out = *this;
    for (const auto& [m, c] : o.terms_)
        out.add(m, -c);
    return out;
}

Element Element::operator-() const {
    Element out(table_);
    for (const auto& [m, c] : terms_)
        out.terms_[m] = -c;
    return out;
}

Element Element::operator*(const Element& o) const {
    requireSameTable(o);
    Element out(table_);
    for (const auto& [ma, ca] : terms_) {
        for (const auto& [mb, cb] : o.terms_) {
            int s = mulSign(*table_, ma, mb);
            if (s == 0)
                continue;
            out.add(mergeMono(ma, mb), ca * cb * s);
        }
    }
    return out;
}

Element Element::operator*(const Rational& c) const {
    Element out(table_);
    if (c == 0)
        return out;
    for (const auto& [m, q] : terms_)
        out.terms_[m] = q * c;
    return out;
}

bool Element::operator==(const Element& o) const {
    return terms_ == o.terms_;
}

Element operator*(const Rational& c, const Element& e) { return e * c; }

Element remapByName(const Element& e, const TablePtr& target) {
    Element out(target);
    if (!e.table())
        return out;
    const auto& src = *e.table();
    for (const auto& [m, c] : e.terms()) {
        std::vector<std::pair<uint32_t, uint32_t>> raw;
        raw.reserve(m.factors.size());
        for (const auto& [g, exp] : m.factors)
            raw.emplace_back(target->index(src.gen(g).name), exp);
        auto [sign, canon] = normalizeMonomial(*target, raw);
        if (sign == 0)
            throw Error("remap produced an odd square (degree mismatch between tables?)");
        out.add(canon, c * sign);
    }
    return out;
}

std::string monomialStr(const GeneratorTable& t, const Monomial& m) {
    if (m.trivial())
        return "1";
    std::ostringstream os;
    bool first = true;
    for (const auto& [g, e] : m.factors) {
        if (!first)
            os << "*";
        first = false;
        os << t.gen(g).name;
        if (e > 1)
            os << "^" << e;
    }
    return os.str();
}

std::string Element::str() const {
    if (terms_.empty())
        return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : terms_) {
        Rational a = c < 0 ? Rational(-c) : c;
        if (first) {
            if (c < 0)
                os << "-";
        } else {
            os << (c < 0 ? " - " : " + ");
        }
        first = false;
        if (m.trivial()) {
            os << a.str();
        } else {
            if (a != 1)
                os << a.str() << "*";
            os << monomialStr(*table_, m);
        }
    }
    return os.str();
}

} // namespace bvred
