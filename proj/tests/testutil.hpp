#pragma once

#include "bvred/cdga.hpp"

#include <cstdint>

namespace bvtest {

using namespace bvred;

// deterministic xorshift generator for the property tests
struct Rng {
    uint64_t s;
    explicit Rng(uint64_t seed = 0x9e3779b97f4a7c15ull) : s(seed) {}
    uint64_t next() {
        s ^= s << 13;
        s ^= s >> 7;
        s ^= s << 17;
        return s;
    }
    int range(int lo, int hi) { return lo + int(next() % uint64_t(hi - lo + 1)); }
};

inline Monomial randomMonomial(const GeneratorTable& t, Rng& rng, int maxExp = 2) {
    Monomial m;
    for (uint32_t i = 0; i < t.size(); ++i) {
        int cap = t.odd(i) ? 1 : maxExp;
        int e = rng.range(0, cap);
        if (e > 0)
            m.factors.emplace_back(i, uint32_t(e));
    }
    return m;
}

inline Element randomHomogeneous(TablePtr t, Rng& rng, int tries = 6) {
    Monomial base = randomMonomial(*t, rng);
    int deg = monomialDegree(*t, base);
    Element out = Element::monomial(t, base, Rational(rng.range(-4, 4)));
    for (int k = 0; k < tries; ++k) {
        Monomial m = randomMonomial(*t, rng);
        if (monomialDegree(*t, m) == deg)
            out = out + Element::monomial(t, m, Rational(rng.range(-4, 4)));
    }
    return out.zero() ? Element::monomial(t, base, Rational(1)) : out;
}

// the standard abelian weight-(1,-1) BV table: x1 x2 xi1 xi2 c t
inline TablePtr abelianBvTable() {
    std::vector<Generator> g(6);
    g[0] = {"x1", 0, Flavor::Field, {}, 0, 2u};
    g[1] = {"x2", 0, Flavor::Field, {}, 0, 3u};
    g[2] = {"xi1", -1, Flavor::Antifield, {}, 0, 0u, true};
    g[3] = {"xi2", -1, Flavor::Antifield, {}, 0, 1u, true};
    g[4] = {"c", 1, Flavor::Ghost, {}, 0, 5u};
    g[5] = {"t", -2, Flavor::Antighost, {}, 0, 4u, true};
    return makeTable(std::move(g));
}

} // namespace bvtest
