#include "bvred/antibracket.hpp"

namespace bvred {

bool starSlot(const Generator& g) { return g.starConj; }

namespace {

struct Pair {
    uint32_t plain;
    uint32_t star;
};

std::vector<Pair> conjugatePairs(const GeneratorTable& t, bool requireShiftMinusOne) {
    std::vector<Pair> pairs;
    for (uint32_t i = 0; i < t.size(); ++i) {
        const auto& g = t.gen(i);
        if (!g.conjugate || !starSlot(g))
            continue;
        uint32_t u = *g.conjugate;
        if (!t.gen(u).conjugate || *t.gen(u).conjugate != i)
            throw Error("conjugate link not symmetric at " + g.name);
        if (starSlot(t.gen(u)))
            throw Error("both slots of a pair are conjugates at " + g.name);
        if (requireShiftMinusOne && t.gen(u).degree + g.degree != -1)
            throw Error("antibracket needs degree sum -1 on pair (" + t.gen(u).name +
                        ", " + g.name + ")");
        pairs.push_back({u, i});
    }
    return pairs;
}

} // namespace

Element antibracket(const Element& a, const Element& b) {
    if (a.table().get() != b.table().get())
        throw Error("antibracket across tables");
    const TablePtr& t = a.table();
    Element out(t);
    for (const auto& [u, us] : conjugatePairs(*t, true)) {
        out = out + partialRight(u, a) * partialLeft(us, b);
        out = out - partialRight(us, a) * partialLeft(u, b);
    }
    return out;
}

Derivation hamiltonianDerivation(const Element& S) {
    const TablePtr& t = S.table();
    if (!t)
        throw Error("hamiltonianDerivation of detached element");
    int degS = 0;
    if (!S.zero()) {
        auto d = S.degree();
        if (!d)
            throw Error("hamiltonian must be degree-homogeneous");
        degS = *d;
    }
    Derivation D = Derivation::zero(t, degS + 1);
    for (const auto& [u, us] : conjugatePairs(*t, true)) {
        // {S, g} collapses to a single partial when g is a generator
        D.set(us, partialRight(u, S));
        D.set(u, -partialRight(us, S));
    }
    return D;
}

} // namespace bvred
