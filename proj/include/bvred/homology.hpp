#pragma once

#include "bvred/cdga.hpp"

#include <map>

namespace bvred {

// Desk-scale truncation window. Exact-by-weight mode needs declared weights
// with every even generator of strictly positive weight and no negative
// weights; otherwise enumeration runs in total-exponent-bound mode and the
// report carries a truncation caveat.
struct Window {
    int degMin = -4;
    int degMax = 2;
    std::optional<int> weightMin;
    std::optional<int> weightMax;
    std::optional<int> bound; // total-exponent bound W
    size_t sizeCap = 200000;
};

bool exactModeSupported(const GeneratorTable& t);
bool weightHomogeneous(const SemiFreeCdga& A);

// Complete, duplicate-free, canonically ordered monomial basis at a bidegree
// (weight mode) or at a degree with total exponent <= bound (bound mode).
std::vector<Monomial> monomialBasis(const GeneratorTable& t, int degree,
                                    std::optional<int> weight,
                                    std::optional<int> bound,
                                    size_t sizeCap = 200000);

// --- exact sparse linear algebra -------------------------------------------

struct SparseMat {
    size_t rows = 0;
    size_t cols = 0;
    // row-major, sorted by column
    std::vector<std::vector<std::pair<uint32_t, Rational>>> entries;

    void set(size_t r, size_t c, const Rational& v);
    SparseMat transposed() const;
};

// Fraction-free (Bareiss-style) elimination over integers after clearing
// row denominators.
long rankFractionFree(const SparseMat& m);
long rankRational(SparseMat m);

// Basis of ker(m . x = 0), vectors of length cols.
std::vector<std::vector<Rational>> kernelBasis(const SparseMat& m);
// One solution of m . x = b, if any.
std::optional<std::vector<Rational>> solveLinear(const SparseMat& m,
                                                 const std::vector<Rational>& b);

// --- cohomology --------------------------------------------------------------

struct CohomologyReport {
    bool exactByWeight = false;
    // (degree, weight) -> Betti number; in bound mode the weight slot is 0
    std::map<std::pair<int, int>, long> betti;
    std::map<std::pair<int, int>, size_t> basisSize;
    std::vector<std::string> caveats;
    std::map<std::pair<int, int>, std::vector<std::string>> representatives;

    std::string json() const;
};

CohomologyReport betti(const SemiFreeCdga& A, const Window& w,
                       bool withRepresentatives = false);

// The matrix of d : basis(deg) -> basis(deg+1) in the given bases.
SparseMat differentialMatrix(const SemiFreeCdga& A,
                             const std::vector<Monomial>& src,
                             const std::vector<Monomial>& dst);
SparseMat morphismMatrix(const CdgaMorphism& f,
                         const std::vector<Monomial>& src,
                         const std::vector<Monomial>& dst);

struct QuasiIsoReport {
    bool iso = false;
    // bidegrees where the induced map fails to be an isomorphism
    std::vector<std::tuple<int, int, long, long, long>> failures; // (deg, wt, bettiSrc, bettiDst, inducedRank)
    CohomologyReport source;
    CohomologyReport target;
};

// Rank of the induced map on cohomology in every window bidegree, compared
// against both Betti numbers. Requires checkChainMap to pass.
QuasiIsoReport quasiIsoWindow(const CdgaMorphism& f, const Window& w);

} // namespace bvred
