#pragma once

#include "bvred/bv.hpp"

namespace bvred {

struct CotangentModel {
    std::shared_ptr<const SemiFreeCdga> base;
    std::shared_ptr<const SemiFreeCdga> model;
    int shift = 0;
    std::shared_ptr<const DeRhamAlgebra> dr;
    Element lambda;
    SymplecticCert omega;

    uint32_t conjugateOf(uint32_t baseGen) const; // index in model
};

// T*[n] of a semi-free base: conjugates + transported differential + the
// tautological certificate.
CotangentModel shiftedCotangent(std::shared_ptr<const SemiFreeCdga> base, int n,
                                const std::string& conjPrefix = "p_",
                                std::optional<int> weightOfS = {});

enum class LagrangianShape { Graph, ZeroSection, SectionLike, Other };

struct LagrangianModel {
    std::shared_ptr<const SemiFreeCdga> ambient; // symplectic model
    std::shared_ptr<const DeRhamAlgebra> ambientDr;
    ClosedFormSequence ambientOmega;
    int ambientShift = 0;
    std::shared_ptr<const SemiFreeCdga> leg; // O(L)
    CdgaMorphism map;                        // O(ambient) -> O(L)
    IsotropyCert isotropy;
    LagrangianShape shape = LagrangianShape::Other;
};

// Section of a cotangent model by conjugate values (one per base generator);
// isotropy recomputed, never assumed.
LagrangianModel graphLagrangian(const CotangentModel& X, std::vector<Element> values);
LagrangianModel zeroSection(const CotangentModel& X);

// --- derived fiber products ----------------------------------------------------

// phi is section-like if every source generator maps to a distinct generator
// (kept) or to an arbitrary element of the kept subalgebra (extra).
struct SectionShape {
    std::vector<uint32_t> extras;                      // source indices
    std::vector<std::optional<uint32_t>> keptImage;    // source idx -> target gen
};
std::optional<SectionShape> detectSection(const CdgaMorphism& phi);

struct FiberProduct {
    std::shared_ptr<const SemiFreeCdga> model;
    CdgaMorphism fromLegB;  // O(L') -> R, an inclusion
    CdgaMorphism fromBase;  // O(M) -> R (through legB)
    std::vector<uint32_t> resolvents; // R-indices, aligned with the section extras
};

// Derived tensor O(L) (x)_{O(M)} O(L') where legA = phi : O(M) -> O(L) is
// section-like; resolvents eps_v with extras-linear corrections. Refuses
// presentations whose differential is nonlinear in the extras.
FiberProduct sectionFiberProduct(const CdgaMorphism& legA, const CdgaMorphism& legB,
                                 const std::vector<std::string>& resolventNames);

// Fallback for a zero-differential base: doubles both legs and adjoins one
// Koszul resolvent per base generator (d eps = phi(g) - psi(g)).
FiberProduct doublingFiberProduct(const CdgaMorphism& legA, const CdgaMorphism& legB);

// Dispatcher per the supported-shape whitelist; throws on unresolvable input.
FiberProduct derivedFiberProduct(const CdgaMorphism& legA, const CdgaMorphism& legB);

// --- push / pull ----------------------------------------------------------------

// f_dagger: the relative zero locus of L along f, as a lagrangian over T*Y.
// `baseMap` is O(Y-base) -> O(X-base) for the geometric f : X -> Y.
LagrangianModel pushforwardLagrangian(const CdgaMorphism& baseMap,
                                      const CotangentModel& TX,
                                      const CotangentModel& TY,
                                      const LagrangianModel& L);

// f^dagger on graphs: f^dagger(Graph(alpha)) = Graph(f* alpha), exactly.
LagrangianModel pullbackLagrangian(const CdgaMorphism& baseMap,
                                   const CotangentModel& TX,
                                   const CotangentModel& TY,
                                   const LagrangianModel& L);

// The fiber of T*B over a point of the base (the conormal of the point).
LagrangianModel cotangentFiber(const CotangentModel& TB,
                               const std::vector<Element>& pointValues);

// --- strictification -------------------------------------------------------------

struct Strictified {
    std::shared_ptr<const SemiFreeCdga> model;
    CdgaMorphism projection; // original -> strictified, a quasi-isomorphism
    size_t cancelled = 0;
};

// Cancels contractible generator pairs (u, v) with d(u) = c v + R, v not in
// R after u -> 0. The projection is verified as a chain map.
Strictified cancelAcyclicPairs(std::shared_ptr<const SemiFreeCdga> model);

struct ModelMatchCert {
    bool pass = false;
    std::string detail;
};

// Name-based generator matching in both directions, chain maps checked.
ModelMatchCert compareByNames(const std::shared_ptr<const SemiFreeCdga>& a,
                              const std::shared_ptr<const SemiFreeCdga>& b);

// Renames generators (old name -> new name), remapping all differentials.
std::shared_ptr<const SemiFreeCdga>
renameGenerators(const std::shared_ptr<const SemiFreeCdga>& model,
                 const std::vector<std::pair<std::string, std::string>>& renames);

// --- the magic cube --------------------------------------------------------------

struct MagicCube {
    std::shared_ptr<const SemiFreeCdga> corner12, corner23, corner13; // L_ij models
    SymplecticCert omega12; // corner forms (shift n-1)
    std::shared_ptr<const SemiFreeCdga> apex;   // L_123
    std::shared_ptr<const SemiFreeCdga> x123;   // X_123 model
    SymplecticCert omegaX123;
    IsotropyCert apexIsotropy;                  // L_123 -> X_123
    Element alternatingSum;                     // the pulled-form identity witness
};

// Three lagrangian legs out of a common symplectic X0, opposite corners at a
// point (the hamiltonian-reduction shape family).
MagicCube magicCube(const CotangentModel& X0, const LagrangianModel& L01,
                    const LagrangianModel& L02, const LagrangianModel& L03);

// --- Beck-Chevalley --------------------------------------------------------------

struct BeckChevalleyCert {
    bool pass = false;
    std::string detail;
    std::shared_ptr<const SemiFreeCdga> side1; // f^dagger p_dagger L
    std::shared_ptr<const SemiFreeCdga> side2; // pbar_dagger fbar^dagger L
};

// Quotient square (P = pt, B = Bg, X = M/g) with L = Graph(dS_red): both
// sides strictify to the Crit(S) model with a generator-matching isomorphism.
BeckChevalleyCert beckChevalleyQuotient(const GaugeSystem& gs);

// Lagrange-multiplier square (B = A^1 via p, P = pt at a regular value a).
BeckChevalleyCert beckChevalleyLagrange(const GaugeSystem& gs, const Rational& value);

} // namespace bvred
