#pragma once

#include "bvred/antibracket.hpp"
#include "bvred/derham.hpp"
#include "bvred/gauge.hpp"

namespace bvred {

// A chain-level model with BV bookkeeping. For fully paired models the
// differential is {S_BV, -} with the symplectic certificate attached; apex
// models (Tate stage, constrained critical loci) carry partial pairings and
// no ambient form of their own.
struct BvModel {
    std::shared_ptr<const SemiFreeCdga> model;
    int shift = -1;
    std::optional<Element> masterAction;
    std::shared_ptr<const DeRhamAlgebra> dr;
    std::optional<Element> lambda; // over dr->total
    std::optional<SymplecticCert> omega;
    std::vector<Element> moments; // mu_a - chi_a targets, over model table

    Element gen(const std::string& name) const { return model->gen(name); }
    std::vector<uint32_t> gensOfFlavor(Flavor f) const;
};

// {S_BV, S_BV}; zero element when no master action is present.
Element masterResidue(const BvModel& m);
// Drops every monomial containing a ghost generator.
Element modGhostIdeal(const BvModel& m, const Element& e);

// Appends conjugate generators gv (degree shift - |g|) with the transported
// differential of signs.hpp rule 5. `names[i]` names the conjugate of
// generator i; flavors follow the shift -1 BV table when shift == -1.
std::shared_ptr<const SemiFreeCdga>
cotangentExtension(const std::shared_ptr<const SemiFreeCdga>& base, int shift,
                   const std::vector<std::string>& names,
                   std::optional<int> weightOfS = {});

// The Chevalley-Eilenberg quotient: appends ghosts c^a with
// d(g) += c^a L_a(g) and d(c^a) = -1/2 f^a_{bc} c^b c^c.
std::shared_ptr<const SemiFreeCdga>
adjoinGhostsCE(const std::shared_ptr<const SemiFreeCdga>& base,
               const std::vector<Derivation>& actions, const LieAlgebra& g,
               const std::vector<std::string>& ghostNames);

// Re-attaches the de Rham data and the tautological certificate; strips
// weights when the differential is not weight-homogeneous.
void finalizeSymplectic(BvModel& m);

std::string antifieldName(const std::string& field);

// --- the chain-level constructions -------------------------------------------

// Crit(S): fields + antifields, d = {S, -}.
BvModel buildCrit(const GaugeSystem& gs);

// Z(alpha) for a closed 1-form; rejects non-closed input. Coincides with
// buildCrit when alpha = dS.
BvModel buildZeroLocus(const GaugeSystem& gs, const std::vector<Element>& alpha);

// mu_a = sum_i rho_a^i xi^i; checks d mu_a = 0.
std::vector<Element> momentMapComponents(const BvModel& crit, const GaugeSystem& gs);

struct MomentClosureCert {
    bool pass = false;
    std::string detail; // first violated bracket
};
// {mu_a, mu_b} = kMomentClosure f^c_{ab} mu_c, exactly.
MomentClosureCert momentClosure(const BvModel& crit, const GaugeSystem& gs,
                                const std::vector<Element>& mu);

// Z(mu - chi): antighosts t_a with d t_a = mu_a - chi_a.
BvModel adjoinTate(const BvModel& crit, const GaugeSystem& gs,
                   const std::vector<Element>& mu);

// The reduced model: ghosts, S_BV, d = {S_BV, -} (math-column order).
BvModel adjoinChevalley(const BvModel& tate, const GaugeSystem& gs);

// crit -> moments -> tate -> chevalley
BvModel buildReduced(const GaugeSystem& gs);

// Physics-column order: CE quotient model first, then its (-1)-shifted
// cotangent deformed by the same master action.
BvModel buildOrderSwap(const GaugeSystem& gs);

// The CE quotient-stack model of X/g (fields + ghosts).
std::shared_ptr<const SemiFreeCdga> ceQuotientModel(const GaugeSystem& gs);

// Reduction of the shift-0 cotangent of the fields along its moment map
// mu_a = sum_i rho_a^i p_i, optionally twisted by the character: pairs
// (x,p),(c,t) with d t_a = mu_a - chi_a + ghost terms, assembled CE-style.
BvModel reduceCotangent(const GaugeSystem& gs);

struct OrderSwapCert {
    bool pass = false;
    std::string detail;
    std::optional<std::string> firstMismatch; // generator name
};
// Generator-matching comparison of the two construction orders: dg-algebra
// isomorphism matching S_BV and omega exactly.
OrderSwapCert compareOrders(const BvModel& mathOrder, const BvModel& physicsOrder);

// Z_p(dS): fields, Lagrange multipliers, antifields, with the lagrangian
// morphism from the shift-0 cotangent model of Y.
struct ConstrainedCrit {
    BvModel apex;                                  // x, theta, xi
    std::shared_ptr<const SemiFreeCdga> cotangentY; // y, eta
    CdgaMorphism fromCotangentY;                   // O(T*Y) -> O(apex)
};
ConstrainedCrit buildConstrainedCrit(const GaugeSystem& gs);

// Action of g on a constrained-crit apex (fields, multipliers, antifields).
std::vector<Derivation> constrainedActions(const GaugeSystem& gs,
                                           const std::shared_ptr<const SemiFreeCdga>& apex);

} // namespace bvred
