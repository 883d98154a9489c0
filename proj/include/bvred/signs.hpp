#pragma once

// The sign convention package. Everything sign-sensitive in the engine is
// expressed through the rules below; the property suite pins each of them.
//
//  1. Koszul rule: commuting homogeneous factors a, b costs (-1)^{|a||b|}.
//     Parity is cohomological degree mod 2, nothing else.
//  2. Canonical monomial order is the generator declaration order; all
//     reordering signs are absorbed into coefficients at normalization.
//  3. Derivations act from the left:
//         D(ab) = D(a) b + (-1)^{deg(D) |a|} a D(b).
//     The left partial dL_g is the derivation of degree -|g| with
//     dL_g(h) = delta_{gh}; the right partial is
//         dR_g(a) = (-1)^{|g|(|a|+1)} dL_g(a)   (a homogeneous).
//  4. Antibracket (conjugate pairs u, u* with |u| + |u*| = -1, u the
//     field/ghost slot and u* the antifield/antighost slot):
//         {a,b} = sum_u  dR_u(a) dL_{u*}(b) - dR_{u*}(a) dL_u(b).
//     Hence {u,u*} = 1, {u*,u} = -1, the bracket has degree +1, satisfies
//         {a,b} = -(-1)^{(|a|+1)(|b|+1)} {b,a},
//         {a,bc} = {a,b} c + (-1)^{(|a|+1)|b|} b {a,c}.
//  5. Cotangent transport: on T*[n] of a semi-free base the conjugate
//     generators evolve by
//         d(gv) = sum_h (-1)^{|g|(|h|+1)} dR_g(d h) * hv .
//     The coefficients are shift-independent; at n = -1 this is {H, -}
//     for the Hamiltonian H = sum_g (d g) gv (pinned by a test).
//  6. Mixed de Rham differential: delta(g) = dg-symbol, delta(dg) = 0,
//     extended as a left derivation of degree +1; the internal
//     differential extends by d(dg) = -delta(d g), so d delta + delta d = 0.
//  7. Chevalley-Eilenberg quotient: adjoining ghosts c^a to a model with
//     g-action derivations L_a,
//         d(g) += c^a L_a(g),      d(c^a) = -1/2 f^a_{bc} c^b c^c.
//  8. Master action: S_BV = S - c^a (mu_a - chi_a) + 1/2 f^c_{ab} c^a c^b t_c.
//     Under rule 4 the differential {S_BV,-} then satisfies
//         d(x_i)  = c^a rho_a^i + ...,      d(c^a) = -1/2 f^a_{bc} c^b c^c,
//         d(xi^i) = dS/dx_i + ...,          d(t_a) = mu_a - chi_a - f^c_{ab} c^b t_c,
//     i.e. rule 7 with kCE = +1 and the Tate formula mod the ghost ideal.
//  9. Moment closure under the conventions above: {mu_a, mu_b} = -f^c_{ab} mu_c
//     (kMomentClosure below; pinned by the property suite on sl2).
// 10. Tautological 1-form on T*[n]: lambda = sum_g (-1)^{n|g|} gv d(g); the
//     parity sign is what makes omega = delta(lambda) a strict cocycle for
//     the transported differential at every shift.
//
// The paper this engine models fixes no sign conventions; ours are the
// ones above and are not claimed to match any particular reference.

namespace bvred::signs {

// CE transport sign in rule 7 (the coefficient of c^a L_a(g)).
inline constexpr int kCE = +1;

// Sign of the cubic ghost term in S_BV (rule 8).
inline constexpr int kGhostCubic = +1;

// Global sign in the moment bracket closure {mu_a, mu_b} = kMomentClosure * f^c_{ab} mu_c.
inline constexpr int kMomentClosure = -1;

} // namespace bvred::signs
