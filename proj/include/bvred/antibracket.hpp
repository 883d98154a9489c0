#pragma once

#include "bvred/cdga.hpp"

namespace bvred {

// True for the adjoined-conjugate slot of a pair (antifields, antighosts,
// general cotangent fibers).
bool starSlot(const Generator& g);

// The shift -1 antibracket over the table's conjugate pairs (signs.hpp
// rule 4). Throws if a paired generator hits a nonzero pairing position
// without a declared conjugate, or if a pair is not in shift -1 degrees.
Element antibracket(const Element& a, const Element& b);

// The derivation {S, -}.
Derivation hamiltonianDerivation(const Element& S);

} // namespace bvred
