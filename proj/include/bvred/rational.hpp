#pragma once

#include <boost/multiprecision/cpp_int.hpp>

namespace bvred {

// All coefficient arithmetic is exact; no floating point anywhere.
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

} // namespace bvred
