#pragma once

#include <boost/multiprecision/cpp_int.hpp>

namespace dstree {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Exact value of a finite double.
Rational to_rational(double x);

}  // namespace dstree
