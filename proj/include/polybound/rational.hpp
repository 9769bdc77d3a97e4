#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

namespace polybound {

// Exact arithmetic used by the oracle paths. Weights and finite-support
// distribution parameters are kept as rationals so that zero tests and
// oracle comparisons are exact; double views are derived at the edges.
using BigInt = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline double to_double(const Rat& r) { return r.convert_to<double>(); }

// Exact conversion: every finite double is a dyadic rational.
Rat rat_from_double(double x);

Rat rat_pow(const Rat& base, int exp);  // exp >= 0
BigInt factorial(int n);
BigInt binomial(int n, int k);

// Accepts "3", "-5", "2/7". Throws SchemaError on anything else.
Rat parse_rat(const std::string& text);
std::string rat_to_string(const Rat& r);

// True when to_double round-trips losslessly (used by JSON writers).
bool fits_double(const Rat& r);

}  // namespace polybound
