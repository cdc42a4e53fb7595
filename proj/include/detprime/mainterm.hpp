#pragma once

// The explicit main term
//   M_r(X) = sum_{a<=X} sum_{p<=X prime} alpha(a)/a *
//            max(0, min{X,(aX-r)/p} - max{1,(a-r)/p})
// (the bracket is the length of an integration interval; empty intervals
// clamp to 0), and the two-prime specialization with its K_r estimate.

#include <complex>
#include <cstdint>
#include <optional>
#include <string>

#include "detprime/counting.hpp"
#include "detprime/primes.hpp"

namespace detprime {

struct MainTermResult {
    int64_t X = 0;
    int64_t r = 0;
    std::string alpha;
    std::complex<double> value{0.0, 0.0};   // M_r(X), before the overall factor 8
    int64_t clamped_terms = 0;              // brackets clamped at 0
    std::optional<double> K_r_estimate;     // value / li(X)^2, two-prime runs only
};

// Requires X >= 2, r != 0, tables.limit >= X.
MainTermResult main_term(int64_t X, int64_t r, const WeightSequence& alpha,
                         const PrimeTables& tables, int threads = 1);

// main_term with the prime-indicator weight plus K_r = value / li(X)^2.
MainTermResult two_prime_main_term(int64_t X, int64_t r, const PrimeTables& tables,
                                   int threads = 1);

}  // namespace detprime
