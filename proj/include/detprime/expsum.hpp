#pragma once

// Kloosterman-fraction sums over primes,
//   T(a; q, X) = sum_{p <= X prime, (p,q)=1} e(a pbar / q),
// and the dyadic-average checker against the envelope
//   (1 + a/(XQ))^{1/2} (Q^{1/2} X^{11/8} + Q^{7/6} X^{2/3}) (aQ)^eps
// with eps frozen at 0.05 and leading constant 1. The averaged bound holds
// with an ineffective constant, so the checker reports ratios.

#include <complex>
#include <cstdint>

#include "detprime/primes.hpp"

namespace detprime {

struct ExpSumResult {
    int64_t a = 0;
    int64_t q = 0;
    int64_t X = 0;
    std::complex<double> value{0.0, 0.0};
    int64_t prime_count_used = 0;  // primes p <= X with (p,q)=1
};

// Requires a >= 1, q >= 2, X >= 2, tables.limit >= X. Inverses are computed
// with one extended gcd per prime for small runs and by batched prefix-
// product inversion (one gcd per modulus) when pi(X) > 64; the two paths
// produce identical phases.
ExpSumResult kloosterman_prime_sum(int64_t a, int64_t q, int64_t X, const PrimeTables& tables);

struct AverageBoundReport {
    int64_t a = 0;
    int64_t Q = 0;
    int64_t X = 0;
    double lhs = 0.0;           // sum over q in (Q, 2Q] of |T(a; q, X)|
    double rhs_envelope = 0.0;  // envelope with eps = 0.05, constant 1
    double ratio = 0.0;
    bool admissible = false;  // Q^{4/3} >= X >= Q^{1/2} (exact integer test)
};

// q ~ Q means q in (Q, 2Q]. Inadmissible ranges are flagged but still
// evaluated.
AverageBoundReport dyadic_average(int64_t a, int64_t Q, int64_t X, const PrimeTables& tables,
                                  int threads = 1);

namespace expsum_detail {
// both inversion strategies, exposed for the equality test
ExpSumResult kloosterman_per_prime(int64_t a, int64_t q, int64_t X, const PrimeTables& tables);
ExpSumResult kloosterman_batched(int64_t a, int64_t q, int64_t X, const PrimeTables& tables);
}  // namespace expsum_detail

}  // namespace detprime
