#pragma once

// The smoothed congruence sum S_w, its zero-frequency part A_w, the
// truncated non-zero-frequency part B_w, and the end-to-end check
// S_w = A_w + B_w (up to the truncation tail).
//
//   S_w = sum_{a<=X} sum_{p<=X prime, p∤a} alpha(a)
//           sum_{b ≡ -r pbar (mod a)} w(b) w((r+pb)/a)
//   A_w = sum alpha(a)/a Fhat_{a,p}(0)
//   B_w = sum alpha(a)/a sum_{0<|n|<=N} e(-n r pbar / a) Fhat_{a,p}(n/a)

#include <complex>
#include <cstdint>
#include <optional>
#include <string>

#include "detprime/counting.hpp"
#include "detprime/primes.hpp"
#include "detprime/weights.hpp"

namespace detprime {

struct DecompositionReport {
    int64_t X = 0;
    int64_t r = 0;
    double H = 0.0;
    std::string alpha;
    std::complex<double> S_w{0.0, 0.0};
    std::complex<double> A_w{0.0, 0.0};
    std::complex<double> B_w_truncated{0.0, 0.0};
    int64_t N_max = 0;
    double tail_bound = 0.0;  // envelope bound on the dropped |n| > N_max part
    double residual = 0.0;    // |S_w - A_w - B_w_truncated|
    bool pass = false;        // residual <= tail_bound + 1e-6 |S_w|
};

// Default truncation ceil(10 * X^{1.1} / H): the dual sum is negligible
// past X^{1+eps}/H, with eps frozen at 0.1 and an explicit constant 10.
int64_t default_N_max(int64_t X, double H);

std::complex<double> compute_S_w(int64_t X, int64_t r, const WeightSequence& alpha,
                                 const WeightFunction& wf, const PrimeTables& tables);

std::complex<double> compute_A_w(int64_t X, int64_t r, const WeightSequence& alpha,
                                 const WeightFunction& wf, const PrimeTables& tables,
                                 int threads = 1);

enum class BwMethod {
    batched,  // per (a,p): periodize F to period a and read all Fhat(n/a) off one FFT
    direct    // per (a,p,n): adaptive quadrature via fourier_F, LRU-cached
};

struct BwResult {
    std::complex<double> value{0.0, 0.0};
    double tail_bound = 0.0;
};

BwResult compute_B_w(int64_t X, int64_t r, const WeightSequence& alpha, const WeightFunction& wf,
                     const PrimeTables& tables, int64_t N_max, int threads = 1,
                     BwMethod method = BwMethod::batched);

DecompositionReport verify_decomposition(int64_t X, int64_t r, const WeightSequence& alpha,
                                         const WeightFunction& wf, const PrimeTables& tables,
                                         std::optional<int64_t> N_max = std::nullopt,
                                         int threads = 1);

namespace poisson_detail {

// Congruence sum with the sharp indicator of [1,X] in place of w; equals the
// coprime part of the orthant count (cross-check hook for tests).
std::complex<double> sum_congruence_sharp(int64_t X, int64_t r, const WeightSequence& alpha,
                                          const PrimeTables& tables);

// Frozen constant of the k=2 decay envelope |Fhat(y)| <= C2 H^{-1} y^{-2}
// (1 + |c/a|), used for truncation tails. Calibrated once against measured
// transforms (tests re-verify it on fresh kernels).
inline constexpr double kEnvelopeC2 = 0.30;

}  // namespace poisson_detail

}  // namespace detprime
