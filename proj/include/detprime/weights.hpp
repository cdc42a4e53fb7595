#pragma once

// The smooth cutoff w used to mollify the box counts, the two-factor
// Fourier kernel F_{a,c}(x) = w(x) w((r+cx)/a), and decay-bound checks on
// its transform.
//
// Conventions, frozen once for the whole project:
//   e(t)    = exp(2*pi*i*t)
//   Fhat(y) = integral of F(x) e(-x y) dx

#include <complex>
#include <cstdint>
#include <utility>
#include <vector>

namespace detprime {

struct HChoice {
    double value = 0.0;
    bool clamped = false;  // true when max{X^{3/4}, |r|^{1/5} X^{11/20}} left [sqrt(X), X]
};

// H = max{X^{3/4}, |r|^{1/5} X^{11/20}}, clamped into [sqrt(X), X].
// Requires X >= 4 and r != 0.
HChoice choose_H(double X, int64_t r);

// Smooth cutoff with transition width H:
//   w = 0 off (1-H, X+H),  w = 1 on [1, X],  0 < w < 1 on the two ramps,
//   |w^(j)| <= C_j / H^j with C_1..C_4 = 2.606, 11.04, 84.03, 1188.94
// (constants of the bump-integral smoothstep used for the ramps).
// Immutable value type; derivative() supports orders 0..4.
class WeightFunction {
  public:
    WeightFunction(double X, double H);  // enforces sqrt(X) <= H <= X

    double X() const { return X_; }
    double H() const { return H_; }
    double support_lo() const { return 1.0 - H_; }
    double support_hi() const { return X_ + H_; }

    double value(double x) const;
    double derivative(double x, int order) const;  // order in [0, 4]

  private:
    double X_;
    double H_;
};

struct KernelSpec {
    int64_t a;  // modulus, >= 1
    int64_t c;  // slope
    int64_t r;  // shift
    WeightFunction weight;
};

// Fhat_{a,c}(y) by adaptive panel quadrature (plateau sections are
// integrated in closed form). Absolute error <= 1e-9 * (integration length).
std::complex<double> fourier_F(const KernelSpec& spec, double y);

struct DecayReport {
    int k = 0;
    double max_ratio = 0.0;
    std::vector<std::pair<double, double>> ratios;  // (y, ratio)
    bool slope_term_simplified = false;             // c == 0: the (1+|c/a|^{k-1}) factor is 1
};

// ratio(y) = |Fhat(y)| / [ H^{1-k} |y|^{-k} (1 + |c/a|^{k-1}) ] over the
// grid; the max must stay bounded by an H- and y-independent constant.
// k in [1,3]; all y nonzero.
DecayReport check_decay(const KernelSpec& spec, int k, const std::vector<double>& y_grid);

namespace weights_detail {
// normalization of the bump exp(-1/(t(1-t))) on (0,1); exposed for tests
double bump_normalization();
// smoothstep s with s(0)=0, s(1)=1 and derivatives s^(1..4); order 0..4
double smoothstep(double u, int order);
}  // namespace weights_detail

}  // namespace detprime
