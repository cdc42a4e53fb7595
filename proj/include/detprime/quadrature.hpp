#pragma once

// Adaptive Gauss-Kronrod (G7,K15) quadrature, real and complex-valued.
// The Kronrod extension supplies the error estimate; panels are bisected
// until the per-panel estimate fits the allotted budget.

#include <cmath>
#include <complex>
#include <cstdint>

#include "detprime/errors.hpp"

namespace detprime {

namespace qk {

// Nodes/weights of the 15-point Kronrod rule on [-1,1] with the embedded
// 7-point Gauss rule (QUADPACK values).
inline constexpr double kNodes[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};

inline constexpr double kWeights[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};

inline constexpr double kGaussWeights[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct Estimate {
    double value = 0.0;
    double error = 0.0;
};

struct EstimateC {
    std::complex<double> value{0.0, 0.0};
    double error = 0.0;
};

template <class F>
Estimate rule15(F&& f, double a, double b) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double k15 = 0.0, g7 = 0.0;
    for (int i = 0; i < 8; ++i) {
        const double dx = half * kNodes[i];
        const double f1 = f(mid - dx);
        const double f2 = (i == 7) ? 0.0 : f(mid + dx);
        const double s = (i == 7) ? f1 : f1 + f2;
        k15 += kWeights[i] * s;
        if (i % 2 == 1) g7 += kGaussWeights[i / 2] * s;
    }
    Estimate e;
    e.value = k15 * half;
    e.error = std::abs((k15 - g7) * half);
    return e;
}

template <class F>
EstimateC rule15_complex(F&& f, double a, double b) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    std::complex<double> k15{0.0, 0.0}, g7{0.0, 0.0};
    for (int i = 0; i < 8; ++i) {
        const double dx = half * kNodes[i];
        const std::complex<double> f1 = f(mid - dx);
        const std::complex<double> s = (i == 7) ? f1 : f1 + f(mid + dx);
        k15 += kWeights[i] * s;
        if (i % 2 == 1) g7 += kGaussWeights[i / 2] * s;
    }
    EstimateC e;
    e.value = k15 * half;
    e.error = std::abs((k15 - g7) * half);
    return e;
}

}  // namespace qk

// Integrates f over [a,b] to absolute tolerance abs_tol by recursive
// bisection. Throws NumericFailure if the recursion depth limit is hit
// before the tolerance is met.
template <class F>
double integrate_adaptive(F&& f, double a, double b, double abs_tol, int max_depth = 40) {
    if (!(a < b)) return 0.0;
    struct Rec {
        static double go(F& f, double a, double b, double tol, int depth, int max_depth) {
            auto e = qk::rule15(f, a, b);
            if (e.error <= tol || e.error <= 1e-16 * std::abs(e.value)) return e.value;
            if (depth >= max_depth)
                throw NumericFailure("adaptive quadrature: depth limit, est err " +
                                     std::to_string(e.error) + " > tol " + std::to_string(tol));
            const double mid = 0.5 * (a + b);
            return go(f, a, mid, 0.5 * tol, depth + 1, max_depth) +
                   go(f, mid, b, 0.5 * tol, depth + 1, max_depth);
        }
    };
    return Rec::go(f, a, b, abs_tol, 0, max_depth);
}

template <class F>
std::complex<double> integrate_adaptive_complex(F&& f, double a, double b, double abs_tol,
                                                int max_depth = 40) {
    if (!(a < b)) return {0.0, 0.0};
    struct Rec {
        static std::complex<double> go(F& f, double a, double b, double tol, int depth,
                                       int max_depth) {
            auto e = qk::rule15_complex(f, a, b);
            if (e.error <= tol || e.error <= 1e-16 * std::abs(e.value)) return e.value;
            if (depth >= max_depth)
                throw NumericFailure("adaptive quadrature (complex): depth limit, est err " +
                                     std::to_string(e.error) + " > tol " + std::to_string(tol));
            const double mid = 0.5 * (a + b);
            return go(f, a, mid, 0.5 * tol, depth + 1, max_depth) +
                   go(f, mid, b, 0.5 * tol, depth + 1, max_depth);
        }
    };
    return Rec::go(f, a, b, abs_tol, 0, max_depth);
}

// Kahan-compensated accumulator; used wherever a reproducible fixed-order
// floating sum is part of a contract.
struct KahanSum {
    double sum = 0.0;
    double carry = 0.0;
    void add(double x) {
        const double y = x - carry;
        const double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    double get() const { return sum; }
};

struct KahanSumC {
    KahanSum re, im;
    void add(std::complex<double> z) {
        re.add(z.real());
        im.add(z.imag());
    }
    std::complex<double> get() const { return {re.get(), im.get()}; }
};

}  // namespace detprime
