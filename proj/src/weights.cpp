#include "detprime/weights.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

#include "detprime/quadrature.hpp"

namespace detprime {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// Bump profile psi(t) = exp(-1/(t(1-t))) on (0,1) with derivatives up to
// order 3, via g = -1/u, u = t - t^2:
//   g'   = u'/u^2
//   g''  = (u'' u - 2 u'^2)/u^3
//   g''' = 6 u' (u'^2 - u'' u)/u^4          (u''' = 0)
// psi' = g' psi, psi'' = (g'' + g'^2) psi, psi''' = (g''' + 3g'g'' + g'^3) psi.
struct PsiDerivs {
    double f = 0.0, f1 = 0.0, f2 = 0.0, f3 = 0.0;
};

PsiDerivs psi_derivs(double t) {
    PsiDerivs d;
    if (t <= 0.0 || t >= 1.0) return d;
    const double u = t * (1.0 - t);
    if (1.0 / u > 745.0) return d;  // exp underflows; all orders vanish
    const double up = 1.0 - 2.0 * t;
    const double upp = -2.0;
    const double f = std::exp(-1.0 / u);
    const double u2 = u * u, u3 = u2 * u, u4 = u3 * u;
    const double g1 = up / u2;
    const double g2 = (upp * u - 2.0 * up * up) / u3;
    const double g3 = 6.0 * up * (up * up - upp * u) / u4;
    d.f = f;
    d.f1 = g1 * f;
    d.f2 = (g2 + g1 * g1) * f;
    d.f3 = (g3 + 3.0 * g1 * g2 + g1 * g1 * g1) * f;
    return d;
}

// Cumulative table for s(u) = (1/Z) * int_0^u psi. Cubic Hermite between
// nodes (values + analytic slopes) keeps the interpolation error near 1e-14,
// far below every tolerance used downstream.
struct SmoothstepTable {
    static constexpr int kPanels = 4096;
    std::array<double, kPanels + 1> value{};
    std::array<double, kPanels + 1> slope{};
    double Z = 0.0;

    SmoothstepTable() {
        const double h = 1.0 / kPanels;
        double acc = 0.0;
        value[0] = 0.0;
        for (int i = 0; i < kPanels; ++i) {
            auto est = qk::rule15([](double t) { return psi_derivs(t).f; }, i * h, (i + 1) * h);
            acc += est.value;
            value[static_cast<size_t>(i) + 1] = acc;
        }
        Z = acc;
        for (int i = 0; i <= kPanels; ++i) {
            value[static_cast<size_t>(i)] /= Z;
            slope[static_cast<size_t>(i)] = psi_derivs(i * h).f / Z;
        }
        value[kPanels] = 1.0;  // exact by construction
    }

    double eval(double u) const {
        if (u <= 0.0) return 0.0;
        if (u >= 1.0) return 1.0;
        const double t = u * kPanels;
        int i = static_cast<int>(t);
        if (i >= kPanels) i = kPanels - 1;
        const double h = 1.0 / kPanels;
        const double tau = t - i;
        const double s0 = value[static_cast<size_t>(i)], s1 = value[static_cast<size_t>(i) + 1];
        const double d0 = slope[static_cast<size_t>(i)] * h, d1 = slope[static_cast<size_t>(i) + 1] * h;
        const double t2 = tau * tau, t3 = t2 * tau;
        return s0 * (2 * t3 - 3 * t2 + 1) + d0 * (t3 - 2 * t2 + tau) + s1 * (-2 * t3 + 3 * t2) +
               d1 * (t3 - t2);
    }
};

const SmoothstepTable& table() {
    static const SmoothstepTable t;
    return t;
}

}  // namespace

namespace weights_detail {

double bump_normalization() { return table().Z; }

double smoothstep(double u, int order) {
    switch (order) {
        case 0:
            return table().eval(u);
        case 1:
            return psi_derivs(u).f / table().Z;
        case 2:
            return psi_derivs(u).f1 / table().Z;
        case 3:
            return psi_derivs(u).f2 / table().Z;
        case 4:
            return psi_derivs(u).f3 / table().Z;
        default:
            throw std::invalid_argument("smoothstep: derivative order must be in [0,4]");
    }
}

}  // namespace weights_detail

HChoice choose_H(double X, int64_t r) {
    if (!(X >= 4.0)) throw std::invalid_argument("choose_H: X must be >= 4");
    if (r == 0) throw std::invalid_argument("choose_H: r must be a non-zero integer");
    const double ra = std::abs(static_cast<double>(r));
    const double raw = std::max(std::pow(X, 0.75), std::pow(ra, 0.2) * std::pow(X, 0.55));
    HChoice h;
    h.value = std::clamp(raw, std::sqrt(X), X);
    h.clamped = (h.value != raw);
    return h;
}

WeightFunction::WeightFunction(double X, double H) : X_(X), H_(H) {
    if (!(X > 0.0)) throw std::invalid_argument("WeightFunction: X must be positive");
    const double slack = 1e-9 * X;
    if (!(H >= std::sqrt(X) - slack) || !(H <= X + slack))
        throw std::invalid_argument("WeightFunction: H must satisfy sqrt(X) <= H <= X");
}

double WeightFunction::value(double x) const {
    const double lo = support_lo(), hi = support_hi();
    if (x <= lo || x >= hi) return 0.0;
    if (x >= 1.0 && x <= X_) return 1.0;
    if (x < 1.0) return weights_detail::smoothstep((x - lo) / H_, 0);
    return weights_detail::smoothstep((hi - x) / H_, 0);
}

double WeightFunction::derivative(double x, int order) const {
    if (order < 0 || order > 4)
        throw std::invalid_argument("WeightFunction::derivative: order must be in [0,4]");
    if (order == 0) return value(x);
    const double lo = support_lo(), hi = support_hi();
    if (x <= lo || x >= hi || (x >= 1.0 && x <= X_)) return 0.0;
    const double scale = std::pow(H_, -order);
    if (x < 1.0) return weights_detail::smoothstep((x - lo) / H_, order) * scale;
    const double s = weights_detail::smoothstep((hi - x) / H_, order) * scale;
    return (order % 2 == 1) ? -s : s;
}

namespace {

// piece classification of w at a point: 0 outside, 1 left ramp, 2 plateau,
// 3 right ramp
int piece_of(const WeightFunction& w, double x) {
    if (x <= w.support_lo() || x >= w.support_hi()) return 0;
    if (x >= 1.0 && x <= w.X()) return 2;
    return x < 1.0 ? 1 : 3;
}

std::complex<double> unit_phase(double t) {  // e(t)
    return {std::cos(kTwoPi * t), std::sin(kTwoPi * t)};
}

// closed form of int_{s0}^{s1} e(-x y) dx
std::complex<double> plateau_integral(double s0, double s1, double y) {
    if (y == 0.0) return {s1 - s0, 0.0};
    const std::complex<double> num = unit_phase(-s0 * y) - unit_phase(-s1 * y);
    return num / std::complex<double>(0.0, kTwoPi * y);
}

}  // namespace

std::complex<double> fourier_F(const KernelSpec& spec, double y) {
    if (spec.a < 1) throw std::invalid_argument("fourier_F: modulus a must be >= 1");
    const WeightFunction& w = spec.weight;
    const double lo = w.support_lo(), hi = w.support_hi();
    const double ad = static_cast<double>(spec.a);
    const double cd = static_cast<double>(spec.c);
    const double rd = static_cast<double>(spec.r);

    double f2const = 1.0;
    double L = lo, R = hi;
    std::vector<double> cuts;
    cuts.push_back(1.0);
    cuts.push_back(w.X());
    if (spec.c == 0) {
        f2const = w.value(rd / ad);
        if (f2const == 0.0) return {0.0, 0.0};
    } else {
        // x-positions where (r + c x)/a crosses the w piece boundaries
        std::array<double, 4> xb{};
        const std::array<double, 4> tb{lo, 1.0, w.X(), hi};
        for (int i = 0; i < 4; ++i) xb[static_cast<size_t>(i)] = (ad * tb[static_cast<size_t>(i)] - rd) / cd;
        const double s2lo = std::min(xb[0], xb[3]);
        const double s2hi = std::max(xb[0], xb[3]);
        L = std::max(L, s2lo);
        R = std::min(R, s2hi);
        if (!(L < R)) return {0.0, 0.0};
        for (double v : xb) cuts.push_back(v);
    }

    std::vector<double> pts;
    pts.push_back(L);
    for (double v : cuts)
        if (v > L && v < R) pts.push_back(v);
    pts.push_back(R);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](double u, double v) { return std::abs(u - v) < 1e-13; }),
              pts.end());

    // classify each segment; plateau*plateau sections integrate in closed form
    struct Seg {
        double a0, b0;
        bool numeric;
    };
    std::vector<Seg> segs;
    double numeric_len = 0.0;
    for (size_t i = 0; i + 1 < pts.size(); ++i) {
        const double s0 = pts[i], s1 = pts[i + 1];
        const double xm = 0.5 * (s0 + s1);
        const int p1 = piece_of(w, xm);
        const int p2 = (spec.c == 0) ? 2 : piece_of(w, (rd + cd * xm) / ad);
        if (p1 == 0 || p2 == 0) continue;
        const bool numeric = !(p1 == 2 && p2 == 2);
        if (numeric) numeric_len += s1 - s0;
        segs.push_back({s0, s1, numeric});
    }

    const double tol_total = std::max(1e-9 * (R - L), 1e-14);
    const double cap = (y == 0.0) ? w.H() : std::min(w.H(), 0.25 / std::abs(y));

    std::complex<double> total{0.0, 0.0};
    for (const Seg& s : segs) {
        if (!s.numeric) {
            total += plateau_integral(s.a0, s.b0, y);
            continue;
        }
        const double len = s.b0 - s.a0;
        const int panels = static_cast<int>(std::ceil(len / cap));
        const double tol_seg = tol_total * (len / numeric_len);
        const double tol_panel = tol_seg / panels;
        const double step = len / panels;
        auto integrand = [&](double x) -> std::complex<double> {
            const double f = w.value(x) * (spec.c == 0 ? 1.0 : w.value((rd + cd * x) / ad));
            return f * unit_phase(-x * y);
        };
        try {
            for (int p = 0; p < panels; ++p) {
                const double a0 = s.a0 + p * step;
                const double b0 = (p == panels - 1) ? s.b0 : a0 + step;
                total += integrate_adaptive_complex(integrand, a0, b0, tol_panel);
            }
        } catch (const NumericFailure& e) {
            throw NumericFailure("fourier_F(a=" + std::to_string(spec.a) +
                                 ", c=" + std::to_string(spec.c) + ", y=" + std::to_string(y) +
                                 "): " + e.what());
        }
    }
    if (spec.c == 0) total *= f2const;
    return total;
}

DecayReport check_decay(const KernelSpec& spec, int k, const std::vector<double>& y_grid) {
    if (k < 1 || k > 3) throw std::invalid_argument("check_decay: k must be in [1,3]");
    DecayReport rep;
    rep.k = k;
    rep.slope_term_simplified = (spec.c == 0);
    const double H = spec.weight.H();
    const double slope_factor =
        (spec.c == 0) ? 0.0
                      : std::pow(std::abs(static_cast<double>(spec.c)) / static_cast<double>(spec.a),
                                 k - 1);
    for (double y : y_grid) {
        if (y == 0.0) throw std::invalid_argument("check_decay: y grid must avoid 0");
        const double envelope = std::pow(H, 1 - k) * std::pow(std::abs(y), -k) * (1.0 + slope_factor);
        const double ratio = std::abs(fourier_F(spec, y)) / envelope;
        rep.ratios.emplace_back(y, ratio);
        rep.max_ratio = std::max(rep.max_ratio, ratio);
    }
    return rep;
}

}  // namespace detprime
