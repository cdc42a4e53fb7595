#include "detprime/poisson.hpp"

#include <algorithm>
#include <cmath>
#include <list>
#include <mutex>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "detprime/parallel.hpp"
#include "detprime/quadrature.hpp"

namespace detprime {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

std::complex<double> unit_phase(double t) {
    return {std::cos(kTwoPi * t), std::sin(kTwoPi * t)};
}

void check_inputs(int64_t X, int64_t r, const WeightFunction& wf, const PrimeTables& tables) {
    if (X < 2) throw std::invalid_argument("X must be >= 2");
    if (r == 0) throw std::invalid_argument("r must be a non-zero integer");
    if (wf.X() != static_cast<double>(X))
        throw std::invalid_argument("weight function X does not match the box size");
    if (tables.limit() < X) throw std::out_of_range("prime tables smaller than X");
}

// residue b0 with b0 = (-r * pbar) mod a, for a >= 2 and p coprime to a
int64_t congruence_class(int64_t a, int64_t p, int64_t r) {
    const int64_t inv = mod_inverse(p % a, a);
    const int64_t rm = ((r % a) + a) % a;
    return (a - (rm * inv) % a) % a;
}

// Enumerate primes p <= X with p coprime to a (p prime: coprime <=> p does
// not divide a).
template <class Fn>
void for_coprime_pairs(int64_t X, const PrimeTables& tables, int64_t a, Fn&& fn) {
    for (uint32_t p : tables.primes()) {
        if (static_cast<int64_t>(p) > X) break;
        if (a % static_cast<int64_t>(p) == 0) continue;
        fn(static_cast<int64_t>(p));
    }
}

// Generic congruence sum: for each coprime (a,p), sums
// alpha(a) * wb(b) * wd((r + p b)/a) over integers b ≡ b0 (mod a) in
// [b_lo, b_hi]. Both S_w and the sharp cross-check instantiate this.
template <class WB, class WD>
std::complex<double> congruence_sum(int64_t X, int64_t r, const WeightSequence& alpha,
                                    const PrimeTables& tables, double b_lo, double b_hi, WB&& wb,
                                    WD&& wd) {
    KahanSumC total;
    for (int64_t a = 1; a <= X; ++a) {
        const std::complex<double> av = alpha.value(a, tables);
        if (av == std::complex<double>{0.0, 0.0}) continue;
        for_coprime_pairs(X, tables, a, [&](int64_t p) {
            const int64_t b0 = (a == 1) ? 0 : congruence_class(a, p, r);
            // first b >= b_lo with b ≡ b0 (mod a)
            int64_t b = b0 + a * static_cast<int64_t>(std::ceil((b_lo - static_cast<double>(b0)) /
                                                                static_cast<double>(a)));
            while (static_cast<double>(b) < b_lo) b += a;
            for (; static_cast<double>(b) <= b_hi; b += a) {
                const double wbv = wb(b);
                if (wbv == 0.0) continue;
                int64_t num;
                if (__builtin_add_overflow(r, p * b, &num))
                    throw std::overflow_error("r + p*b overflows");
                const int64_t d = num / a;  // exact: congruence forces a | (r + p b)
                const double wdv = wd(d);
                if (wdv == 0.0) continue;
                total.add(av * (wbv * wdv));
            }
        });
    }
    return total.get();
}

}  // namespace

int64_t default_N_max(int64_t X, double H) {
    return static_cast<int64_t>(std::ceil(10.0 * std::pow(static_cast<double>(X), 1.1) / H));
}

std::complex<double> compute_S_w(int64_t X, int64_t r, const WeightSequence& alpha,
                                 const WeightFunction& wf, const PrimeTables& tables) {
    check_inputs(X, r, wf, tables);
    return congruence_sum(
        X, r, alpha, tables, wf.support_lo(), wf.support_hi(),
        [&](int64_t b) { return wf.value(static_cast<double>(b)); },
        [&](int64_t d) { return wf.value(static_cast<double>(d)); });
}

namespace poisson_detail {

std::complex<double> sum_congruence_sharp(int64_t X, int64_t r, const WeightSequence& alpha,
                                          const PrimeTables& tables) {
    auto indicator = [X](int64_t n) { return (n >= 1 && n <= X) ? 1.0 : 0.0; };
    return congruence_sum(
        X, r, alpha, tables, 1.0, static_cast<double>(X),
        [&](int64_t b) { return indicator(b); }, [&](int64_t d) { return indicator(d); });
}

}  // namespace poisson_detail

std::complex<double> compute_A_w(int64_t X, int64_t r, const WeightSequence& alpha,
                                 const WeightFunction& wf, const PrimeTables& tables, int threads) {
    check_inputs(X, r, wf, tables);
    const int64_t block = 16;
    const int64_t nblocks = block_count(1, X + 1, block);
    std::vector<KahanSumC> slots(static_cast<size_t>(nblocks));
    run_blocks(nblocks, threads, [&](int64_t bi) {
        const int64_t a_lo = 1 + bi * block;
        const int64_t a_hi = std::min(X, a_lo + block - 1);
        KahanSumC local;
        for (int64_t a = a_lo; a <= a_hi; ++a) {
            const std::complex<double> av = alpha.value(a, tables);
            if (av == std::complex<double>{0.0, 0.0}) continue;
            for_coprime_pairs(X, tables, a, [&](int64_t p) {
                const KernelSpec spec{a, p, r, wf};
                local.add(av / static_cast<double>(a) * fourier_F(spec, 0.0));
            });
        }
        slots[static_cast<size_t>(bi)] = local;
    });
    KahanSumC total;
    for (const auto& s : slots) {
        total.re.add(s.re.sum);
        total.re.add(-s.re.carry);
        total.im.add(s.im.sum);
        total.im.add(-s.im.carry);
    }
    return total.get();
}

namespace {

// ---- batched transform evaluation -----------------------------------------
//
// For one (a,p) pair all the needed Fhat(n/a) are Fourier coefficients of
// the a-periodization of F, so one FFT of M uniform samples yields every
// frequency at once. M is chosen so the wrap-around (aliasing) contribution
// sits below tolerance, verified on the computed spectrum itself (the top
// band of |Fhat| must have decayed); M doubles until that holds.

void fft_forward(std::vector<std::complex<double>>& v) {
    const size_t n = v.size();
    for (size_t i = 1, j = 0; i < n; ++i) {
        size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j |= bit;
        if (i < j) std::swap(v[i], v[j]);
    }
    for (size_t len = 2; len <= n; len <<= 1) {
        const double ang = -kTwoPi / static_cast<double>(len);
        const std::complex<double> wlen(std::cos(ang), std::sin(ang));
        for (size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (size_t k = 0; k < len / 2; ++k) {
                const std::complex<double> u = v[i + k];
                const std::complex<double> t = v[i + k + len / 2] * w;
                v[i + k] = u + t;
                v[i + k + len / 2] = u - t;
                w *= wlen;
            }
        }
    }
}

size_t next_pow2(size_t n) {
    size_t m = 1;
    while (m < n) m <<= 1;
    return m;
}

// Spectrum of the a-periodization of F_{a,p}: returns Ghat_n for n in
// [0, M) with Fhat(n/a) = a * Ghat_n. Empty optional when F's support is
// empty (Fhat identically 0).
struct PairSpectrum {
    std::vector<std::complex<double>> ghat;  // length M
    bool empty = false;
};

PairSpectrum periodized_spectrum(int64_t a, int64_t p, int64_t r, const WeightFunction& wf,
                                 int64_t N_max) {
    PairSpectrum out;
    const double lo = wf.support_lo(), hi = wf.support_hi();
    const double ad = static_cast<double>(a), pd = static_cast<double>(p),
                 rd = static_cast<double>(r);
    // support of the second factor in x
    const double s2lo = (ad * lo - rd) / pd;
    const double s2hi = (ad * hi - rd) / pd;
    const double S0 = std::max(lo, s2lo), S1 = std::min(hi, s2hi);
    if (!(S0 < S1)) {
        out.empty = true;
        return out;
    }

    // initial oversampling: the slower ramp (width H*min(1, a/p)) sets the
    // decay scale of Fhat; margin = kOversample * max(a,p)/H frequencies
    constexpr double kOversample = 96.0;
    const double margin = kOversample * static_cast<double>(std::max(a, p)) / wf.H();
    size_t M = next_pow2(static_cast<size_t>(2.0 * (static_cast<double>(N_max) + margin) + 16.0));
    const double spectral_tol = 1e-10 * (hi - lo);

    for (int attempt = 0; attempt < 5; ++attempt) {
        std::vector<std::complex<double>> g(M, {0.0, 0.0});
        const double step = ad / static_cast<double>(M);
        const int64_t k_lo = static_cast<int64_t>(std::floor(S0 / step)) - 1;
        const int64_t k_hi = static_cast<int64_t>(std::ceil(S1 / step)) + 1;
        for (int64_t k = k_lo; k <= k_hi; ++k) {
            const double x = static_cast<double>(k) * step;
            const double f = wf.value(x) * wf.value((rd + pd * x) / ad);
            if (f == 0.0) continue;
            const int64_t j = ((k % static_cast<int64_t>(M)) + static_cast<int64_t>(M)) %
                              static_cast<int64_t>(M);
            g[static_cast<size_t>(j)] += f;
        }
        fft_forward(g);
        const double inv_m = 1.0 / static_cast<double>(M);
        for (auto& z : g) z *= inv_m;

        // aliasing check: the top band of |Fhat| must have decayed
        double band_max = 0.0;
        for (size_t n = M / 2 - M / 16; n <= M / 2; ++n)
            band_max = std::max(band_max, ad * std::abs(g[n]));
        if (band_max <= spectral_tol) {
            out.ghat = std::move(g);
            return out;
        }
        M <<= 1;
    }
    throw NumericFailure("periodized_spectrum: spectral tail failed to decay (a=" +
                         std::to_string(a) + ", p=" + std::to_string(p) + ")");
}

// ---- LRU cache for the direct path -----------------------------------------

struct FourierKey {
    int64_t a, c, r, n;
    double X, H;
    bool operator==(const FourierKey& o) const {
        return a == o.a && c == o.c && r == o.r && n == o.n && X == o.X && H == o.H;
    }
};

struct FourierKeyHash {
    size_t operator()(const FourierKey& k) const {
        size_t h = std::hash<int64_t>()(k.a);
        auto mix = [&h](size_t v) { h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2); };
        mix(std::hash<int64_t>()(k.c));
        mix(std::hash<int64_t>()(k.r));
        mix(std::hash<int64_t>()(k.n));
        mix(std::hash<double>()(k.X));
        mix(std::hash<double>()(k.H));
        return h;
    }
};

class FourierCache {
  public:
    static constexpr size_t kBudget = 1 << 18;

    std::complex<double> get(const KernelSpec& spec, int64_t n) {
        const FourierKey key{spec.a, spec.c, spec.r, n, spec.weight.X(), spec.weight.H()};
        {
            std::lock_guard<std::mutex> lock(mutex_);
            auto it = map_.find(key);
            if (it != map_.end()) {
                order_.splice(order_.begin(), order_, it->second.second);
                return it->second.first;
            }
        }
        const std::complex<double> v =
            fourier_F(spec, static_cast<double>(n) / static_cast<double>(spec.a));
        std::lock_guard<std::mutex> lock(mutex_);
        auto it = map_.find(key);
        if (it != map_.end()) return it->second.first;
        order_.push_front(key);
        map_.emplace(key, std::make_pair(v, order_.begin()));
        if (map_.size() > kBudget) {
            map_.erase(order_.back());
            order_.pop_back();
        }
        return v;
    }

  private:
    std::mutex mutex_;
    std::list<FourierKey> order_;
    std::unordered_map<FourierKey, std::pair<std::complex<double>, std::list<FourierKey>::iterator>,
                       FourierKeyHash>
        map_;
};

FourierCache& fourier_cache() {
    static FourierCache c;
    return c;
}

double tail_bound_for_pair(int64_t a, int64_t p, double alpha_abs, double H, int64_t N_max) {
    // k=2 envelope summed over |n| > N_max with sum_{n>N} n^-2 <= 1/N
    return 2.0 * poisson_detail::kEnvelopeC2 * alpha_abs * static_cast<double>(a + p) /
           (H * static_cast<double>(N_max));
}

}  // namespace

BwResult compute_B_w(int64_t X, int64_t r, const WeightSequence& alpha, const WeightFunction& wf,
                     const PrimeTables& tables, int64_t N_max, int threads, BwMethod method) {
    check_inputs(X, r, wf, tables);
    if (N_max < 1) throw std::invalid_argument("compute_B_w: N_max must be >= 1");

    struct Pair {
        int64_t a, p;
        std::complex<double> av;
    };
    std::vector<Pair> pairs;
    for (int64_t a = 1; a <= X; ++a) {
        const std::complex<double> av = alpha.value(a, tables);
        if (av == std::complex<double>{0.0, 0.0}) continue;
        for_coprime_pairs(X, tables, a, [&](int64_t p) { pairs.push_back({a, p, av}); });
    }

    const int64_t block = 4;  // pairs per block (each pair is substantial work)
    const int64_t nblocks = block_count(0, static_cast<int64_t>(pairs.size()), block);
    std::vector<KahanSumC> slots(static_cast<size_t>(nblocks));
    std::vector<KahanSum> tails(static_cast<size_t>(nblocks));

    run_blocks(nblocks, threads, [&](int64_t bi) {
        const size_t lo = static_cast<size_t>(bi * block);
        const size_t hi = std::min(pairs.size(), lo + static_cast<size_t>(block));
        KahanSumC local;
        KahanSum local_tail;
        for (size_t idx = lo; idx < hi; ++idx) {
            const auto& [a, p, av] = pairs[idx];
            const int64_t inv = (a == 1) ? 0 : mod_inverse(p % a, a);
            const int64_t rm = ((r % a) + a) % a;

            // phase exponent m_n with e(-n r pbar / a) = e(-m_n / a)
            auto phase = [&](int64_t n) -> std::complex<double> {
                if (a == 1) return {1.0, 0.0};
                const int64_t m = ((n % a) * rm % a) * inv % a;
                return unit_phase(-static_cast<double>(m) / static_cast<double>(a));
            };

            if (method == BwMethod::batched) {
                PairSpectrum spec = periodized_spectrum(a, p, r, wf, N_max);
                if (!spec.empty) {
                    // F real: the n and -n terms pair to 2 Re(...); the 1/a
                    // weight cancels against Fhat(n/a) = a * Ghat_n
                    KahanSum inner;
                    for (int64_t n = 1; n <= N_max; ++n) {
                        const std::complex<double> term =
                            phase(n) * spec.ghat[static_cast<size_t>(n)];
                        inner.add(2.0 * term.real());
                    }
                    local.add(av * inner.get());
                }
            } else {
                const KernelSpec kspec{a, p, r, wf};
                KahanSum inner;
                for (int64_t n = 1; n <= N_max; ++n) {
                    const std::complex<double> fhat = fourier_cache().get(kspec, n);
                    const std::complex<double> term = phase(n) * fhat;
                    inner.add(2.0 * term.real());
                }
                local.add(av / static_cast<double>(a) * inner.get());
            }
            local_tail.add(tail_bound_for_pair(a, p, std::abs(av), wf.H(), N_max));
        }
        slots[static_cast<size_t>(bi)] = local;
        tails[static_cast<size_t>(bi)] = local_tail;
    });

    BwResult res;
    KahanSumC total;
    KahanSum tail;
    for (const auto& s : slots) {
        total.re.add(s.re.sum);
        total.re.add(-s.re.carry);
        total.im.add(s.im.sum);
        total.im.add(-s.im.carry);
    }
    for (const auto& t : tails) tail.add(t.get());
    res.value = total.get();
    res.tail_bound = tail.get();
    return res;
}

DecompositionReport verify_decomposition(int64_t X, int64_t r, const WeightSequence& alpha,
                                         const WeightFunction& wf, const PrimeTables& tables,
                                         std::optional<int64_t> N_max_opt, int threads) {
    DecompositionReport rep;
    rep.X = X;
    rep.r = r;
    rep.H = wf.H();
    rep.alpha = alpha.name();
    rep.N_max = N_max_opt.value_or(default_N_max(X, wf.H()));
    rep.S_w = compute_S_w(X, r, alpha, wf, tables);
    rep.A_w = compute_A_w(X, r, alpha, wf, tables, threads);
    const BwResult bw = compute_B_w(X, r, alpha, wf, tables, rep.N_max, threads);
    rep.B_w_truncated = bw.value;
    rep.tail_bound = bw.tail_bound;
    rep.residual = std::abs(rep.S_w - rep.A_w - rep.B_w_truncated);
    rep.pass = rep.residual <= rep.tail_bound + 1e-6 * std::abs(rep.S_w);
    return rep;
}

}  // namespace detprime
