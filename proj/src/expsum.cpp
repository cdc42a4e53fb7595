#include "detprime/expsum.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "detprime/parallel.hpp"
#include "detprime/quadrature.hpp"

namespace detprime {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

void check_args(int64_t a, int64_t q, int64_t X, const PrimeTables& tables) {
    if (a < 1) throw std::invalid_argument("kloosterman_prime_sum: a must be >= 1");
    if (q < 2) throw std::invalid_argument("kloosterman_prime_sum: q must be >= 2");
    if (X < 2) throw std::invalid_argument("kloosterman_prime_sum: X must be >= 2");
    if (tables.limit() < X) throw std::out_of_range("kloosterman_prime_sum: tables smaller than X");
}

int64_t mulmod(int64_t x, int64_t y, int64_t q) {
    return static_cast<int64_t>(static_cast<__int128>(x) * y % q);
}

// collects the residues p mod q of primes p <= X coprime to q
std::vector<int64_t> coprime_prime_residues(int64_t q, int64_t X, const PrimeTables& tables) {
    std::vector<int64_t> res;
    for (uint32_t p : tables.primes()) {
        if (static_cast<int64_t>(p) > X) break;
        const int64_t pr = static_cast<int64_t>(p) % q;
        if (pr == 0 || std::gcd(static_cast<int64_t>(p), q) != 1) continue;
        res.push_back(pr);
    }
    return res;
}

ExpSumResult sum_phases(int64_t a, int64_t q, int64_t X, const std::vector<int64_t>& inverses) {
    ExpSumResult out;
    out.a = a;
    out.q = q;
    out.X = X;
    out.prime_count_used = static_cast<int64_t>(inverses.size());
    const int64_t am = ((a % q) + q) % q;
    KahanSumC sum;
    for (int64_t inv : inverses) {
        const int64_t m = mulmod(am, inv, q);
        const double t = static_cast<double>(m) / static_cast<double>(q);
        sum.add({std::cos(kTwoPi * t), std::sin(kTwoPi * t)});
    }
    out.value = sum.get();
    return out;
}

}  // namespace

namespace expsum_detail {

ExpSumResult kloosterman_per_prime(int64_t a, int64_t q, int64_t X, const PrimeTables& tables) {
    check_args(a, q, X, tables);
    const std::vector<int64_t> residues = coprime_prime_residues(q, X, tables);
    std::vector<int64_t> inverses;
    inverses.reserve(residues.size());
    for (int64_t pr : residues) inverses.push_back(mod_inverse(pr, q));
    return sum_phases(a, q, X, inverses);
}

ExpSumResult kloosterman_batched(int64_t a, int64_t q, int64_t X, const PrimeTables& tables) {
    check_args(a, q, X, tables);
    const std::vector<int64_t> residues = coprime_prime_residues(q, X, tables);
    // prefix-product trick: one modular inversion for the whole batch
    std::vector<int64_t> prefix(residues.size() + 1, 1 % q);
    for (size_t i = 0; i < residues.size(); ++i)
        prefix[i + 1] = mulmod(prefix[i], residues[i], q);
    std::vector<int64_t> inverses(residues.size(), 0);
    if (!residues.empty()) {
        int64_t inv_running = mod_inverse(prefix.back(), q);
        for (size_t i = residues.size(); i-- > 0;) {
            inverses[i] = mulmod(inv_running, prefix[i], q);
            inv_running = mulmod(inv_running, residues[i], q);
        }
    }
    return sum_phases(a, q, X, inverses);
}

}  // namespace expsum_detail

ExpSumResult kloosterman_prime_sum(int64_t a, int64_t q, int64_t X, const PrimeTables& tables) {
    check_args(a, q, X, tables);
    const int64_t pi_x = tables.prime_count(X);
    if (pi_x > 64) return expsum_detail::kloosterman_batched(a, q, X, tables);
    return expsum_detail::kloosterman_per_prime(a, q, X, tables);
}

AverageBoundReport dyadic_average(int64_t a, int64_t Q, int64_t X, const PrimeTables& tables,
                                  int threads) {
    if (Q < 1) throw std::invalid_argument("dyadic_average: Q must be >= 1");
    check_args(a, 2 * Q, X, tables);
    AverageBoundReport rep;
    rep.a = a;
    rep.Q = Q;
    rep.X = X;
    // admissibility Q^{4/3} >= X >= Q^{1/2}, decided in exact integer
    // arithmetic: Q^4 >= X^3 and X^2 >= Q
    const __int128 q4 = static_cast<__int128>(Q) * Q * Q * Q;
    const __int128 x3 = static_cast<__int128>(X) * X * X;
    rep.admissible = (q4 >= x3) && (static_cast<__int128>(X) * X >= Q);

    const int64_t lo = Q + 1, hi = 2 * Q;
    std::vector<double> mags(static_cast<size_t>(hi - lo + 1), 0.0);
    const int64_t block = 16;
    const int64_t nblocks = block_count(lo, hi + 1, block);
    run_blocks(nblocks, threads, [&](int64_t bi) {
        const int64_t q_lo = lo + bi * block;
        const int64_t q_hi = std::min(hi, q_lo + block - 1);
        for (int64_t q = q_lo; q <= q_hi; ++q)
            mags[static_cast<size_t>(q - lo)] = std::abs(kloosterman_prime_sum(a, q, X, tables).value);
    });
    KahanSum lhs;
    for (double m : mags) lhs.add(m);
    rep.lhs = lhs.get();

    const double ad = static_cast<double>(a), Qd = static_cast<double>(Q),
                 Xd = static_cast<double>(X);
    rep.rhs_envelope = std::sqrt(1.0 + ad / (Xd * Qd)) *
                       (std::sqrt(Qd) * std::pow(Xd, 11.0 / 8.0) +
                        std::pow(Qd, 7.0 / 6.0) * std::pow(Xd, 2.0 / 3.0)) *
                       std::pow(ad * Qd, 0.05);
    rep.ratio = rep.lhs / rep.rhs_envelope;
    return rep;
}

}  // namespace detprime
