#include "detprime/mainterm.hpp"

#include <atomic>
#include <stdexcept>
#include <vector>

#include "detprime/parallel.hpp"
#include "detprime/quadrature.hpp"

namespace detprime {

MainTermResult main_term(int64_t X, int64_t r, const WeightSequence& alpha,
                         const PrimeTables& tables, int threads) {
    if (X < 2) throw std::invalid_argument("main_term: X must be >= 2");
    if (r == 0) throw std::invalid_argument("main_term: r must be a non-zero integer");
    if (tables.limit() < X) throw std::out_of_range("main_term: prime tables smaller than X");

    const auto& primes = tables.primes();
    size_t np = 0;
    while (np < primes.size() && primes[np] <= X) ++np;

    const int64_t block = 64;  // a-values per block; fixed so the reduction
                               // order is independent of the thread count
    const int64_t nblocks = block_count(1, X + 1, block);
    std::vector<KahanSumC> slots(static_cast<size_t>(nblocks));
    std::vector<int64_t> clamps(static_cast<size_t>(nblocks), 0);

    run_blocks(nblocks, threads, [&](int64_t bi) {
        const int64_t a_lo = 1 + bi * block;
        const int64_t a_hi = std::min(X, a_lo + block - 1);
        KahanSumC local;
        int64_t local_clamps = 0;
        for (int64_t a = a_lo; a <= a_hi; ++a) {
            const std::complex<double> av = alpha.value(a, tables);
            if (av == std::complex<double>{0.0, 0.0}) continue;
            const std::complex<double> av_over_a = av / static_cast<double>(a);
            // computed in doubles so arbitrary r cannot overflow
            const double hi_num = static_cast<double>(a) * static_cast<double>(X) - static_cast<double>(r);
            const double lo_num = static_cast<double>(a) - static_cast<double>(r);
            for (size_t i = 0; i < np; ++i) {
                const double p = static_cast<double>(primes[i]);
                const double upper = std::min(static_cast<double>(X), hi_num / p);
                const double lower = std::max(1.0, lo_num / p);
                const double bracket = upper - lower;
                if (bracket < 0.0) {
                    ++local_clamps;  // empty integration interval
                    continue;
                }
                local.add(av_over_a * bracket);
            }
        }
        slots[static_cast<size_t>(bi)] = local;
        clamps[static_cast<size_t>(bi)] = local_clamps;
    });

    MainTermResult res;
    res.X = X;
    res.r = r;
    res.alpha = alpha.name();
    KahanSumC total;
    for (const auto& s : slots) {
        total.re.add(s.re.sum);
        total.re.add(-s.re.carry);
        total.im.add(s.im.sum);
        total.im.add(-s.im.carry);
    }
    res.value = total.get();
    for (int64_t c : clamps) res.clamped_terms += c;
    return res;
}

MainTermResult two_prime_main_term(int64_t X, int64_t r, const PrimeTables& tables, int threads) {
    MainTermResult res = main_term(X, r, WeightSequence::primes(), tables, threads);
    const double li = log_integral(static_cast<double>(X));
    if (li > 0.0) res.K_r_estimate = res.value.real() / (li * li);
    return res;
}

}  // namespace detprime
