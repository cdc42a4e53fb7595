#include "detprime/counting.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "detprime/parallel.hpp"
#include "detprime/quadrature.hpp"

namespace detprime {

WeightSequence WeightSequence::ones() { return WeightSequence{}; }

WeightSequence WeightSequence::primes() {
    WeightSequence w;
    w.kind_ = AlphaKind::prime_indicator;
    w.name_ = "primes";
    return w;
}

WeightSequence WeightSequence::custom(std::map<int64_t, std::complex<double>> table,
                                      std::string name) {
    WeightSequence w;
    w.kind_ = AlphaKind::custom;
    w.name_ = std::move(name);
    w.table_ = std::move(table);
    return w;
}

bool WeightSequence::is_real() const {
    if (kind_ != AlphaKind::custom) return true;
    for (const auto& [n, v] : table_) {
        (void)n;
        if (v.imag() != 0.0) return false;
    }
    return true;
}

std::complex<double> WeightSequence::value(int64_t n, const PrimeTables& tables) const {
    switch (kind_) {
        case AlphaKind::ones:
            return {1.0, 0.0};
        case AlphaKind::prime_indicator:
            return {tables.is_prime(n) ? 1.0 : 0.0, 0.0};
        case AlphaKind::custom: {
            auto it = table_.find(n);
            return it == table_.end() ? std::complex<double>{0.0, 0.0} : it->second;
        }
    }
    return {0.0, 0.0};
}

int64_t required_table_limit(int64_t X, int64_t r) {
    // The counters factor n = a d - r (orthant) and |m| <= X^2 + |r|
    // (full box); the sieve must cover both, and at least X for the
    // prime list.
    if (X < 1) throw std::invalid_argument("X must be >= 1");
    if (X > (int64_t{1} << 20))
        throw std::invalid_argument("box size X is beyond the supported ceiling");
    int64_t peak;
    if (__builtin_add_overflow(X * X, r > 0 ? r : -r, &peak))
        throw std::overflow_error("X^2 + |r| overflows int64");
    return std::max({X, peak, int64_t{2}});
}

namespace {

void check_common(int64_t X, int64_t r, const PrimeTables& tables, int64_t min_limit) {
    if (X < 1) throw std::invalid_argument("X must be >= 1");
    if (r == 0) throw std::invalid_argument("r must be a non-zero integer");
    if (tables.limit() < min_limit)
        throw std::out_of_range("prime tables too small: need limit >= " +
                                std::to_string(min_limit));
}

// Accumulator that stays in exact integer arithmetic for the built-in
// weights and falls back to compensated complex summation otherwise.
struct Accum {
    bool exact;
    int64_t count = 0;
    KahanSumC sum;

    explicit Accum(bool integer_valued) : exact(integer_valued) {}

    void add_unit(int64_t times = 1) { count += times; }
    void add(std::complex<double> v) { sum.add(v); }

    std::complex<double> get() const {
        if (exact) return {static_cast<double>(count), 0.0};
        return sum.get();
    }
    void merge(const Accum& other) {
        count += other.count;
        sum.re.add(other.sum.re.sum);
        sum.re.add(-other.sum.re.carry);
        sum.im.add(other.sum.im.sum);
        sum.im.add(-other.sum.im.carry);
    }
};

}  // namespace

namespace {

// Largest n = a*d - r reachable by the orthant counters, overflow-checked.
int64_t orthant_table_limit(int64_t X, int64_t r) {
    int64_t peak;
    if (__builtin_sub_overflow(X * X, r, &peak)) throw std::overflow_error("X^2 - r overflows int64");
    return std::max({X, peak, int64_t{2}});
}

}  // namespace

std::complex<double> count_orthant_bruteforce(int64_t X, int64_t r, const WeightSequence& alpha,
                                              const PrimeTables& tables) {
    check_common(X, r, tables, std::max<int64_t>(X, 2));
    if (X > 64)
        throw std::invalid_argument(
            "count_orthant_bruteforce: X > 64 refused; use count_orthant_fast");
    Accum acc(alpha.integer_valued());
    const auto& primes = tables.primes();
    for (int64_t a = 1; a <= X; ++a) {
        const std::complex<double> av = alpha.value(a, tables);
        if (av == std::complex<double>{0.0, 0.0}) continue;
        for (uint32_t p : primes) {
            if (p > X) break;
            for (int64_t b = 1; b <= X; ++b) {
                int64_t n;  // = a*d
                if (__builtin_add_overflow(r, static_cast<int64_t>(p) * b, &n))
                    throw std::overflow_error("r + p*b overflows");
                if (n < a) continue;  // d >= 1
                if (n % a != 0) continue;
                if (n / a > X) continue;
                if (alpha.integer_valued())
                    acc.add_unit();
                else
                    acc.add(av);
            }
        }
    }
    return acc.get();
}

namespace {

// Shared (a,d)-loop kernel for the fast counter and the p|a split. For each
// n = a d - r, walk its distinct prime factors via SPF; a factor p counts
// when p <= X and b = n/p <= X.
template <class PerHit>
void fast_scan(int64_t X, int64_t r, const PrimeTables& tables, int threads, PerHit&& hit) {
    const int64_t block = 64;  // a-values per block, fixed for reproducibility
    const int64_t nblocks = block_count(1, X + 1, block);
    run_blocks(nblocks, threads, [&](int64_t bi) {
        const int64_t a_lo = 1 + bi * block;
        const int64_t a_hi = std::min(X, a_lo + block - 1);
        for (int64_t a = a_lo; a <= a_hi; ++a) {
            for (int64_t d = 1; d <= X; ++d) {
                int64_t n;
                if (__builtin_sub_overflow(a * d, r, &n)) throw std::overflow_error("a*d - r overflows");
                if (n < 2) {
                    // n = 1 would need p|1; no prime divisor exists
                    continue;
                }
                int64_t m = n;
                while (m > 1) {
                    const int64_t p = tables.smallest_factor(m);
                    while (m % p == 0) m /= p;
                    if (p <= X && n <= p * X) hit(bi, a, p, n / p);
                }
            }
        }
    });
}

}  // namespace

std::complex<double> count_orthant_fast(int64_t X, int64_t r, const WeightSequence& alpha,
                                        const PrimeTables& tables, int threads) {
    if (X > kFastCounterMaxX)
        throw std::invalid_argument("count_orthant_fast: X exceeds the 2^13 ceiling");
    check_common(X, r, tables, orthant_table_limit(X, r));
    const int64_t block = 64;
    const int64_t nblocks = block_count(1, X + 1, block);
    std::vector<Accum> slots(static_cast<size_t>(nblocks), Accum(alpha.integer_valued()));
    fast_scan(X, r, tables, threads, [&](int64_t bi, int64_t a, int64_t p, int64_t /*b*/) {
        (void)p;
        if (alpha.integer_valued()) {
            if (alpha.kind() == AlphaKind::ones || tables.is_prime(a))
                slots[static_cast<size_t>(bi)].add_unit();
        } else {
            slots[static_cast<size_t>(bi)].add(alpha.value(a, tables));
        }
    });
    Accum total(alpha.integer_valued());
    for (const auto& s : slots) total.merge(s);
    return total.get();
}

SplitCounts split_p_divides_a(int64_t X, int64_t r, const WeightSequence& alpha,
                              const PrimeTables& tables, int threads) {
    if (X > kFastCounterMaxX)
        throw std::invalid_argument("split_p_divides_a: X exceeds the 2^13 ceiling");
    check_common(X, r, tables, orthant_table_limit(X, r));
    const int64_t block = 64;
    const int64_t nblocks = block_count(1, X + 1, block);
    std::vector<Accum> cop(static_cast<size_t>(nblocks), Accum(alpha.integer_valued()));
    std::vector<Accum> divi(static_cast<size_t>(nblocks), Accum(alpha.integer_valued()));
    fast_scan(X, r, tables, threads, [&](int64_t bi, int64_t a, int64_t p, int64_t /*b*/) {
        auto& acc = (a % p == 0) ? divi[static_cast<size_t>(bi)] : cop[static_cast<size_t>(bi)];
        if (alpha.integer_valued()) {
            if (alpha.kind() == AlphaKind::ones || tables.is_prime(a)) acc.add_unit();
        } else {
            acc.add(alpha.value(a, tables));
        }
    });
    Accum c(alpha.integer_valued()), d(alpha.integer_valued());
    for (const auto& s : cop) c.merge(s);
    for (const auto& s : divi) d.merge(s);
    return {c.get(), d.get()};
}

namespace {

// Enumerate the divisors of |m| from its factorization; calls fn(divisor).
template <class Fn>
void for_each_divisor(const Factorization& f, Fn&& fn) {
    std::vector<int64_t> divs{1};
    for (const auto& [p, e] : f.prime_powers) {
        const size_t base = divs.size();
        int64_t pk = 1;
        for (int k = 1; k <= e; ++k) {
            pk *= p;
            for (size_t i = 0; i < base; ++i) divs.push_back(divs[i] * pk);
        }
    }
    for (int64_t d : divs) fn(d);
}

}  // namespace

std::complex<double> count_full_box(int64_t X, int64_t r, const PrimeTables& tables,
                                    BoxVariant variant, const WeightSequence& alpha) {
    if (X > kFastCounterMaxX)
        throw std::invalid_argument("count_full_box: X exceeds the 2^13 ceiling");
    check_common(X, r, tables, required_table_limit(X, r));
    const auto& primes = tables.primes();

    if (variant == BoxVariant::two_prime) {
        // p d - b q = r: loop (p, d), factor m = p d - r over prime divisors q
        int64_t count = 0;
        const int64_t pi_x = tables.prime_count(X);
        for (uint32_t p : primes) {
            if (p > X) break;
            for (int64_t d = -X; d <= X; ++d) {
                const int64_t m = static_cast<int64_t>(p) * d - r;
                if (m == 0) {
                    count += pi_x;  // b = 0, q arbitrary prime <= X
                    continue;
                }
                int64_t mm = std::abs(m);
                while (mm > 1) {
                    const int64_t q = tables.smallest_factor(mm);
                    while (mm % q == 0) mm /= q;
                    if (q <= X && std::abs(m) <= q * X) ++count;  // b = m/q
                }
            }
        }
        return {static_cast<double>(count), 0.0};
    }

    // one_prime: a, b, d in [-X, X], a != 0, weighted alpha(|a|), p in [2, X]
    Accum acc(alpha.integer_valued());
    std::complex<double> alpha_total{0.0, 0.0};
    int64_t alpha_total_int = 0;
    for (int64_t a = 1; a <= X; ++a) {
        if (alpha.integer_valued()) {
            if (alpha.kind() == AlphaKind::ones || tables.is_prime(a)) ++alpha_total_int;
        } else {
            alpha_total += alpha.value(a, tables);
        }
    }
    for (uint32_t p : primes) {
        if (p > X) break;
        for (int64_t b = -X; b <= X; ++b) {
            const int64_t m = r + static_cast<int64_t>(p) * b;  // = a*d
            if (m == 0) {
                // d = 0, a ranges over +-[1,X]
                if (alpha.integer_valued())
                    acc.add_unit(2 * alpha_total_int);
                else
                    acc.add(2.0 * alpha_total);
                continue;
            }
            const int64_t mabs = std::abs(m);
            if (mabs > X * X) continue;
            const Factorization f = factorize(mabs, tables);
            for_each_divisor(f, [&](int64_t dv) {
                if (dv > X || mabs / dv > X) return;
                // |a| = dv, |d| = |m|/dv; two sign pairs give a*d = m
                if (alpha.integer_valued()) {
                    if (alpha.kind() == AlphaKind::ones || tables.is_prime(dv)) acc.add_unit(2);
                } else {
                    acc.add(2.0 * alpha.value(dv, tables));
                }
            });
        }
    }
    return acc.get();
}

}  // namespace detprime
