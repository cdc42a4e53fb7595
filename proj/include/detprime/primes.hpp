#pragma once

// Sieve tables, factorization, modular inverses and the logarithmic
// integral: the arithmetic substrate shared (read-only) by every counter.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace detprime {

struct Factorization {
    // (prime, exponent) pairs in increasing prime order; the product of
    // prime^exponent reconstructs the factored integer.
    std::vector<std::pair<int64_t, int>> prime_powers;

    int distinct_primes() const { return static_cast<int>(prime_powers.size()); }
    int64_t divisor_count() const;
};

// Immutable after build(); safe to share across threads.
//
// Practical ceiling: limits up to ~1e8 are routine (the SPF table costs
// 4 bytes per integer, so 4e8 bytes at 1e8).
class PrimeTables {
  public:
    static PrimeTables build(int64_t limit);

    int64_t limit() const { return limit_; }

    bool is_prime(int64_t n) const {
        if (n < 2 || n > limit_) return false;
        return (bits_[static_cast<uint64_t>(n) >> 6] >> (n & 63)) & 1;
    }

    // Smallest prime factor of n, 2 <= n <= limit.
    int64_t smallest_factor(int64_t n) const;

    const std::vector<uint32_t>& primes() const { return primes_; }

    // pi(x): number of primes <= x (x <= limit).
    int64_t prime_count(int64_t x) const;

    // Binary table persistence. Layout: magic "DPSV1", little-endian u64
    // limit, packed bitset (ceil((limit+1)/8) bytes, bit n of byte n>>3),
    // SPF as a u32 array of limit+1 entries.
    void save(const std::string& path) const;
    static PrimeTables load(const std::string& path);

    // direct bitset access for serialization/tests
    const std::vector<uint64_t>& prime_bits() const { return bits_; }

  private:
    PrimeTables() = default;
    int64_t limit_ = 0;
    std::vector<uint64_t> bits_;    // bit n set iff n prime
    std::vector<uint32_t> primes_;  // ascending primes <= limit
    std::vector<uint32_t> spf_;     // spf_[n] = smallest prime factor, n >= 2
};

// Prime factorization of n via the SPF table. Requires 2 <= n <= tables.limit.
Factorization factorize(int64_t n, const PrimeTables& tables);

// Inverse of p modulo q (q >= 2), in [1, q-1]. Throws std::invalid_argument
// when gcd(p, q) != 1.
int64_t mod_inverse(int64_t p, int64_t q);

// li(x) = integral from 2 to x of dt/log t, for x >= 2.
// Absolute error <= 1e-10 over the supported range.
double log_integral(double x);

}  // namespace detprime
