#pragma once

// Exact solution counts of a*d - p*b = r (p prime) over boxes: a slow
// quadruple-enumeration oracle, an SPF-factorization counter, full-box
// variants, and the p|a split.

#include <complex>
#include <cstdint>
#include <map>
#include <string>

#include "detprime/primes.hpp"

namespace detprime {

enum class AlphaKind { ones, prime_indicator, custom };

// The weight sequence alpha(n) attached to the a variable. Built-ins are
// integer-valued with |alpha| <= 1; custom tables are complex with a lazy
// growth warning on load (see cli::load_custom_alpha).
class WeightSequence {
  public:
    static WeightSequence ones();
    static WeightSequence primes();  // indicator of the primes
    static WeightSequence custom(std::map<int64_t, std::complex<double>> table, std::string name);

    AlphaKind kind() const { return kind_; }
    const std::string& name() const { return name_; }
    bool integer_valued() const { return kind_ != AlphaKind::custom; }
    bool is_real() const;

    std::complex<double> value(int64_t n, const PrimeTables& tables) const;
    const std::map<int64_t, std::complex<double>>& table() const { return table_; }

  private:
    AlphaKind kind_ = AlphaKind::ones;
    std::string name_ = "ones";
    std::map<int64_t, std::complex<double>> table_;
};

struct CountResult {
    int64_t X = 0;
    int64_t r = 0;
    std::string alpha;
    std::complex<double> orthant_sum{0.0, 0.0};    // S_r(X)
    std::complex<double> full_box_count{0.0, 0.0}; // script-S_r(X), when computed
    std::complex<double> coprime_part{0.0, 0.0};   // (a,p)=1 terms of S_r
    std::complex<double> divisible_part{0.0, 0.0}; // p|a terms (supported on p|r)
};

// Reference oracle: enumerate a, p, b and check d = (r + p b)/a. Refuses
// X > 64 (the fast counter covers larger boxes). Requires tables.limit >= X.
std::complex<double> count_orthant_bruteforce(int64_t X, int64_t r, const WeightSequence& alpha,
                                              const PrimeTables& tables);

// Fast counter: for each (a,d) factor n = a d - r by SPF and count the prime
// divisors p <= X with n/p <= X (b = n/p is then forced). Requires
// tables.limit >= X^2 - r when that exceeds X. Documented ceiling X <= 2^13.
std::complex<double> count_orthant_fast(int64_t X, int64_t r, const WeightSequence& alpha,
                                        const PrimeTables& tables, int threads = 1);

enum class BoxVariant {
    one_prime,  // a,b,d integers in [-X,X] (a != 0, weighted by alpha(|a|)), p prime in [2,X]
    two_prime   // p,q primes in [2,X]; b,d integers in [-X,X]
};

std::complex<double> count_full_box(int64_t X, int64_t r, const PrimeTables& tables,
                                    BoxVariant variant,
                                    const WeightSequence& alpha = WeightSequence::ones());

struct SplitCounts {
    std::complex<double> coprime_part{0.0, 0.0};
    std::complex<double> divisible_part{0.0, 0.0};
};

// Exact partition of the orthant sum by gcd(a,p): coprime terms vs p|a terms.
SplitCounts split_p_divides_a(int64_t X, int64_t r, const WeightSequence& alpha,
                              const PrimeTables& tables, int threads = 1);

// Fast-counter box ceiling (documented; SPF table size is the binding cost).
inline constexpr int64_t kFastCounterMaxX = 1 << 13;

// Table limit needed by the fast counter / full-box counters for (X, r).
int64_t required_table_limit(int64_t X, int64_t r);

}  // namespace detprime
