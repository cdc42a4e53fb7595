#include "detprime/primes.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include "detprime/quadrature.hpp"

namespace detprime {

int64_t Factorization::divisor_count() const {
    int64_t tau = 1;
    for (const auto& [p, e] : prime_powers) {
        (void)p;
        tau *= (e + 1);
    }
    return tau;
}

namespace {

// Segmented sieve of Eratosthenes: fills the primality bitset and the prime
// list. Segments of 2^20 odd candidates keep the working set in cache.
void sieve_bitset(int64_t limit, std::vector<uint64_t>& bits, std::vector<uint32_t>& primes) {
    bits.assign(static_cast<size_t>(limit / 64 + 1), 0);
    auto set_bit = [&](int64_t n) { bits[static_cast<uint64_t>(n) >> 6] |= 1ull << (n & 63); };

    const int64_t root = static_cast<int64_t>(std::sqrt(static_cast<double>(limit))) + 1;
    std::vector<char> small(static_cast<size_t>(root) + 1, 1);
    small[0] = small[1] = 0;
    std::vector<int64_t> base;
    for (int64_t i = 2; i <= root; ++i) {
        if (!small[i]) continue;
        base.push_back(i);
        for (int64_t j = i * i; j <= root; j += i) small[j] = 0;
    }

    const int64_t seg_len = 1 << 20;
    std::vector<char> seg(seg_len);
    for (int64_t lo = 2; lo <= limit; lo += seg_len) {
        const int64_t hi = std::min(limit, lo + seg_len - 1);
        std::fill(seg.begin(), seg.begin() + (hi - lo + 1), 1);
        for (int64_t p : base) {
            if (p * p > hi) break;
            int64_t start = std::max(p * p, ((lo + p - 1) / p) * p);
            for (int64_t j = start; j <= hi; j += p) seg[j - lo] = 0;
        }
        for (int64_t n = lo; n <= hi; ++n) {
            if (seg[n - lo]) {
                set_bit(n);
                primes.push_back(static_cast<uint32_t>(n));
            }
        }
    }
}

// Linear (Euler) sieve: every composite is crossed exactly once by its
// smallest prime factor.
void sieve_spf(int64_t limit, std::vector<uint32_t>& spf) {
    spf.assign(static_cast<size_t>(limit) + 1, 0);
    std::vector<uint32_t> primes;
    primes.reserve(static_cast<size_t>(limit > 16 ? limit / (std::log(double(limit)) - 1.1) : 8));
    for (int64_t i = 2; i <= limit; ++i) {
        if (spf[i] == 0) {
            spf[i] = static_cast<uint32_t>(i);
            primes.push_back(static_cast<uint32_t>(i));
        }
        for (uint32_t p : primes) {
            if (p > spf[i] || i * p > limit) break;
            spf[i * p] = p;
        }
    }
}

}  // namespace

PrimeTables PrimeTables::build(int64_t limit) {
    if (limit < 2) throw std::invalid_argument("PrimeTables::build: limit must be >= 2");
    PrimeTables t;
    t.limit_ = limit;
    sieve_bitset(limit, t.bits_, t.primes_);
    sieve_spf(limit, t.spf_);
    return t;
}

int64_t PrimeTables::smallest_factor(int64_t n) const {
    if (n < 2) throw std::invalid_argument("smallest_factor: n must be >= 2");
    if (n > limit_) throw std::out_of_range("smallest_factor: n exceeds table limit");
    return spf_[static_cast<size_t>(n)];
}

int64_t PrimeTables::prime_count(int64_t x) const {
    if (x < 2) return 0;
    if (x > limit_) throw std::out_of_range("prime_count: x exceeds table limit");
    auto it = std::upper_bound(primes_.begin(), primes_.end(), static_cast<uint32_t>(x));
    return it - primes_.begin();
}

void PrimeTables::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("PrimeTables::save: cannot open " + path);
    out.write("DPSV1", 5);
    uint64_t lim = static_cast<uint64_t>(limit_);
    unsigned char lim_le[8];
    for (int i = 0; i < 8; ++i) lim_le[i] = static_cast<unsigned char>((lim >> (8 * i)) & 0xff);
    out.write(reinterpret_cast<const char*>(lim_le), 8);

    const size_t nbytes = static_cast<size_t>(limit_ / 8 + 1);
    std::vector<unsigned char> packed(nbytes, 0);
    for (uint32_t p : primes_) packed[p >> 3] |= static_cast<unsigned char>(1u << (p & 7));
    out.write(reinterpret_cast<const char*>(packed.data()), static_cast<std::streamsize>(nbytes));

    // SPF entries are stored little-endian; on the LE hosts this project
    // targets the in-memory array can be written directly.
    out.write(reinterpret_cast<const char*>(spf_.data()),
              static_cast<std::streamsize>(spf_.size() * sizeof(uint32_t)));
    if (!out) throw std::runtime_error("PrimeTables::save: write failed for " + path);
}

PrimeTables PrimeTables::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("PrimeTables::load: cannot open " + path);
    char magic[5];
    in.read(magic, 5);
    if (!in || std::memcmp(magic, "DPSV1", 5) != 0)
        throw std::runtime_error("PrimeTables::load: bad magic in " + path);
    unsigned char lim_le[8];
    in.read(reinterpret_cast<char*>(lim_le), 8);
    if (!in) throw std::runtime_error("PrimeTables::load: truncated header in " + path);
    uint64_t lim = 0;
    for (int i = 0; i < 8; ++i) lim |= static_cast<uint64_t>(lim_le[i]) << (8 * i);
    if (lim < 2 || lim > (1ull << 40))
        throw std::runtime_error("PrimeTables::load: implausible limit in " + path);

    PrimeTables t;
    t.limit_ = static_cast<int64_t>(lim);
    const size_t nbytes = static_cast<size_t>(t.limit_ / 8 + 1);
    std::vector<unsigned char> packed(nbytes);
    in.read(reinterpret_cast<char*>(packed.data()), static_cast<std::streamsize>(nbytes));
    if (!in) throw std::runtime_error("PrimeTables::load: truncated bitset in " + path);

    t.bits_.assign(static_cast<size_t>(t.limit_ / 64 + 1), 0);
    for (int64_t n = 2; n <= t.limit_; ++n) {
        if (packed[n >> 3] & (1u << (n & 7))) {
            t.bits_[static_cast<uint64_t>(n) >> 6] |= 1ull << (n & 63);
            t.primes_.push_back(static_cast<uint32_t>(n));
        }
    }
    t.spf_.resize(static_cast<size_t>(t.limit_) + 1);
    in.read(reinterpret_cast<char*>(t.spf_.data()),
            static_cast<std::streamsize>(t.spf_.size() * sizeof(uint32_t)));
    if (!in) throw std::runtime_error("PrimeTables::load: truncated SPF array in " + path);
    return t;
}

Factorization factorize(int64_t n, const PrimeTables& tables) {
    if (n < 2) throw std::invalid_argument("factorize: n must be >= 2");
    if (n > tables.limit()) throw std::out_of_range("factorize: n exceeds table limit");
    Factorization f;
    int64_t m = n;
    while (m > 1) {
        const int64_t p = tables.smallest_factor(m);
        int e = 0;
        while (m % p == 0) {
            m /= p;
            ++e;
        }
        f.prime_powers.emplace_back(p, e);
    }
    return f;
}

int64_t mod_inverse(int64_t p, int64_t q) {
    if (q < 2) throw std::invalid_argument("mod_inverse: modulus must be >= 2");
    int64_t a = ((p % q) + q) % q;
    // extended Euclid on (a, q)
    int64_t old_r = a, r = q;
    int64_t old_s = 1, s = 0;
    while (r != 0) {
        const int64_t quot = old_r / r;
        int64_t tmp = old_r - quot * r;
        old_r = r;
        r = tmp;
        tmp = old_s - quot * s;
        old_s = s;
        s = tmp;
    }
    if (old_r != 1) throw std::invalid_argument("mod_inverse: arguments are not coprime");
    return ((old_s % q) + q) % q;
}

double log_integral(double x) {
    if (!(x >= 2.0)) throw std::invalid_argument("log_integral: x must be >= 2");
    if (x == 2.0) return 0.0;
    // integrand is smooth on [2, x]; 1e-12 target leaves headroom under the
    // documented 1e-10 contract
    return integrate_adaptive([](double t) { return 1.0 / std::log(t); }, 2.0, x, 1e-12);
}

}  // namespace detprime
