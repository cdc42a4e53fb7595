#pragma once

// X-grid experiments: exact count vs 8x main term, log-log slope fits of
// the error, K_r stabilization sequences, and deterministic CSV/JSON
// emission (12 significant digits everywhere).

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "detprime/counting.hpp"
#include "detprime/primes.hpp"

namespace detprime {

enum class ScanMode { orthant8, fullbox };

const char* to_string(ScanMode mode);

struct ScanRecord {
    int64_t X = 0;
    int64_t r = 0;
    std::string alpha;
    ScanMode mode = ScanMode::orthant8;
    std::complex<double> exact{0.0, 0.0};  // 8*S_r(X) or the full-box count
    std::complex<double> main{0.0, 0.0};   // 8 * main term
    double error_abs = 0.0;                // |exact - main|
    double seconds = 0.0;
};

// One record per grid X (ascending, all <= the fast-counter ceiling).
// exact: mode orthant8 -> 8 * count_orthant_fast; mode fullbox -> the
// full-box counter (two-prime variant when alpha is the prime indicator,
// one-prime otherwise).
std::vector<ScanRecord> error_scan(int64_t r, const WeightSequence& alpha,
                                   const std::vector<int64_t>& X_grid, ScanMode mode,
                                   const PrimeTables& tables, int threads = 1);

struct SlopeFit {
    std::vector<std::pair<double, double>> points;  // (log X, log error_abs)
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
};

// OLS on (log X, log error_abs) over records with error_abs > 0; throws
// InsufficientData below 3 usable points.
SlopeFit fit_exponent(const std::vector<ScanRecord>& records);

struct KrPoint {
    int64_t X = 0;
    double estimate = 0.0;  // two-prime main term / li(X)^2
};

std::vector<KrPoint> estimate_Kr(int64_t r, const std::vector<int64_t>& X_grid,
                                 const PrimeTables& tables, int threads = 1);

// CSV schema: X,r,alpha,mode,exact,main,error_abs,seconds (exact/main split
// into _re/_im columns when alpha is complex). JSON mirrors the same field
// names. Numbers are rendered with 12 significant digits.
void write_scan_csv(std::ostream& out, const std::vector<ScanRecord>& records, bool complex_alpha);
void write_scan_json(std::ostream& out, const std::vector<ScanRecord>& records, bool complex_alpha);

// shared 12-significant-digit numeric rendering
std::string format_number(double v);

}  // namespace detprime
