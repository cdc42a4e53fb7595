#include "detprime/analysis.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "detprime/errors.hpp"
#include "detprime/mainterm.hpp"

namespace detprime {

const char* to_string(ScanMode mode) {
    return mode == ScanMode::orthant8 ? "orthant8" : "fullbox";
}

std::vector<ScanRecord> error_scan(int64_t r, const WeightSequence& alpha,
                                   const std::vector<int64_t>& X_grid, ScanMode mode,
                                   const PrimeTables& tables, int threads) {
    if (X_grid.empty()) throw std::invalid_argument("error_scan: empty X grid");
    for (size_t i = 0; i + 1 < X_grid.size(); ++i)
        if (X_grid[i] >= X_grid[i + 1])
            throw std::invalid_argument("error_scan: X grid must be strictly ascending");
    if (X_grid.back() > kFastCounterMaxX)
        throw std::invalid_argument("error_scan: grid exceeds the fast-counter ceiling");

    std::vector<ScanRecord> records;
    records.reserve(X_grid.size());
    for (int64_t X : X_grid) {
        const auto t0 = std::chrono::steady_clock::now();
        ScanRecord rec;
        rec.X = X;
        rec.r = r;
        rec.alpha = alpha.name();
        rec.mode = mode;
        if (mode == ScanMode::orthant8) {
            rec.exact = 8.0 * count_orthant_fast(X, r, alpha, tables, threads);
        } else {
            const BoxVariant variant = alpha.kind() == AlphaKind::prime_indicator
                                           ? BoxVariant::two_prime
                                           : BoxVariant::one_prime;
            rec.exact = count_full_box(X, r, tables, variant, alpha);
        }
        rec.main = 8.0 * main_term(X, r, alpha, tables, threads).value;
        rec.error_abs = std::abs(rec.exact - rec.main);
        rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        records.push_back(std::move(rec));
    }
    return records;
}

SlopeFit fit_exponent(const std::vector<ScanRecord>& records) {
    SlopeFit fit;
    for (const auto& rec : records) {
        if (!(rec.error_abs > 0.0) || !std::isfinite(rec.error_abs)) continue;
        fit.points.emplace_back(std::log(static_cast<double>(rec.X)), std::log(rec.error_abs));
    }
    const size_t n = fit.points.size();
    if (n < 3)
        throw InsufficientData("fit_exponent: need >= 3 records with positive error_abs, have " +
                               std::to_string(n));
    double sx = 0, sy = 0;
    for (const auto& [x, y] : fit.points) {
        sx += x;
        sy += y;
    }
    const double mx = sx / static_cast<double>(n), my = sy / static_cast<double>(n);
    double sxx = 0, sxy = 0, syy = 0;
    for (const auto& [x, y] : fit.points) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
        syy += (y - my) * (y - my);
    }
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.r_squared = (syy == 0.0) ? 1.0 : (sxy * sxy) / (sxx * syy);
    return fit;
}

std::vector<KrPoint> estimate_Kr(int64_t r, const std::vector<int64_t>& X_grid,
                                 const PrimeTables& tables, int threads) {
    if (X_grid.empty()) throw std::invalid_argument("estimate_Kr: empty X grid");
    std::vector<KrPoint> out;
    out.reserve(X_grid.size());
    for (int64_t X : X_grid) {
        const MainTermResult mt = two_prime_main_term(X, r, tables, threads);
        out.push_back({X, mt.K_r_estimate.value_or(0.0)});
    }
    return out;
}

std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

void write_scan_csv(std::ostream& out, const std::vector<ScanRecord>& records,
                    bool complex_alpha) {
    if (complex_alpha)
        out << "X,r,alpha,mode,exact_re,exact_im,main_re,main_im,error_abs,seconds\n";
    else
        out << "X,r,alpha,mode,exact,main,error_abs,seconds\n";
    for (const auto& rec : records) {
        out << rec.X << ',' << rec.r << ',' << rec.alpha << ',' << to_string(rec.mode) << ',';
        if (complex_alpha)
            out << format_number(rec.exact.real()) << ',' << format_number(rec.exact.imag()) << ','
                << format_number(rec.main.real()) << ',' << format_number(rec.main.imag()) << ',';
        else
            out << format_number(rec.exact.real()) << ',' << format_number(rec.main.real()) << ',';
        out << format_number(rec.error_abs) << ',' << format_number(rec.seconds) << '\n';
    }
}

void write_scan_json(std::ostream& out, const std::vector<ScanRecord>& records,
                     bool complex_alpha) {
    out << "[\n";
    for (size_t i = 0; i < records.size(); ++i) {
        const auto& rec = records[i];
        out << "  {\"X\": " << rec.X << ", \"r\": " << rec.r << ", \"alpha\": \"" << rec.alpha
            << "\", \"mode\": \"" << to_string(rec.mode) << "\", ";
        if (complex_alpha)
            out << "\"exact_re\": " << format_number(rec.exact.real())
                << ", \"exact_im\": " << format_number(rec.exact.imag())
                << ", \"main_re\": " << format_number(rec.main.real())
                << ", \"main_im\": " << format_number(rec.main.imag()) << ", ";
        else
            out << "\"exact\": " << format_number(rec.exact.real())
                << ", \"main\": " << format_number(rec.main.real()) << ", ";
        out << "\"error_abs\": " << format_number(rec.error_abs)
            << ", \"seconds\": " << format_number(rec.seconds) << "}";
        out << (i + 1 < records.size() ? ",\n" : "\n");
    }
    out << "]\n";
}

}  // namespace detprime
