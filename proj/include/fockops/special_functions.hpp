#ifndef FOCKOPS_SPECIAL_FUNCTIONS_HPP
#define FOCKOPS_SPECIAL_FUNCTIONS_HPP

#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include "fockops/errors.hpp"

// Numerical kernels for the special functions behind the closed-form
// expressions: generalized hypergeometric series 2F1/3F2 for |x| < 1,
// (associated) Laguerre polynomials, and the two-variable Hermite
// polynomials H_{m,n}(x,y) generated by exp(-uv+ux+vy).
//
// All functions are pure; factorial ratios go through log_factorial so
// indices far beyond 170 stay in range.

namespace fockops {

using complexd = std::complex<double>;

// Series termination: stop once the last three consecutive terms are below
// this fraction of the partial sum. The arguments used here are always in
// [0,1), so the tail decays at least geometrically; the triple check guards
// against lulls in alternating contributions.
inline constexpr double series_term_tol = 1e-16;
inline constexpr std::int64_t series_max_terms = 10'000'000;

/// ln(n!), exact-sum table for small n, lgamma beyond.
inline double log_factorial(std::int64_t n) {
    static const std::vector<double> table = [] {
        std::vector<double> t(8192);
        long double acc = 0.0L;
        t[0] = 0.0;
        for (std::size_t k = 1; k < t.size(); ++k) {
            acc += std::log(static_cast<long double>(k));
            t[k] = static_cast<double>(acc);
        }
        return t;
    }();
    if (n < 0) throw std::invalid_argument("log_factorial: negative argument");
    if (static_cast<std::size_t>(n) < table.size()) return table[static_cast<std::size_t>(n)];
    return std::lgamma(static_cast<double>(n) + 1.0);
}

struct hyper_2f1_args {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    double x = 0.0;  // in [0, 1)
};

struct hyper_3f2_args {
    double a1 = 0.0;
    double a2 = 0.0;
    double a3 = 0.0;
    double b1 = 0.0;
    double b2 = 0.0;
    double x = 0.0;  // in [0, 1)
};

struct hermite2_args {
    std::int64_t m = 0;
    std::int64_t n = 0;
    complexd x{};
    complexd y{};
};

namespace detail {

inline void check_unit_interval(double x, const char* who) {
    if (!(x >= 0.0 && x < 1.0))
        throw std::invalid_argument(std::string(who) + ": argument x must lie in [0, 1)");
}

}  // namespace detail

/// Gauss hypergeometric 2F1(a, b; c; x), direct power series.
/// Pochhammer ratios are carried incrementally term to term.
inline double gauss_2f1(const hyper_2f1_args& args) {
    detail::check_unit_interval(args.x, "gauss_2f1");
    if (args.x == 0.0) return 1.0;
    double term = 1.0;
    double sum = 1.0;
    int small_run = 0;
    for (std::int64_t k = 0; k < series_max_terms; ++k) {
        const double ck = args.c + static_cast<double>(k);
        if (ck == 0.0) {
            if (term == 0.0) return sum;  // series terminated before the pole
            throw singular_parameter("gauss_2f1: lower parameter hits a nonpositive integer");
        }
        term *= (args.a + k) * (args.b + k) / (ck * (k + 1.0)) * args.x;
        sum += term;
        if (std::abs(term) <= series_term_tol * std::abs(sum)) {
            if (++small_run >= 3) return sum;
        } else {
            small_run = 0;
        }
    }
    throw non_convergence("gauss_2f1: term budget exhausted");
}

inline double gauss_2f1(double a, double b, double c, double x) {
    return gauss_2f1(hyper_2f1_args{a, b, c, x});
}

/// Generalized hypergeometric 3F2(a1, a2, a3; b1, b2; x), same contract.
inline double hyper_3f2(const hyper_3f2_args& args) {
    detail::check_unit_interval(args.x, "hyper_3f2");
    if (args.x == 0.0) return 1.0;
    double term = 1.0;
    double sum = 1.0;
    int small_run = 0;
    for (std::int64_t k = 0; k < series_max_terms; ++k) {
        const double b1k = args.b1 + static_cast<double>(k);
        const double b2k = args.b2 + static_cast<double>(k);
        if (b1k == 0.0 || b2k == 0.0) {
            if (term == 0.0) return sum;
            throw singular_parameter("hyper_3f2: lower parameter hits a nonpositive integer");
        }
        term *= (args.a1 + k) * (args.a2 + k) * (args.a3 + k) / (b1k * b2k * (k + 1.0)) * args.x;
        sum += term;
        if (std::abs(term) <= series_term_tol * std::abs(sum)) {
            if (++small_run >= 3) return sum;
        } else {
            small_run = 0;
        }
    }
    throw non_convergence("hyper_3f2: term budget exhausted");
}

inline double hyper_3f2(double a1, double a2, double a3, double b1, double b2, double x) {
    return hyper_3f2(hyper_3f2_args{a1, a2, a3, b1, b2, x});
}

/// Laguerre polynomial L_n(x) by the stable three-term recurrence.
/// x may be negative (the closed forms evaluate L_k(-|alpha|^2)).
inline double laguerre(std::int64_t n, double x) {
    if (n < 0) throw std::invalid_argument("laguerre: negative degree");
    if (n == 0) return 1.0;
    double lm1 = 1.0;
    double l = 1.0 - x;
    for (std::int64_t k = 1; k < n; ++k) {
        const double lp1 = ((2.0 * k + 1.0 - x) * l - k * lm1) / (k + 1.0);
        lm1 = l;
        l = lp1;
    }
    return l;
}

/// Generalized Laguerre polynomial L_n^(k)(x).
inline double assoc_laguerre(std::int64_t n, std::int64_t k, double x) {
    if (n < 0 || k < 0) throw std::invalid_argument("assoc_laguerre: negative index");
    if (n == 0) return 1.0;
    double lm1 = 1.0;
    double l = 1.0 + k - x;
    for (std::int64_t j = 1; j < n; ++j) {
        const double lp1 = ((2.0 * j + 1.0 + k - x) * l - (j + k) * lm1) / (j + 1.0);
        lm1 = l;
        l = lp1;
    }
    return l;
}

/// Two-variable Hermite polynomial H_{m,n}(x, y).
/// Recurrence H_{m+1,n} = x H_{m,n} - n H_{m,n-1}, seeded with H_{0,n} = y^n.
inline complexd hermite2(const hermite2_args& args) {
    if (args.m < 0 || args.n < 0) throw std::invalid_argument("hermite2: negative index");
    std::vector<complexd> row(static_cast<std::size_t>(args.n) + 1);
    row[0] = 1.0;
    for (std::int64_t j = 1; j <= args.n; ++j)
        row[static_cast<std::size_t>(j)] = row[static_cast<std::size_t>(j - 1)] * args.y;
    for (std::int64_t i = 0; i < args.m; ++i) {
        for (std::int64_t j = args.n; j >= 1; --j) {
            row[static_cast<std::size_t>(j)] = args.x * row[static_cast<std::size_t>(j)]
                                             - static_cast<double>(j) * row[static_cast<std::size_t>(j - 1)];
        }
        row[0] = args.x * row[0];
    }
    return row[static_cast<std::size_t>(args.n)];
}

inline complexd hermite2(std::int64_t m, std::int64_t n, complexd x, complexd y) {
    return hermite2(hermite2_args{m, n, x, y});
}

}  // namespace fockops

#endif
