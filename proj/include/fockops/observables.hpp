#ifndef FOCKOPS_OBSERVABLES_HPP
#define FOCKOPS_OBSERVABLES_HPP

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <vector>

#include "fockops/errors.hpp"
#include "fockops/fock_core.hpp"
#include "fockops/parallel.hpp"
#include "fockops/special_functions.hpp"
#include "fockops/states.hpp"

// Photon-number distributions, Wigner functions and Mandel Q, each computed
// two independent ways:
//   * the oracle path works on the numerically transformed density matrix
//     (diagonal probabilities, displaced-parity Wigner sum, factorial
//     moments);
//   * the closed path evaluates analytic expressions in the seed parameters
//     through the special-function kernels, never touching the matrix.
// The validation harness and the acceptance suite compare the two.

namespace fockops {

/// Complex phase-space coordinate (dimensionless quadrature units).
struct phase_point {
    complexd beta{0.0, 0.0};
};

struct grid_spec {
    double re_min = -3.0;
    double re_max = 3.0;
    double im_min = -3.0;
    double im_max = 3.0;
    std::size_t points_per_axis = 81;
};

/// Rectangular grid of Wigner values, row-major with Re(beta) as the outer
/// (row) index and Im(beta) as the inner one.
struct wigner_grid {
    double re_min = 0.0;
    double re_max = 0.0;
    double im_min = 0.0;
    double im_max = 0.0;
    std::size_t points_per_axis = 0;
    std::vector<double> values;

    double at(std::size_t i, std::size_t j) const { return values[i * points_per_axis + j]; }
    double re_coord(std::size_t i) const {
        return re_min + (re_max - re_min) * static_cast<double>(i) / static_cast<double>(points_per_axis - 1);
    }
    double im_coord(std::size_t j) const {
        return im_min + (im_max - im_min) * static_cast<double>(j) / static_cast<double>(points_per_axis - 1);
    }
    double min_value() const {
        double m = values.empty() ? 0.0 : values[0];
        for (double v : values) m = std::min(m, v);
        return m;
    }
    /// Riemann-sum quadrature over the grid cells.
    double quadrature() const {
        const double hx = (re_max - re_min) / static_cast<double>(points_per_axis - 1);
        const double hy = (im_max - im_min) / static_cast<double>(points_per_axis - 1);
        double s = 0.0;
        for (double v : values) s += v;
        return s * hx * hy;
    }
};

/// Mandel Q with the two factorial moments it is built from.
struct q_result {
    double q = 0.0;
    double mean_n = 0.0;
    double second_factorial_moment = 0.0;
};

struct ecs_moments {
    double mean_n = 0.0;
    double second_factorial_moment = 0.0;
};

// ---------------------------------------------------------------------------
// photon-number distribution
// ---------------------------------------------------------------------------

/// p(n) = rho(n, n) for n = 0..cutoff.
inline std::vector<double> pnd(const density_matrix& state) {
    std::vector<double> p(state.dim());
    for (std::size_t n = 0; n < state.dim(); ++n) p[n] = state(n, n).real();
    return p;
}

/// Closed-form probability of n photons in the transformed state. Terms
/// whose factorial argument would be negative are zero (unreachable level).
inline double pnd_closed(const state_spec& spec, const op_sequence& seq, std::int64_t n) {
    const auto p = static_cast<std::int64_t>(seq.p);
    const auto q = static_cast<std::int64_t>(seq.q);
    const std::int64_t m = n - p + q;  // seed level feeding Fock index n
    if (n < 0 || m < 0) return 0.0;
    if (spec.family == state_family::thermal) {
        const double nbar = spec.nbar;
        const double x = nbar / (1.0 + nbar);
        if (x == 0.0 && m > 0) return 0.0;
        const double logx = (x > 0.0) ? std::log(x) : 0.0;
        if (seq.order == op_order::add_then_subtract) {
            const double norm_const = norm_closed(spec, seq);
            return norm_const / (1.0 + nbar) *
                   std::exp(static_cast<double>(m) * logx + 2.0 * log_factorial(n + q) -
                            log_factorial(n) - log_factorial(m));
        }
        if (n < p) return 0.0;
        const double norm_const = norm_closed(spec, seq);
        return norm_const / (1.0 + nbar) *
               std::exp(static_cast<double>(m) * logx + log_factorial(n) + log_factorial(m) -
                        2.0 * log_factorial(n - p));
    }
    // even coherent: only levels fed by even seed components survive
    if (m % 2 == 1) return 0.0;
    const double a = std::norm(spec.alpha);
    if (a == 0.0 && m > 0) return 0.0;
    const double loga = (a > 0.0) ? std::log(a) : 0.0;
    const double pref = 2.0 * std::exp(-a) / (1.0 + std::exp(-2.0 * a));
    if (seq.order == op_order::add_then_subtract) {
        const double norm_const = norm_closed(spec, seq);
        return norm_const * pref *
               std::exp(2.0 * log_factorial(n + q) + static_cast<double>(m) * loga -
                        log_factorial(n) - 2.0 * log_factorial(m));
    }
    if (n < p) return 0.0;
    const double norm_const = norm_closed(spec, seq);
    return norm_const * pref *
           std::exp(log_factorial(n) + static_cast<double>(m) * loga - 2.0 * log_factorial(n - p));
}

// ---------------------------------------------------------------------------
// Wigner function, oracle path (displaced parity)
// ---------------------------------------------------------------------------

namespace detail {

// Matrix elements <n|D(beta)|k> for one beta: magnitudes assembled in log
// space, Laguerre values L_j^(d)(z) tabulated by the j-recurrence per
// diagonal offset d.
class displacement_table {
  public:
    displacement_table(complexd beta, std::size_t nmax, std::size_t kmax)
        : beta_(beta), nmax_(nmax), kmax_(kmax), z_(std::norm(beta)) {
        const std::size_t dmax = std::max(nmax_, kmax_);
        lag_.assign((nmax_ + 1) * (dmax + 1), 0.0);
        for (std::size_t d = 0; d <= dmax; ++d) {
            double lm1 = 1.0;
            double l = 1.0 + static_cast<double>(d) - z_;
            lag_at(0, d) = 1.0;
            if (nmax_ >= 1) lag_at(1, d) = l;
            for (std::size_t j = 1; j < nmax_; ++j) {
                const double lp1 = ((2.0 * static_cast<double>(j) + 1.0 + static_cast<double>(d) - z_) * l -
                                    (static_cast<double>(j + d)) * lm1) /
                                   (static_cast<double>(j) + 1.0);
                lm1 = l;
                l = lp1;
                lag_at(j + 1, d) = l;
            }
        }
        log_mag_beta_ = std::log(std::abs(beta));
        arg_up_ = std::arg(beta);
        arg_down_ = std::arg(-std::conj(beta));
    }

    /// Fill column k of D(beta), entries n = 0..nmax.
    void column(std::size_t k, std::vector<complexd>& out) const {
        out.resize(nmax_ + 1);
        for (std::size_t n = 0; n <= nmax_; ++n) {
            const std::size_t mn = std::min(n, k);
            const std::size_t mx = std::max(n, k);
            const std::size_t d = mx - mn;
            const double logmag = 0.5 * (log_factorial(static_cast<std::int64_t>(mn)) -
                                         log_factorial(static_cast<std::int64_t>(mx))) +
                                  static_cast<double>(d) * log_mag_beta_ - 0.5 * z_;
            const double ang = static_cast<double>(d) * (n >= k ? arg_up_ : arg_down_);
            out[n] = std::polar(std::exp(logmag), ang) * lag_at(mn, d);
        }
    }

  private:
    double& lag_at(std::size_t j, std::size_t d) { return lag_[j * (std::max(nmax_, kmax_) + 1) + d]; }
    double lag_at(std::size_t j, std::size_t d) const { return lag_[j * (std::max(nmax_, kmax_) + 1) + d]; }

    complexd beta_;
    std::size_t nmax_;
    std::size_t kmax_;
    double z_;
    double log_mag_beta_;
    double arg_up_;
    double arg_down_;
    std::vector<double> lag_;
};

// Parity sum S = sum_k (-1)^k <k|D(-beta) rho D(beta)|k>; W = (2/pi) S.
inline double parity_sum(const density_matrix& rho, complexd beta) {
    const std::size_t dim = rho.dim();
    if (beta == complexd{0.0, 0.0}) {
        double s = 0.0;
        for (std::size_t n = 0; n < dim; ++n)
            s += ((n % 2 == 0) ? 1.0 : -1.0) * rho(n, n).real();
        return s;
    }
    const std::size_t nmax = rho.cutoff();
    const double z = std::norm(beta);
    // The displaced number distribution of a state with support up to nmax
    // extends to roughly (sqrt(nmax) + |beta|)^2; only start the tail test
    // beyond that edge so an interference zero cannot truncate the sum early.
    const std::size_t start_check =
        nmax + static_cast<std::size_t>(std::ceil(z + 2.0 * std::sqrt(static_cast<double>(nmax) * z))) + 4;
    const std::size_t kcap = start_check + start_check / 2 + 64;
    const displacement_table table(beta, nmax, kcap);
    const bool diagonal = rho.is_diagonal();

    std::vector<complexd> col;
    std::vector<complexd> rho_col(dim);
    double sum = 0.0;
    int small_run = 0;
    double sign = 1.0;
    for (std::size_t k = 0; k <= kcap; ++k, sign = -sign) {
        table.column(k, col);
        double quad = 0.0;
        if (diagonal) {
            for (std::size_t n = 0; n < dim; ++n) quad += rho(n, n).real() * std::norm(col[n]);
        } else {
            for (std::size_t m = 0; m < dim; ++m) {
                complexd acc{0.0, 0.0};
                for (std::size_t n = 0; n < dim; ++n) acc += rho(m, n) * col[n];
                rho_col[m] = acc;
            }
            complexd full{0.0, 0.0};
            for (std::size_t m = 0; m < dim; ++m) full += std::conj(col[m]) * rho_col[m];
            quad = full.real();
        }
        sum += sign * quad;
        if (k >= start_check && std::abs(quad) < 1e-13 * std::max(1.0, std::abs(sum))) {
            if (++small_run >= 3) return sum;
        } else {
            small_run = 0;
        }
    }
    throw cutoff_inadequate("wigner: parity sum failed its tail test");
}

}  // namespace detail

/// Wigner value at one phase-space point via the displaced-parity sum
/// W(beta) = (2/pi) sum_k (-1)^k <k|D(-beta) rho D(beta)|k>.
inline double wigner(const density_matrix& state, const phase_point& pt) {
    return 2.0 / std::numbers::pi * detail::parity_sum(state, pt.beta);
}

inline double wigner(const density_matrix& state, complexd beta) {
    return wigner(state, phase_point{beta});
}

// ---------------------------------------------------------------------------
// Wigner function, closed path
// ---------------------------------------------------------------------------

namespace detail {

// Closed thermal Wigner: the transformed state is diagonal with analytic
// geometric-factorial weights, so W is the parity-weighted Laguerre series
//   (2N/pi) e^{-z/2}/(1+nbar) sum_n w_n (-1)^(n+p-q) L_(n+p-q)(z),  z = 4|beta|^2.
// The Laguerre values ride along on their own recurrence as n advances.
inline double wigner_closed_thermal(const state_spec& spec, const op_sequence& seq, complexd beta) {
    const double nbar = spec.nbar;
    const double x = nbar / (1.0 + nbar);
    const auto p = static_cast<std::int64_t>(seq.p);
    const auto q = static_cast<std::int64_t>(seq.q);
    const double norm_const = norm_closed(spec, seq);  // may throw for degenerate combos
    const double z = 4.0 * std::norm(beta);
    const bool sa = (seq.order == op_order::add_then_subtract);
    const std::int64_t n0 = sa ? std::max<std::int64_t>(0, q - p) : q;

    if (x == 0.0) {
        // vacuum seed: single surviving term (pure Fock |p-q>)
        const std::int64_t k = n0 + p - q;
        const double w = sa ? std::exp(2.0 * log_factorial(n0 + p) - log_factorial(n0) - log_factorial(k))
                            : std::exp(log_factorial(n0) + log_factorial(k) - 2.0 * log_factorial(n0 - q));
        const double sgn = (k % 2 == 0) ? 1.0 : -1.0;
        return 2.0 * norm_const / std::numbers::pi * std::exp(-z / 2.0) / (1.0 + nbar) * w * sgn *
               laguerre(k, z);
    }

    const double logx = std::log(x);
    // Laguerre recurrence state at k = n + p - q, advanced with n
    std::int64_t k = n0 + p - q;
    double lkm1 = 0.0;
    double lk = laguerre(k, z);
    if (k >= 1) lkm1 = laguerre(k - 1, z);
    double sum = 0.0;
    int small_run = 0;
    for (std::int64_t n = n0; n - n0 < series_max_terms; ++n, ++k) {
        const double w =
            sa ? std::exp(static_cast<double>(n) * logx + 2.0 * log_factorial(n + p) - log_factorial(n) -
                          log_factorial(k))
               : std::exp(static_cast<double>(n) * logx + log_factorial(n) + log_factorial(k) -
                          2.0 * log_factorial(n - q));
        const double sgn = (k % 2 == 0) ? 1.0 : -1.0;
        const double term = w * sgn * lk;
        sum += term;
        if (std::abs(term) <= series_term_tol * std::max(std::abs(sum), 1e-300)) {
            if (++small_run >= 3) break;
        } else {
            small_run = 0;
        }
        // advance L_k -> L_(k+1)
        const double lkp1 = ((2.0 * static_cast<double>(k) + 1.0 - z) * lk - static_cast<double>(k) * lkm1) /
                            (static_cast<double>(k) + 1.0);
        lkm1 = lk;
        lk = lkp1;
        if (n - n0 + 1 >= series_max_terms)
            throw non_convergence("wigner_closed: thermal series term budget exhausted");
    }
    return 2.0 * norm_const / std::numbers::pi * std::exp(-z / 2.0) / (1.0 + nbar) * sum;
}

// Closed even-coherent Wigner, add-then-subtract order: finite Hermite sum
// over the four coherent pairs, with the corrected overall 1/pi scale.
inline double wigner_closed_ecs_sa(const state_spec& spec, const op_sequence& seq, complexd beta) {
    const auto p = static_cast<std::int64_t>(seq.p);
    const auto q = static_cast<std::int64_t>(seq.q);
    const complexd alpha = spec.alpha;
    const complexd ac = std::conj(alpha);
    const complexd bc = std::conj(beta);
    const double a = std::norm(alpha);
    const double norm_const = norm_closed(spec, seq);
    const complexd i_unit{0.0, 1.0};

    double sum = 0.0;
    for (std::int64_t n = 0; n <= p; ++n) {
        const double w = ((n % 2 == 0) ? 1.0 : -1.0) *
                         std::exp(2.0 * log_factorial(p) - log_factorial(n) - 2.0 * log_factorial(p - n));
        const complexd h1 = hermite2(p - n, q, i_unit * (2.0 * beta - alpha), i_unit * ac);
        const complexd h2 = hermite2(p - n, q, i_unit * (2.0 * beta + alpha), -i_unit * ac);
        const complexd h3 = hermite2(p - n, q, i_unit * (2.0 * beta - alpha), -i_unit * ac);
        const complexd h4 = hermite2(p - n, q, i_unit * (2.0 * beta + alpha), i_unit * ac);
        const double bracket =
            std::norm(h1) * std::exp(-2.0 * std::norm(alpha - beta)) +
            std::norm(h2) * std::exp(-2.0 * std::norm(alpha + beta)) +
            std::exp(-2.0 * std::norm(beta)) *
                2.0 * std::real(h3 * std::conj(h4) * std::exp(2.0 * (alpha * bc - ac * beta)));
        sum += w * bracket;
    }
    return norm_const / (std::numbers::pi * (1.0 + std::exp(-2.0 * a))) * sum;
}

// Closed even-coherent Wigner, subtract-then-add order, from the displaced
// parity form: a^q picks up coherent eigenvalues, the a†^p pair contracts to
// a single H_{p,p} per coherent pair:
//   W = (2 N/pi) C^2 sum_{u,v in {alpha,-alpha}} (v*)^q u^q e^{v*b - b*v}
//       H_{p,p}(2b - u, 2b* - v*) <2b - v|u>.
inline double wigner_closed_ecs_as(const state_spec& spec, const op_sequence& seq, complexd beta) {
    const auto p = static_cast<std::int64_t>(seq.p);
    const auto q = static_cast<std::int64_t>(seq.q);
    const complexd alpha = spec.alpha;
    const double a = std::norm(alpha);
    const double norm_const = norm_closed(spec, seq);
    const complexd bc = std::conj(beta);

    complexd sum{0.0, 0.0};
    for (int su = 0; su < 2; ++su) {
        for (int sv = 0; sv < 2; ++sv) {
            const complexd u = (su == 0) ? alpha : -alpha;
            const complexd v = (sv == 0) ? alpha : -alpha;
            const complexd vc = std::conj(v);
            const complexd w = 2.0 * beta - v;  // bra label
            const complexd overlap =
                std::exp(-0.5 * std::norm(w) - 0.5 * std::norm(u) + std::conj(w) * u);
            complexd factor = std::exp(vc * beta - bc * v) *
                              hermite2(p, p, 2.0 * beta - u, 2.0 * bc - vc) * overlap;
            if (q > 0) {
                const complexd vu = vc * u;
                complexd vu_pow{1.0, 0.0};
                for (std::int64_t j = 0; j < q; ++j) vu_pow *= vu;
                factor *= vu_pow;
            }
            sum += factor;
        }
    }
    const double c2 = 1.0 / (2.0 * (1.0 + std::exp(-2.0 * a)));
    return 2.0 * norm_const / std::numbers::pi * c2 * sum.real();
}

}  // namespace detail

/// Closed-form Wigner value of the transformed seed at one point.
inline double wigner_closed(const state_spec& spec, const op_sequence& seq, const phase_point& pt) {
    if (spec.family == state_family::thermal)
        return detail::wigner_closed_thermal(spec, seq, pt.beta);
    if (seq.order == op_order::add_then_subtract)
        return detail::wigner_closed_ecs_sa(spec, seq, pt.beta);
    return detail::wigner_closed_ecs_as(spec, seq, pt.beta);
}

inline double wigner_closed(const state_spec& spec, const op_sequence& seq, complexd beta) {
    return wigner_closed(spec, seq, phase_point{beta});
}

// ---------------------------------------------------------------------------
// Wigner grids
// ---------------------------------------------------------------------------

/// Evaluate the oracle Wigner function of a prepared state over a grid.
/// Points are partitioned across workers; each value is computed with a
/// fixed per-point summation order, so the output is identical for any
/// worker count.
inline wigner_grid evaluate_wigner_grid(const density_matrix& state, const grid_spec& grid,
                                        unsigned workers = 0) {
    if (grid.points_per_axis < 2)
        throw std::invalid_argument("evaluate_wigner_grid: points_per_axis must be >= 2");
    wigner_grid out;
    out.re_min = grid.re_min;
    out.re_max = grid.re_max;
    out.im_min = grid.im_min;
    out.im_max = grid.im_max;
    out.points_per_axis = grid.points_per_axis;
    const std::size_t total = grid.points_per_axis * grid.points_per_axis;
    out.values.assign(total, 0.0);
    parallel_for(
        total,
        [&](std::size_t idx) {
            const std::size_t i = idx / grid.points_per_axis;
            const std::size_t j = idx % grid.points_per_axis;
            out.values[idx] = wigner(state, complexd{out.re_coord(i), out.im_coord(j)});
        },
        workers);
    return out;
}

/// Build the transformed state for (spec, seq) at an adequate cutoff and
/// evaluate its grid via the oracle path.
inline wigner_grid evaluate_wigner_grid(const state_spec& spec, const op_sequence& seq,
                                        const grid_spec& grid, double tail_tol = 1e-14,
                                        unsigned workers = 0) {
    const std::size_t cutoff = choose_cutoff(spec, seq, tail_tol);
    auto [state, record] = transform(build_seed(spec, cutoff), seq);
    (void)record;
    return evaluate_wigner_grid(state, grid, workers);
}

// ---------------------------------------------------------------------------
// Mandel Q
// ---------------------------------------------------------------------------

/// Q = <a†^2 a^2>/<a†a> - <a†a> from the oracle moments.
inline q_result mandel_q(const density_matrix& state) {
    const double mean = moment(state, 1);
    if (mean <= 1e-12) throw undefined_q("mandel_q: mean photon number is ~0");
    const double second = moment(state, 2);
    return q_result{second / mean - mean, mean, second};
}

/// Closed-form Q of the transformed thermal state. The hypergeometric lower
/// parameters must stay positive: add-then-subtract requires p - q >= 2,
/// subtract-then-add requires p >= 2; otherwise the published expression is
/// singular and the caller should use the oracle.
inline double mandel_q_closed_thermal(double nbar, const op_sequence& seq) {
    if (!(nbar >= 0.0)) throw std::invalid_argument("mandel_q_closed_thermal: nbar must be nonnegative");
    const double x = nbar / (1.0 + nbar);
    const auto p = static_cast<double>(seq.p);
    const auto q = static_cast<double>(seq.q);
    if (seq.order == op_order::add_then_subtract) {
        if (static_cast<std::int64_t>(seq.p) - static_cast<std::int64_t>(seq.q) < 2)
            throw singular_parameter("mandel_q_closed_thermal: lower parameter p-q-1 nonpositive");
        const double f_m1 = gauss_2f1(1.0 + p, 1.0 + p, p - q - 1.0, x);
        const double f_0 = gauss_2f1(1.0 + p, 1.0 + p, p - q, x);
        const double f_p1 = gauss_2f1(1.0 + p, 1.0 + p, 1.0 + p - q, x);
        return (p - q - 1.0) * f_m1 / f_0 - (p - q) * f_0 / f_p1;
    }
    if (seq.p < 2)
        throw singular_parameter("mandel_q_closed_thermal: lower parameter p-1 nonpositive");
    const double g_m1 = hyper_3f2(1.0 + p, 1.0 + p, 1.0 + q, 1.0, p - 1.0, x);
    const double g_0 = hyper_3f2(1.0 + p, 1.0 + p, 1.0 + q, 1.0, p, x);
    const double f = gauss_2f1(1.0 + q, 1.0 + p, 1.0, x);
    return (p - 1.0) * g_m1 / g_0 - p * g_0 / f;
}

/// Closed-form factorial moments <a†a> and <a†^2 a^2> of the transformed
/// even coherent state (corrected superposition weighting throughout).
inline ecs_moments ecs_moments_closed(complexd alpha, const op_sequence& seq) {
    const double a = std::norm(alpha);
    const unsigned p = seq.p;
    const unsigned q = seq.q;
    const state_spec spec = state_spec::make_even_coherent(alpha);
    if (seq.order == op_order::add_then_subtract) {
        const double norm_sa = norm_closed(spec, seq);
        const double pref = norm_sa / (1.0 + std::exp(-2.0 * a));
        return ecs_moments{pref * detail::ecs_sa_weight_sum(p, q, a, 1, detail::laguerre_sup),
                           pref * detail::ecs_sa_weight_sum(p, q, a, 2, detail::laguerre_sup)};
    }
    if (a == 0.0 && q > 0) throw null_state("ecs_moments_closed: subtracting from vacuum");
    const double norm_as = norm_closed(spec, seq);
    const double aq = (q == 0) ? 1.0 : std::exp(static_cast<double>(q) * std::log(a));
    const double pref = norm_as / (1.0 + std::exp(-2.0 * a)) * std::exp(log_factorial(p)) * aq;
    const double sgn = (q % 2 == 0) ? 1.0 : -1.0;
    const double e2 = std::exp(-2.0 * a);
    const double pd = static_cast<double>(p);
    const auto lag = [&](std::int64_t upper, double x) { return assoc_laguerre(p, upper, x); };
    const double mean = pref * ((a * lag(1, -a) + pd * lag(0, -a)) +
                                sgn * e2 * (-a * lag(1, a) + pd * lag(0, a)));
    const double second =
        pref * ((a * a * lag(2, -a) + 2.0 * pd * a * lag(1, -a) + pd * (pd - 1.0) * lag(0, -a)) +
                sgn * e2 * (a * a * lag(2, a) - 2.0 * pd * a * lag(1, a) + pd * (pd - 1.0) * lag(0, a)));
    return ecs_moments{mean, second};
}

}  // namespace fockops

#endif
