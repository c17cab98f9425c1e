#ifndef FOCKOPS_STATES_HPP
#define FOCKOPS_STATES_HPP

#include <cmath>
#include <complex>
#include <cstddef>

#include "fockops/errors.hpp"
#include "fockops/fock_core.hpp"
#include "fockops/special_functions.hpp"

// Seed-state constructors (thermal, even coherent) plus the closed-form
// normalization constants of the transformed states.
//
// The even-coherent constants are NOT the printed ones: the published
// superposition term and its sign relation fail basic trace identities.
// norm_closed() evaluates the corrected forms (which reproduce the oracle
// reciprocal traces); norm_closed_literal_ecs() evaluates the published
// expression verbatim so validation reports can quantify the discrepancy.

namespace fockops {

enum class state_family { thermal, even_coherent };

/// Seed-state parameters: mean photon number for thermal, amplitude for the
/// even coherent superposition.
struct state_spec {
    state_family family = state_family::thermal;
    double nbar = 0.0;
    complexd alpha{0.0, 0.0};

    static state_spec make_thermal(double nbar) {
        if (!(nbar >= 0.0)) throw std::invalid_argument("thermal: nbar must be nonnegative");
        state_spec s;
        s.family = state_family::thermal;
        s.nbar = nbar;
        return s;
    }

    static state_spec make_even_coherent(complexd alpha) {
        state_spec s;
        s.family = state_family::even_coherent;
        s.alpha = alpha;
        return s;
    }
};

/// Thermal state: diagonal geometric weights nbar^n/(1+nbar)^(n+1),
/// renormalized over the truncated block.
inline density_matrix thermal(double nbar, std::size_t cutoff) {
    if (!(nbar >= 0.0)) throw std::invalid_argument("thermal: nbar must be nonnegative");
    density_matrix rho(cutoff);
    if (nbar == 0.0) {
        rho.at(0, 0) = 1.0;
        return rho;
    }
    const double logx = std::log(nbar / (1.0 + nbar));
    double total = 0.0;
    for (std::size_t n = 0; n <= cutoff; ++n) {
        const double w = std::exp(static_cast<double>(n) * logx);
        rho.at(n, n) = w;
        total += w;
    }
    rho.scale(1.0 / total);
    return rho;
}

/// Even coherent state (|alpha> + |-alpha>)/sqrt(2+2e^{-2|alpha|^2}):
/// only even Fock amplitudes survive; renormalized over the block.
inline pure_state even_coherent(complexd alpha, std::size_t cutoff) {
    std::vector<complexd> c(cutoff + 1, complexd{0.0, 0.0});
    const double mag = std::abs(alpha);
    if (mag == 0.0) {
        c[0] = 1.0;
        return pure_state(std::move(c));
    }
    const double logmag = std::log(mag);
    const double phase = std::arg(alpha);
    for (std::size_t n = 0; n <= cutoff; n += 2) {
        const double lm = static_cast<double>(n) * logmag - 0.5 * log_factorial(static_cast<std::int64_t>(n));
        c[n] = std::polar(std::exp(lm), static_cast<double>(n) * phase);
    }
    pure_state psi(std::move(c));
    psi.normalize();
    return psi;
}

/// Seed density operator for a spec (thermal directly, ECS densified).
inline density_matrix build_seed(const state_spec& spec, std::size_t cutoff) {
    if (spec.family == state_family::thermal) return thermal(spec.nbar, cutoff);
    return even_coherent(spec.alpha, cutoff).densify();
}

namespace detail {

// Corrected superposition term of the even-coherent trace formulas:
// diagonal coherent pairs contribute L_k(-a) at weight 1, cross pairs
// L_k(+a) at the overlap weight e^{-2a}, a = |alpha|^2.
inline double laguerre_sup(std::int64_t k, double a) {
    return laguerre(k, -a) + std::exp(-2.0 * a) * laguerre(k, a);
}

// The published (unweighted) superposition term, kept for validation only.
inline double laguerre_sup_literal(std::int64_t k, double a) {
    return laguerre(k, a) + laguerre(k, -a);
}

// Denominator of the add-then-subtract constant:
// sum_{m=0}^{q} (-1)^m (q!)^2 (p+q-m)! / (m! ((q-m)!)^2) Lsup_{p+q-m}(a).
template <typename Sup>
double ecs_sa_weight_sum(unsigned p, unsigned q, double a, unsigned extra, Sup&& sup) {
    const auto qe = static_cast<std::int64_t>(q + extra);
    double sum = 0.0;
    for (std::int64_t m = 0; m <= qe; ++m) {
        const double lw = 2.0 * log_factorial(qe) + log_factorial(static_cast<std::int64_t>(p) + qe - m) -
                          log_factorial(m) - 2.0 * log_factorial(qe - m);
        const double sgn = (m % 2 == 0) ? 1.0 : -1.0;
        sum += sgn * std::exp(lw) * sup(static_cast<std::int64_t>(p) + qe - m, a);
    }
    return sum;
}

// Raw trace of a^q a†^p rho_th a^p a†^q over (1+nbar); x = nbar/(1+nbar).
// Used when p < q, where the 2F1 reduction does not apply.
inline double thermal_sa_raw_series(double x, unsigned p, unsigned q) {
    if (x == 0.0) return 0.0;  // only called for p < q; vacuum seed dies under a^q a†^p
    double sum = 0.0;
    int small_run = 0;
    const double logx = std::log(x);
    for (std::int64_t n = static_cast<std::int64_t>(q - p);; ++n) {
        const double t = std::exp(static_cast<double>(n) * logx + 2.0 * log_factorial(n + p) -
                                  log_factorial(n) -
                                  log_factorial(n + static_cast<std::int64_t>(p) - static_cast<std::int64_t>(q)));
        sum += t;
        if (t <= series_term_tol * sum) {
            if (++small_run >= 3) return sum;
        } else {
            small_run = 0;
        }
        if (n > series_max_terms) throw non_convergence("thermal_sa_raw_series");
    }
}

}  // namespace detail

/// Closed-form normalization constant (reciprocal of the unnormalized
/// trace) for the transformed state. Thermal branches follow the published
/// 2F1 expressions; even-coherent branches use the corrected Laguerre sums.
inline double norm_closed(const state_spec& spec, const op_sequence& seq) {
    const unsigned p = seq.p;
    const unsigned q = seq.q;
    if (spec.family == state_family::thermal) {
        const double nbar = spec.nbar;
        const double x = nbar / (1.0 + nbar);
        if (seq.order == op_order::add_then_subtract) {
            if (p >= q) {
                const double f = gauss_2f1(1.0 + p, 1.0 + p, 1.0 + p - q, x);
                return (1.0 + nbar) * std::exp(log_factorial(static_cast<std::int64_t>(p - q)) -
                                               2.0 * log_factorial(p)) / f;
            }
            if (x == 0.0) throw null_state("norm_closed: vacuum seed dies under a^q a†^p, q > p");
            return (1.0 + nbar) / detail::thermal_sa_raw_series(x, p, q);
        }
        // subtract-then-add
        if (x == 0.0 && q > 0)
            throw null_state("norm_closed: subtracting from the vacuum seed");
        const double f = gauss_2f1(1.0 + q, 1.0 + p, 1.0, x);
        const double logpref = -static_cast<double>(q) * std::log(x == 0.0 ? 1.0 : x) -
                               log_factorial(p) - log_factorial(q);
        return (1.0 + nbar) * std::exp(logpref) / f;
    }
    // even coherent
    const double a = std::norm(spec.alpha);
    const double pref = 1.0 + std::exp(-2.0 * a);
    if (seq.order == op_order::add_then_subtract) {
        if (a == 0.0 && q > p) throw null_state("norm_closed: vacuum seed dies under a^q a†^p, q > p");
        const double denom = detail::ecs_sa_weight_sum(p, q, a, 0, detail::laguerre_sup);
        return pref / denom;
    }
    // subtract-then-add: p! a^q [L_p(-a) + (-1)^q e^{-2a} L_p(a)]
    if (a == 0.0 && q > 0) throw null_state("norm_closed: subtracting from the vacuum seed");
    const double sgn = (q % 2 == 0) ? 1.0 : -1.0;
    const double aq = (q == 0) ? 1.0 : std::exp(static_cast<double>(q) * std::log(a));
    const double denom = std::exp(log_factorial(p)) * aq *
                         (laguerre(p, -a) + sgn * std::exp(-2.0 * a) * laguerre(p, a));
    return pref / denom;
}

/// The even-coherent normalization constant exactly as published
/// (unweighted superposition term; the subtract-then-add constant taken
/// as (-1)^(p+q) times the add-then-subtract one). Known to be
/// inconsistent with the trace; exposed for validation reporting.
inline double norm_closed_literal_ecs(const state_spec& spec, const op_sequence& seq) {
    if (spec.family != state_family::even_coherent)
        throw std::invalid_argument("norm_closed_literal_ecs: even-coherent spec required");
    const double a = std::norm(spec.alpha);
    const double denom = detail::ecs_sa_weight_sum(seq.p, seq.q, a, 0, detail::laguerre_sup_literal);
    const double value = (1.0 + std::exp(-2.0 * a)) / denom;
    if (seq.order == op_order::add_then_subtract) return value;
    return ((seq.p + seq.q) % 2 == 0) ? value : -value;
}

/// Smallest cutoff keeping the seed's neglected Fock weight below tail_tol,
/// plus p + q + 10 headroom for the transform, capped at the hard ceiling.
inline std::size_t choose_cutoff(const state_spec& spec, const op_sequence& seq, double tail_tol) {
    if (!(tail_tol > 0.0 && tail_tol < 1.0))
        throw std::invalid_argument("choose_cutoff: tail_tol must lie in (0, 1)");
    std::size_t k = 0;
    if (spec.family == state_family::thermal) {
        if (spec.nbar > 0.0) {
            const double logx = std::log(spec.nbar / (1.0 + spec.nbar));
            // tail above K is exactly x^(K+1)
            while (static_cast<double>(k + 1) * logx >= std::log(tail_tol)) {
                ++k;
                if (k > cutoff_ceiling) throw cutoff_overflow("choose_cutoff: ceiling insufficient for tail_tol");
            }
        }
    } else {
        const double a = std::norm(spec.alpha);
        if (a > 0.0) {
            // exact |c_n|^2 of the untruncated state: 4 C^2 e^{-a} a^n / n! at even n
            const double c2 = 1.0 / (2.0 + 2.0 * std::exp(-2.0 * a));
            const double loga = std::log(a);
            const auto weight = [&](std::size_t n) {
                return static_cast<long double>(
                    4.0 * c2 * std::exp(-a + static_cast<double>(n) * loga -
                                        log_factorial(static_cast<std::int64_t>(n))));
            };
            long double cumulative = 0.0L;
            for (k = 0;; ++k) {
                if (k % 2 == 0) cumulative += weight(k);
                // remaining mass, bounded two ways: the floating complement,
                // and a geometric bound on the even-weight tail (needed when
                // tail_tol sits below double epsilon)
                long double tail = 1.0L - cumulative;
                const std::size_t next = (k % 2 == 0) ? k + 2 : k + 1;
                const long double ratio = static_cast<long double>(a) * a /
                                          (static_cast<long double>(next + 1) * (next + 2));
                if (ratio < 0.9L) tail = std::min(tail, weight(next) / (1.0L - ratio));
                if (tail < static_cast<long double>(tail_tol)) break;
                if (k > cutoff_ceiling) throw cutoff_overflow("choose_cutoff: ceiling insufficient for tail_tol");
            }
        }
    }
    const std::size_t total = k + seq.p + seq.q + 10;
    if (total > cutoff_ceiling) throw cutoff_overflow("choose_cutoff: ceiling insufficient for tail_tol");
    return total;
}

}  // namespace fockops

#endif
