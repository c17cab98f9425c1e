#ifndef FOCKOPS_FOCK_CORE_HPP
#define FOCKOPS_FOCK_CORE_HPP

#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "fockops/errors.hpp"
#include "fockops/special_functions.hpp"

// Truncated single-mode Fock-space representation and the photon
// addition/subtraction transforms. This module is the numerical oracle the
// closed-form paths are validated against, so it does nothing clever:
// ladder operators act by explicit sqrt-factorial bookkeeping on a dense
// (cutoff+1)^2 block.

namespace fockops {

// Highest Fock index any state may carry.
inline constexpr std::size_t cutoff_ceiling = 4096;

enum class op_order {
    add_then_subtract,  // a^q a†^p rho a^p a†^q
    subtract_then_add,  // a†^p a^q rho a†^q a^p
};

/// Photon-operation recipe: add p photons, subtract q, in the given order.
struct op_sequence {
    unsigned p = 0;
    unsigned q = 0;
    op_order order = op_order::add_then_subtract;
};

/// Trace of the unnormalized transformed operator and, when a closed-form
/// constant was evaluated alongside, its value and relative deviation from
/// the numerical 1/raw_trace.
struct normalization_record {
    double raw_trace = 0.0;
    std::optional<double> closed_form_value;
    std::optional<double> relative_deviation;
};

/// Dense truncated density operator in the Fock basis.
class density_matrix {
  public:
    density_matrix() : density_matrix(0) {}
    explicit density_matrix(std::size_t cutoff)
        : cutoff_(cutoff), data_((cutoff + 1) * (cutoff + 1), complexd{0.0, 0.0}) {
        if (cutoff > cutoff_ceiling)
            throw cutoff_overflow("density_matrix: cutoff exceeds hard ceiling");
    }

    static density_matrix vacuum(std::size_t cutoff = 0) {
        density_matrix rho(cutoff);
        rho.at(0, 0) = 1.0;
        return rho;
    }

    std::size_t cutoff() const { return cutoff_; }
    std::size_t dim() const { return cutoff_ + 1; }

    complexd operator()(std::size_t m, std::size_t n) const { return data_[m * dim() + n]; }
    complexd& at(std::size_t m, std::size_t n) { return data_[m * dim() + n]; }

    const std::vector<complexd>& data() const { return data_; }

    double trace() const {
        double t = 0.0;
        for (std::size_t n = 0; n < dim(); ++n) t += (*this)(n, n).real();
        return t;
    }

    bool is_diagonal() const {
        for (std::size_t m = 0; m < dim(); ++m)
            for (std::size_t n = 0; n < dim(); ++n)
                if (m != n && (*this)(m, n) != complexd{0.0, 0.0}) return false;
        return true;
    }

    void scale(double factor) {
        for (auto& v : data_) v *= factor;
    }

    Eigen::MatrixXcd to_eigen() const {
        Eigen::MatrixXcd mat(dim(), dim());
        for (std::size_t m = 0; m < dim(); ++m)
            for (std::size_t n = 0; n < dim(); ++n) mat(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n)) = (*this)(m, n);
        return mat;
    }

  private:
    std::size_t cutoff_;
    std::vector<complexd> data_;
};

/// Pure state as a Fock amplitude vector; densify() for the operator form.
class pure_state {
  public:
    pure_state() : amplitudes_(1, complexd{1.0, 0.0}) {}
    explicit pure_state(std::vector<complexd> amplitudes) : amplitudes_(std::move(amplitudes)) {
        if (amplitudes_.empty()) amplitudes_.assign(1, complexd{0.0, 0.0});
        if (amplitudes_.size() > cutoff_ceiling + 1)
            throw cutoff_overflow("pure_state: cutoff exceeds hard ceiling");
    }

    std::size_t cutoff() const { return amplitudes_.size() - 1; }
    const std::vector<complexd>& amplitudes() const { return amplitudes_; }

    double norm() const {
        double s = 0.0;
        for (const auto& c : amplitudes_) s += std::norm(c);
        return std::sqrt(s);
    }

    void normalize() {
        const double n = norm();
        if (!(n > 0.0)) throw null_state("pure_state: zero vector cannot be normalized");
        for (auto& c : amplitudes_) c /= n;
    }

    density_matrix densify() const {
        density_matrix rho(cutoff());
        for (std::size_t m = 0; m < amplitudes_.size(); ++m)
            for (std::size_t n = 0; n < amplitudes_.size(); ++n)
                rho.at(m, n) = amplitudes_[m] * std::conj(amplitudes_[n]);
        return rho;
    }

  private:
    std::vector<complexd> amplitudes_;
};

/// a†^p rho a^p in a basis enlarged by p (unnormalized).
inline density_matrix apply_creation(const density_matrix& state, unsigned p) {
    if (p == 0) return state;
    const std::size_t cutoff = state.cutoff();
    if (cutoff + p > cutoff_ceiling)
        throw cutoff_overflow("apply_creation: cutoff + p exceeds hard ceiling");
    density_matrix out(cutoff + p);
    std::vector<double> amp(cutoff + 1);
    for (std::size_t m = 0; m <= cutoff; ++m)
        amp[m] = std::exp(0.5 * (log_factorial(static_cast<std::int64_t>(m + p)) -
                                 log_factorial(static_cast<std::int64_t>(m))));
    for (std::size_t m = 0; m <= cutoff; ++m)
        for (std::size_t n = 0; n <= cutoff; ++n)
            out.at(m + p, n + p) = state(m, n) * (amp[m] * amp[n]);
    return out;
}

/// a^q rho a†^q (unnormalized); components below |q> map to zero.
inline density_matrix apply_annihilation(const density_matrix& state, unsigned q) {
    if (q == 0) return state;
    const std::size_t cutoff = state.cutoff();
    if (q > cutoff) return density_matrix(0);  // everything annihilated
    density_matrix out(cutoff - q);
    std::vector<double> amp(cutoff + 1, 0.0);
    for (std::size_t m = q; m <= cutoff; ++m)
        amp[m] = std::exp(0.5 * (log_factorial(static_cast<std::int64_t>(m)) -
                                 log_factorial(static_cast<std::int64_t>(m - q))));
    for (std::size_t m = q; m <= cutoff; ++m)
        for (std::size_t n = q; n <= cutoff; ++n)
            out.at(m - q, n - q) = state(m, n) * (amp[m] * amp[n]);
    return out;
}

/// Apply the recipe and renormalize to unit trace. raw_trace in the returned
/// record is the pre-normalization trace; its reciprocal is the numerical
/// normalization constant.
inline std::pair<density_matrix, normalization_record> transform(const density_matrix& state,
                                                                 const op_sequence& seq) {
    density_matrix out = (seq.order == op_order::add_then_subtract)
                             ? apply_annihilation(apply_creation(state, seq.p), seq.q)
                             : apply_creation(apply_annihilation(state, seq.q), seq.p);
    const double raw = out.trace();
    if (!std::isfinite(raw))
        throw cutoff_overflow("transform: ladder factors overflowed double range");
    if (!(raw > 1e-300)) throw null_state("transform: raw trace vanishes");
    out.scale(1.0 / raw);
    return {std::move(out), normalization_record{raw, std::nullopt, std::nullopt}};
}

/// Factorial moment <a†^k a^k> = sum_n rho(n,n) n!/(n-k)!.
inline double moment(const density_matrix& state, unsigned k) {
    double s = 0.0;
    for (std::size_t n = k; n <= state.cutoff(); ++n)
        s += state(n, n).real() * std::exp(log_factorial(static_cast<std::int64_t>(n)) -
                                           log_factorial(static_cast<std::int64_t>(n - k)));
    return s;
}

/// Half the absolute-eigenvalue sum of a - b; the smaller block is
/// zero-padded to the larger cutoff.
inline double trace_distance(const density_matrix& a, const density_matrix& b) {
    const std::size_t dim = std::max(a.dim(), b.dim());
    Eigen::MatrixXcd diff = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dim),
                                                   static_cast<Eigen::Index>(dim));
    for (std::size_t m = 0; m < a.dim(); ++m)
        for (std::size_t n = 0; n < a.dim(); ++n)
            diff(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n)) += a(m, n);
    for (std::size_t m = 0; m < b.dim(); ++m)
        for (std::size_t n = 0; n < b.dim(); ++n)
            diff(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n)) -= b(m, n);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(diff, Eigen::EigenvaluesOnly);
    return 0.5 * solver.eigenvalues().cwiseAbs().sum();
}

}  // namespace fockops

#endif
