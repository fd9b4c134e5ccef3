#pragma once

#include <cmath>
#include <numbers>

#include "cdpoly/cd_number.hpp"
#include "cdpoly/errors.hpp"
#include "cdpoly/numerics.hpp"
#include "cdpoly/transcendental.hpp"

namespace cdpoly {

/// N = N1 + N2 with N1 = beta * M and N2 orthogonal to M.
struct ParallelOrthogonalSplit {
    CDNumber parallel;    // N1
    CDNumber orthogonal;  // N2
    double beta;
};

inline ParallelOrthogonalSplit split_parallel_orthogonal(const CDNumber& n, const CDNumber& m) {
    const double m2 = norm_sq(m);
    if (m2 == 0.0) throw PreconditionError("split_parallel_orthogonal: M must be nonzero");
    const double beta = scalar_product(n, m) / m2;
    auto [nn, mm] = to_common_level(n, m);
    CDNumber n1 = beta * mm;
    CDNumber n2 = nn - n1;
    return {std::move(n1), std::move(n2), beta};
}

inline CDNumber commutator(const CDNumber& x, const CDNumber& y) { return x * y - y * x; }

inline CDNumber anticommutator(const CDNumber& x, const CDNumber& y) { return x * y + y * x; }

/// [e^M, e^N] = 2 sinc|M| sinc|N| M N2, with N2 the component of N
/// orthogonal to M.
inline CDNumber commutator_closed_form(const CDNumber& m, const CDNumber& n) {
    const double tm = norm(m);
    const double tn = norm(n);
    if (tm == 0.0 || tn == 0.0)
        throw PreconditionError("commutator_closed_form: inputs must have nonzero norm");
    const auto split = split_parallel_orthogonal(n, m);
    return 2.0 * sinc(tm) * sinc(tn) * (m * split.orthogonal);
}

/// Specialization to orthogonal M, N: [e^M, e^N] = 2 sinc|M| sinc|N| M N.
inline CDNumber commutator_orthogonal_closed_form(const CDNumber& m, const CDNumber& n,
                                                  double tol = 1e-9) {
    const double tm = norm(m);
    const double tn = norm(n);
    if (std::abs(scalar_product(m, n)) > tol * (1.0 + tm * tn))
        throw PreconditionError("commutator_orthogonal_closed_form: M and N must be orthogonal");
    return 2.0 * sinc(tm) * sinc(tn) * (m * n);
}

/// {e^M, e^N} = 2 cos|M| e^N + 2 sinc|M| M (cos|N| + sinc|N| N1).
inline CDNumber anticommutator_closed_form(const CDNumber& m, const CDNumber& n) {
    const double tm = norm(m);
    const double tn = norm(n);
    if (tm == 0.0 || tn == 0.0)
        throw PreconditionError("anticommutator_closed_form: inputs must have nonzero norm");
    const auto split = split_parallel_orthogonal(n, m);
    const CDNumber inner = std::cos(tn) + sinc(tn) * split.parallel;
    return 2.0 * std::cos(tm) * exp(n) + 2.0 * sinc(tm) * (m * inner);
}

namespace detail {

/// Distance from angle to the nearest value of the form offset + pi*l,
/// compared scale-aware.
inline bool near_mod_pi(double angle, double offset, double tol) {
    const double pi = std::numbers::pi;
    const double k = std::round((angle - offset) / pi);
    return std::abs(angle - offset - k * pi) <= tol * (1.0 + std::abs(angle));
}

}  // namespace detail

/// e^M and e^N commute iff |N| or |M| is a multiple of pi, or M N2 = 0
/// (which covers parallel pairs and, for v >= 4, zero-divisor pairs).
inline bool commute_predicate(const CDNumber& m, const CDNumber& n, double tol = 1e-9) {
    const double tm = norm(m);
    const double tn = norm(n);
    if (detail::near_mod_pi(tn, 0.0, tol) || detail::near_mod_pi(tm, 0.0, tol)) return true;
    const auto split = split_parallel_orthogonal(n, m);
    return norm(m * split.orthogonal) <= tol * (1.0 + tm * tn);
}

/// e^M and e^N anticommute iff M and N are orthogonal with both norms
/// congruent to pi/2 mod pi. Both of the symmetric role assignments are
/// checked.
inline bool anticommute_predicate(const CDNumber& m, const CDNumber& n, double tol = 1e-9) {
    const double pi_half = std::numbers::pi / 2.0;
    auto branch = [&](const CDNumber& a, const CDNumber& b) {
        // split b against a: b = b1 + b2
        if (norm_sq(a) == 0.0) return false;
        const auto split = split_parallel_orthogonal(b, a);
        return detail::near_mod_pi(norm(split.orthogonal), pi_half, tol) &&
               norm(split.parallel) <= tol * (1.0 + norm(b)) &&
               detail::near_mod_pi(norm(a), pi_half, tol);
    };
    return branch(m, n) || branch(n, m);
}

/// N = -K/2 collapses e^N (e^K e^N) to 1 inside the complex slice of K.
inline CDNumber conjugate_to_real(const CDNumber& k) { return -0.5 * k; }

/// Imaginary part of e^N (e^K e^N); zero exactly on the solution set of the
/// conjugation-to-real problem.
inline CDNumber psi_residual(const CDNumber& k, const CDNumber& n) {
    auto [kk, nn] = to_common_level(k, n);
    const CDNumber en = exp(nn);
    return im(en * (exp(kk) * en));
}

/// Rank/kernel data for the zero set of psi_residual(K, .) at a solution
/// point, both measured over the imaginary coordinate space I_v.
struct PsiDimensionReport {
    unsigned rank;        // measured codimension of the zero set within I_v
    unsigned kernel_dim;  // measured dimension of the zero set
    Eigen::VectorXd singular_values;
};

inline PsiDimensionReport psi_zero_set_dimension(const CDNumber& k, const CDNumber& n0,
                                                 double threshold_ratio = 1e-6) {
    const unsigned v = std::max(k.level(), n0.level());
    const std::size_t dim = std::size_t{1} << v;
    const CDNumber kk = k.embedded(v);
    // imaginary coordinates only, both in and out
    VectorMap f = [&kk, v, dim](const Eigen::VectorXd& x) {
        CDNumber n = CDNumber::zero(v);
        for (std::size_t j = 1; j < dim; ++j) n[j] = x[static_cast<Eigen::Index>(j - 1)];
        const CDNumber r = psi_residual(kk, n);
        Eigen::VectorXd out(static_cast<Eigen::Index>(dim - 1));
        for (std::size_t j = 1; j < dim; ++j) out[static_cast<Eigen::Index>(j - 1)] = r[j];
        return out;
    };
    Eigen::VectorXd x0(static_cast<Eigen::Index>(dim - 1));
    const CDNumber n0e = n0.embedded(v);
    for (std::size_t j = 1; j < dim; ++j) x0[static_cast<Eigen::Index>(j - 1)] = n0e[j];
    const Eigen::MatrixXd jac = fd_jacobian(f, x0);
    const Eigen::VectorXd sigma = singular_values(jac);
    const unsigned kdim = kernel_dimension(sigma, threshold_ratio);
    return {static_cast<unsigned>(dim - 1) - kdim, kdim, sigma};
}

}  // namespace cdpoly
