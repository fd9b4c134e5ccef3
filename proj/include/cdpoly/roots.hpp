#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <random>
#include <vector>

#include "cdpoly/cd_number.hpp"
#include "cdpoly/errors.hpp"
#include "cdpoly/numerics.hpp"
#include "cdpoly/transcendental.hpp"

namespace cdpoly {

/// One member of the n-th root set of a target, together with the branch it
/// came from and the slice axis used.
struct RootSample {
    CDNumber value;
    int branch_index;
    CDNumber direction;  // unit purely imaginary slice axis; zero for real roots
};

/// Principal n-th root rho^{1/n} e^{(theta/n) M-hat} in the complex slice of
/// zeta. Negative reals need a direction hint, like polar.
inline CDNumber principal_nth_root(const CDNumber& zeta, unsigned n,
                                   const std::optional<CDNumber>& direction_hint = std::nullopt) {
    if (n < 1) throw PreconditionError("principal_nth_root: n must be >= 1");
    if (norm_sq(zeta) == 0.0) throw PreconditionError("principal_nth_root: zero target");
    if (n == 1) return zeta;
    const PolarForm p = polar(zeta, direction_hint);
    const double r = std::pow(p.rho, 1.0 / static_cast<double>(n));
    return r * exp(p.direction_angle / static_cast<double>(n));
}

/// All n-th roots of a target.
///
/// Non-real targets yield the n discrete roots inside the slice span{1, M-hat}.
/// Real targets admit whole spheres of roots at each non-real admissible
/// angle; those branches are returned as direction_samples random unit
/// directions each, alongside the single real roots at angles 0 and pi.
inline std::vector<RootSample> nth_root_family(const CDNumber& zeta, unsigned n,
                                               std::mt19937_64& rng,
                                               unsigned direction_samples = 4) {
    if (n < 1) throw PreconditionError("nth_root_family: n must be >= 1");
    if (norm_sq(zeta) == 0.0) throw PreconditionError("nth_root_family: zero target");
    const unsigned v = zeta.level();
    const double pi = std::numbers::pi;
    std::vector<RootSample> out;

    if (norm_sq(im(zeta)) > 0.0) {
        const PolarForm p = polar(zeta);
        const CDNumber dir = p.direction_angle / (p.theta > 0.0 ? p.theta : 1.0);
        const double r = std::pow(p.rho, 1.0 / static_cast<double>(n));
        for (unsigned j = 0; j < n; ++j) {
            const double angle = (p.theta + 2.0 * pi * j) / static_cast<double>(n);
            out.push_back({r * exp(angle * dir), static_cast<int>(j), dir});
        }
        return out;
    }

    const double target = re(zeta);
    const double rho = std::abs(target);
    const double r = std::pow(rho, 1.0 / static_cast<double>(n));
    // admissible angles phi in [0, pi] with n*phi = base (mod 2 pi)
    const double base = target > 0.0 ? 0.0 : pi;
    for (unsigned k = 0;; ++k) {
        const double angle = (base + 2.0 * pi * k) / static_cast<double>(n);
        if (angle > pi + 1e-15) break;
        if (angle < 1e-15) {
            out.push_back({r * CDNumber::one(v), static_cast<int>(k), CDNumber::zero(v)});
        } else if (angle > pi - 1e-15) {
            out.push_back({-r * CDNumber::one(v), static_cast<int>(k), CDNumber::zero(v)});
        } else {
            for (unsigned s = 0; s < direction_samples; ++s) {
                const CDNumber dir = sample_unit_imaginary(rng, v);
                out.push_back({r * exp(angle * dir), static_cast<int>(k), dir});
            }
        }
    }
    return out;
}

/// Kernel dimension of the finite-difference Jacobian of z -> z^n - zeta at a
/// verified root: the measured local dimension of the root manifold.
inline unsigned root_manifold_dimension(const CDNumber& zeta, unsigned n, const CDNumber& sample,
                                        double threshold_ratio = 1e-6,
                                        double residual_tol = 1e-6) {
    const unsigned v = std::max(zeta.level(), sample.level());
    const CDNumber target = zeta.embedded(v);
    const double resid = norm(int_pow(sample.embedded(v), n) - target);
    if (resid > residual_tol * (1.0 + norm(target)))
        throw PreconditionError("root_manifold_dimension: sample is not a root (residual " +
                                std::to_string(resid) + ")");
    VectorMap f = [&target, n, v](const Eigen::VectorXd& x) {
        return to_eigen(int_pow(from_eigen(v, x), n) - target);
    };
    const Eigen::MatrixXd jac = fd_jacobian(f, to_eigen(sample.embedded(v)));
    return kernel_dimension(singular_values(jac), threshold_ratio);
}

}  // namespace cdpoly
