#pragma once

#include <cmath>
#include <optional>
#include <string>

#include "cdpoly/cd_number.hpp"
#include "cdpoly/errors.hpp"

namespace cdpoly {

/// sin(t)/t with a Taylor tail near zero to avoid cancellation.
inline double sinc(double t) {
    const double a = std::abs(t);
    if (a < 1e-4) {
        const double t2 = t * t;
        return 1.0 - t2 / 6.0 + t2 * t2 / 120.0 - t2 * t2 * t2 / 5040.0;
    }
    return std::sin(t) / t;
}

/// e^z for z = a + M with a real and M purely imaginary:
///   e^z = e^a (cos|M| + sinc(|M|) M).
inline CDNumber exp(const CDNumber& z) {
    const double a = re(z);
    const CDNumber m = im(z);
    const double t = norm(m);
    CDNumber r = std::cos(t) * CDNumber::one(z.level()) + sinc(t) * m;
    r *= std::exp(a);
    return r;
}

/// Polar decomposition z = rho * e^M with rho >= 0, M purely imaginary,
/// |M| = theta in [0, pi].
struct PolarForm {
    double rho;
    CDNumber direction_angle;  // M, with |M| = theta
    double theta;
};

/// Decompose a nonzero z. Negative reals have a whole sphere of valid
/// directions; callers must pass a hint to pick one.
inline PolarForm polar(const CDNumber& z,
                       const std::optional<CDNumber>& direction_hint = std::nullopt,
                       double imaginary_tol = 0.0) {
    const double rho = norm(z);
    if (rho == 0.0) throw PreconditionError("polar: zero element is singular");
    double cosang = re(z) / rho;
    if (cosang > 1.0) cosang = 1.0;
    if (cosang < -1.0) cosang = -1.0;
    const double theta = std::acos(cosang);
    const CDNumber m = im(z);
    const double mn = norm(m);
    if (mn > imaginary_tol) return {rho, (theta / mn) * m, theta};
    if (re(z) > 0.0) return {rho, CDNumber::zero(z.level()), 0.0};
    if (!direction_hint)
        throw AmbiguousDirectionError(
            "polar: negative real input has no canonical imaginary direction; pass a hint");
    const CDNumber hint = im(*direction_hint);
    const double hn = norm(hint);
    if (hn == 0.0)
        throw PreconditionError("polar: direction hint must have a nonzero imaginary part");
    CDNumber dir = (theta / hn) * hint;
    if (dir.level() < z.level()) dir = dir.embedded(z.level());
    return {rho, dir, theta};
}

/// Principal logarithm: ln rho + M from the polar form. Same error behavior
/// as polar.
inline CDNumber log(const CDNumber& z,
                    const std::optional<CDNumber>& direction_hint = std::nullopt) {
    const PolarForm p = polar(z, direction_hint);
    return std::log(p.rho) + p.direction_angle;
}

/// z^k by square-and-multiply. Powers are association-independent in every
/// Cayley-Dickson algebra.
inline CDNumber int_pow(const CDNumber& z, unsigned k) {
    CDNumber acc = CDNumber::one(z.level());
    CDNumber base = z;
    while (k > 0) {
        if (k & 1u) acc = acc * base;
        k >>= 1u;
        if (k > 0) base = base * base;
    }
    return acc;
}

}  // namespace cdpoly
