#pragma once

#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <mutex>
#include <optional>
#include <utility>
#include <vector>

#include "cdpoly/errors.hpp"

namespace cdpoly {

/// Levels above this are accepted but products fall back to per-pair sign
/// recursion instead of a cached table.
inline constexpr unsigned kMaxLevel = 16;
inline constexpr unsigned kMaxCachedTableLevel = 8;

namespace detail {

/// Sign of the basis product i_a * i_b = sign * i_{a xor b}.
///
/// The index-xor rule and the sign recursion follow from the doubling
/// product (a,b)*(c,d) = (ac - d*b, da + bc*) with conjugation
/// (a,b)* = (a*, -b), applied to one-hot elements. Writing each index as
/// lo + hi*H with H the top bit of the enclosing level:
///   (x,0)(y,0) -> (xy, 0)
///   (x,0)(0,y) -> (0, yx)
///   (0,x)(y,0) -> (0, x y*)
///   (0,x)(0,y) -> (-y*x, 0)
constexpr int basis_sign(unsigned a, unsigned b) {
    if (a == 0 || b == 0) return 1;
    const unsigned h = std::bit_floor(a | b);
    const unsigned al = a & (h - 1);
    const unsigned bl = b & (h - 1);
    if (!(a & h)) return basis_sign(bl, al);
    if (!(b & h)) return (bl == 0 ? 1 : -1) * basis_sign(al, bl);
    return (bl == 0 ? -1 : 1) * basis_sign(bl, al);
}

/// Per-level dense sign table, built once and then safe for concurrent reads.
inline const std::vector<std::int8_t>& sign_table(unsigned level) {
    static std::array<std::once_flag, kMaxCachedTableLevel + 1> flags;
    static std::array<std::vector<std::int8_t>, kMaxCachedTableLevel + 1> tables;
    std::call_once(flags[level], [level] {
        const std::size_t dim = std::size_t{1} << level;
        std::vector<std::int8_t> t(dim * dim);
        for (std::size_t a = 0; a < dim; ++a)
            for (std::size_t b = 0; b < dim; ++b)
                t[a * dim + b] = static_cast<std::int8_t>(
                    basis_sign(static_cast<unsigned>(a), static_cast<unsigned>(b)));
        tables[level] = std::move(t);
    });
    return tables[level];
}

}  // namespace detail

/// Element of the Cayley-Dickson algebra A_v, stored as the vector of real
/// coefficients over the canonical basis 1 = i_0, i_1, ..., i_{2^v - 1}.
class CDNumber {
public:
    CDNumber() : level_(0), c_{0.0} {}

    explicit CDNumber(double x) : level_(0), c_{x} {}

    CDNumber(unsigned level, std::vector<double> coeffs) : level_(level), c_(std::move(coeffs)) {
        if (level > kMaxLevel)
            throw SchemaError("CDNumber: level " + std::to_string(level) + " exceeds maximum " +
                              std::to_string(kMaxLevel));
        if (c_.size() != (std::size_t{1} << level))
            throw SchemaError("CDNumber: expected " + std::to_string(std::size_t{1} << level) +
                              " coefficients for level " + std::to_string(level) + ", got " +
                              std::to_string(c_.size()));
    }

    static CDNumber zero(unsigned level) {
        return CDNumber(level, std::vector<double>(std::size_t{1} << level, 0.0));
    }

    static CDNumber one(unsigned level) {
        CDNumber z = zero(level);
        z.c_[0] = 1.0;
        return z;
    }

    /// Basis generator i_j at the given level.
    static CDNumber basis(unsigned level, unsigned j) {
        if (j >= (std::size_t{1} << level))
            throw SchemaError("CDNumber::basis: index " + std::to_string(j) +
                              " out of range for level " + std::to_string(level));
        CDNumber z = zero(level);
        z.c_[j] = 1.0;
        return z;
    }

    unsigned level() const { return level_; }
    std::size_t dim() const { return c_.size(); }
    const std::vector<double>& coeffs() const { return c_; }

    double operator[](std::size_t j) const { return c_[j]; }
    double& operator[](std::size_t j) { return c_[j]; }

    /// Zero-pad up to a higher level. Levels never shrink.
    CDNumber embedded(unsigned level) const {
        if (level < level_)
            throw PreconditionError("CDNumber::embedded: cannot embed level " +
                                    std::to_string(level_) + " down to " + std::to_string(level));
        if (level == level_) return *this;
        std::vector<double> c(std::size_t{1} << level, 0.0);
        for (std::size_t j = 0; j < c_.size(); ++j) c[j] = c_[j];
        return CDNumber(level, std::move(c));
    }

    CDNumber& operator+=(const CDNumber& o);
    CDNumber& operator-=(const CDNumber& o);
    CDNumber& operator*=(double s) {
        for (double& x : c_) x *= s;
        return *this;
    }
    CDNumber& operator/=(double s) {
        for (double& x : c_) x /= s;
        return *this;
    }

    friend bool operator==(const CDNumber& a, const CDNumber& b) {
        const unsigned v = a.level_ > b.level_ ? a.level_ : b.level_;
        const std::size_t dim = std::size_t{1} << v;
        for (std::size_t j = 0; j < dim; ++j) {
            const double x = j < a.c_.size() ? a.c_[j] : 0.0;
            const double y = j < b.c_.size() ? b.c_[j] : 0.0;
            if (x != y) return false;
        }
        return true;
    }

private:
    unsigned level_;
    std::vector<double> c_;
};

/// Expand operands to a common level by zero-padding the lower one.
inline std::pair<CDNumber, CDNumber> to_common_level(const CDNumber& x, const CDNumber& y) {
    const unsigned v = x.level() > y.level() ? x.level() : y.level();
    return {x.embedded(v), y.embedded(v)};
}

inline CDNumber& CDNumber::operator+=(const CDNumber& o) {
    if (o.level_ > level_) *this = embedded(o.level_);
    for (std::size_t j = 0; j < o.c_.size(); ++j) c_[j] += o.c_[j];
    return *this;
}

inline CDNumber& CDNumber::operator-=(const CDNumber& o) {
    if (o.level_ > level_) *this = embedded(o.level_);
    for (std::size_t j = 0; j < o.c_.size(); ++j) c_[j] -= o.c_[j];
    return *this;
}

inline CDNumber operator+(CDNumber a, const CDNumber& b) { return a += b; }
inline CDNumber operator-(CDNumber a, const CDNumber& b) { return a -= b; }

inline CDNumber operator-(const CDNumber& a) {
    CDNumber r = a;
    r *= -1.0;
    return r;
}

inline CDNumber operator*(CDNumber a, double s) { return a *= s; }
inline CDNumber operator*(double s, CDNumber a) { return a *= s; }
inline CDNumber operator/(CDNumber a, double s) { return a /= s; }

inline CDNumber operator+(CDNumber a, double s) {
    a[0] += s;
    return a;
}
inline CDNumber operator+(double s, CDNumber a) {
    a[0] += s;
    return a;
}
inline CDNumber operator-(CDNumber a, double s) {
    a[0] -= s;
    return a;
}

/// Full Cayley-Dickson product. Skips zero coefficients, so products with
/// sparse operands (basis elements, slice elements) stay cheap.
inline CDNumber operator*(const CDNumber& x, const CDNumber& y) {
    auto [a, b] = to_common_level(x, y);
    const unsigned v = a.level();
    const std::size_t dim = a.dim();
    std::vector<double> r(dim, 0.0);
    if (v <= kMaxCachedTableLevel) {
        const auto& tab = detail::sign_table(v);
        for (std::size_t i = 0; i < dim; ++i) {
            const double xi = a[i];
            if (xi == 0.0) continue;
            const std::int8_t* row = tab.data() + i * dim;
            for (std::size_t j = 0; j < dim; ++j) {
                const double yj = b[j];
                if (yj == 0.0) continue;
                r[i ^ j] += row[j] * xi * yj;
            }
        }
    } else {
        for (std::size_t i = 0; i < dim; ++i) {
            const double xi = a[i];
            if (xi == 0.0) continue;
            for (std::size_t j = 0; j < dim; ++j) {
                const double yj = b[j];
                if (yj == 0.0) continue;
                r[i ^ j] += detail::basis_sign(static_cast<unsigned>(i),
                                               static_cast<unsigned>(j)) *
                            xi * yj;
            }
        }
    }
    return CDNumber(v, std::move(r));
}

inline CDNumber mul(const CDNumber& x, const CDNumber& y) { return x * y; }

inline CDNumber conj(const CDNumber& z) {
    CDNumber r = z;
    for (std::size_t j = 1; j < r.dim(); ++j) r[j] = -r[j];
    return r;
}

inline double re(const CDNumber& z) { return z[0]; }

inline CDNumber im(const CDNumber& z) {
    CDNumber r = z;
    r[0] = 0.0;
    return r;
}

inline bool is_purely_imaginary(const CDNumber& z, double tol = 0.0) {
    return std::abs(z[0]) <= tol;
}

inline double norm_sq(const CDNumber& z) {
    double s = 0.0;
    for (std::size_t j = 0; j < z.dim(); ++j) s += z[j] * z[j];
    return s;
}

inline double norm(const CDNumber& z) { return std::sqrt(norm_sq(z)); }

/// Euclidean scalar product of coefficient vectors; equals Re(x y*).
inline double scalar_product(const CDNumber& x, const CDNumber& y) {
    const std::size_t n = x.dim() < y.dim() ? x.dim() : y.dim();
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s += x[j] * y[j];
    return s;
}

inline CDNumber inverse(const CDNumber& z) {
    const double n2 = norm_sq(z);
    if (n2 == 0.0) throw PreconditionError("inverse: zero element is singular");
    return conj(z) / n2;
}

/// Conjugation recovered from multiplications alone:
///   z* = (2^v - 2)^{-1} ( -z + sum over imaginary generators s of s (z s*) ).
/// Requires v >= 2; the divisor degenerates below that.
inline CDNumber conjugate_via_basis(const CDNumber& z) {
    const unsigned v = z.level();
    if (v < 2)
        throw PreconditionError("conjugate_via_basis: level must be >= 2, got " +
                                std::to_string(v));
    const std::size_t dim = z.dim();
    CDNumber acc = -z;
    for (unsigned j = 1; j < dim; ++j) {
        const CDNumber s = CDNumber::basis(v, j);
        acc += s * (z * conj(s));
    }
    return acc / static_cast<double>(dim - 2);
}

inline bool approx_equal(const CDNumber& a, const CDNumber& b, double tol) {
    return norm(a - b) <= tol;
}

/// Orthonormal basis (over the real coefficient space) of the smallest unital
/// subalgebra containing the inputs. Products are folded in until no product
/// escapes the current span by more than tol.
inline std::vector<CDNumber> subalgebra_closure(const std::vector<CDNumber>& elements,
                                                double tol = 1e-10) {
    if (elements.empty())
        throw PreconditionError("subalgebra_closure: need at least one element");
    unsigned v = 0;
    for (const auto& e : elements) v = std::max(v, e.level());

    std::vector<CDNumber> basis;
    auto add = [&](const CDNumber& cand) -> bool {
        CDNumber r = cand.embedded(v);
        for (const auto& b : basis) r -= scalar_product(r, b) * b;
        // second Gram-Schmidt pass for numerical orthogonality
        for (const auto& b : basis) r -= scalar_product(r, b) * b;
        const double n = norm(r);
        if (n <= tol) return false;
        basis.push_back(r / n);
        return true;
    };

    add(CDNumber::one(v));
    for (const auto& e : elements) add(e);

    bool grew = true;
    while (grew && basis.size() < (std::size_t{1} << v)) {
        grew = false;
        const std::size_t n = basis.size();
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (add(basis[i] * basis[j])) grew = true;
    }
    return basis;
}

/// Exhaustive search for x = i_a + sigma i_b, y = i_c + tau i_d with x y = 0.
/// The product cancels exactly in integer sign arithmetic, so the test is
/// exact. Returns the first pair in lexicographic (a,b,c,d,sigma,tau) order,
/// or nothing (guaranteed for v <= 3, the division algebras).
inline std::optional<std::pair<CDNumber, CDNumber>> find_zero_divisor_pair(unsigned v) {
    if (v < 1) throw PreconditionError("find_zero_divisor_pair: level must be >= 1");
    const unsigned dim = 1u << v;
    for (unsigned a = 1; a < dim; ++a)
        for (unsigned b = a + 1; b < dim; ++b)
            for (unsigned c = 1; c < dim; ++c)
                for (unsigned d = c + 1; d < dim; ++d)
                    for (int sigma : {+1, -1})
                        for (int tau : {+1, -1}) {
                            // (i_a + s i_b)(i_c + t i_d) has terms at indices
                            // a^c, a^d, b^c, b^d; it vanishes iff they cancel
                            // pairwise.
                            if ((a ^ c) != (b ^ d) || (a ^ d) != (b ^ c)) continue;
                            using detail::basis_sign;
                            const int t_ac = basis_sign(a, c);
                            const int t_ad = tau * basis_sign(a, d);
                            const int t_bc = sigma * basis_sign(b, c);
                            const int t_bd = sigma * tau * basis_sign(b, d);
                            if (t_ac + t_bd != 0 || t_ad + t_bc != 0) continue;
                            CDNumber x = CDNumber::basis(v, a);
                            x += sigma * CDNumber::basis(v, b);
                            CDNumber y = CDNumber::basis(v, c);
                            y += tau * CDNumber::basis(v, d);
                            return std::make_pair(x, y);
                        }
    return std::nullopt;
}

}  // namespace cdpoly
