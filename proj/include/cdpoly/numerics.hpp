#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "cdpoly/cd_number.hpp"

namespace cdpoly {

using VectorMap = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

inline Eigen::VectorXd to_eigen(const CDNumber& z) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(z.dim()));
    for (std::size_t j = 0; j < z.dim(); ++j) v[static_cast<Eigen::Index>(j)] = z[j];
    return v;
}

inline CDNumber from_eigen(unsigned level, const Eigen::VectorXd& v) {
    std::vector<double> c(v.data(), v.data() + v.size());
    return CDNumber(level, std::move(c));
}

/// Central-difference Jacobian with step h = h_scale * (1 + |x|).
inline Eigen::MatrixXd fd_jacobian(const VectorMap& f, const Eigen::VectorXd& x,
                                   double h_scale = 1e-6) {
    const double h = h_scale * (1.0 + x.norm());
    const Eigen::Index n = x.size();
    Eigen::VectorXd xp = x, xm = x;
    Eigen::MatrixXd jac;
    for (Eigen::Index j = 0; j < n; ++j) {
        xp[j] = x[j] + h;
        xm[j] = x[j] - h;
        const Eigen::VectorXd col = (f(xp) - f(xm)) / (2.0 * h);
        if (jac.size() == 0) jac.resize(col.size(), n);
        jac.col(j) = col;
        xp[j] = x[j];
        xm[j] = x[j];
    }
    return jac;
}

inline Eigen::VectorXd singular_values(const Eigen::MatrixXd& m) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    return svd.singularValues();
}

/// Number of singular values below threshold_ratio * sigma_max. A zero matrix
/// has a full kernel.
inline unsigned kernel_dimension(const Eigen::VectorXd& sigma, double threshold_ratio = 1e-6) {
    if (sigma.size() == 0) return 0;
    const double smax = sigma[0];
    if (smax == 0.0) return static_cast<unsigned>(sigma.size());
    unsigned k = 0;
    for (Eigen::Index i = 0; i < sigma.size(); ++i)
        if (sigma[i] < threshold_ratio * smax) ++k;
    return k;
}

/// Orthonormal basis of the numerical kernel of m.
inline Eigen::MatrixXd kernel_basis(const Eigen::MatrixXd& m, double threshold_ratio = 1e-6) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullV);
    const unsigned k = kernel_dimension(svd.singularValues(), threshold_ratio);
    return svd.matrixV().rightCols(static_cast<Eigen::Index>(k));
}

/// Deterministic per-stream generator: mixes (seed, stream) through
/// splitmix64 so distinct streams are decorrelated.
inline std::mt19937_64 rng_stream(std::uint64_t seed, std::uint64_t stream) {
    auto mix = [](std::uint64_t x) {
        x += 0x9e3779b97f4a7c15ULL;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    };
    return std::mt19937_64(mix(mix(seed) ^ mix(stream + 0x1234567ULL)));
}

/// Uniform point on the unit sphere of the imaginary subspace of A_v.
inline CDNumber sample_unit_imaginary(std::mt19937_64& rng, unsigned level) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    CDNumber m = CDNumber::zero(level);
    double n2 = 0.0;
    do {
        n2 = 0.0;
        for (std::size_t j = 1; j < m.dim(); ++j) {
            m[j] = gauss(rng);
            n2 += m[j] * m[j];
        }
    } while (n2 == 0.0);
    return m / std::sqrt(n2);
}

/// Uniform point in the closed ball of the full algebra.
inline CDNumber sample_ball(std::mt19937_64& rng, unsigned level, double radius) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    CDNumber z = CDNumber::zero(level);
    double n2 = 0.0;
    for (std::size_t j = 0; j < z.dim(); ++j) {
        z[j] = gauss(rng);
        n2 += z[j] * z[j];
    }
    if (n2 == 0.0) return z;
    const double r = radius * std::pow(unif(rng), 1.0 / static_cast<double>(z.dim()));
    return z * (r / std::sqrt(n2));
}

/// Random element with coordinates uniform in [-1, 1].
inline CDNumber sample_box(std::mt19937_64& rng, unsigned level) {
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    CDNumber z = CDNumber::zero(level);
    for (std::size_t j = 0; j < z.dim(); ++j) z[j] = unif(rng);
    return z;
}

}  // namespace cdpoly
