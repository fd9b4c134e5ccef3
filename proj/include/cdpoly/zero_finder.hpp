#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "cdpoly/cd_number.hpp"
#include "cdpoly/errors.hpp"
#include "cdpoly/numerics.hpp"
#include "cdpoly/polynomial.hpp"

namespace cdpoly {

struct SolveConfig {
    unsigned starts = 64;
    unsigned max_iters = 500;
    double tol_residual = 1e-9;
    std::uint64_t seed = 0;
    /// Defaults to 1 + sum of coefficient norms when unset.
    std::optional<double> search_radius;
    /// Worker threads for the independent multi-starts; results are merged in
    /// start-index order, so any thread count produces identical reports.
    unsigned threads = 1;
    /// Prepend the fixed seed points 0, 1, -1, i_1, ... to the start list.
    /// find_zeros turns this off after its first run so repeated runs explore
    /// the ball instead of re-converging from the same fixed starts.
    bool deterministic_seed_starts = true;
};

struct SolveReport {
    std::optional<CDNumber> zero;
    double residual = std::numeric_limits<double>::infinity();
    unsigned iterations = 0;
    unsigned start_index = 0;
    std::vector<double> jacobian_singular_values;
    unsigned kernel_dim = 0;
};

inline double default_search_radius(const Polynomial& p) {
    double s = 0.0;
    for (const auto& t : p.terms())
        for (const auto& c : t.coeffs) s += norm(c);
    return 1.0 + s;
}

namespace detail {

struct LMOutcome {
    Eigen::VectorXd x;
    double residual;
    unsigned iterations;
    bool converged;
};

/// Damped Gauss-Newton / Levenberg-Marquardt on 0.5|f|^2 with central
/// finite-difference Jacobians.
inline LMOutcome levenberg_marquardt(const VectorMap& f, Eigen::VectorXd x, unsigned max_iters,
                                     double tol_residual) {
    Eigen::VectorXd fx = f(x);
    double res = fx.norm();
    double lambda = 1e-3;
    unsigned it = 0;
    while (it < max_iters && res > tol_residual) {
        const Eigen::MatrixXd jac = fd_jacobian(f, x);
        const Eigen::MatrixXd jtj = jac.transpose() * jac;
        const Eigen::VectorXd jtf = jac.transpose() * fx;
        bool accepted = false;
        while (it < max_iters) {
            ++it;
            Eigen::MatrixXd damped = jtj;
            damped.diagonal().array() += lambda;
            const Eigen::VectorXd step = damped.ldlt().solve(-jtf);
            const Eigen::VectorXd xt = x + step;
            const Eigen::VectorXd ft = f(xt);
            const double rt = ft.norm();
            if (rt < res) {
                x = xt;
                fx = ft;
                res = rt;
                lambda = std::max(lambda * 0.3, 1e-12);
                accepted = true;
                break;
            }
            lambda *= 10.0;
            if (lambda > 1e8) return {std::move(x), res, it, res <= tol_residual};
        }
        if (!accepted) break;
    }
    return {std::move(x), res, it, res <= tol_residual};
}

}  // namespace detail

/// Residual map of a polynomial as a function between real coefficient
/// spaces.
inline VectorMap residual_map(const Polynomial& p) {
    const unsigned v = p.level();
    return [p, v](const Eigen::VectorXd& x) { return to_eigen(evaluate(p, from_eigen(v, x))); };
}

/// Multi-start zero search. Start points are the deterministic seeds
/// 0, 1, -1, i_1, i_2, ... followed by uniform draws from the search ball;
/// each start runs an independent LM descent. The report is the
/// lowest-start-index success, or the best-residual failure.
inline SolveReport find_zero(const Polynomial& p, const SolveConfig& cfg = {}) {
    if (degree(p) < 1) throw PreconditionError("find_zero: polynomial degree must be >= 1");
    const unsigned v = p.level();
    const std::size_t dim = std::size_t{1} << v;
    const double radius = cfg.search_radius.value_or(default_search_radius(p));
    const VectorMap f = residual_map(p);

    std::vector<Eigen::VectorXd> start_points;
    start_points.reserve(cfg.starts);
    {
        if (cfg.deterministic_seed_starts) {
            std::vector<CDNumber> seeds;
            seeds.push_back(CDNumber::zero(v));
            seeds.push_back(CDNumber::one(v));
            seeds.push_back(-CDNumber::one(v));
            for (unsigned j = 1; j < dim && seeds.size() < cfg.starts; ++j)
                seeds.push_back(CDNumber::basis(v, j));
            for (std::size_t i = 0; i < seeds.size() && i < cfg.starts; ++i)
                start_points.push_back(to_eigen(seeds[i]));
        }
        for (unsigned i = static_cast<unsigned>(start_points.size()); i < cfg.starts; ++i) {
            auto rng = rng_stream(cfg.seed, i);
            start_points.push_back(to_eigen(sample_ball(rng, v, radius)));
        }
    }

    const unsigned n = static_cast<unsigned>(start_points.size());
    std::vector<detail::LMOutcome> outcomes(n);
    std::vector<char> done(n, 0);

    auto run_start = [&](unsigned i) {
        outcomes[i] = detail::levenberg_marquardt(f, start_points[i], cfg.max_iters,
                                                  cfg.tol_residual);
        done[i] = 1;
    };

    if (cfg.threads <= 1) {
        for (unsigned i = 0; i < n; ++i) {
            run_start(i);
            if (outcomes[i].converged) break;
        }
    } else {
        std::atomic<unsigned> next{0};
        std::atomic<unsigned> earliest_success{n};
        auto worker = [&] {
            for (;;) {
                const unsigned i = next.fetch_add(1);
                if (i >= n) return;
                if (i > earliest_success.load()) continue;
                run_start(i);
                if (outcomes[i].converged) {
                    unsigned cur = earliest_success.load();
                    while (i < cur && !earliest_success.compare_exchange_weak(cur, i)) {
                    }
                }
            }
        };
        std::vector<std::thread> pool;
        const unsigned nthreads = std::min(cfg.threads, n);
        pool.reserve(nthreads);
        for (unsigned t = 0; t < nthreads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    // lowest-index success, else best residual (ties to the lower index)
    int chosen = -1;
    for (unsigned i = 0; i < n; ++i)
        if (done[i] && outcomes[i].converged) {
            chosen = static_cast<int>(i);
            break;
        }
    if (chosen < 0) {
        double best = std::numeric_limits<double>::infinity();
        for (unsigned i = 0; i < n; ++i)
            if (done[i] && outcomes[i].residual < best) {
                best = outcomes[i].residual;
                chosen = static_cast<int>(i);
            }
    }

    const auto& out = outcomes[static_cast<unsigned>(chosen)];
    SolveReport rep;
    rep.residual = out.residual;
    rep.iterations = out.iterations;
    rep.start_index = static_cast<unsigned>(chosen);
    const Eigen::MatrixXd jac = fd_jacobian(f, out.x);
    const Eigen::VectorXd sigma = singular_values(jac);
    rep.jacobian_singular_values.assign(sigma.data(), sigma.data() + sigma.size());
    rep.kernel_dim = kernel_dimension(sigma);
    if (out.converged) rep.zero = from_eigen(v, out.x);
    return rep;
}

/// Repeated find_zero under per-run derived seeds. Successful reports whose
/// zeros land within 1e-6 * search_radius of an already kept isolated zero
/// (kernel_dim == 0) are dropped; manifold points are kept as samples.
inline std::vector<SolveReport> find_zeros(const Polynomial& p, const SolveConfig& cfg,
                                           unsigned count) {
    if (degree(p) < 1) throw PreconditionError("find_zeros: polynomial degree must be >= 1");
    const double radius = cfg.search_radius.value_or(default_search_radius(p));
    std::vector<SolveReport> kept;
    for (unsigned k = 0; k < count; ++k) {
        SolveConfig c = cfg;
        c.seed = cfg.seed + 0x9e3779b97f4a7c15ULL * (k + 1);
        c.deterministic_seed_starts = cfg.deterministic_seed_starts && k == 0;
        SolveReport rep = find_zero(p, c);
        if (rep.zero && rep.kernel_dim == 0) {
            bool dup = false;
            for (const auto& prev : kept)
                if (prev.zero && norm(*prev.zero - *rep.zero) < 1e-6 * radius) {
                    dup = true;
                    break;
                }
            if (dup) continue;
        }
        kept.push_back(std::move(rep));
    }
    return kept;
}

/// Kernel dimension of the residual Jacobian at a verified zero.
inline unsigned local_zero_set_dimension(const Polynomial& p, const CDNumber& z0,
                                         double threshold_ratio = 1e-6, double zero_tol = 1e-6) {
    const double resid = norm(evaluate(p, z0));
    if (resid > zero_tol)
        throw PreconditionError("local_zero_set_dimension: point is not a zero (residual " +
                                std::to_string(resid) + ")");
    const Eigen::MatrixXd jac = fd_jacobian(residual_map(p), to_eigen(z0.embedded(p.level())));
    return kernel_dimension(singular_values(jac), threshold_ratio);
}

struct TraceResult {
    std::vector<CDNumber> samples;
    bool truncated = false;
    std::string message;
};

/// Predictor-corrector walk along the zero component through z0: the
/// predictor steps along a random kernel direction, the corrector is a
/// Gauss-Newton descent back to the zero set.
inline TraceResult trace_component(const Polynomial& p, const CDNumber& z0, unsigned steps,
                                   double step_size, std::mt19937_64& rng,
                                   double tol_residual = 1e-9, double threshold_ratio = 1e-6) {
    const unsigned v = p.level() > z0.level() ? p.level() : z0.level();
    const VectorMap f = residual_map(p);
    Eigen::VectorXd x = to_eigen(z0.embedded(v));
    if (f(x).norm() > 1e-6)
        throw PreconditionError("trace_component: starting point is not a zero");
    {
        const unsigned kdim = kernel_dimension(singular_values(fd_jacobian(f, x)),
                                               threshold_ratio);
        if (kdim < 1)
            throw PreconditionError(
                "trace_component: isolated zero (kernel dimension 0) cannot be traced");
    }

    std::normal_distribution<double> gauss(0.0, 1.0);
    TraceResult out;
    out.samples.reserve(steps);
    for (unsigned s = 0; s < steps; ++s) {
        const Eigen::MatrixXd jac = fd_jacobian(f, x);
        const Eigen::MatrixXd kernel = kernel_basis(jac, threshold_ratio);
        if (kernel.cols() == 0) {
            out.truncated = true;
            out.message = "kernel vanished after " + std::to_string(s) + " steps";
            break;
        }
        Eigen::VectorXd mix(kernel.cols());
        for (Eigen::Index j = 0; j < mix.size(); ++j) mix[j] = gauss(rng);
        Eigen::VectorXd dir = kernel * mix;
        const double dn = dir.norm();
        if (dn == 0.0) continue;
        dir /= dn;

        Eigen::VectorXd xt = x + step_size * dir;
        bool corrected = false;
        for (unsigned it = 0; it < 50; ++it) {
            const Eigen::VectorXd ft = f(xt);
            if (ft.norm() <= tol_residual) {
                corrected = true;
                break;
            }
            const Eigen::MatrixXd jt = fd_jacobian(f, xt);
            Eigen::JacobiSVD<Eigen::MatrixXd> svd(jt, Eigen::ComputeThinU | Eigen::ComputeThinV);
            svd.setThreshold(threshold_ratio);
            xt += svd.solve(-ft);
        }
        if (!corrected) {
            out.truncated = true;
            out.message = "corrector failed to converge at step " + std::to_string(s);
            break;
        }
        x = xt;
        out.samples.push_back(from_eigen(v, x));
    }
    return out;
}

/// True iff the polynomial is a monic z^{n+1} plus terms of degree <= n:
/// a unique maximal-degree term shaped as 1 * z^{deg}.
inline bool is_monic_form(const Polynomial& p) {
    const unsigned d = degree(p);
    if (d < 1) return false;
    int leading = -1;
    for (std::size_t i = 0; i < p.terms().size(); ++i)
        if (p.terms()[i].degree() == d) {
            if (leading >= 0) return false;  // tie at the top degree
            leading = static_cast<int>(i);
        }
    if (leading < 0) return false;
    const Term& t = p.terms()[static_cast<std::size_t>(leading)];
    return t.coeffs.size() == 1 && t.exps[0] == d &&
           t.coeffs[0] == CDNumber::one(t.coeffs[0].level());
}

}  // namespace cdpoly
