#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "cdpoly/cd_number.hpp"
#include "cdpoly/errors.hpp"
#include "cdpoly/numerics.hpp"
#include "cdpoly/polynomial.hpp"
#include "cdpoly/transcendental.hpp"

namespace cdpoly {

/// Averaging subgroup: either the circle {e^{tM}} discretized at S nodes, or
/// an explicit finite subgroup.
class SubgroupSpec {
public:
    enum class Kind { Circle, Finite };

    static SubgroupSpec circle(const CDNumber& direction, unsigned nodes) {
        if (nodes < 2) throw PreconditionError("SubgroupSpec::circle: need at least 2 nodes");
        if (std::abs(re(direction)) > 1e-12 || std::abs(norm(direction) - 1.0) > 1e-9)
            throw PreconditionError(
                "SubgroupSpec::circle: direction must be a unit purely imaginary element");
        SubgroupSpec g;
        g.kind_ = Kind::Circle;
        g.direction_ = direction;
        g.nodes_ = nodes;
        return g;
    }

    static SubgroupSpec finite(std::vector<CDNumber> elements, double tol = 1e-10) {
        if (elements.empty())
            throw PreconditionError("SubgroupSpec::finite: need at least one element");
        auto contains = [&](const CDNumber& z) {
            for (const auto& e : elements)
                if (approx_equal(e, z, tol)) return true;
            return false;
        };
        for (const auto& e : elements) {
            if (norm_sq(e) == 0.0)
                throw PreconditionError("SubgroupSpec::finite: zero element is not invertible");
            if (!contains(inverse(e)))
                throw PreconditionError(
                    "SubgroupSpec::finite: set is not closed under inversion");
        }
        for (const auto& a : elements)
            for (const auto& b : elements)
                if (!contains(a * b))
                    throw PreconditionError(
                        "SubgroupSpec::finite: set is not closed under products");
        SubgroupSpec g;
        g.kind_ = Kind::Finite;
        g.elements_ = std::move(elements);
        return g;
    }

    Kind kind() const { return kind_; }
    const CDNumber& direction() const { return direction_; }
    unsigned nodes() const { return nodes_; }
    const std::vector<CDNumber>& elements() const { return elements_; }

    /// The translation elements the average sums over, in deterministic order.
    std::vector<CDNumber> translations() const {
        if (kind_ == Kind::Finite) return elements_;
        std::vector<CDNumber> out;
        out.reserve(nodes_);
        for (unsigned j = 0; j < nodes_; ++j) {
            const double t = 2.0 * std::numbers::pi * j / static_cast<double>(nodes_);
            out.push_back(exp(t * direction_));
        }
        return out;
    }

private:
    SubgroupSpec() = default;
    Kind kind_ = Kind::Circle;
    CDNumber direction_;
    unsigned nodes_ = 0;
    std::vector<CDNumber> elements_;
};

/// z -> mean over g in G of base(g z). Circle specs use the uniform
/// trapezoid rule, exact for trigonometric polynomials of degree < S/2.
class AveragedEvaluator {
public:
    AveragedEvaluator(std::function<CDNumber(const CDNumber&)> base, const SubgroupSpec& group)
        : base_(std::move(base)), translations_(group.translations()) {}

    CDNumber operator()(const CDNumber& z) const {
        CDNumber acc = base_(translations_[0] * z);
        for (std::size_t j = 1; j < translations_.size(); ++j)
            acc += base_(translations_[j] * z);
        return acc / static_cast<double>(translations_.size());
    }

private:
    std::function<CDNumber(const CDNumber&)> base_;
    std::vector<CDNumber> translations_;
};

/// Group average of a polynomial. Circle node counts must resolve the
/// polynomial degree (S >= 2 deg + 2) so the quadrature is exact.
inline AveragedEvaluator average(const Polynomial& p, const SubgroupSpec& group) {
    if (group.kind() == SubgroupSpec::Kind::Circle) {
        const unsigned need = 2 * degree(p) + 2;
        if (group.nodes() < need)
            throw PreconditionError("average: circle with " + std::to_string(group.nodes()) +
                                    " nodes cannot integrate degree " +
                                    std::to_string(degree(p)) + " exactly; need >= " +
                                    std::to_string(need));
    }
    return AveragedEvaluator([p](const CDNumber& z) { return evaluate(p, z); }, group);
}

/// Group average of an arbitrary evaluator (used for repeated averaging).
inline AveragedEvaluator average(std::function<CDNumber(const CDNumber&)> f,
                                 const SubgroupSpec& group) {
    return AveragedEvaluator(std::move(f), group);
}

struct SymmetryCheck {
    bool symmetric;
    double max_deviation;  // max over samples of |P(gz) - P(z)| / (1 + |P(z)|)
    CDNumber worst_sample;
};

namespace detail {

template <typename Transform>
SymmetryCheck symmetry_check(const Polynomial& p, const Transform& apply, unsigned sample_count,
                             double radius, double tol, std::mt19937_64& rng) {
    const unsigned v = p.level();
    SymmetryCheck out{true, 0.0, CDNumber::zero(v)};
    for (unsigned s = 0; s < sample_count; ++s) {
        const CDNumber z = sample_ball(rng, v, radius);
        const CDNumber pz = evaluate(p, z);
        const double dev = norm(apply(z) - pz) / (1.0 + norm(pz));
        if (dev > out.max_deviation) {
            out.max_deviation = dev;
            out.worst_sample = z;
        }
    }
    out.symmetric = out.max_deviation <= tol;
    return out;
}

}  // namespace detail

/// Does P(g z) = P(z) hold over random samples?
inline SymmetryCheck is_left_symmetry(const Polynomial& p, const CDNumber& g,
                                      unsigned sample_count, double radius, double tol,
                                      std::mt19937_64& rng) {
    if (norm_sq(g) == 0.0) throw PreconditionError("is_left_symmetry: g must be nonzero");
    return detail::symmetry_check(
        p, [&](const CDNumber& z) { return evaluate(p, g * z); }, sample_count, radius, tol, rng);
}

/// Does P(z g) = P(z) hold over random samples?
inline SymmetryCheck is_right_symmetry(const Polynomial& p, const CDNumber& g,
                                       unsigned sample_count, double radius, double tol,
                                       std::mt19937_64& rng) {
    if (norm_sq(g) == 0.0) throw PreconditionError("is_right_symmetry: g must be nonzero");
    return detail::symmetry_check(
        p, [&](const CDNumber& z) { return evaluate(p, z * g); }, sample_count, radius, tol, rng);
}

/// Certificate that g relates the zeros z0 and z1 of P in both directions.
struct SymmetryWitness {
    CDNumber g;
    CDNumber z0;
    CDNumber z1;
    double residual_p_z0;
    double residual_p_z1;
    double residual_forward;   // |g z0 - z1|
    double residual_backward;  // |g^{-1} z1 - z0|
};

struct WitnessResult {
    bool valid;
    SymmetryWitness witness;
    std::string failure;  // names the offending residual when invalid
};

inline WitnessResult relates_zero_pair(const Polynomial& p, const CDNumber& g, const CDNumber& z0,
                                       const CDNumber& z1, double tol = 1e-9) {
    if (norm_sq(g) == 0.0) throw PreconditionError("relates_zero_pair: g must be nonzero");
    SymmetryWitness w{g, z0, z1, norm(evaluate(p, z0)), norm(evaluate(p, z1)),
                      norm(g * z0 - z1), norm(inverse(g) * z1 - z0)};
    WitnessResult out{true, std::move(w), ""};
    const std::pair<const char*, double> checks[] = {
        {"|P(z0)|", out.witness.residual_p_z0},
        {"|P(z1)|", out.witness.residual_p_z1},
        {"|g z0 - z1|", out.witness.residual_forward},
        {"|g^{-1} z1 - z0|", out.witness.residual_backward},
    };
    for (const auto& [name, value] : checks)
        if (value > tol) {
            out.valid = false;
            out.failure = std::string(name) + " = " + std::to_string(value) + " exceeds " +
                          std::to_string(tol);
            break;
        }
    return out;
}

/// Direct construction of the candidate multiplier relating two zeros.
inline CDNumber find_relating_multiplier(const CDNumber& z0, const CDNumber& z1) {
    return z1 * inverse(z0);
}

struct AverageInvarianceReport {
    double max_on_group_deviation;        // max |P^G(g) - P^G(1)| over sampled g in G
    double max_left_invariance_deviation; // max |P^G(g z) - P^G(z)| over sampled g, z
};

/// Measures on-group constancy of the average and its left invariance.
/// Callers assert against their own tolerances; left invariance is only a
/// guarantee for the quaternions.
inline AverageInvarianceReport check_average_invariance(const Polynomial& p, const SubgroupSpec& group,
                                                  unsigned samples, double radius,
                                                  std::mt19937_64& rng) {
    const AveragedEvaluator avg = average(p, group);
    const unsigned v = std::max(p.level(), group.kind() == SubgroupSpec::Kind::Circle
                                               ? group.direction().level()
                                               : group.elements()[0].level());
    const CDNumber at_one = avg(CDNumber::one(v));

    std::vector<CDNumber> gs;
    if (group.kind() == SubgroupSpec::Kind::Finite) {
        gs = group.elements();
    } else {
        std::uniform_real_distribution<double> unif(0.0, 2.0 * std::numbers::pi);
        for (unsigned s = 0; s < samples; ++s) gs.push_back(exp(unif(rng) * group.direction()));
    }

    AverageInvarianceReport rep{0.0, 0.0};
    for (const auto& g : gs)
        rep.max_on_group_deviation = std::max(rep.max_on_group_deviation, norm(avg(g) - at_one));
    for (const auto& g : gs)
        for (unsigned s = 0; s < samples; ++s) {
            const CDNumber z = sample_ball(rng, v, radius);
            rep.max_left_invariance_deviation =
                std::max(rep.max_left_invariance_deviation, norm(avg(g * z) - avg(z)));
        }
    return rep;
}

}  // namespace cdpoly
