#pragma once

#include <complex>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cdpoly/cd_number.hpp"
#include "cdpoly/errors.hpp"
#include "cdpoly/transcendental.hpp"

namespace cdpoly {

/// Binary association order over the 2m factors of a term. Leaves carry
/// factor indices; the in-order leaf sequence must be exactly 0..2m-1.
class MulTree {
public:
    static MulTree leaf(unsigned factor_index) {
        MulTree t;
        t.index_ = factor_index;
        return t;
    }

    static MulTree node(MulTree left, MulTree right) {
        MulTree t;
        t.left_ = std::make_unique<MulTree>(std::move(left));
        t.right_ = std::make_unique<MulTree>(std::move(right));
        return t;
    }

    MulTree(const MulTree& o) { *this = o; }
    MulTree(MulTree&&) noexcept = default;
    MulTree& operator=(const MulTree& o) {
        if (this == &o) return *this;
        index_ = o.index_;
        left_ = o.left_ ? std::make_unique<MulTree>(*o.left_) : nullptr;
        right_ = o.right_ ? std::make_unique<MulTree>(*o.right_) : nullptr;
        return *this;
    }
    MulTree& operator=(MulTree&&) noexcept = default;

    bool is_leaf() const { return !left_; }
    unsigned leaf_index() const { return index_; }
    const MulTree& left() const { return *left_; }
    const MulTree& right() const { return *right_; }

    unsigned leaf_count() const {
        if (is_leaf()) return 1;
        return left_->leaf_count() + right_->leaf_count();
    }

    /// In-order leaf indices.
    void collect_leaves(std::vector<unsigned>& out) const {
        if (is_leaf()) {
            out.push_back(index_);
            return;
        }
        left_->collect_leaves(out);
        right_->collect_leaves(out);
    }

    bool operator==(const MulTree& o) const {
        if (is_leaf() != o.is_leaf()) return false;
        if (is_leaf()) return index_ == o.index_;
        return *left_ == *o.left_ && *right_ == *o.right_;
    }

private:
    MulTree() = default;
    unsigned index_ = 0;
    std::unique_ptr<MulTree> left_;
    std::unique_ptr<MulTree> right_;
};

/// One product term {a_1 z^{k_1} a_2 z^{k_2} ... a_m z^{k_m}} with an
/// optional explicit association order; absent order means the left fold.
struct Term {
    std::vector<CDNumber> coeffs;
    std::vector<unsigned> exps;
    std::optional<MulTree> order;

    std::size_t factor_pairs() const { return coeffs.size(); }
    unsigned degree() const {
        unsigned d = 0;
        for (unsigned k : exps) d += k;
        return d;
    }
};

namespace detail {

inline void validate_term(const Term& t, const std::string& where) {
    if (t.coeffs.empty() || t.coeffs.size() != t.exps.size())
        throw SchemaError(where + ": coeffs and exps must be nonempty and equally long (got " +
                          std::to_string(t.coeffs.size()) + " and " +
                          std::to_string(t.exps.size()) + ")");
    if (t.order) {
        const unsigned want = static_cast<unsigned>(2 * t.coeffs.size());
        std::vector<unsigned> leaves;
        t.order->collect_leaves(leaves);
        if (leaves.size() != want)
            throw SchemaError(where + ": order tree has " + std::to_string(leaves.size()) +
                              " leaves, term with m = " + std::to_string(t.coeffs.size()) +
                              " needs " + std::to_string(want));
        for (unsigned i = 0; i < want; ++i)
            if (leaves[i] != i)
                throw SchemaError(where +
                                  ": order tree leaves must be 0.." + std::to_string(want - 1) +
                                  " in increasing in-order position");
    }
}

}  // namespace detail

/// Polynomial over A_v as a sum of product terms.
class Polynomial {
public:
    Polynomial(unsigned level, std::vector<Term> terms,
               std::optional<unsigned> monic_leading = std::nullopt)
        : level_(level), terms_(std::move(terms)), monic_leading_(monic_leading) {
        for (std::size_t i = 0; i < terms_.size(); ++i) {
            detail::validate_term(terms_[i], "term " + std::to_string(i));
            for (const auto& c : terms_[i].coeffs)
                if (c.level() > level_)
                    throw SchemaError("term " + std::to_string(i) + ": coefficient level " +
                                      std::to_string(c.level()) + " exceeds polynomial level " +
                                      std::to_string(level_));
        }
    }

    /// Monic form z^{n+1} + (lower terms of degree <= n).
    static Polynomial monic(unsigned level, unsigned leading_degree, std::vector<Term> lower) {
        if (leading_degree == 0)
            throw SchemaError("Polynomial::monic: leading degree must be >= 1");
        for (const auto& t : lower)
            if (t.degree() >= leading_degree)
                throw SchemaError("Polynomial::monic: lower term of degree " +
                                  std::to_string(t.degree()) + " not below leading degree " +
                                  std::to_string(leading_degree));
        std::vector<Term> terms;
        terms.push_back(Term{{CDNumber::one(level)}, {leading_degree}, std::nullopt});
        for (auto& t : lower) terms.push_back(std::move(t));
        return Polynomial(level, std::move(terms), leading_degree);
    }

    unsigned level() const { return level_; }
    const std::vector<Term>& terms() const { return terms_; }
    std::optional<unsigned> monic_leading() const { return monic_leading_; }

private:
    unsigned level_;
    std::vector<Term> terms_;
    std::optional<unsigned> monic_leading_;
};

namespace detail {

inline CDNumber fold_tree(const MulTree& tree, const std::vector<CDNumber>& factors) {
    if (tree.is_leaf()) return factors[tree.leaf_index()];
    return fold_tree(tree.left(), factors) * fold_tree(tree.right(), factors);
}

inline CDNumber evaluate_term(const Term& t, const CDNumber& z) {
    // factor sequence a_1, z^{k_1}, a_2, z^{k_2}, ...
    std::vector<CDNumber> factors;
    factors.reserve(2 * t.coeffs.size());
    for (std::size_t j = 0; j < t.coeffs.size(); ++j) {
        factors.push_back(t.coeffs[j]);
        factors.push_back(int_pow(z, t.exps[j]));
    }
    if (t.order) return fold_tree(*t.order, factors);
    CDNumber acc = factors[0];
    for (std::size_t j = 1; j < factors.size(); ++j) acc = acc * factors[j];
    return acc;
}

}  // namespace detail

inline CDNumber evaluate(const Polynomial& p, const CDNumber& z) {
    const unsigned v = std::max(p.level(), z.level());
    const CDNumber ze = z.embedded(v);
    CDNumber acc = CDNumber::zero(v);
    for (const auto& t : p.terms()) acc += detail::evaluate_term(t, ze);
    return acc;
}

/// Highest total exponent among terms whose coefficients are all nonzero.
inline unsigned degree(const Polynomial& p) {
    unsigned d = 0;
    for (const auto& t : p.terms()) {
        bool live = true;
        for (const auto& c : t.coeffs)
            if (norm_sq(c) == 0.0) {
                live = false;
                break;
            }
        if (live && t.degree() > d) d = t.degree();
    }
    return d;
}

/// Result of restricting a polynomial to the complex slice span{1, direction}.
struct SliceRestriction {
    bool closed;
    std::vector<std::complex<double>> coeffs;  // index = power of x
    std::string detail;                        // names the offender when not closed
};

/// If every coefficient lies in span{1, M-hat}, the polynomial restricts to a
/// classical complex polynomial on that slice (products commute there, so each
/// term collapses to a single monomial).
inline SliceRestriction restrict_to_slice(const Polynomial& p, const CDNumber& direction,
                                          double tol = 1e-10) {
    const double dn = norm(direction);
    if (std::abs(dn - 1.0) > 1e-9 || std::abs(re(direction)) > 1e-12)
        throw PreconditionError("restrict_to_slice: direction must be a unit pure imaginary");
    SliceRestriction out{true, {}, ""};
    std::vector<std::complex<double>> acc(degree(p) + 1, {0.0, 0.0});
    for (std::size_t i = 0; i < p.terms().size(); ++i) {
        const Term& t = p.terms()[i];
        std::complex<double> c(1.0, 0.0);
        for (std::size_t j = 0; j < t.coeffs.size(); ++j) {
            const CDNumber& a = t.coeffs[j];
            const double y = scalar_product(im(a), direction);
            const CDNumber resid = im(a) - y * direction.embedded(a.level() > direction.level()
                                                                      ? a.level()
                                                                      : direction.level());
            if (norm(resid) > tol) {
                out.closed = false;
                out.detail = "term " + std::to_string(i) + ", coefficient " + std::to_string(j) +
                             " lies outside the slice (residual " + std::to_string(norm(resid)) +
                             ")";
                out.coeffs.clear();
                return out;
            }
            c *= std::complex<double>(re(a), y);
        }
        const unsigned d = t.degree();
        if (d >= acc.size()) acc.resize(d + 1, {0.0, 0.0});
        acc[d] += c;
    }
    out.coeffs = std::move(acc);
    return out;
}

}  // namespace cdpoly
