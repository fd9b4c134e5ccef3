#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <atomic>
#include <cmath>
#include <thread>

#include "cdpoly/cd_number.hpp"
#include "cdpoly/numerics.hpp"

using namespace cdpoly;

namespace {

// Textbook right-handed quaternion table (1, i, j, k), frozen independently
// of the doubling recursion: entry [a][b] = (sign, index) of i_a * i_b.
struct SignedIndex {
    int sign;
    unsigned index;
};
constexpr std::array<std::array<SignedIndex, 4>, 4> kQuaternionTable = {{
    {{{+1, 0}, {+1, 1}, {+1, 2}, {+1, 3}}},
    {{{+1, 1}, {-1, 0}, {+1, 3}, {-1, 2}}},
    {{{+1, 2}, {-1, 3}, {-1, 0}, {+1, 1}}},
    {{{+1, 3}, {+1, 2}, {-1, 1}, {-1, 0}}},
}};

CDNumber basis_product(unsigned v, unsigned a, unsigned b) {
    return CDNumber::basis(v, a) * CDNumber::basis(v, b);
}

}  // namespace

TEST_CASE("construction checks lengths and levels") {
    CHECK(CDNumber(2, {1, 0, 0, 0}) == CDNumber::one(2));
    CHECK(CDNumber(2, {0, 1, 0, 0}) == CDNumber::basis(2, 1));
    CHECK_THROWS_AS(CDNumber(2, {1, 0, 0}), SchemaError);
    CHECK_THROWS_AS(CDNumber(17, std::vector<double>(8, 0.0)), SchemaError);
    CHECK_THROWS_AS(CDNumber::basis(2, 4), SchemaError);

    CDNumber i7 = CDNumber::basis(3, 7);
    CHECK(i7 * i7 == -CDNumber::one(3));
}

TEST_CASE("quaternion products match the textbook table exactly") {
    for (unsigned a = 0; a < 4; ++a)
        for (unsigned b = 0; b < 4; ++b) {
            const auto want = kQuaternionTable[a][b];
            CHECK(basis_product(2, a, b) ==
                  want.sign * CDNumber::basis(2, want.index));
        }
}

TEST_CASE("generator relations are exact up to level 6") {
    for (unsigned v = 1; v <= 6; ++v) {
        const unsigned dim = 1u << v;
        const CDNumber one = CDNumber::one(v);
        for (unsigned j = 1; j < dim; ++j) {
            const CDNumber ij = CDNumber::basis(v, j);
            REQUIRE(ij * ij == -one);
            REQUIRE(one * ij == ij);
            REQUIRE(ij * one == ij);
        }
        // anticommutation on a subsampled grid at the larger levels
        const unsigned stride = v <= 4 ? 1 : 3;
        for (unsigned j = 1; j < dim; j += stride)
            for (unsigned k = 1; k < dim; k += stride) {
                if (j == k) continue;
                REQUIRE(basis_product(v, j, k) == -basis_product(v, k, j));
            }
    }
}

TEST_CASE("mixed levels embed the lower operand") {
    const CDNumber a(1, {1, 2});
    const CDNumber b(2, {0, 0, 1, 0});
    const CDNumber sum = a + b;
    CHECK(sum.level() == 2);
    CHECK(sum == CDNumber(2, {1, 2, 1, 0}));
    CHECK(a * b == CDNumber(2, {1, 2, 0, 0}) * b);
}

TEST_CASE("conjugation negates the imaginary part") {
    CHECK(conj(CDNumber::one(2)) == CDNumber::one(2));
    CHECK(conj(CDNumber::basis(2, 1)) == -CDNumber::basis(2, 1));
    CDNumber z = CDNumber::zero(3);
    z[0] = 3.0;
    z[5] = 2.0;
    CDNumber w = conj(z);
    CHECK(w[0] == 3.0);
    CHECK(w[5] == -2.0);
    CHECK(conj(w) == z);
}

TEST_CASE("re, im, norms") {
    CDNumber z(2, {3, 4, 0, 0});
    CHECK(re(z) == 3.0);
    CHECK(norm(z) == 5.0);
    CHECK(im(CDNumber(7.0)) == CDNumber(0.0));
    CHECK(im(z) == CDNumber(2, {0, 4, 0, 0}));
}

TEST_CASE("z conj(z) equals the squared norm at every level") {
    auto rng = rng_stream(11, 0);
    for (unsigned v = 1; v <= 6; ++v) {
        const unsigned samples = v == 4 ? 1000 : 50;
        for (unsigned t = 0; t < samples; ++t) {
            const CDNumber z = sample_ball(rng, v, 2.0);
            const CDNumber lhs = z * conj(z);
            const CDNumber rhs = conj(z) * z;
            const CDNumber want = norm_sq(z) * CDNumber::one(v);
            REQUIRE(norm(lhs - want) <= 1e-12 * (1.0 + norm_sq(z)));
            REQUIRE(norm(rhs - want) <= 1e-12 * (1.0 + norm_sq(z)));
        }
    }
}

TEST_CASE("inverse") {
    CHECK(inverse(CDNumber(2.0)) == CDNumber(0.5));
    CHECK(inverse(CDNumber::basis(2, 1)) == -CDNumber::basis(2, 1));
    CHECK_THROWS_AS(inverse(CDNumber::zero(2)), PreconditionError);

    auto rng = rng_stream(12, 0);
    for (unsigned t = 0; t < 200; ++t) {
        const CDNumber z = sample_ball(rng, 4, 3.0);
        if (norm(z) < 1e-3) continue;
        REQUIRE(norm(z * inverse(z) - CDNumber::one(4)) <= 1e-12);
        REQUIRE(norm(inverse(z) * z - CDNumber::one(4)) <= 1e-12);
    }
}

TEST_CASE("scalar product is the coefficient dot product") {
    CHECK(scalar_product(CDNumber::basis(2, 1), CDNumber::basis(2, 1)) == 1.0);
    CHECK(scalar_product(CDNumber::basis(2, 1), CDNumber::basis(2, 2)) == 0.0);
    auto rng = rng_stream(13, 0);
    for (unsigned t = 0; t < 300; ++t) {
        const CDNumber x = sample_ball(rng, 3, 2.0);
        const CDNumber y = sample_ball(rng, 3, 2.0);
        double dot = 0.0;
        for (std::size_t j = 0; j < x.dim(); ++j) dot += x[j] * y[j];
        REQUIRE(std::abs(re(x * conj(y)) - dot) <= 1e-12 * (1.0 + std::abs(dot)));
        REQUIRE(std::abs(scalar_product(x, y) - dot) == 0.0);
    }
}

TEST_CASE("conjugate_via_basis agrees with conj") {
    // hand-expanded quaternion cases
    CHECK(approx_equal(conjugate_via_basis(CDNumber::basis(2, 1)), -CDNumber::basis(2, 1),
                       1e-14));
    CHECK(approx_equal(conjugate_via_basis(CDNumber::one(2)), CDNumber::one(2), 1e-14));
    CHECK_THROWS_AS(conjugate_via_basis(CDNumber(1, {1, 2})), PreconditionError);

    auto rng = rng_stream(14, 0);
    for (unsigned v : {2u, 3u, 4u}) {
        double worst = 0.0;
        for (unsigned t = 0; t < 1000; ++t) {
            const CDNumber z = sample_ball(rng, v, 2.0);
            worst = std::max(worst, norm(conjugate_via_basis(z) - conj(z)));
        }
        REQUIRE(worst <= 1e-12);
    }
}

TEST_CASE("norm is multiplicative in the division algebras") {
    auto rng = rng_stream(15, 0);
    for (unsigned v : {1u, 2u, 3u}) {
        for (unsigned t = 0; t < 10000; ++t) {
            const CDNumber x = sample_ball(rng, v, 2.0);
            const CDNumber y = sample_ball(rng, v, 2.0);
            const double lhs = norm(x * y);
            const double rhs = norm(x) * norm(y);
            REQUIRE(std::abs(lhs - rhs) <= 1e-12 * (1.0 + rhs));
        }
    }
}

TEST_CASE("norm ratio |xy|/(|x||y|) measured per level") {
    auto rng = rng_stream(16, 0);
    for (unsigned v : {4u, 5u, 6u}) {
        double worst_ratio = 0.0;
        for (unsigned t = 0; t < 2000; ++t) {
            const CDNumber x = sample_ball(rng, v, 2.0);
            const CDNumber y = sample_ball(rng, v, 2.0);
            const double denom = norm(x) * norm(y);
            if (denom < 1e-9) continue;
            worst_ratio = std::max(worst_ratio, norm(x * y) / denom);
        }
        WARN("level " << v << " max |xy| / (|x||y|) over random pairs: " << worst_ratio);
        CHECK(worst_ratio > 1.0);  // not submultiplicative past the octonions
    }
}

TEST_CASE("associativity: quaternions yes, octonions alternative, sedenions no") {
    auto rng = rng_stream(17, 0);
    for (unsigned t = 0; t < 300; ++t) {
        const CDNumber x = sample_ball(rng, 2, 2.0);
        const CDNumber y = sample_ball(rng, 2, 2.0);
        const CDNumber z = sample_ball(rng, 2, 2.0);
        REQUIRE(norm((x * y) * z - x * (y * z)) <= 1e-12 * (1 + norm(x) * norm(y) * norm(z)));
    }
    for (unsigned t = 0; t < 300; ++t) {
        const CDNumber x = sample_ball(rng, 3, 2.0);
        const CDNumber y = sample_ball(rng, 3, 2.0);
        REQUIRE(norm((x * x) * y - x * (x * y)) <= 1e-11 * (1 + norm_sq(x) * norm(y)));
        REQUIRE(norm((x * y) * y - x * (y * y)) <= 1e-11 * (1 + norm(x) * norm_sq(y)));
    }
    bool found = false;
    for (unsigned a = 1; a < 16 && !found; ++a)
        for (unsigned b = 1; b < 16 && !found; ++b)
            for (unsigned c = 1; c < 16 && !found; ++c) {
                const CDNumber lhs = basis_product(4, a, b) * CDNumber::basis(4, c);
                const CDNumber rhs = CDNumber::basis(4, a) * basis_product(4, b, c);
                if (!(lhs == rhs)) found = true;
            }
    CHECK(found);
}

TEST_CASE("subalgebra closure sizes") {
    SECTION("one imaginary generator spans a complex plane") {
        const auto basis = subalgebra_closure({CDNumber::basis(3, 1)});
        CHECK(basis.size() == 2);
    }
    SECTION("two anticommuting generators span a quaternion copy") {
        const auto basis = subalgebra_closure({CDNumber::basis(3, 1), CDNumber::basis(3, 2)});
        CHECK(basis.size() == 4);
    }
    SECTION("random orthogonal imaginary pairs in the octonions") {
        auto rng = rng_stream(18, 0);
        for (unsigned t = 0; t < 20; ++t) {
            const CDNumber m = sample_unit_imaginary(rng, 3);
            CDNumber n = sample_unit_imaginary(rng, 3);
            n -= scalar_product(n, m) * m;
            if (norm(n) < 1e-3) continue;
            n /= norm(n);
            // generic pairs have m*n outside span{1, m, n}
            const auto basis = subalgebra_closure({m, n});
            REQUIRE(basis.size() == 4);
            // basis is orthonormal
            for (std::size_t i = 0; i < basis.size(); ++i)
                for (std::size_t j = 0; j < basis.size(); ++j) {
                    const double want = i == j ? 1.0 : 0.0;
                    REQUIRE(std::abs(scalar_product(basis[i], basis[j]) - want) <= 1e-9);
                }
        }
    }
    SECTION("empty input is rejected") {
        CHECK_THROWS_AS(subalgebra_closure({}), PreconditionError);
    }
}

TEST_CASE("zero divisor search") {
    CHECK(!find_zero_divisor_pair(2));
    CHECK(!find_zero_divisor_pair(3));
    const auto pair = find_zero_divisor_pair(4);
    REQUIRE(pair);
    CHECK(norm_sq(pair->first) > 0.0);
    CHECK(norm_sq(pair->second) > 0.0);
    CHECK(norm(pair->first * pair->second) == 0.0);  // cancellation is exact
    CHECK_THROWS_AS(find_zero_divisor_pair(0), PreconditionError);
}

TEST_CASE("levels beyond the cached table fall back to per-pair signs") {
    // level 10 sits above kMaxCachedTableLevel; sparse products stay exact
    const unsigned v = 10;
    for (unsigned j : {1u, 7u, 255u, 511u, 1023u}) {
        const CDNumber b = CDNumber::basis(v, j);
        REQUIRE(b * b == -CDNumber::one(v));
    }
    REQUIRE(CDNumber::basis(v, 3) * CDNumber::basis(v, 600) ==
            -(CDNumber::basis(v, 600) * CDNumber::basis(v, 3)));
    // dense product round trip through conjugation still matches the norm
    auto rng = rng_stream(19, 0);
    const CDNumber z = sample_ball(rng, v, 1.5);
    REQUIRE(norm(z * conj(z) - norm_sq(z) * CDNumber::one(v)) <= 1e-12 * (1 + norm_sq(z)));
}

TEST_CASE("basis product cache is safe for concurrent use") {
    std::vector<std::thread> pool;
    std::atomic<int> failures{0};
    for (int t = 0; t < 8; ++t)
        pool.emplace_back([&failures] {
            for (unsigned j = 1; j < 32; ++j) {
                const CDNumber b = CDNumber::basis(5, j);
                if (!(b * b == -CDNumber::one(5))) failures.fetch_add(1);
            }
        });
    for (auto& th : pool) th.join();
    CHECK(failures.load() == 0);
}
