// Tour of the algebra layer: products at several levels, the polar form,
// root families, and the zero-divisor search.

#include <iostream>

#include "cdpoly/cdpoly.hpp"

using namespace cdpoly;

int main() {
    // quaternions: i1 * i2 = i3, and the product is anticommutative
    const auto i1 = CDNumber::basis(2, 1);
    const auto i2 = CDNumber::basis(2, 2);
    std::cout << "i1*i2 coefficients: " << cd_to_json(i1 * i2).dump() << "\n";
    std::cout << "i2*i1 coefficients: " << cd_to_json(i2 * i1).dump() << "\n";

    // polar form and exp/log round trip
    const CDNumber z(2, {1.0, 1.0, 0.0, 0.0});
    const PolarForm p = polar(z);
    std::cout << "|1+i1| = " << p.rho << ", angle = " << p.theta << "\n";
    std::cout << "exp(log(z)) error = " << norm(exp(log(z)) - z) << "\n";

    // fourth roots of 16 in the quaternions: 2, -2, and a sphere through 2M
    auto rng = rng_stream(0, 0);
    for (const auto& r : nth_root_family(CDNumber(2, {16, 0, 0, 0}), 4, rng, 2))
        std::cout << "root branch " << r.branch_index << ": " << cd_to_json(r.value).dump()
                  << "\n";

    // sedenions admit zero divisors; the search is exact
    if (auto pair = find_zero_divisor_pair(4))
        std::cout << "zero divisors at level 4: x = " << cd_to_json(pair->first).dump()
                  << ", y = " << cd_to_json(pair->second).dump()
                  << ", |xy| = " << norm(pair->first * pair->second) << "\n";
    return 0;
}
