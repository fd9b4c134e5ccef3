// Group averaging: P^G(z) as the mean of P(g z) over a circle subgroup or a
// finite subgroup, and the invariance this buys.

#include <iostream>

#include "cdpoly/cdpoly.hpp"

using namespace cdpoly;

int main() {
    // P = z^2 over the quaternions
    const Polynomial p(2, {Term{{CDNumber::one(2)}, {2}, std::nullopt}});

    const auto circle = SubgroupSpec::circle(CDNumber::basis(2, 1), 16);
    const auto avg = average(p, circle);
    std::cout << "circle average of z^2 at 1: " << cd_to_json(avg(CDNumber::one(2))).dump()
              << "\n";

    // Q8 = {+-1, +-i1, +-i2, +-i3}
    std::vector<CDNumber> q8;
    for (unsigned j = 0; j < 4; ++j) {
        q8.push_back(CDNumber::basis(2, j));
        q8.push_back(-CDNumber::basis(2, j));
    }
    const auto finite = SubgroupSpec::finite(q8);
    const Polynomial linear(2, {Term{{CDNumber::one(2)}, {1}, std::nullopt}});
    const auto avg_q8 = average(linear, finite);
    std::cout << "Q8 average of z at 1+i2: "
              << cd_to_json(avg_q8(CDNumber(2, {1, 0, 1, 0}))).dump() << "\n";

    auto rng = rng_stream(0, 0);
    const auto rep = check_average_invariance(p, circle, 8, 2.0, rng);
    std::cout << "on-group constancy deviation: " << rep.max_on_group_deviation << "\n";
    std::cout << "left-invariance deviation:    " << rep.max_left_invariance_deviation << "\n";
    return 0;
}
