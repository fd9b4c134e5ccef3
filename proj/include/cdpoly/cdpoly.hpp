#pragma once

#include <string_view>

#include "cdpoly/cd_number.hpp"
#include "cdpoly/errors.hpp"
#include "cdpoly/identities.hpp"
#include "cdpoly/json_io.hpp"
#include "cdpoly/numerics.hpp"
#include "cdpoly/polynomial.hpp"
#include "cdpoly/roots.hpp"
#include "cdpoly/symmetry.hpp"
#include "cdpoly/transcendental.hpp"
#include "cdpoly/zero_finder.hpp"

namespace cdpoly {

inline constexpr std::string_view kVersion = "0.1.0";

}  // namespace cdpoly
