#include "bwdm/random.hpp"

#include <cmath>
#include <numbers>

namespace bwdm {

double standard_normal(std::mt19937_64& gen) {
    // 1 - u lies in (0, 1], so the logarithm is finite.
    const double u1 = 1.0 - uniform01(gen);
    const double u2 = uniform01(gen);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace bwdm
