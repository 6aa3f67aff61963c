#pragma once

#include <vector>

#include "rmf/spectral.hpp"
#include "rmf/util.hpp"

namespace rmf::testing {

// deterministic pseudo-random step function: 1-4 pieces, support in (0, 2.5]
inline StepFunction random_step(std::uint64_t seed) {
    const std::size_t m = 1 + prf(seed, 0, 100) % 4;
    std::vector<double> breaks{0.0};
    double b = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
        b += 0.1 + 0.8 * u01(prf(seed, j, 101));
        breaks.push_back(b);
    }
    std::vector<cplx> vals;
    for (std::size_t j = 0; j < m; ++j)
        vals.emplace_back(2.0 * u01(prf(seed, j, 102)) - 1.0, 2.0 * u01(prf(seed, j, 103)) - 1.0);
    return StepFunction(std::move(breaks), std::move(vals));
}

}  // namespace rmf::testing
