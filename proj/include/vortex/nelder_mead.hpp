#pragma once

#include <functional>
#include <span>
#include <vector>

namespace vortex {

struct NelderMeadOptions {
    double f_tolerance = 1e-10; // stop when the simplex value spread falls below this
    int max_iterations = 200;
};

struct NelderMeadResult {
    std::vector<double> x;
    double value = 0.0;
    int iterations = 0;
    bool converged = false;
};

// Derivative-free simplex descent. The initial simplex is x0 plus one
// coordinate step per axis.
NelderMeadResult nelder_mead(const std::function<double(std::span<const double>)>& f, std::vector<double> x0,
                             std::span<const double> step, const NelderMeadOptions& options);

} // namespace vortex
