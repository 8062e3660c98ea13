#pragma once

#include <functional>
#include <vector>

namespace symschrod {

using OdeRhs = std::function<void(double x, const std::vector<double>& y, std::vector<double>& dy)>;

struct OdeRunStats {
    double max_step_error = 0.0;  // largest accepted local error estimate
    std::size_t steps = 0;
    std::size_t rejected = 0;
};

// Adaptive Dormand-Prince 5(4). Integrates from x0 through each target
// abscissa (strictly increasing, first may equal x0), landing on targets
// exactly. `guard` may abort the run (movable-pole watch): when it returns
// false a BlowUp error is thrown carrying the last safe abscissa.
std::vector<std::vector<double>> integrate_dp45(
    const OdeRhs& rhs, double x0, std::vector<double> y0,
    const std::vector<double>& targets, double tol,
    const std::function<bool(const std::vector<double>&)>& guard, OdeRunStats* stats = nullptr);

}  // namespace symschrod
