#include "symschrod/ode.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "symschrod/error.hpp"

namespace symschrod {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
// 4th-order weights for the error estimate.
constexpr double e1 = 5179.0 / 57600, e3 = 7571.0 / 16695, e4 = 393.0 / 640,
                 e5 = -92097.0 / 339200, e6 = 187.0 / 2100, e7 = 1.0 / 40;

}  // namespace

std::vector<std::vector<double>> integrate_dp45(
    const OdeRhs& rhs, double x0, std::vector<double> y0, const std::vector<double>& targets,
    double tol, const std::function<bool(const std::vector<double>&)>& guard, OdeRunStats* stats) {
    const std::size_t n = y0.size();
    std::vector<std::vector<double>> out;
    out.reserve(targets.size());

    double x = x0;
    std::vector<double> y = std::move(y0);
    std::vector<double> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), ytmp(n), y5(n), err(n);
    OdeRunStats local;
    rhs(x, y, k1);

    auto step = [&](double h) -> double {
        for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + h * a21 * k1[i];
        rhs(x + c2 * h, ytmp, k2);
        for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
        rhs(x + c3 * h, ytmp, k3);
        for (std::size_t i = 0; i < n; ++i)
            ytmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        rhs(x + c4 * h, ytmp, k4);
        for (std::size_t i = 0; i < n; ++i)
            ytmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        rhs(x + c5 * h, ytmp, k5);
        for (std::size_t i = 0; i < n; ++i)
            ytmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
        rhs(x + h, ytmp, k6);
        for (std::size_t i = 0; i < n; ++i)
            y5[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
        rhs(x + h, y5, k7);
        double emax = 0;
        for (std::size_t i = 0; i < n; ++i) {
            double y4 = y[i] + h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                                    e7 * k7[i]);
            double sc = 1.0 + std::max(std::abs(y[i]), std::abs(y5[i]));
            emax = std::max(emax, std::abs(y5[i] - y4) / sc);
        }
        return emax;
    };

    for (double target : targets) {
        if (target < x - 1e-14)
            throw Error(ErrorKind::BadArgument, "integrate_dp45: targets must be increasing");
        double h = std::min(target - x, 0.1);
        while (x < target - 1e-14) {
            h = std::min(h, target - x);
            double emax = step(h);
            if (emax <= tol) {
                x += h;
                y = y5;
                k1 = k7;  // FSAL
                local.max_step_error = std::max(local.max_step_error, emax);
                ++local.steps;
                if (!guard(y))
                    throw Error(ErrorKind::BlowUp,
                                "integrate_dp45: solution exceeded the blow-up bound; last safe x = " +
                                    std::to_string(x));
            } else {
                ++local.rejected;
            }
            double factor = 0.9 * std::pow(tol / std::max(emax, 1e-300), 0.2);
            h *= std::clamp(factor, 0.2, 5.0);
            h = std::max(h, 1e-13);
            if (local.steps + local.rejected > 2000000)
                throw Error(ErrorKind::BlowUp, "integrate_dp45: step limit exceeded");
        }
        out.push_back(y);
    }
    if (stats) *stats = local;
    return out;
}

}  // namespace symschrod
