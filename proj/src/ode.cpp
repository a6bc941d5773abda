#include "rotbath/ode.hpp"

#include <algorithm>
#include <cmath>

#include <boost/numeric/odeint.hpp>

#include "rotbath/errors.hpp"

namespace rotbath::ode {

namespace odeint = boost::numeric::odeint;

ScalarSolution integrate_autonomous(const std::function<double(double)>& rhs, double y0,
                                    std::span<const double> grid, const ScalarOptions& opts) {
    ScalarSolution out;
    if (grid.empty()) return out;
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (grid[i] < grid[i - 1]) throw DomainError("time grid must be nondecreasing");

    using State = double;
    auto stepper = odeint::make_controlled(opts.abs_tol, opts.rel_tol, odeint::runge_kutta_fehlberg78<State>());
    auto system = [&rhs](const State& y, State& dydt, double) { dydt = rhs(y); };

    State y = y0;
    double t = grid.front();
    out.values.reserve(grid.size());
    out.values.push_back(y);

    const double span = grid.back() - grid.front();
    double dt = span > 0.0 ? span * 1e-3 : 1.0;
    const double scale = std::abs(rhs(y0));
    if (scale > 0.0) dt = std::min(dt, 1e-3 * std::max(std::abs(y0), 1.0) / scale);

    for (std::size_t i = 1; i < grid.size(); ++i) {
        const double target = grid[i];
        while (t < target) {
            double trial = std::min(dt, target - t);
            const bool clamped = trial < dt;
            const double saved = dt;
            if (stepper.try_step(system, y, t, trial) == odeint::success) {
                // Do not let a step clamped onto the grid shrink the next one.
                dt = clamped ? std::max(trial, saved) : trial;
            } else {
                dt = trial;
            }
            if (!std::isfinite(y)) throw Error("scalar integration diverged");
        }
        t = target;
        out.values.push_back(y);
        if (std::abs(y) > opts.ceiling) {
            out.hit_ceiling = true;
            break;
        }
    }
    return out;
}

}  // namespace rotbath::ode
