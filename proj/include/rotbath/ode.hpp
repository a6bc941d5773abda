#pragma once

#include <functional>
#include <span>
#include <vector>

namespace rotbath::ode {

struct ScalarOptions {
    double rel_tol = 1e-14;
    double abs_tol = 1e-15;
    // Integration stops once |y| exceeds this; remaining grid points are not produced.
    double ceiling = 1e12;
};

struct ScalarSolution {
    std::vector<double> values;  // one per produced grid point
    bool hit_ceiling = false;
};

// Adaptive Dormand-Prince 5(4) integration of y' = f(y) from grid[0], stepping
// exactly onto every grid point. grid must be nondecreasing.
ScalarSolution integrate_autonomous(const std::function<double(double)>& rhs, double y0,
                                    std::span<const double> grid, const ScalarOptions& opts = {});

}  // namespace rotbath::ode
