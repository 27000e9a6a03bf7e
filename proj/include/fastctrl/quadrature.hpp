#pragma once

#include <functional>

namespace fastctrl {

// Adaptive Simpson integration on [a, b]. Tolerance is relative to the
// integral magnitude with abs_floor as an absolute fallback for near-zero
// values. Throws QuadratureNotConverged when the recursion depth limit is hit
// before the local error bound is met.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double rel_tol, double abs_floor = 1e-300, int max_depth = 48);

// Composite-trapezoid integration on a uniform grid, doubling the node count
// until two successive levels agree to rel_tol. Suitable for smooth
// integrands, superalgebraic when the integrand vanishes to all orders at the
// end points. Throws QuadratureNotConverged past max_nodes.
double trapezoid_doubling(const std::function<double(double)>& f, double a, double b,
                          double rel_tol, int min_nodes = 64, int max_nodes = 1 << 22);

}  // namespace fastctrl
