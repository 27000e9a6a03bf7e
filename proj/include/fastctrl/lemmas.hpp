#pragma once

// Numeric evaluation of the special-function integrals and inequalities
// behind the canonical-product growth bounds:
//   U(x) = int_0^1 ((1+v)^(1/a) - (1-v)^(1/a)) / (v (v+x)) dv
//   V(x) = int_1^inf (v+1)^(1/a) / (v (v+x)) dv
//   W(x) = int_1^inf (v-1)^(1/a) / (v (v+x)) dv
//   I(a) = int_0^inf dt / (t^(1/a) (1+t)) = pi / sin(pi/a)
// plus the Gauss hypergeometric function and generalized harmonic numbers
// used in the x < 1 / x >= 1 case split.

#include <string>
#include <utility>
#include <vector>

namespace fastctrl {

double integral_U(double alpha, double x);
double integral_V(double alpha, double x);
double integral_W(double alpha, double x);
double integral_I(double alpha);

// Closed form pi ((x+1)^(1/a) - 1) / (x sin(pi/a)) of W.
double integral_W_closed_form(double alpha, double x);

// Gauss 2F1 for z in [-1, 1); Euler transformation maps z < 0 into (0, 1/2],
// the z -> 1-z connection handles z near 1.
double hyp2f1(double a, double b, double c, double z);

// Generalized harmonic number H_r = int_0^1 (1 - t^r) / (1 - t) dt, r in (0,1].
double harmonic_frac(double r);

struct InequalityReport {
    std::string name;
    std::string grid_desc;
    double max_slack = 0.0;  // worst LHS - RHS; negative means satisfied
    std::vector<std::pair<double, double>> witnesses;  // (alpha, x) worst-first
};

// The inequality chain: (a) x^(1-1/a)(U+V) <= pi/sin(pi/a);
// (b) x^(1-1/a) W <= pi/sin(pi/a); (c) 1 - 0.52 a + a 2^(1/a) <= pi/sin(pi/a);
// (d) 1 - x^a <= (1+x)^(a-1)(1-x) on [0,1];
// (e) sqrt(x) U_{a=2}(x) <= 1 on (0,1].
// Violations are reported, never thrown.
std::vector<InequalityReport> verify_inequality_suite(const std::vector<double>& alpha_grid,
                                                      const std::vector<double>& x_grid);

std::vector<double> default_alpha_grid();
std::vector<double> default_x_grid();

}  // namespace fastctrl
