#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace fastctrl {

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
};

// Ordinary least squares y = slope*x + intercept.
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

// Power-law fit report for validate_asymptotics.
struct FitReport {
    double exponent = 0.0;
    double prefactor = 0.0;
    double max_residual = 0.0;  // max |lambda_n - R n^a| / n^(a-1)
};

// One evaluated point of a growth-bound check.
struct BoundRow {
    double z_re = 0.0;
    double z_im = 0.0;
    double log_abs = 0.0;  // ln of the checked quantity
    double slack = 0.0;    // log-excess over the leading-order envelope
};

// Calibrate-on-half / validate-on-half protocol for inequalities whose
// implicit constants are existential: the envelope c0 + d*ln(1+|z|) is fitted
// so it dominates the calibration half, then violations are measured on the
// validation half.
struct BoundReport {
    std::string name;
    std::vector<BoundRow> rows;
    double c0 = 0.0;
    double d = 0.0;
    double max_violation = 0.0;  // over the validation half; <= 0 means bound holds
    std::size_t n_validation = 0;
};

// rows[i].slack is checked against c0 + d*ln(1+|z_i|). Even-indexed rows
// calibrate, odd-indexed rows validate. with_log_term=false freezes d=0.
BoundReport make_bound_report(std::string name, std::vector<BoundRow> rows,
                              bool with_log_term = true);

// CSV rows (z_re, z_im, log_abs, slack) with the envelope in the header.
void write_bound_report_csv(const BoundReport& report, const std::string& path);

}  // namespace fastctrl
