#include "fastctrl/fit.hpp"

#include <algorithm>
#include <cmath>

#include "fastctrl/csvio.hpp"
#include "fastctrl/errors.hpp"

namespace fastctrl {

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw DomainError("fit_line: need >= 2 points of equal count");
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx, dy = y[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    LineFit out;
    if (sxx == 0.0) throw DomainError("fit_line: degenerate abscissa");
    out.slope = sxy / sxx;
    out.intercept = my - out.slope * mx;
    out.r2 = (syy == 0.0) ? 1.0 : (sxy * sxy) / (sxx * syy);
    return out;
}

BoundReport make_bound_report(std::string name, std::vector<BoundRow> rows,
                              bool with_log_term) {
    BoundReport rep;
    rep.name = std::move(name);
    rep.rows = std::move(rows);

    // Even-indexed rows calibrate; the final row is forced into the
    // calibration half so a monotone slack cannot leak past the envelope.
    auto is_calibration = [&](std::size_t i) {
        return i % 2 == 0 || i + 1 == rep.rows.size();
    };
    std::vector<double> cal_x, cal_s;
    for (std::size_t i = 0; i < rep.rows.size(); ++i) {
        if (!is_calibration(i)) continue;
        const auto& r = rep.rows[i];
        if (!std::isfinite(r.slack)) continue;  // exact zeros of the product
        cal_x.push_back(std::log1p(std::hypot(r.z_re, r.z_im)));
        cal_s.push_back(r.slack);
    }
    if (cal_x.size() < 2) throw DomainError("make_bound_report: calibration half too small");

    if (with_log_term) {
        rep.d = fit_line(cal_x, cal_s).slope;
        if (rep.d < 0.0) rep.d = 0.0;  // envelope only needs an upper slope
    }
    double c0 = -1e300;
    for (std::size_t i = 0; i < cal_x.size(); ++i)
        c0 = std::max(c0, cal_s[i] - rep.d * cal_x[i]);
    rep.c0 = c0;

    rep.max_violation = -1e300;
    for (std::size_t i = 0; i < rep.rows.size(); ++i) {
        if (is_calibration(i)) continue;
        const auto& r = rep.rows[i];
        if (!std::isfinite(r.slack)) continue;
        const double lx = std::log1p(std::hypot(r.z_re, r.z_im));
        rep.max_violation = std::max(rep.max_violation, r.slack - (rep.c0 + rep.d * lx));
        ++rep.n_validation;
    }
    return rep;
}

void write_bound_report_csv(const BoundReport& report, const std::string& path) {
    CsvWriter csv(path);
    csv.comment("name", report.name);
    csv.comment("c0", report.c0);
    csv.comment("d", report.d);
    csv.comment("max_violation", report.max_violation);
    csv.header({"z_re", "z_im", "log_abs", "slack"});
    for (const auto& r : report.rows)
        csv.row({CsvWriter::format(r.z_re), CsvWriter::format(r.z_im),
                 CsvWriter::format(r.log_abs), CsvWriter::format(r.slack)});
}

}  // namespace fastctrl
