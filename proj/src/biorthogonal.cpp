#include "fastctrl/biorthogonal.hpp"

#include <algorithm>
#include <cmath>
#include <future>

#include "fastctrl/csvio.hpp"
#include "fastctrl/errors.hpp"

namespace fastctrl {

namespace {

constexpr double kPi = 3.14159265358979323846;
using Cd = std::complex<double>;

double beta_dispersive(double T, double delta) { return T * (1.0 - delta) / 2.0; }

double beta_parabolic(double T, double delta, double alpha) {
    double s2 = std::sin(kPi / (2.0 * alpha));
    double s1 = std::sin(kPi / alpha);
    return (1.0 - delta) * T * std::pow(2.0 * s2, alpha) / (2.0 * std::pow(s1, alpha));
}

// Argument scaling of the multiplier in the parabolic symbol; together with
// beta_parabolic it makes the symbol's exponential type (1-delta) T / 2.
double parabolic_scale(double alpha) {
    double s2 = std::sin(kPi / (2.0 * alpha));
    double s1 = std::sin(kPi / alpha);
    return std::pow(s1, alpha) / std::pow(2.0 * s2, alpha);
}

// Phi_n(-y) = prod_{k != n} (1 + y / (lambda_k - lambda_n)) over stored modes.
double stored_product_shifted(const SpectralSystem& sys, std::size_t n_pos, double y) {
    double prod = 1.0;
    const double lam_n = sys.lambdas[n_pos];
    for (std::size_t k = 0; k < sys.size(); ++k) {
        if (k == n_pos) continue;
        prod *= 1.0 + y / (sys.lambdas[k] - lam_n);
    }
    return prod;
}

// Phi_n(-ix - lambda_n) = prod_{k != n} (lambda_k + ix) / (lambda_k - lambda_n).
Cd stored_product_line(const SpectralSystem& sys, std::size_t n_pos, double x) {
    Cd prod = 1.0;
    const double lam_n = sys.lambdas[n_pos];
    for (std::size_t k = 0; k < sys.size(); ++k) {
        if (k == n_pos) continue;
        prod *= Cd(sys.lambdas[k], x) / (sys.lambdas[k] - lam_n);
    }
    return prod;
}

int hp_digits_for(const MultiplierConfig& cfg, double y) {
    double depth = std::sqrt(cfg.nu * cfg.beta * std::abs(y));
    return std::clamp(static_cast<int>(depth / 2.302585) + 30, 30, 500);
}

}  // namespace

MultiplierConfig synthesis_multiplier(const SpectralSystem& sys, double T, double delta) {
    if (delta <= 0.0) throw DomainError("synthesis_multiplier: delta must be > 0");
    if (sys.alpha < 2.0)
        throw DomainError(
            "synthesis_multiplier: the multiplier construction needs alpha >= 2");
    double beta = sys.kind == SystemKind::Dispersive
                      ? beta_dispersive(T, delta)
                      : beta_parabolic(T, delta, sys.alpha);
    return link_beta_to_nu(sys.alpha, delta, beta);
}

std::complex<double> g_n(const SpectralSystem& sys, int n_index, double x, double T,
                         double delta) {
    if (sys.kind != SystemKind::Dispersive)
        throw DomainError("g_n: dispersive systems only");
    MultiplierConfig cfg = synthesis_multiplier(sys, T, delta);
    std::size_t pos = sys.position(n_index);
    double y = x + sys.lambdas[pos];
    return stored_product_shifted(sys, pos, y) * h_beta(cfg, y);
}

std::complex<double> h_n(const SpectralSystem& sys, int n_index, double x, double T,
                         double delta) {
    if (sys.kind != SystemKind::Parabolic)
        throw DomainError("h_n: parabolic systems only");
    MultiplierConfig cfg = synthesis_multiplier(sys, T, delta);
    const double c = parabolic_scale(sys.alpha);
    std::size_t pos = sys.position(n_index);
    double denom = h_beta_imag_hp(cfg, sys.lambdas[pos] * c, 40);
    if (!(denom > 1e-280))
        throw DivisionDegenerate("h_n: multiplier denominator underflowed");
    return stored_product_line(sys, pos, x) * h_beta(cfg, c * x) / denom;
}

TailCertificate certify_quadratic_tail(const std::function<Cd(double)>& freq_fn,
                                       double center, double tol,
                                       const SynthesisOptions& opts) {
    const int probes_per_band = 48;
    double band_lo = opts.probe_start;
    double prev_c = -1.0;
    for (int band = 0; band < opts.max_band_doublings; ++band) {
        double band_hi = 2.0 * band_lo;
        double c = 0.0;
        for (int i = 0; i < probes_per_band; ++i) {
            double r = band_lo * std::pow(band_hi / band_lo,
                                          (i + 0.5) / static_cast<double>(probes_per_band));
            for (double s : {-1.0, 1.0}) {
                double x = center + s * r;
                double mag = std::abs(freq_fn(x));
                c = std::max(c, mag * (1.0 + r * r));
            }
        }
        c *= 4.0;  // sampling safety margin
        double tail = (c / kPi) * (kPi / 2.0 - std::atan(band_lo));
        if (tail <= tol && prev_c >= 0.0 && c <= prev_c) {
            TailCertificate cert;
            cert.cutoff = band_hi;
            cert.constant = c;
            cert.tail_bound = tail;
            return cert;
        }
        prev_c = c;
        band_lo = band_hi;
    }
    throw TailNotBounded("certify_quadratic_tail: decay certificate not established");
}

InversionResult fourier_invert(const std::function<Cd(double)>& freq_fn, double center,
                               const TailCertificate& cert, double T, double t_lo,
                               double t_hi, int time_points, double grid_periods) {
    if (time_points < 2) throw DomainError("fourier_invert: need >= 2 time points");
    const double dx = 2.0 * kPi / (grid_periods * T);
    const long half = static_cast<long>(std::ceil(cert.cutoff / dx));

    // Frequency samples on the symmetric grid center + m dx, m = -half..half.
    std::vector<Cd> gv(2 * half + 1);
    for (long m = -half; m <= half; ++m) gv[m + half] = freq_fn(center + m * dx);
    gv.front() *= 0.5;  // trapezoid end weights
    gv.back() *= 0.5;

    InversionResult out;
    out.x_cutoff = cert.cutoff;
    out.tail_bound = cert.tail_bound;
    out.time_grid.resize(time_points);
    out.samples.resize(time_points);
    const double dt = (t_hi - t_lo) / (time_points - 1);
    for (int j = 0; j < time_points; ++j) {
        const double t = t_lo + j * dt;
        out.time_grid[j] = t;
        // sum_m gv[m] e^{i (center + m dx) t}, rotation with periodic refresh.
        const Cd step = std::polar(1.0, dx * t);
        Cd rot = std::polar(1.0, -static_cast<double>(half) * dx * t);
        Cd acc = 0.0;
        for (long m = 0; m < 2 * half + 1; ++m) {
            if ((m & 255) == 0)
                rot = std::polar(1.0, (static_cast<double>(m - half)) * dx * t);
            acc += gv[m] * rot;
            rot *= step;
        }
        out.samples[j] = acc * std::polar(dx / (2.0 * kPi), center * t);
    }
    return out;
}

InversionResult invert_to_time(const std::function<Cd(double)>& freq_fn, double center,
                               double T, double tol, int time_points,
                               const SynthesisOptions& opts) {
    TailCertificate cert = certify_quadratic_tail(freq_fn, center, tol, opts);
    return fourier_invert(freq_fn, center, cert, T, -T / 2.0, T / 2.0, time_points,
                          opts.grid_periods);
}

namespace {

// Required time samples for alias-accurate biorthogonality sums downstream.
int required_time_points(double T, double x_cutoff, double lambda_max) {
    double bandwidth = 1.15 * (x_cutoff + 2.0 * lambda_max) + 64.0;
    return static_cast<int>(std::ceil(T * bandwidth / (2.0 * kPi))) + 1;
}

}  // namespace

BiorthogonalFamily synthesize_family(const SpectralSystem& sys, double T,
                                     const SynthesisOptions& opts) {
    if (T <= 0.0) throw DomainError("synthesize_family: T must be > 0");
    MultiplierConfig cfg = synthesis_multiplier(sys, T, opts.delta);
    const bool dispersive = sys.kind == SystemKind::Dispersive;
    const double scale = dispersive ? 1.0 : parabolic_scale(sys.alpha);
    const std::size_t n_modes = sys.size();

    // Parabolic normalizing denominators (positive, cancellation-free).
    std::vector<double> denom(n_modes, 1.0);
    if (!dispersive) {
        for (std::size_t p = 0; p < n_modes; ++p) {
            denom[p] = h_beta_imag_hp(cfg, sys.lambdas[p] * scale, 40);
            if (!(denom[p] > 1e-280))
                throw DivisionDegenerate("synthesize_family: multiplier denominator underflowed");
        }
    }

    // Every mode's frequency grid is center_n + m dx (centers at -lambda_n or
    // 0), so the multiplier arguments land on the shared master grid
    // {j * dy_master}: one extended-precision batch serves the whole family,
    // and the tail certification scans the same grid values. The batch grows
    // geometrically until every mode certifies.
    const double dx = 2.0 * kPi / (opts.grid_periods * T);
    const double dy_master = dispersive ? dx : scale * dx;
    std::vector<double> h_master;
    auto extend_master = [&](long count) {
        if (count <= static_cast<long>(h_master.size())) return;
        long old = static_cast<long>(h_master.size());
        int digits = hp_digits_for(cfg, dy_master * static_cast<double>(count));
        auto chunk = h_beta_real_batch(cfg, dy_master * static_cast<double>(old), dy_master,
                                       static_cast<int>(count - old), digits);
        h_master.insert(h_master.end(), chunk.begin(), chunk.end());
    };
    auto h_at = [&](double y) {
        long idx = std::lround(std::abs(y) / dy_master);
        if (idx >= static_cast<long>(h_master.size()))
            throw DomainError("synthesize_family: multiplier grid overrun");
        return h_master[idx];
    };

    // |symbol| for mode p at frequency offset m * dx from its center.
    auto symbol_mag = [&](std::size_t p, long m) {
        const double r = m * dx;
        if (dispersive)
            return std::abs(stored_product_shifted(sys, p, r)) * std::abs(h_at(r));
        return std::abs(stored_product_line(sys, p, r)) * std::abs(h_at(scale * r)) /
               denom[p];
    };

    // Initial reach: where the saddle-type multiplier decay
    // e^{nu - sqrt(nu beta y)} alone is far below tol.
    double guess = std::pow((cfg.nu + std::log(1.0 / opts.freq_tol) + 20.0), 2.0) /
                   (cfg.nu * cfg.beta);
    guess = std::max(guess, 4.0 * opts.probe_start);
    extend_master(static_cast<long>(std::ceil(guess / dy_master)) + 2);

    std::vector<TailCertificate> certs(n_modes);
    for (std::size_t p = 0; p < n_modes; ++p) {
        double band_lo = opts.probe_start;
        double prev_c = -1.0;
        bool done = false;
        for (int band = 0; band < opts.max_band_doublings && !done; ++band) {
            const double band_hi = 2.0 * band_lo;
            extend_master(static_cast<long>(std::ceil(band_hi / dx)) + 2);
            double c = 0.0;
            for (long m = static_cast<long>(band_lo / dx); m * dx <= band_hi; ++m) {
                const double r = m * dx;
                if (r < band_lo) continue;
                c = std::max(c, std::max(symbol_mag(p, m), symbol_mag(p, -m)) *
                                    (1.0 + r * r));
            }
            c *= 2.0;  // sampling safety margin (8+ grid points per oscillation)
            double tail = (c / kPi) * (kPi / 2.0 - std::atan(band_lo));
            if (tail <= opts.freq_tol && prev_c >= 0.0 && c <= prev_c) {
                certs[p].cutoff = band_hi;
                certs[p].constant = c;
                certs[p].tail_bound = tail;
                done = true;
            }
            prev_c = c;
            band_lo = band_hi;
        }
        if (!done)
            throw TailNotBounded("synthesize_family: decay certificate not established");
    }
    double x_cut_max = 0.0;
    for (auto& c : certs) x_cut_max = std::max(x_cut_max, c.cutoff);
    extend_master(static_cast<long>(std::ceil(x_cut_max * (dispersive ? 1.0 : scale) / dy_master)) + 2);

    double lambda_max = 0.0;
    for (double l : sys.lambdas) lambda_max = std::max(lambda_max, std::abs(l));
    const int time_points =
        opts.enforce_nyquist
            ? std::max(opts.time_points, required_time_points(T, x_cut_max, lambda_max))
            : opts.time_points;

    BiorthogonalFamily fam;
    fam.T = T;
    fam.kind = sys.kind;
    fam.delta = opts.delta;
    fam.indices = sys.indices;
    fam.samples.resize(n_modes);
    fam.x_cutoff = x_cut_max;
    for (auto& c : certs) fam.tail_bound = std::max(fam.tail_bound, c.tail_bound);

    auto invert_mode = [&](std::size_t p) {
        std::function<Cd(double)> fn;
        if (dispersive) {
            fn = [&, p](double x) -> Cd {
                double y = x + sys.lambdas[p];
                return stored_product_shifted(sys, p, y) * h_at(y);
            };
        } else {
            fn = [&, p](double x) -> Cd {
                return stored_product_line(sys, p, x) * h_at(scale * x) / denom[p];
            };
        }
        double center = dispersive ? -sys.lambdas[p] : 0.0;
        return fourier_invert(fn, center, certs[p], T, -T / 2.0, T / 2.0, time_points,
                              opts.grid_periods);
    };

    std::vector<std::future<InversionResult>> futures;
    futures.reserve(n_modes);
    for (std::size_t p = 0; p < n_modes; ++p)
        futures.push_back(std::async(std::launch::async, invert_mode, p));
    for (std::size_t p = 0; p < n_modes; ++p) {
        InversionResult r = futures[p].get();
        if (p == 0) fam.time_grid = r.time_grid;
        fam.samples[p] = std::move(r.samples);
    }
    return fam;
}

std::vector<std::vector<Cd>> biorthogonality_matrix(const BiorthogonalFamily& family,
                                                    const SpectralSystem& sys) {
    const std::size_t n = sys.size();
    if (family.samples.size() != n || family.indices != sys.indices)
        throw GridMismatch("biorthogonality_matrix: family does not match system");
    const std::size_t nt = family.time_grid.size();
    const double h = family.time_grid[1] - family.time_grid[0];

    std::vector<std::vector<Cd>> m(n, std::vector<Cd>(n));
    for (std::size_t row = 0; row < n; ++row) {
        for (std::size_t col = 0; col < n; ++col) {
            const double lam = sys.lambdas[col];
            Cd acc = 0.0;
            for (std::size_t j = 0; j < nt; ++j) {
                const double t = family.time_grid[j];
                Cd weight = family.kind == SystemKind::Dispersive
                                ? std::polar(1.0, lam * t)
                                : Cd(std::exp(lam * t), 0.0);
                Cd term = family.samples[row][j] * weight;
                if (j == 0 || j + 1 == nt) term *= 0.5;
                acc += term;
            }
            m[row][col] = acc * h;
        }
    }
    return m;
}

double biorthogonality_residual(const std::vector<std::vector<Cd>>& m) {
    double worst = 0.0;
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < m[i].size(); ++j) {
            Cd expect = i == j ? Cd(1.0, 0.0) : Cd(0.0, 0.0);
            worst = std::max(worst, std::abs(m[i][j] - expect));
        }
    return worst;
}

ControlSignal synthesize_control(const BiorthogonalFamily& family, const SpectralSystem& sys,
                                 const std::vector<std::complex<double>>& y0) {
    const std::size_t n = sys.size();
    if (y0.size() != n) throw DomainError("synthesize_control: y0 size mismatch");
    if (family.samples.size() != n || family.indices != sys.indices)
        throw GridMismatch("synthesize_control: family does not match system");

    const std::size_t nt = family.time_grid.size();
    std::vector<Cd> coeff(n);
    for (std::size_t k = 0; k < n; ++k) {
        Cd phase = family.kind == SystemKind::Dispersive
                       ? std::polar(1.0, -family.T * sys.lambdas[k] / 2.0)
                       : Cd(std::exp(-family.T * sys.lambdas[k] / 2.0), 0.0);
        coeff[k] = -(y0[k] / sys.bs[k]) * phase;
    }

    std::vector<Cd> values(nt, Cd(0.0, 0.0));
    for (std::size_t k = 0; k < n; ++k) {
        if (coeff[k] == Cd(0.0, 0.0)) continue;
        for (std::size_t j = 0; j < nt; ++j) values[j] += coeff[k] * family.samples[k][j];
    }
    return ControlSignal::from_samples(family.T, std::move(values));
}

ControlSignal synthesize_control(const SpectralSystem& sys,
                                 const std::vector<std::complex<double>>& y0, double T,
                                 const SynthesisOptions& opts) {
    return synthesize_control(synthesize_family(sys, T, opts), sys, y0);
}

ResidualPrediction predict_terminal_residual(const BiorthogonalFamily& family,
                                             const SpectralSystem& sys,
                                             const std::vector<Cd>& y0) {
    const std::size_t n = sys.size();
    if (y0.size() != n) throw DomainError("predict_terminal_residual: y0 size mismatch");
    auto m = biorthogonality_matrix(family, sys);
    const bool dispersive = family.kind == SystemKind::Dispersive;

    ResidualPrediction pred;
    double norm_sq = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        Cd rk = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            Cd damp = dispersive
                          ? std::polar(1.0, -(sys.lambdas[k] + sys.lambdas[j]) * family.T / 2.0)
                          : Cd(std::exp(-(sys.lambdas[k] + sys.lambdas[j]) * family.T / 2.0),
                               0.0);
            Cd delta = j == k ? Cd(1.0, 0.0) : Cd(0.0, 0.0);
            rk += y0[j] * (sys.bs[k] / sys.bs[j]) * damp * (delta - m[j][k]);
        }
        norm_sq += std::norm(rk);
    }
    pred.family_part = std::sqrt(norm_sq);

    // Cubic-interpolant error of the sampled control, bounded through fourth
    // differences (h^4 u'''' up to higher order).
    ControlSignal u = synthesize_control(family, sys, y0);
    double d4 = 0.0;
    for (std::size_t i = 0; i + 4 < u.values.size(); ++i) {
        Cd v = u.values[i] - 4.0 * u.values[i + 1] + 6.0 * u.values[i + 2] -
               4.0 * u.values[i + 3] + u.values[i + 4];
        d4 = std::max(d4, std::abs(v));
    }
    double b_norm = 0.0;
    for (auto& b : sys.bs) b_norm += std::norm(b);
    pred.sampling_part = std::sqrt(b_norm) * family.T * 0.03 * d4;
    pred.total = pred.family_part + pred.sampling_part;
    return pred;
}

InversionResult invert_to_time(const std::function<Cd(double)>& freq_fn,
                               const SpectralSystem& sys, int n_index, double T, double tol,
                               int time_points, const SynthesisOptions& opts) {
    double center =
        sys.kind == SystemKind::Dispersive ? -sys.lambda_of(n_index) : 0.0;
    return invert_to_time(freq_fn, center, T, tol, time_points, opts);
}

void write_signal_csv(const ControlSignal& u, const std::string& path) {
    CsvWriter csv(path);
    csv.comment("T", u.T);
    csv.comment("l2", u.l2);
    csv.comment("linf", u.linf);
    csv.header({"t", "re", "im"});
    for (std::size_t j = 0; j < u.values.size(); ++j)
        csv.row({CsvWriter::format(u.time_grid[j]), CsvWriter::format(u.values[j].real()),
                 CsvWriter::format(u.values[j].imag())});
}

void write_family_csv(const BiorthogonalFamily& family, const std::string& path) {
    CsvWriter csv(path);
    csv.comment("T", family.T);
    csv.comment("x_cutoff", family.x_cutoff);
    csv.comment("tail_bound", family.tail_bound);
    csv.header({"mode_index", "t", "re", "im"});
    for (std::size_t p = 0; p < family.samples.size(); ++p)
        for (std::size_t j = 0; j < family.samples[p].size(); ++j)
            csv.row({CsvWriter::format(family.indices[p]),
                     CsvWriter::format(family.time_grid[j]),
                     CsvWriter::format(family.samples[p][j].real()),
                     CsvWriter::format(family.samples[p][j].imag())});
}

}  // namespace fastctrl
