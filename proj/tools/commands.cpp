#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>

#include "fastctrl/biorthogonal.hpp"
#include "fastctrl/csvio.hpp"
#include "fastctrl/gram.hpp"
#include "fastctrl/lemmas.hpp"
#include "fastctrl/prng.hpp"
#include "fastctrl/simulation.hpp"
#include "fastctrl/spectrum.hpp"

namespace fastctrl::cli {

namespace {

using nlohmann::json;

std::string timestamp() {
    auto now = std::chrono::system_clock::now();
    auto t = std::chrono::system_clock::to_time_t(now);
    char buf[64];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%S", std::gmtime(&t));
    return buf;
}

void write_config_comments(CsvWriter& csv, const json& cfg) {
    csv.comment("timestamp", timestamp());
    for (auto it = cfg.begin(); it != cfg.end(); ++it)
        csv.comment(it.key(), it.value().is_string() ? it.value().get<std::string>()
                                                     : it.value().dump());
}

SystemKind parse_kind(const std::string& s) {
    if (s == "parabolic") return SystemKind::Parabolic;
    if (s == "dispersive") return SystemKind::Dispersive;
    throw DomainError("kind must be 'parabolic' or 'dispersive'");
}

SpectralSystem build_system(const json& cfg) {
    const std::string preset = cfg.at("preset").get<std::string>();
    if (preset == "power-law") {
        return make_power_law_spectrum(
            cfg.at("alpha").get<double>(), cfg.at("rate").get<double>(),
            cfg.at("modes").get<int>(), cfg.at("perturb").get<double>(),
            cfg.at("seed").get<std::uint64_t>(), parse_kind(cfg.at("kind").get<std::string>()));
    }
    if (preset == "two-sided-power-law") {
        return make_two_sided_spectrum(
            cfg.at("alpha").get<double>(), cfg.at("rate").get<double>(),
            cfg.at("modes").get<int>(), cfg.at("perturb").get<double>(),
            cfg.at("seed").get<std::uint64_t>());
    }
    if (preset == "periodic-kdv") {
        return periodic_kdv_spectrum(cfg.at("length").get<double>(), cfg.at("modes").get<int>());
    }
    if (preset == "fractional-heat") {
        return fractional_spectrum(cfg.at("gamma").get<double>(), cfg.at("length").get<double>(),
                                   cfg.at("modes").get<int>(), SystemKind::Parabolic);
    }
    if (preset == "fractional-schrodinger") {
        return fractional_spectrum(cfg.at("gamma").get<double>(), cfg.at("length").get<double>(),
                                   cfg.at("modes").get<int>(), SystemKind::Dispersive);
    }
    throw DomainError("unknown preset '" + preset + "'");
}

std::filesystem::path out_dir(const json& cfg) {
    std::filesystem::path dir = cfg.at("out").get<std::string>();
    std::filesystem::create_directories(dir);
    return dir;
}

int guarded(const json& cfg, const std::function<int(const json&)>& body) {
    try {
        return body(cfg);
    } catch (const PrecisionInsufficient& e) {
        std::cerr << "precision error: " << e.what() << " (condition estimate "
                  << e.condition_estimate << ")\n";
        return kExitPrecision;
    } catch (const std::exception& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return kExitConfig;
    }
}

PrecisionContext context_for(const json& cfg, const SpectralSystem& sys) {
    int digits = cfg.at("digits").get<int>();
    if (digits == 0) return default_gram_precision(sys.kind);
    return PrecisionContext(digits);
}

}  // namespace

json default_config() {
    return json{{"preset", "power-law"},
                {"alpha", 2.0},
                {"rate", 1.0},
                {"modes", 8},
                {"perturb", 0.0},
                {"seed", 0},
                {"kind", "parabolic"},
                {"length", 2.0 * 3.14159265358979323846},
                {"gamma", 1.0},
                {"T", 0.5},
                {"t_grid", json::array({0.5, 0.35, 0.25, 0.18, 0.12, 0.08})},
                {"delta", 0.05},
                {"digits", 0},  // 0: per-kind default
                {"samples", 16385},
                {"y0_seed", 1},
                {"with_biorthogonal", false},
                {"informational", false},
                {"out", "fastctrl_out"}};
}

json merge_config(json a, const json& b) {
    for (auto it = b.begin(); it != b.end(); ++it) a[it.key()] = it.value();
    return a;
}

int cmd_spectrum(const json& cfg) {
    return guarded(cfg, [](const json& c) {
        SpectralSystem sys = build_system(c);
        auto dir = out_dir(c);

        std::ofstream js(dir / "spectrum.json");
        js << to_json(sys).dump(2) << "\n";

        CsvWriter csv((dir / "asymptotics.csv").string());
        write_config_comments(csv, c);
        csv.header({"n_modes", "gap", "fitted_exponent", "fitted_prefactor", "max_residual"});
        if (sys.size() >= 8) {
            FitReport fit = validate_asymptotics(sys);
            csv.row({CsvWriter::format(static_cast<double>(sys.size())),
                     CsvWriter::format(spectral_gap(sys)), CsvWriter::format(fit.exponent),
                     CsvWriter::format(fit.prefactor), CsvWriter::format(fit.max_residual)});
            std::cout << "spectrum: " << sys.size() << " modes, gap " << spectral_gap(sys)
                      << ", fitted exponent " << fit.exponent << "\n";
        } else {
            csv.row({CsvWriter::format(static_cast<double>(sys.size())),
                     CsvWriter::format(spectral_gap(sys)), "", "", ""});
            std::cout << "spectrum: " << sys.size()
                      << " modes (too few for an asymptotic fit)\n";
        }
        return kExitOk;
    });
}

int cmd_synth(const json& cfg) {
    return guarded(cfg, [](const json& c) {
        SpectralSystem sys = build_system(c);
        const double T = c.at("T").get<double>();
        auto dir = out_dir(c);

        std::vector<std::complex<double>> y0;
        if (c.contains("y0") && c.at("y0").is_array()) {
            for (auto& v : c.at("y0")) y0.push_back({v.get<double>(), 0.0});
            if (y0.size() != sys.size()) throw DomainError("y0 length must match mode count");
        } else {
            y0 = random_unit_vector(sys.size(), c.at("y0_seed").get<std::uint64_t>(),
                                    sys.kind == SystemKind::Parabolic);
        }
        double y0_norm = 0.0;
        for (auto& v : y0) y0_norm += std::norm(v);
        y0_norm = std::sqrt(y0_norm);

        GramSystem gs = gram_matrix(sys, T, context_for(c, sys));
        MinimalControl mc = minimal_norm_control(gs, y0, c.at("samples").get<int>());

        SynthesisOptions opts;
        opts.delta = c.at("delta").get<double>();
        ControlSignal ub = synthesize_control(sys, y0, T, opts);

        ModalState s0{y0, 0.0};
        double res_gram = y0_norm == 0.0
                              ? 0.0
                              : residual_norm(forward_simulate(sys, s0, mc.signal, T)) / y0_norm;
        double res_biorth =
            y0_norm == 0.0 ? 0.0
                           : residual_norm(forward_simulate(sys, s0, ub, T)) / y0_norm;

        CsvWriter csv((dir / "synth.csv").string());
        write_config_comments(csv, c);
        csv.header({"method", "l2_norm", "linf_norm", "residual_ratio"});
        csv.row({"gram", CsvWriter::format(mc.l2_norm), CsvWriter::format(mc.signal.linf),
                 CsvWriter::format(res_gram)});
        csv.row({"biorthogonal", CsvWriter::format(ub.l2), CsvWriter::format(ub.linf),
                 CsvWriter::format(res_biorth)});
        std::cout << "synth: gram |u| = " << mc.l2_norm << " (residual " << res_gram
                  << "), biorthogonal |u| = " << ub.l2 << " (residual " << res_biorth << ")\n";
        return kExitOk;
    });
}

int cmd_cost_sweep(const json& cfg) {
    return guarded(cfg, [](const json& c) {
        SpectralSystem sys = build_system(c);
        auto dir = out_dir(c);
        std::vector<double> grid = c.at("t_grid").get<std::vector<double>>();
        if (grid.size() < 2) throw DomainError("t_grid needs at least two times");
        std::sort(grid.begin(), grid.end(), std::greater<double>());
        PrecisionContext ctx = context_for(c, sys);
        const bool with_biorth = c.at("with_biorthogonal").get<bool>();
        const double delta = c.at("delta").get<double>();

        struct Row {
            double T, cost, lower, cond, biorth;
        };
        // Sweep points run in a worker pool; rows are emitted in grid order.
        std::vector<std::future<Row>> futures;
        for (double T : grid) {
            futures.push_back(std::async(std::launch::async, [&sys, &ctx, with_biorth, delta,
                                                              T]() {
                GramSystem gs = gram_matrix(sys, T, ctx);
                Row r{T, truncated_cost(gs), lower_bound_cost(gs), gs.condition_estimate, 0.0};
                if (with_biorth) {
                    SynthesisOptions opts;
                    opts.delta = delta;
                    auto dir_worst = worst_initial_direction(gs);
                    r.biorth = synthesize_control(sys, dir_worst, T, opts).l2;
                }
                return r;
            }));
        }
        std::vector<Row> rows;
        for (auto& f : futures) rows.push_back(f.get());

        CsvWriter csv((dir / "cost_sweep.csv").string());
        write_config_comments(csv, c);
        csv.header({"T", "cost", "lower_bound", "biorth_upper", "condition_estimate",
                    "digits"});
        for (auto& r : rows)
            csv.row({CsvWriter::format(r.T), CsvWriter::format(r.cost),
                     CsvWriter::format(r.lower), CsvWriter::format(r.biorth),
                     CsvWriter::format(r.cond),
                     CsvWriter::format(static_cast<double>(ctx.digits))});

        // ln(cost) against the candidate abscissas T^(-p).
        auto fit_for = [&](double p, const std::vector<double>& ys) {
            std::vector<double> xs;
            for (auto& r : rows) xs.push_back(std::pow(r.T, -p));
            return fit_line(xs, ys);
        };
        std::vector<double> lc, lb;
        for (auto& r : rows) {
            lc.push_back(std::log(r.cost));
            lb.push_back(std::log(r.lower));
        }
        const double a = sys.alpha;
        CsvWriter fitcsv((dir / "fit_summary.csv").string());
        write_config_comments(fitcsv, c);
        fitcsv.header({"quantity", "abscissa_power", "slope", "intercept", "r2"});
        for (double p : {1.0 / (a - 1.0), 1.0 / a, 1.0 / (a - 1.5)}) {
            auto fc = fit_for(p, lc);
            auto fl = fit_for(p, lb);
            fitcsv.row({"cost", CsvWriter::format(p), CsvWriter::format(fc.slope),
                        CsvWriter::format(fc.intercept), CsvWriter::format(fc.r2)});
            fitcsv.row({"lower_bound", CsvWriter::format(p), CsvWriter::format(fl.slope),
                        CsvWriter::format(fl.intercept), CsvWriter::format(fl.r2)});
        }
        auto main_fit = fit_for(1.0 / (a - 1.0), lc);
        std::cout << "cost-sweep: " << rows.size() << " points, ln(cost) vs T^(-"
                  << 1.0 / (a - 1.0) << ") slope " << main_fit.slope << " r2 " << main_fit.r2
                  << "\n";
        return kExitOk;
    });
}

int cmd_lemma_verify(const json& cfg) {
    return guarded(cfg, [](const json& c) {
        auto dir = out_dir(c);
        std::vector<double> alphas = c.contains("alpha_grid")
                                         ? c.at("alpha_grid").get<std::vector<double>>()
                                         : default_alpha_grid();
        bool informational = c.at("informational").get<bool>();
        for (double a : alphas)
            if (a < 2.0) informational = true;  // outside the proven range: report only

        auto xs = default_x_grid();
        auto reports = verify_inequality_suite(alphas, xs);

        CsvWriter csv((dir / "lemma.csv").string());
        write_config_comments(csv, c);
        csv.header({"check", "value", "reference", "max_slack", "witness_alpha", "witness_x"});
        const double pi = 3.14159265358979323846;
        double worst = -1e300;
        for (auto& rep : reports) {
            worst = std::max(worst, rep.max_slack);
            csv.row({rep.name, "", "", CsvWriter::format(rep.max_slack),
                     rep.witnesses.empty() ? "" : CsvWriter::format(rep.witnesses[0].first),
                     rep.witnesses.empty() ? "" : CsvWriter::format(rep.witnesses[0].second)});
        }
        for (double a : alphas) {
            if (a <= 1.0) continue;
            double quad = integral_I(a);
            double closed = pi / std::sin(pi / a);
            csv.row({"beta_identity_I", CsvWriter::format(quad), CsvWriter::format(closed),
                     CsvWriter::format(std::abs(quad - closed) / closed),
                     CsvWriter::format(a), ""});
        }
        for (double a : {2.0, 3.0}) {
            for (double x : {0.5, 1.0, 10.0}) {
                double quad = integral_W(a, x);
                double closed = integral_W_closed_form(a, x);
                csv.row({"w_closed_form", CsvWriter::format(quad), CsvWriter::format(closed),
                         CsvWriter::format(std::abs(quad - closed) / closed),
                         CsvWriter::format(a), CsvWriter::format(x)});
            }
        }
        csv.row({"harmonic_half", CsvWriter::format(harmonic_frac(0.5)),
                 CsvWriter::format(2.0 - 2.0 * std::log(2.0)), "", "", ""});
        csv.row({"hyp2f1_at_minus1", CsvWriter::format(hyp2f1(-0.5, -0.5, 0.5, -1.0)), "0.52",
                 "", "", ""});

        // Equality cases of the inequalities sit at rounding level; the
        // verification threshold matches the suite tolerance.
        const double slack_tol = 1e-9;
        bool violated = worst > slack_tol;
        std::cout << "lemma-verify: worst slack " << worst
                  << (violated ? (informational ? " (violations, informational mode)"
                                                : " (violations)")
                               : " (all inequalities hold)")
                  << "\n";
        if (violated && !informational) return kExitVerification;
        return kExitOk;
    });
}

}  // namespace fastctrl::cli
