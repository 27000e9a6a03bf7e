// fastctrl: batch experiments on fast boundary controls for 1-D spectral
// control systems (moment-method Gram costs, biorthogonal synthesis,
// inequality verification).

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "commands.hpp"

namespace {

using nlohmann::json;

std::vector<double> parse_grid(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fast boundary controls for 1-D spectral systems"};
    app.require_subcommand(1);

    std::string config_path, preset, kind, out, t_grid_csv, y0_csv, alpha_grid_csv;
    double alpha = -1, rate = -1, length = -1, gamma = -1, T = -1, delta = -1, perturb = -1;
    int modes = -1, digits = -1, samples = -1;
    long long seed = -1, y0_seed = -1;
    bool with_biorth = false, informational = false;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "JSON config file; flags override");
        cmd->add_option("--preset", preset,
                        "power-law | two-sided-power-law | periodic-kdv | fractional-heat | "
                        "fractional-schrodinger");
        cmd->add_option("--alpha", alpha, "asymptotic exponent");
        cmd->add_option("--rate", rate, "asymptotic prefactor R");
        cmd->add_option("--modes", modes, "mode count N");
        cmd->add_option("--kind", kind, "parabolic | dispersive");
        cmd->add_option("--length", length, "domain length for the PDE presets");
        cmd->add_option("--gamma", gamma, "fractional Laplacian power");
        cmd->add_option("--perturb", perturb, "perturbation amplitude");
        cmd->add_option("--seed", seed, "generator seed");
        cmd->add_option("--delta", delta, "multiplier margin delta");
        cmd->add_option("--digits", digits, "working decimal precision (0: per-kind default)");
        cmd->add_option("--out", out, "output directory");
    };

    CLI::App* spectrum = app.add_subcommand("spectrum", "emit spectrum JSON and fit report");
    add_common(spectrum);

    CLI::App* synth = app.add_subcommand(
        "synth", "synthesize gram and biorthogonal controls, simulate, report norms");
    add_common(synth);
    synth->add_option("--T", T, "control horizon");
    synth->add_option("--y0-seed", y0_seed, "seed for the random unit initial state");
    synth->add_option("--y0", y0_csv, "explicit initial coefficients (comma list)");
    synth->add_option("--samples", samples, "control sample count");

    CLI::App* sweep =
        app.add_subcommand("cost-sweep", "truncated cost and lower bound over a T grid");
    add_common(sweep);
    sweep->add_option("--t-grid", t_grid_csv, "comma-separated control times");
    sweep->add_flag("--with-biorthogonal", with_biorth,
                    "also synthesize the biorthogonal upper estimate");

    CLI::App* lemma = app.add_subcommand("lemma-verify", "run the inequality suite");
    add_common(lemma);
    lemma->add_option("--alpha-grid", alpha_grid_csv, "comma-separated alpha grid");
    lemma->add_flag("--informational", informational, "report violations without failing");

    CLI11_PARSE(app, argc, argv);

    json cfg = fastctrl::cli::default_config();
    try {
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) {
                std::cerr << "configuration error: cannot open " << config_path << "\n";
                return fastctrl::cli::kExitConfig;
            }
            cfg = fastctrl::cli::merge_config(cfg, json::parse(in));
        }
        json flags;
        if (!preset.empty()) flags["preset"] = preset;
        if (!kind.empty()) flags["kind"] = kind;
        if (!out.empty()) flags["out"] = out;
        if (alpha >= 0) flags["alpha"] = alpha;
        if (rate >= 0) flags["rate"] = rate;
        if (length >= 0) flags["length"] = length;
        if (gamma >= 0) flags["gamma"] = gamma;
        if (T >= 0) flags["T"] = T;
        if (delta >= 0) flags["delta"] = delta;
        if (perturb >= 0) flags["perturb"] = perturb;
        if (modes >= 0) flags["modes"] = modes;
        if (digits >= 0) flags["digits"] = digits;
        if (samples >= 0) flags["samples"] = samples;
        if (seed >= 0) flags["seed"] = seed;
        if (y0_seed >= 0) flags["y0_seed"] = y0_seed;
        if (!t_grid_csv.empty()) flags["t_grid"] = parse_grid(t_grid_csv);
        if (!alpha_grid_csv.empty()) flags["alpha_grid"] = parse_grid(alpha_grid_csv);
        if (!y0_csv.empty()) flags["y0"] = parse_grid(y0_csv);
        if (with_biorth) flags["with_biorthogonal"] = true;
        if (informational) flags["informational"] = true;
        cfg = fastctrl::cli::merge_config(cfg, flags);
    } catch (const std::exception& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return fastctrl::cli::kExitConfig;
    }

    if (spectrum->parsed()) return fastctrl::cli::cmd_spectrum(cfg);
    if (synth->parsed()) return fastctrl::cli::cmd_synth(cfg);
    if (sweep->parsed()) return fastctrl::cli::cmd_cost_sweep(cfg);
    if (lemma->parsed()) return fastctrl::cli::cmd_lemma_verify(cfg);
    return fastctrl::cli::kExitConfig;
}
