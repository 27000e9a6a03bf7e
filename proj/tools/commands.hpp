#pragma once

// Experiment-runner commands shared by the CLI binary and the acceptance
// suite. Each command validates its configuration, runs the computation and
// emits CSV/JSON artifacts under config["out"].

#include <string>

#include "json.hpp"

namespace fastctrl::cli {

// Exit codes: 0 success, 2 configuration error, 3 precision error,
// 4 verification failure.
constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitPrecision = 3;
constexpr int kExitVerification = 4;

nlohmann::json default_config();

// Merges b over a (b wins).
nlohmann::json merge_config(nlohmann::json a, const nlohmann::json& b);

int cmd_spectrum(const nlohmann::json& config);
int cmd_synth(const nlohmann::json& config);
int cmd_cost_sweep(const nlohmann::json& config);
int cmd_lemma_verify(const nlohmann::json& config);

}  // namespace fastctrl::cli
