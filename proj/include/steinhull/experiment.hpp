#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "steinhull/blocks.hpp"
#include "steinhull/config.hpp"
#include "steinhull/model.hpp"
#include "steinhull/penalties.hpp"

namespace steinhull {

/// Spectrum length used for a config: n_max when set, otherwise twice the
/// energy cutoff of the smallest epsilon (or the explicit scheme's N).
std::size_t resolve_n_max(const ExperimentConfig& config);

OperatorSpectrum build_spectrum(const ExperimentConfig& config);
SignalCoefficients build_signal(const ExperimentConfig& config, std::size_t n_max);
BlockScheme build_scheme(const ExperimentConfig& config, double epsilon,
                         const OperatorSpectrum& spectrum);
PenaltyValues build_penalty(const ExperimentConfig& config, const BlockStats& stats,
                            const OperatorSpectrum& spectrum, std::uint64_t seed);

struct RiskRow {
    double epsilon = 0.0;
    std::string estimator;
    double mc_risk = 0.0;
    double mc_std_error = 0.0;
    double oracle_risk_blockwise = 0.0;
    double oracle_risk_monotone = 0.0;
    double ratio_blockwise = 0.0;
    double ratio_monotone = 0.0;
    double max_pen_over_sigma2 = 0.0;
    double rho_eps = 0.0;
};

struct RiskReport {
    std::vector<RiskRow> rows;
};

/// For each epsilon: Monte-Carlo risk of the penalized Stein estimator and
/// of the URE baseline against the exact blockwise and monotone oracle risks.
RiskReport run_oracle_ratio(const ExperimentConfig& config);

void write_report(std::ostream& os, const RiskReport& report);

}  // namespace steinhull
