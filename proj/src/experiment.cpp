#include "steinhull/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "steinhull/csv_io.hpp"
#include "steinhull/filters.hpp"
#include "steinhull/montecarlo.hpp"
#include "steinhull/stein.hpp"

namespace steinhull {

namespace {

// Smallest m such that sum_{k<=m} (b_scale k^{-beta})^{-2} exceeds cap.
std::size_t power_cutoff(double beta, double b_scale, double cap) {
    double acc = 0.0;
    for (std::size_t k = 1;; ++k) {
        const double inv = std::pow(static_cast<double>(k), beta) / b_scale;
        acc += inv * inv;
        if (acc > cap) return k;
        if (k > 100000000) throw std::runtime_error("resolve_n_max: spectrum cutoff too large");
    }
}

double ratio_or_nan(double num, double den) {
    return den > 0.0 ? num / den : std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

std::size_t resolve_n_max(const ExperimentConfig& config) {
    std::size_t n = config.n_max;
    if (n == 0) {
        if (config.scheme == SchemeKind::explicit_boundaries) {
            n = config.boundaries.back() - 1;
        } else {
            for (double eps : config.epsilon_grid) {
                const std::size_t past = power_cutoff(config.beta, config.b_scale, geometric_params(eps).energy_cap);
                // past = N-bar + 1; the scheme's last block ends at K_J - 1
                std::size_t end = 1;
                for (std::size_t j = 1; end <= past - 1; ++j) end += geometric_block_lengths(eps, j).back();
                n = std::max({n, 2 * past, end - 1});
            }
        }
    }
    if (config.signal_kind == SignalKind::explicit_list) n = std::max(n, config.signal_params.size());
    return n;
}

OperatorSpectrum build_spectrum(const ExperimentConfig& config) {
    return power_spectrum(config.beta, config.b_scale, resolve_n_max(config));
}

SignalCoefficients build_signal(const ExperimentConfig& config, std::size_t n_max) {
    if (!config.signal_kind) throw std::invalid_argument("config: signal.kind is required");
    if (*config.signal_kind == SignalKind::explicit_list) {
        std::vector<double> padded = config.signal_params;
        padded.resize(n_max, 0.0);
        return make_signal(SignalKind::explicit_list, padded, n_max);
    }
    return make_signal(*config.signal_kind, config.signal_params, n_max);
}

BlockScheme build_scheme(const ExperimentConfig& config, double epsilon,
                         const OperatorSpectrum& spectrum) {
    if (config.scheme == SchemeKind::explicit_boundaries) return custom_scheme(config.boundaries);
    return weakly_geometric_scheme(epsilon, spectrum);
}

PenaltyValues build_penalty(const ExperimentConfig& config, const BlockStats& stats,
                            const OperatorSpectrum& spectrum, std::uint64_t seed) {
    switch (config.penalty) {
        case PenaltyChoice::none: return zero_penalty(stats.block_count());
        case PenaltyChoice::ct: return ct_penalty(stats, config.gamma);
        case PenaltyChoice::mc:
            return mc_penalty(stats, spectrum, config.alpha, config.level,
                              McOptions{config.penalty_reps, seed, 1e-9});
    }
    throw std::logic_error("build_penalty: unhandled penalty kind");
}

RiskReport run_oracle_ratio(const ExperimentConfig& config) {
    validate(config, true);
    const OperatorSpectrum spectrum = build_spectrum(config);
    const SignalCoefficients signal = build_signal(config, spectrum.size());
    const RandomStream root(config.master_seed);

    RiskReport report;
    for (std::size_t e = 0; e < config.epsilon_grid.size(); ++e) {
        const double eps = config.epsilon_grid[e];
        const BlockScheme scheme = build_scheme(config, eps, spectrum);
        const BlockStats stats = block_stats(scheme, spectrum, eps);
        const PenaltyValues pen = build_penalty(config, stats, spectrum, root.substream(2 * e).seed());

        const double oracle_block = blockwise_oracle_risk(signal, stats);
        const double oracle_mono = quadratic_risk(
            monotone_oracle(signal, spectrum, eps, spectrum.size()), signal, spectrum, eps);

        double max_ratio = 0.0;
        for (std::size_t j = 0; j < stats.block_count(); ++j) {
            max_ratio = std::max(max_ratio, pen.pen[j] / stats.sigma2[j]);
        }

        const RandomStream sims = root.substream(2 * e + 1);
        std::vector<double> loss_stein(config.reps), loss_ure(config.reps);
        parallel_for(config.reps, [&](std::size_t i) {
            RandomStream s = sims.substream(i);
            const Observation obs = observe(spectrum, signal, eps, s);
            const BlockEnergies energies = block_energies(obs, scheme, spectrum);
            loss_stein[i] = loss(apply_filter(penalized_stein_filter(energies, stats, pen), obs, spectrum), signal);
            loss_ure[i] = loss(apply_filter(ure_filter(energies, stats), obs, spectrum), signal);
        });

        const auto add_row = [&](const char* tag, const std::vector<double>& losses, double pen_ratio) {
            const McEstimate m = summarize(losses);
            RiskRow row;
            row.epsilon = eps;
            row.estimator = tag;
            row.mc_risk = m.mean;
            row.mc_std_error = m.std_error;
            row.oracle_risk_blockwise = oracle_block;
            row.oracle_risk_monotone = oracle_mono;
            row.ratio_blockwise = ratio_or_nan(m.mean, oracle_block);
            row.ratio_monotone = ratio_or_nan(m.mean, oracle_mono);
            row.max_pen_over_sigma2 = pen_ratio;
            row.rho_eps = stats.rho_eps;
            report.rows.push_back(row);
        };
        add_row("penalized_stein", loss_stein, max_ratio);
        add_row("ure", loss_ure, 0.0);
    }
    return report;
}

void write_report(std::ostream& os, const RiskReport& report) {
    os << "epsilon,estimator,mc_risk,mc_std_error,oracle_risk_blockwise,oracle_risk_monotone,"
          "ratio_blockwise,ratio_monotone,max_pen_over_sigma2,rho_eps\n";
    for (const RiskRow& r : report.rows) {
        os << format_double(r.epsilon) << ',' << r.estimator << ',' << format_double(r.mc_risk) << ','
           << format_double(r.mc_std_error) << ',' << format_double(r.oracle_risk_blockwise) << ','
           << format_double(r.oracle_risk_monotone) << ',' << format_double(r.ratio_blockwise) << ','
           << format_double(r.ratio_monotone) << ',' << format_double(r.max_pen_over_sigma2) << ','
           << format_double(r.rho_eps) << '\n';
    }
}

}  // namespace steinhull
