#pragma once

#include <cstddef>
#include <vector>

#include "steinhull/blocks.hpp"
#include "steinhull/model.hpp"

namespace steinhull {

/// Filter constant on each block and zero beyond N. lam[j - 1] is the
/// value on block j.
class BlockFilter {
public:
    BlockFilter(BlockScheme scheme, std::vector<double> lam);

    const BlockScheme& scheme() const { return scheme_; }
    const std::vector<double>& values() const { return lam_; }
    double value(std::size_t j) const { return lam_[j - 1]; }

    /// Per-index coefficients lambda_1..lambda_n.
    std::vector<double> expand(std::size_t n) const;

private:
    BlockScheme scheme_;
    std::vector<double> lam_;
};

/// Nonincreasing filter with values in [0, 1]; zero beyond its length.
class MonotoneFilter {
public:
    explicit MonotoneFilter(std::vector<double> lam);

    const std::vector<double>& values() const { return lam_; }
    std::vector<double> expand(std::size_t n) const;

private:
    std::vector<double> lam_;
};

/// theta_hat_k = lambda_k b_k^{-1} y_k.
SignalCoefficients apply_filter(const std::vector<double>& lambda, const Observation& obs,
                                const OperatorSpectrum& spectrum);

template <typename Filter>
SignalCoefficients apply_filter(const Filter& filter, const Observation& obs,
                                const OperatorSpectrum& spectrum) {
    return apply_filter(filter.expand(obs.y.size()), obs, spectrum);
}

/// sum (1 - lambda_k)^2 theta_k^2 + eps^2 sum lambda_k^2 b_k^{-2} + tail_energy.
double quadratic_risk(const std::vector<double>& lambda, const SignalCoefficients& signal,
                      const OperatorSpectrum& spectrum, double epsilon);

template <typename Filter>
double quadratic_risk(const Filter& filter, const SignalCoefficients& signal,
                      const OperatorSpectrum& spectrum, double epsilon) {
    return quadratic_risk(filter.expand(signal.size()), signal, spectrum, epsilon);
}

double loss(const SignalCoefficients& estimate, const SignalCoefficients& signal);

/// Signal energy on each block, ||theta||^2_(j).
std::vector<double> block_signal_energy(const SignalCoefficients& signal, const BlockScheme& scheme);

/// Energy of the signal beyond the scheme's last index, tail_energy included.
double signal_tail(const SignalCoefficients& signal, const BlockScheme& scheme);

/// Risk minimiser over blockwise constant filters.
BlockFilter blockwise_oracle(const SignalCoefficients& signal, const BlockStats& stats);

/// Exact risk of the blockwise oracle, sum_j E_j sigma_j^2 / (E_j + sigma_j^2) + tail.
double blockwise_oracle_risk(const SignalCoefficients& signal, const BlockStats& stats);

/// Weighted decreasing isotonic regression by pool-adjacent-violators.
/// Ties between equal neighbouring levels are merged left to right.
std::vector<double> isotonic_decreasing(const std::vector<double>& values,
                                        const std::vector<double>& weights);

/// Risk minimiser over monotone filters on indices 1..n_max.
MonotoneFilter monotone_oracle(const SignalCoefficients& signal, const OperatorSpectrum& spectrum,
                               double epsilon, std::size_t n_max);

}  // namespace steinhull
