#include "steinhull/filters.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "steinhull/montecarlo.hpp"

namespace steinhull {

namespace {
void require_unit_interval(const std::vector<double>& lam, const char* who) {
    for (std::size_t i = 0; i < lam.size(); ++i) {
        if (!(lam[i] >= 0.0 && lam[i] <= 1.0)) {
            throw std::invalid_argument(std::string(who) + ": coefficient " +
                                        std::to_string(i + 1) + " outside [0, 1]");
        }
    }
}
}  // namespace

BlockFilter::BlockFilter(BlockScheme scheme, std::vector<double> lam)
    : scheme_(std::move(scheme)), lam_(std::move(lam)) {
    if (lam_.size() != scheme_.block_count()) {
        throw std::invalid_argument("BlockFilter: " + std::to_string(lam_.size()) +
                                    " values for " + std::to_string(scheme_.block_count()) +
                                    " blocks");
    }
    require_unit_interval(lam_, "BlockFilter");
}

std::vector<double> BlockFilter::expand(std::size_t n) const {
    std::vector<double> out(n, 0.0);
    for (std::size_t j = 1; j <= scheme_.block_count(); ++j) {
        for (std::size_t k = scheme_.first(j); k <= scheme_.last(j) && k <= n; ++k) {
            out[k - 1] = lam_[j - 1];
        }
    }
    return out;
}

MonotoneFilter::MonotoneFilter(std::vector<double> lam) : lam_(std::move(lam)) {
    require_unit_interval(lam_, "MonotoneFilter");
    for (std::size_t i = 1; i < lam_.size(); ++i) {
        if (lam_[i] > lam_[i - 1]) {
            throw std::invalid_argument("MonotoneFilter: increases at k=" + std::to_string(i + 1));
        }
    }
}

std::vector<double> MonotoneFilter::expand(std::size_t n) const {
    std::vector<double> out(n, 0.0);
    std::copy_n(lam_.begin(), std::min(n, lam_.size()), out.begin());
    return out;
}

SignalCoefficients apply_filter(const std::vector<double>& lambda, const Observation& obs,
                                const OperatorSpectrum& spectrum) {
    if (obs.y.size() != spectrum.size() || lambda.size() != obs.y.size()) {
        throw std::invalid_argument("apply_filter: length mismatch");
    }
    SignalCoefficients est;
    est.theta.resize(obs.y.size());
    for (std::size_t k = 1; k <= obs.y.size(); ++k) {
        est.theta[k - 1] = lambda[k - 1] == 0.0 ? 0.0 : lambda[k - 1] * obs.y[k - 1] / spectrum.at(k);
    }
    return est;
}

double quadratic_risk(const std::vector<double>& lambda, const SignalCoefficients& signal,
                      const OperatorSpectrum& spectrum, double epsilon) {
    if (lambda.size() != signal.size() || signal.size() != spectrum.size()) {
        throw std::invalid_argument("quadratic_risk: length mismatch");
    }
    std::vector<double> terms(signal.size() + 1);
    for (std::size_t k = 1; k <= signal.size(); ++k) {
        const double l = lambda[k - 1];
        const double th = signal.theta[k - 1];
        terms[k - 1] = (1.0 - l) * (1.0 - l) * th * th + l * l * spectrum.noise_variance(k, epsilon);
    }
    terms.back() = signal.tail_energy;
    return compensated_sum(terms);
}

double loss(const SignalCoefficients& estimate, const SignalCoefficients& signal) {
    if (estimate.size() != signal.size()) {
        throw std::invalid_argument("loss: length mismatch");
    }
    std::vector<double> terms(signal.size() + 1);
    for (std::size_t i = 0; i < signal.size(); ++i) {
        const double d = estimate.theta[i] - signal.theta[i];
        terms[i] = d * d;
    }
    terms.back() = signal.tail_energy;
    return compensated_sum(terms);
}

std::vector<double> block_signal_energy(const SignalCoefficients& signal, const BlockScheme& scheme) {
    if (scheme.last_index() > signal.size()) {
        throw std::invalid_argument("block_signal_energy: signal shorter than scheme");
    }
    std::vector<double> e(scheme.block_count(), 0.0);
    for (std::size_t j = 1; j <= scheme.block_count(); ++j) {
        for (std::size_t k = scheme.first(j); k <= scheme.last(j); ++k) {
            e[j - 1] += signal.theta[k - 1] * signal.theta[k - 1];
        }
    }
    return e;
}

double signal_tail(const SignalCoefficients& signal, const BlockScheme& scheme) {
    double t = signal.tail_energy;
    for (std::size_t k = scheme.last_index() + 1; k <= signal.size(); ++k) {
        t += signal.theta[k - 1] * signal.theta[k - 1];
    }
    return t;
}

BlockFilter blockwise_oracle(const SignalCoefficients& signal, const BlockStats& stats) {
    const auto energy = block_signal_energy(signal, stats.scheme);
    std::vector<double> lam(energy.size());
    for (std::size_t j = 0; j < energy.size(); ++j) {
        lam[j] = energy[j] / (stats.sigma2[j] + energy[j]);
    }
    return BlockFilter(stats.scheme, std::move(lam));
}

double blockwise_oracle_risk(const SignalCoefficients& signal, const BlockStats& stats) {
    const auto energy = block_signal_energy(signal, stats.scheme);
    std::vector<double> terms(energy.size() + 1);
    for (std::size_t j = 0; j < energy.size(); ++j) {
        terms[j] = energy[j] * stats.sigma2[j] / (energy[j] + stats.sigma2[j]);
    }
    terms.back() = signal_tail(signal, stats.scheme);
    return compensated_sum(terms);
}

std::vector<double> isotonic_decreasing(const std::vector<double>& values,
                                        const std::vector<double>& weights) {
    if (values.size() != weights.size()) {
        throw std::invalid_argument("isotonic_decreasing: length mismatch");
    }
    struct Pool {
        double mean;
        double weight;
        std::size_t count;
    };
    std::vector<Pool> pools;
    pools.reserve(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        pools.push_back({values[i], weights[i], 1});
        // merge while the newest pool violates (or ties) the decreasing order
        while (pools.size() > 1 && pools[pools.size() - 2].mean <= pools.back().mean) {
            Pool top = pools.back();
            pools.pop_back();
            Pool& prev = pools.back();
            const double w = prev.weight + top.weight;
            prev.mean = w > 0.0 ? (prev.mean * prev.weight + top.mean * top.weight) / w
                                : std::max(prev.mean, top.mean);
            prev.weight = w;
            prev.count += top.count;
        }
    }
    std::vector<double> out;
    out.reserve(values.size());
    for (const Pool& p : pools) out.insert(out.end(), p.count, p.mean);
    return out;
}

MonotoneFilter monotone_oracle(const SignalCoefficients& signal, const OperatorSpectrum& spectrum,
                               double epsilon, std::size_t n_max) {
    if (n_max < 1 || n_max > signal.size() || n_max > spectrum.size()) {
        throw std::invalid_argument("monotone_oracle: n_max out of range");
    }
    std::vector<double> target(n_max), weight(n_max);
    for (std::size_t k = 1; k <= n_max; ++k) {
        const double th2 = signal.theta[k - 1] * signal.theta[k - 1];
        const double w = th2 + spectrum.noise_variance(k, epsilon);
        weight[k - 1] = w;
        target[k - 1] = th2 / w;
    }
    auto lam = isotonic_decreasing(target, weight);
    for (double& l : lam) l = std::clamp(l, 0.0, 1.0);
    return MonotoneFilter(std::move(lam));
}

}  // namespace steinhull
