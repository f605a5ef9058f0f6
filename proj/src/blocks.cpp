#include "steinhull/blocks.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace steinhull {

BlockScheme::BlockScheme(std::vector<std::size_t> boundaries) : k_(std::move(boundaries)) {
    if (k_.size() < 2) {
        throw std::invalid_argument("BlockScheme: need at least two boundaries");
    }
    if (k_.front() != 1) {
        throw std::invalid_argument("BlockScheme: boundaries must start at 1");
    }
    for (std::size_t i = 1; i < k_.size(); ++i) {
        if (k_[i] <= k_[i - 1]) {
            throw std::invalid_argument("BlockScheme: boundaries must be strictly increasing (K_" +
                                        std::to_string(i) + "=" + std::to_string(k_[i]) + ")");
        }
    }
}

long long strict_ceil(double x) {
    if (!std::isfinite(x)) throw std::invalid_argument("strict_ceil: non-finite input");
    return static_cast<long long>(std::floor(x)) + 1;
}

GeometricParams geometric_params(double epsilon) {
    if (!(epsilon > 0.0) || !(epsilon < 1.0)) {
        throw std::invalid_argument("weakly_geometric_scheme: epsilon must lie in (0, 1)");
    }
    GeometricParams p;
    p.nu = strict_ceil(-std::log(epsilon));
    if (p.nu < 2) {
        throw std::invalid_argument(
            "weakly_geometric_scheme: nu_eps = " + std::to_string(p.nu) +
            " leaves kappa_eps undefined; epsilon must be <= exp(-1)");
    }
    p.kappa = 1.0 / std::log(static_cast<double>(p.nu));
    p.energy_cap = 1.0 / (epsilon * epsilon * p.kappa * p.kappa * p.kappa);
    return p;
}

std::vector<std::size_t> geometric_block_lengths(double epsilon, std::size_t count) {
    const GeometricParams p = geometric_params(epsilon);
    const double nu = static_cast<double>(p.nu);
    std::vector<std::size_t> t;
    t.reserve(count);
    for (std::size_t j = 1; j <= count; ++j) {
        const double raw = j == 1 ? nu : nu * std::pow(1.0 + p.kappa, static_cast<double>(j - 1));
        t.push_back(static_cast<std::size_t>(strict_ceil(raw)));
    }
    return t;
}

std::size_t energy_cutoff(const OperatorSpectrum& spectrum, double cap) {
    double acc = 0.0;
    for (std::size_t k = 1; k <= spectrum.size(); ++k) {
        const double inv = 1.0 / spectrum.at(k);
        acc += inv * inv;
        if (acc > cap) return k - 1;
    }
    throw std::invalid_argument("energy_cutoff: spectrum of length " +
                                std::to_string(spectrum.size()) +
                                " is too short to locate the cutoff");
}

BlockScheme weakly_geometric_scheme(double epsilon, const OperatorSpectrum& spectrum, LastBlock last) {
    const GeometricParams p = geometric_params(epsilon);
    const std::size_t n_bar = energy_cutoff(spectrum, p.energy_cap);
    if (n_bar < 1) {
        throw std::invalid_argument("weakly_geometric_scheme: energy cutoff is empty");
    }
    std::vector<std::size_t> k{1};
    for (std::size_t j = 1; k.back() <= n_bar; ++j) {
        const std::size_t t = geometric_block_lengths(epsilon, j).back();
        k.push_back(last == LastBlock::clip ? std::min(k.back() + t, n_bar + 1) : k.back() + t);
    }
    if (k.back() - 1 > spectrum.size()) {
        throw std::invalid_argument("weakly_geometric_scheme: last block ends at " +
                                    std::to_string(k.back() - 1) + " but the spectrum has " +
                                    std::to_string(spectrum.size()) + " terms");
    }
    return BlockScheme(std::move(k));
}

BlockScheme custom_scheme(std::vector<std::size_t> boundaries) {
    return BlockScheme(std::move(boundaries));
}

BlockStats block_stats(const BlockScheme& scheme, const OperatorSpectrum& spectrum, double epsilon) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("block_stats: epsilon must be > 0");
    if (scheme.last_index() > spectrum.size()) {
        throw std::invalid_argument("block_stats: scheme reaches index " +
                                    std::to_string(scheme.last_index()) + " but spectrum has " +
                                    std::to_string(spectrum.size()) + " terms");
    }
    BlockStats s{scheme, epsilon, {}, {}, {}, {}, 0.0};
    const std::size_t J = scheme.block_count();
    s.sigma2.resize(J);
    s.Sigma2.resize(J);
    s.max_var.resize(J);
    s.Delta.resize(J);
    for (std::size_t j = 1; j <= J; ++j) {
        double var_sum = 0.0, var2_sum = 0.0, var_max = 0.0;
        for (std::size_t k = scheme.first(j); k <= scheme.last(j); ++k) {
            const double v = spectrum.noise_variance(k, epsilon);
            var_sum += v;
            var2_sum += v * v;
            var_max = std::max(var_max, v);
        }
        s.sigma2[j - 1] = var_sum;
        s.Sigma2[j - 1] = var2_sum;
        s.max_var[j - 1] = var_max;
        s.Delta[j - 1] = var_max / var_sum;
        s.rho_eps = std::max(s.rho_eps, std::sqrt(s.Delta[j - 1]));
    }
    return s;
}

RatioReport check_ratio_condition(const BlockStats& stats, double eta) {
    RatioReport r;
    if (stats.block_count() < 2) {
        r.vacuous = true;
        return r;
    }
    r.worst_ratio = 0.0;
    for (std::size_t j = 1; j < stats.block_count(); ++j) {
        r.worst_ratio = std::max(r.worst_ratio, stats.sigma2[j] / stats.sigma2[j - 1]);
    }
    r.holds = r.worst_ratio <= 1.0 + eta;
    return r;
}

}  // namespace steinhull
