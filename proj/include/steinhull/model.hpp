#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "steinhull/random.hpp"

namespace steinhull {

/// Singular values b_1..b_n of the operator, positive and nonincreasing.
/// Index k (1-based) lives at b[k - 1].
class OperatorSpectrum {
public:
    explicit OperatorSpectrum(std::vector<double> b, std::optional<double> beta = std::nullopt);

    std::size_t size() const { return b_.size(); }
    const std::vector<double>& values() const { return b_; }
    /// 1-based access.
    double at(std::size_t k) const { return b_[k - 1]; }
    std::optional<double> beta() const { return beta_; }

    /// eps^2 * b_k^{-2}, the noise variance of b_k^{-1} y_k.
    double noise_variance(std::size_t k, double epsilon) const {
        const double v = epsilon / b_[k - 1];
        return v * v;
    }

private:
    std::vector<double> b_;
    std::optional<double> beta_;
};

struct SignalCoefficients {
    std::vector<double> theta;
    /// Energy of the signal beyond theta.size(); user supplied, default 0.
    double tail_energy = 0.0;

    std::size_t size() const { return theta.size(); }
    double energy() const;
};

struct Observation {
    std::vector<double> y;
    double epsilon = 0.0;
    std::uint64_t seed = 0;
};

enum class SignalKind { zero, spike, power_smooth, exp_smooth, explicit_list };

SignalKind parse_signal_kind(const std::string& name);
std::string to_string(SignalKind kind);

/// b_k = scale * k^{-beta}.
OperatorSpectrum power_spectrum(double beta, double scale, std::size_t n_max);

/// Deterministic test signals. params:
///   zero         -> {}
///   spike        -> {index (1-based), amplitude}
///   power_smooth -> {A, s}, s > 1/2, theta_k = A k^{-s}
///   exp_smooth   -> {A, s}, theta_k = A exp(-s k)
///   explicit     -> n_max coefficients
SignalCoefficients make_signal(SignalKind kind, std::span<const double> params, std::size_t n_max);

/// y_k = b_k theta_k + eps xi_k, with xi drawn from `stream` in index order.
Observation observe(const OperatorSpectrum& spectrum, const SignalCoefficients& signal,
                    double epsilon, RandomStream& stream);

}  // namespace steinhull
