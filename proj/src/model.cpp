#include "steinhull/model.hpp"

#include <cmath>
#include <stdexcept>

#include "steinhull/montecarlo.hpp"

namespace steinhull {

OperatorSpectrum::OperatorSpectrum(std::vector<double> b, std::optional<double> beta)
    : b_(std::move(b)), beta_(beta) {
    if (b_.empty()) {
        throw std::invalid_argument("OperatorSpectrum: empty spectrum");
    }
    for (std::size_t i = 0; i < b_.size(); ++i) {
        if (!(b_[i] > 0.0) || !std::isfinite(b_[i])) {
            throw std::invalid_argument("OperatorSpectrum: b_" + std::to_string(i + 1) +
                                        " must be positive and finite");
        }
        if (i > 0 && b_[i] > b_[i - 1]) {
            throw std::invalid_argument("OperatorSpectrum: spectrum increases at k=" +
                                        std::to_string(i + 1));
        }
    }
}

double SignalCoefficients::energy() const {
    std::vector<double> sq(theta.size());
    for (std::size_t i = 0; i < theta.size(); ++i) sq[i] = theta[i] * theta[i];
    return compensated_sum(sq) + tail_energy;
}

SignalKind parse_signal_kind(const std::string& name) {
    if (name == "zero") return SignalKind::zero;
    if (name == "spike") return SignalKind::spike;
    if (name == "power_smooth") return SignalKind::power_smooth;
    if (name == "exp_smooth") return SignalKind::exp_smooth;
    if (name == "explicit") return SignalKind::explicit_list;
    throw std::invalid_argument("unknown signal kind '" + name + "'");
}

std::string to_string(SignalKind kind) {
    switch (kind) {
        case SignalKind::zero: return "zero";
        case SignalKind::spike: return "spike";
        case SignalKind::power_smooth: return "power_smooth";
        case SignalKind::exp_smooth: return "exp_smooth";
        case SignalKind::explicit_list: return "explicit";
    }
    return "unknown";
}

OperatorSpectrum power_spectrum(double beta, double scale, std::size_t n_max) {
    if (!(beta > 0.0)) throw std::invalid_argument("power_spectrum: beta must be > 0");
    if (!(scale > 0.0)) throw std::invalid_argument("power_spectrum: scale must be > 0");
    if (n_max < 1) throw std::invalid_argument("power_spectrum: n_max must be >= 1");
    std::vector<double> b(n_max);
    for (std::size_t k = 1; k <= n_max; ++k) {
        b[k - 1] = scale * std::pow(static_cast<double>(k), -beta);
    }
    return OperatorSpectrum(std::move(b), beta);
}

namespace {
void require_arity(SignalKind kind, std::span<const double> params, std::size_t n) {
    if (params.size() != n) {
        throw std::invalid_argument("make_signal: kind '" + to_string(kind) + "' expects " +
                                    std::to_string(n) + " parameters, got " +
                                    std::to_string(params.size()));
    }
}
}  // namespace

SignalCoefficients make_signal(SignalKind kind, std::span<const double> params, std::size_t n_max) {
    if (n_max < 1) throw std::invalid_argument("make_signal: n_max must be >= 1");
    SignalCoefficients s;
    s.theta.assign(n_max, 0.0);
    switch (kind) {
        case SignalKind::zero:
            require_arity(kind, params, 0);
            break;
        case SignalKind::spike: {
            require_arity(kind, params, 2);
            const double idx = params[0];
            if (idx < 1.0 || idx > static_cast<double>(n_max) || idx != std::floor(idx)) {
                throw std::invalid_argument("make_signal: spike index out of range");
            }
            s.theta[static_cast<std::size_t>(idx) - 1] = params[1];
            break;
        }
        case SignalKind::power_smooth: {
            require_arity(kind, params, 2);
            if (!(params[1] > 0.5)) {
                throw std::invalid_argument("make_signal: power_smooth needs s > 1/2");
            }
            for (std::size_t k = 1; k <= n_max; ++k) {
                s.theta[k - 1] = params[0] * std::pow(static_cast<double>(k), -params[1]);
            }
            break;
        }
        case SignalKind::exp_smooth:
            require_arity(kind, params, 2);
            for (std::size_t k = 1; k <= n_max; ++k) {
                s.theta[k - 1] = params[0] * std::exp(-params[1] * static_cast<double>(k));
            }
            break;
        case SignalKind::explicit_list:
            require_arity(kind, params, n_max);
            s.theta.assign(params.begin(), params.end());
            break;
    }
    return s;
}

Observation observe(const OperatorSpectrum& spectrum, const SignalCoefficients& signal,
                    double epsilon, RandomStream& stream) {
    if (spectrum.size() != signal.size()) {
        throw std::invalid_argument("observe: spectrum has " + std::to_string(spectrum.size()) +
                                    " terms but signal has " + std::to_string(signal.size()));
    }
    if (!(epsilon > 0.0)) throw std::invalid_argument("observe: epsilon must be > 0");
    Observation obs;
    obs.epsilon = epsilon;
    obs.seed = stream.seed();
    obs.y.resize(spectrum.size());
    for (std::size_t k = 1; k <= spectrum.size(); ++k) {
        obs.y[k - 1] = spectrum.at(k) * signal.theta[k - 1] + epsilon * stream.gaussian();
    }
    return obs;
}

}  // namespace steinhull
