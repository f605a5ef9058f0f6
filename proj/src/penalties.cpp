#include "steinhull/penalties.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace steinhull {

std::string to_string(PenaltyKind kind) {
    switch (kind) {
        case PenaltyKind::ct: return "ct";
        case PenaltyKind::mc: return "mc";
        case PenaltyKind::explicit_values: return "explicit";
    }
    return "unknown";
}

PenaltyValues explicit_penalty(std::vector<double> pen) {
    for (double p : pen) {
        if (!(p >= 0.0)) throw std::invalid_argument("explicit_penalty: negative penalty");
    }
    PenaltyValues out;
    out.pen = std::move(pen);
    out.kind = PenaltyKind::explicit_values;
    return out;
}

PenaltyValues zero_penalty(std::size_t blocks) { return explicit_penalty(std::vector<double>(blocks, 0.0)); }

PenaltyValues ct_penalty(const BlockStats& stats, double gamma) {
    if (!(gamma > 0.0) || gamma > 0.5) {
        throw std::invalid_argument("ct_penalty: gamma must lie in (0, 1/2]");
    }
    PenaltyValues out;
    out.kind = PenaltyKind::ct;
    out.gamma = gamma;
    if (gamma == 0.5) {
        out.warning = true;
        out.note = "gamma = 1/2: the exponential-sum condition on phi_j fails";
    }
    out.pen.resize(stats.block_count());
    for (std::size_t j = 0; j < stats.block_count(); ++j) {
        out.pen[j] = std::pow(stats.Delta[j], gamma) * stats.sigma2[j];
    }
    return out;
}

std::vector<double> block_variances(const BlockStats& stats, const OperatorSpectrum& spectrum,
                                    std::size_t j) {
    if (j < 1 || j > stats.block_count()) {
        throw std::invalid_argument("block index " + std::to_string(j) + " out of range");
    }
    std::vector<double> v;
    v.reserve(stats.scheme.length(j));
    for (std::size_t k = stats.scheme.first(j); k <= stats.scheme.last(j); ++k) {
        v.push_back(spectrum.noise_variance(k, stats.epsilon));
    }
    return v;
}

double draw_eta(const std::vector<double>& variances, RandomStream& stream) {
    double eta = 0.0;
    for (double v : variances) {
        const double xi = stream.gaussian();
        eta += v * (xi * xi - 1.0);
    }
    return eta;
}

BlockNoiseDraw draw_noise(const BlockStats& stats, const OperatorSpectrum& spectrum,
                          const SignalCoefficients* signal, RandomStream& stream) {
    const BlockScheme& scheme = stats.scheme;
    if (signal && signal->size() < scheme.last_index()) {
        throw std::invalid_argument("draw_noise: signal shorter than scheme");
    }
    const std::size_t J = scheme.block_count();
    BlockNoiseDraw d;
    d.seed = stream.seed();
    d.eta.assign(J, 0.0);
    d.x.assign(J, 0.0);
    d.noise_energy.assign(J, 0.0);
    const double eps = stats.epsilon;
    for (std::size_t j = 1; j <= J; ++j) {
        for (std::size_t k = scheme.first(j); k <= scheme.last(j); ++k) {
            const double xi = stream.gaussian();
            const double v = spectrum.noise_variance(k, eps);
            d.eta[j - 1] += v * (xi * xi - 1.0);
            d.noise_energy[j - 1] += v * xi * xi;
            if (signal) d.x[j - 1] += eps * signal->theta[k - 1] / spectrum.at(k) * xi;
        }
    }
    return d;
}

namespace {
std::vector<double> sample_eta(const std::vector<double>& variances, const RandomStream& base,
                               std::size_t reps) {
    std::vector<double> out;
    parallel_fill(out, reps, [&](std::size_t i) {
        RandomStream s = base.substream(i);
        return draw_eta(variances, s);
    });
    return out;
}
}  // namespace

McEstimate excess_expectation(const BlockStats& stats, const OperatorSpectrum& spectrum,
                              std::size_t j, double pen, const McOptions& mc) {
    if (mc.reps < 1000) throw std::invalid_argument("excess_expectation: reps must be >= 1000");
    const auto v = block_variances(stats, spectrum, j);
    const RandomStream base = RandomStream(mc.seed).substream(j);
    std::vector<double> excess;
    parallel_fill(excess, mc.reps, [&](std::size_t i) {
        RandomStream s = base.substream(i);
        return std::max(draw_eta(v, s) - pen, 0.0);
    });
    return summarize(excess);
}

EtaTail::EtaTail(std::vector<double> sample) : sorted_(std::move(sample)) {
    std::sort(sorted_.begin(), sorted_.end(), std::greater<>());
    prefix_.assign(sorted_.size() + 1, 0.0);
    for (std::size_t i = 0; i < sorted_.size(); ++i) prefix_[i + 1] = prefix_[i] + sorted_[i];
}

double EtaTail::operator()(double u) const {
    if (sorted_.empty()) return 0.0;
    // number of sample points with eta >= u
    const auto it = std::partition_point(sorted_.begin(), sorted_.end(),
                                         [u](double e) { return e >= u; });
    const auto m = static_cast<std::size_t>(it - sorted_.begin());
    return prefix_[m] / static_cast<double>(sorted_.size());
}

double tail_threshold(const EtaTail& tail, double level, double tol_abs) {
    if (!(level > 0.0)) throw std::invalid_argument("tail_threshold: level must be > 0");
    if (tail(0.0) <= level) return 0.0;
    double lo = 0.0;
    double hi = std::max(tail.max(), 0.0) * 2.0 + tol_abs;
    if (tail(hi) > level) throw std::runtime_error("tail_threshold: bisection bracket failure");
    while (hi - lo > tol_abs) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (tail(mid) <= level) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return hi;
}

PenaltyValues mc_penalty(const BlockStats& stats, const OperatorSpectrum& spectrum, double alpha,
                         double level, const McOptions& mc) {
    if (!(alpha >= 0.0)) throw std::invalid_argument("mc_penalty: alpha must be >= 0");
    if (mc.reps < 10000) throw std::invalid_argument("mc_penalty: reps must be >= 10000");
    const double eps2 = stats.epsilon * stats.epsilon;
    if (level <= 0.0) level = eps2;

    PenaltyValues out;
    out.kind = PenaltyKind::mc;
    out.alpha = alpha;
    out.level = level;
    out.reps = mc.reps;
    const std::size_t J = stats.block_count();
    out.pen.resize(J);
    out.thresholds.resize(J);
    const RandomStream root(mc.seed);
    for (std::size_t j = 1; j <= J; ++j) {
        const EtaTail tail(sample_eta(block_variances(stats, spectrum, j), root.substream(j), mc.reps));
        const double u = tail_threshold(tail, level, mc.tol * stats.sigma2[j - 1]);
        out.thresholds[j - 1] = u;
        out.pen[j - 1] = (1.0 + alpha) * u;
    }
    return out;
}

double lemma1_bound(const BlockStats& stats, const OperatorSpectrum& spectrum, std::size_t j,
                    double pen, double delta) {
    const auto v = block_variances(stats, spectrum, j);
    const double vmax = stats.max_var[j - 1];
    if (!(delta > 0.0) || !(2.0 * delta * vmax < 1.0)) {
        throw std::invalid_argument("lemma1_bound: delta must satisfy 0 < delta < 1/(2 max_var)");
    }
    double sixth = 0.0;
    for (double x : v) sixth += x * x * x;
    const double expo = -delta * pen + delta * delta * stats.Sigma2[j - 1] +
                        4.0 * delta * delta * delta * sixth / (1.0 - 2.0 * delta * vmax);
    return std::exp(expo) / delta;
}

double lemma2_bound(const BlockStats& stats, std::size_t j, double c) {
    if (!(c > 0.0)) throw std::invalid_argument("lemma2_bound: C must be > 0");
    const double eps2 = stats.epsilon * stats.epsilon;
    const double s2 = stats.Sigma2[j - 1];
    const double arg = c * s2 / (eps2 * eps2);
    if (!(arg > 1.0)) return 0.0;
    return std::sqrt(2.0 * s2 * std::log(arg));
}

A1Report check_a1(const BlockStats& stats, const std::vector<double>& phi) {
    if (phi.size() != stats.block_count()) {
        throw std::invalid_argument("check_a1: phi has wrong length");
    }
    A1Report r;
    const double eps2 = stats.epsilon * stats.epsilon;
    std::vector<double> terms(phi.size());
    for (std::size_t j = 0; j < phi.size(); ++j) {
        const double p = phi[j];
        if (!(p > 0.0)) throw std::invalid_argument("check_a1: phi_j must be > 0");
        const double d = stats.Delta[j];
        const double max_inv_b2 = stats.max_var[j] / eps2;
        terms[j] = max_inv_b2 * std::exp(-p * p / (16.0 * d * (1.0 + 2.0 * std::sqrt(p))));
        if (p > 1.0 - 4.0 * d) r.side_condition_holds = false;
    }
    r.lhs = compensated_sum(terms);
    return r;
}

A2Report check_a2(const BlockStats& stats, const OperatorSpectrum& spectrum,
                  const PenaltyValues& pen, const McOptions& mc) {
    if (mc.reps < 10000) throw std::invalid_argument("check_a2: reps must be >= 10000");
    if (pen.block_count() != stats.block_count()) {
        throw std::invalid_argument("check_a2: penalty has wrong number of blocks");
    }
    A2Report r;
    const double eps2 = stats.epsilon * stats.epsilon;
    std::vector<double> means, vars;
    for (std::size_t j = 1; j <= stats.block_count(); ++j) {
        const McEstimate e = excess_expectation(stats, spectrum, j, pen.pen[j - 1], mc);
        r.per_block.push_back(e);
        means.push_back(e.mean);
        vars.push_back(e.std_error * e.std_error);
    }
    r.sum_over_eps2 = compensated_sum(means) / eps2;
    r.std_error = std::sqrt(compensated_sum(vars)) / eps2;
    return r;
}

}  // namespace steinhull
