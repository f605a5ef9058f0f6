#include "steinhull/hulls.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace steinhull {

HullVariant parse_hull_variant(const std::string& name) {
    if (name == "V" || name == "v") return HullVariant::V;
    if (name == "W" || name == "w") return HullVariant::W;
    throw std::invalid_argument("unknown hull variant '" + name + "' (expected V or W)");
}

std::string to_string(HullVariant v) { return v == HullVariant::V ? "V" : "W"; }

namespace {

void require_consistent(const HullSpec& spec, const BlockStats& stats) {
    if (spec.pen.block_count() != stats.block_count()) {
        throw std::invalid_argument("hull: penalty has wrong number of blocks");
    }
    if (!(spec.B >= 0.0) || !(spec.C2 >= 0.0)) {
        throw std::invalid_argument("hull: B and C2 must be >= 0");
    }
}

// Terms of the hull that do not depend on lambda.
struct HullFrame {
    double scale;     // 1 + B rho
    double constant;  // C2 eps^2 + B rho R(theta, lambda^0)
    double tail;
    std::vector<double> energy;
};

HullFrame frame(const HullSpec& spec, const SignalCoefficients& signal, const BlockStats& stats) {
    require_consistent(spec, stats);
    HullFrame f;
    const double b_rho = spec.B * stats.rho_eps;
    f.scale = 1.0 + b_rho;
    f.constant = spec.C2 * stats.epsilon * stats.epsilon;
    if (b_rho > 0.0) f.constant += b_rho * blockwise_oracle_risk(signal, stats);
    f.tail = signal_tail(signal, stats.scheme);
    f.energy = block_signal_energy(signal, stats.scheme);
    return f;
}

}  // namespace

double hull_value(const HullSpec& spec, const SignalCoefficients& signal, const BlockStats& stats,
                  const BlockFilter& filter) {
    if (!(filter.scheme() == stats.scheme)) {
        throw std::invalid_argument("hull_value: filter uses a different scheme");
    }
    const HullFrame f = frame(spec, signal, stats);
    std::vector<double> terms(stats.block_count() + 1);
    for (std::size_t j = 0; j < stats.block_count(); ++j) {
        const double l = filter.values()[j];
        const double pen_term = spec.variant == HullVariant::V ? 2.0 * l * spec.pen.pen[j]
                                                               : l * l * spec.pen.pen[j];
        terms[j] = (1.0 - l) * (1.0 - l) * f.energy[j] + l * l * stats.sigma2[j] + pen_term;
    }
    terms.back() = f.tail;
    return f.scale * compensated_sum(terms) + f.constant;
}

double draw_loss(const SignalCoefficients& signal, const BlockStats& stats,
                 const BlockNoiseDraw& draw, const std::vector<double>& lam) {
    const auto energy = block_signal_energy(signal, stats.scheme);
    double total = signal_tail(signal, stats.scheme);
    for (std::size_t j = 0; j < lam.size(); ++j) {
        const double l = lam[j];
        total += (1.0 - l) * (1.0 - l) * energy[j] + l * l * draw.noise_energy[j] -
                 2.0 * l * (1.0 - l) * draw.x[j];
    }
    return total;
}

QuadMax maximize_on_unit(double a, double b, double c) {
    QuadMax best{c, 0.0};
    const double at_one = a + b + c;
    if (at_one > best.value) best = {at_one, 1.0};
    if (a < 0.0) {
        const double l = -b / (2.0 * a);
        if (l > 0.0 && l < 1.0) {
            const double v = (a * l + b) * l + c;
            if (v > best.value) best = {v, l};
        }
    }
    return best;
}

double sup_loss_minus_hull(const HullSpec& spec, const SignalCoefficients& signal,
                           const BlockStats& stats, const BlockNoiseDraw& draw,
                           std::vector<double>* argmax) {
    const HullFrame f = frame(spec, signal, stats);
    const std::size_t J = stats.block_count();
    if (draw.eta.size() != J) throw std::invalid_argument("sup_loss_minus_hull: draw/scheme mismatch");
    if (argmax) argmax->assign(J, 0.0);

    const double s = f.scale;
    double total = (1.0 - s) * f.tail - f.constant;
    for (std::size_t j = 0; j < J; ++j) {
        const double e = f.energy[j];
        const double x = draw.x[j];
        const double pen = spec.pen.pen[j];
        // loss_j(l) - hull_j(l) = a l^2 + b l + c
        double a = e + draw.noise_energy[j] + 2.0 * x - s * (e + stats.sigma2[j]);
        double b = -2.0 * e - 2.0 * x + 2.0 * s * e;
        const double c = (1.0 - s) * e;
        if (spec.variant == HullVariant::V) {
            b -= 2.0 * s * pen;
        } else {
            a -= s * pen;
        }
        const QuadMax m = maximize_on_unit(a, b, c);
        total += m.value;
        if (argmax) (*argmax)[j] = m.argmax;
    }
    return total;
}

HullCheck verify_hull(const HullSpec& spec, const SignalCoefficients& signal, const BlockStats& stats,
                      const OperatorSpectrum& spectrum, const McOptions& mc) {
    if (mc.reps < 1000) throw std::invalid_argument("verify_hull: reps must be >= 1000");
    require_consistent(spec, stats);
    const RandomStream root(mc.seed);
    const double eps2 = stats.epsilon * stats.epsilon;
    std::vector<double> sups(mc.reps), ex1(mc.reps), ex2(mc.reps);
    parallel_for(mc.reps, [&](std::size_t i) {
        RandomStream s = root.substream(i);
        const BlockNoiseDraw d = draw_noise(stats, spectrum, &signal, s);
        sups[i] = sup_loss_minus_hull(spec, signal, stats, d);
        double a = 0.0, b = 0.0;
        for (std::size_t j = 0; j < d.eta.size(); ++j) {
            a += std::max(d.eta[j] - spec.pen.pen[j], 0.0);
            b += std::max(d.eta[j] - 2.0 * spec.pen.pen[j], 0.0);
        }
        ex1[i] = a / eps2;
        ex2[i] = b / eps2;
    });
    HullCheck out;
    const McEstimate m = summarize(sups);
    out.mean = m.mean;
    out.std_error = m.std_error;
    out.holds = m.mean + 3.0 * m.std_error <= 0.0;
    out.excess_pen = summarize(ex1);
    out.excess_double_pen = summarize(ex2);
    return out;
}

Calibration calibrate_B(const SignalCoefficients& signal, const BlockStats& stats,
                        const OperatorSpectrum& spectrum, const PenaltyValues& pen, double C2,
                        HullVariant variant, const McOptions& mc, const std::vector<double>& grid) {
    if (grid.empty()) throw std::invalid_argument("calibrate_B: empty grid");
    for (std::size_t i = 1; i < grid.size(); ++i) {
        if (!(grid[i] > grid[i - 1])) throw std::invalid_argument("calibrate_B: grid must be increasing");
    }
    Calibration out;
    for (double b : grid) {
        const HullSpec spec{pen, b, C2, variant};
        const HullCheck check = verify_hull(spec, signal, stats, spectrum, mc);
        out.profile.push_back({b, check});
        if (check.holds && !out.B) out.B = b;
    }
    return out;
}

}  // namespace steinhull
