#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "steinhull/blocks.hpp"
#include "steinhull/filters.hpp"
#include "steinhull/model.hpp"
#include "steinhull/montecarlo.hpp"
#include "steinhull/penalties.hpp"

namespace steinhull {

/// V charges the penalty as 2 lambda_j pen_j, W as lambda_j^2 pen_j.
enum class HullVariant { V, W };

HullVariant parse_hull_variant(const std::string& name);
std::string to_string(HullVariant v);

struct HullSpec {
    PenaltyValues pen;
    double B = 0.0;
    double C2 = 0.0;
    HullVariant variant = HullVariant::V;
};

/// (1 + B rho) { sum_j [(1-l_j)^2 E_j + l_j^2 sigma_j^2 + pen term] + tail }
///   + C2 eps^2 + B rho R(theta, lambda^0)
double hull_value(const HullSpec& spec, const SignalCoefficients& signal, const BlockStats& stats,
                  const BlockFilter& filter);

/// Loss of the blockwise filter `lam` on the noise realisation `draw`.
double draw_loss(const SignalCoefficients& signal, const BlockStats& stats,
                 const BlockNoiseDraw& draw, const std::vector<double>& lam);

/// Maximum of a*l^2 + b*l + c over l in [0, 1], and the maximiser.
struct QuadMax {
    double value;
    double argmax;
};
QuadMax maximize_on_unit(double a, double b, double c);

/// Exact sup over blockwise filters of loss(lambda; draw) - hull(lambda).
/// If `argmax` is non-null it receives the maximising filter values.
double sup_loss_minus_hull(const HullSpec& spec, const SignalCoefficients& signal,
                           const BlockStats& stats, const BlockNoiseDraw& draw,
                           std::vector<double>* argmax = nullptr);

struct HullCheck {
    double mean = 0.0;
    double std_error = 0.0;
    bool holds = false;  // mean + 3 std_error <= 0
    /// sum_j E[eta_j - pen_j]_+ / eps^2 and sum_j E[eta_j - 2 pen_j]_+ / eps^2
    /// over the same draws.
    McEstimate excess_pen;
    McEstimate excess_double_pen;
};

HullCheck verify_hull(const HullSpec& spec, const SignalCoefficients& signal, const BlockStats& stats,
                      const OperatorSpectrum& spectrum, const McOptions& mc);

struct CalibrationPoint {
    double B;
    HullCheck check;
};

struct Calibration {
    std::optional<double> B;  // smallest passing grid value
    std::vector<CalibrationPoint> profile;
};

/// Runs verify_hull over an increasing grid of B (same draws for every B)
/// and reports the smallest B that holds; B is empty when no grid value does.
Calibration calibrate_B(const SignalCoefficients& signal, const BlockStats& stats,
                        const OperatorSpectrum& spectrum, const PenaltyValues& pen, double C2,
                        HullVariant variant, const McOptions& mc, const std::vector<double>& grid);

}  // namespace steinhull
