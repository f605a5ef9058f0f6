#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "steinhull/blocks.hpp"
#include "steinhull/model.hpp"
#include "steinhull/montecarlo.hpp"
#include "steinhull/random.hpp"

namespace steinhull {

enum class PenaltyKind { ct, mc, explicit_values };

std::string to_string(PenaltyKind kind);

struct PenaltyValues {
    std::vector<double> pen;  // indexed by j - 1
    PenaltyKind kind = PenaltyKind::explicit_values;
    double gamma = 0.0;       // ct
    double alpha = 0.0;       // mc
    double level = 0.0;       // mc
    std::size_t reps = 0;     // mc
    std::vector<double> thresholds;  // mc: U_j before the (1 + alpha) factor
    bool warning = false;     // ct with gamma = 1/2
    std::string note;

    std::size_t block_count() const { return pen.size(); }
};

PenaltyValues explicit_penalty(std::vector<double> pen);
PenaltyValues zero_penalty(std::size_t blocks);

struct McOptions {
    std::size_t reps = 10000;
    std::uint64_t seed = 0;
    /// Bisection tolerance relative to sigma_j^2.
    double tol = 1e-9;
};

/// pen_j = Delta_j^gamma sigma_j^2, gamma in (0, 1/2]; gamma = 1/2 is flagged.
PenaltyValues ct_penalty(const BlockStats& stats, double gamma);

/// Noise variances eps^2 b_k^{-2} of the indices in block j.
std::vector<double> block_variances(const BlockStats& stats, const OperatorSpectrum& spectrum,
                                    std::size_t j);

/// One draw of eta = sum v_k (xi_k^2 - 1) from variances v.
double draw_eta(const std::vector<double>& variances, RandomStream& stream);

/// Per-block functionals of one noise vector xi_1..xi_N; vectors indexed by j - 1.
struct BlockNoiseDraw {
    std::vector<double> eta;
    std::vector<double> x;             // eps sum theta_k b_k^{-1} xi_k
    std::vector<double> noise_energy;  // sum eps^2 b_k^{-2} xi_k^2
    std::uint64_t seed = 0;
};

/// Draws xi_1..xi_N in index order. `signal` may be null, in which case x is zero.
BlockNoiseDraw draw_noise(const BlockStats& stats, const OperatorSpectrum& spectrum,
                          const SignalCoefficients* signal, RandomStream& stream);

/// Plain Monte-Carlo estimate of E[eta_j - pen_j]_+.
McEstimate excess_expectation(const BlockStats& stats, const OperatorSpectrum& spectrum,
                              std::size_t j, double pen, const McOptions& mc);

/// Empirical tail functional u -> (1/R) sum eta_i 1{eta_i >= u} of a fixed sample.
class EtaTail {
public:
    explicit EtaTail(std::vector<double> sample);

    double operator()(double u) const;
    double max() const { return sorted_.empty() ? 0.0 : sorted_.front(); }
    std::size_t size() const { return sorted_.size(); }

private:
    std::vector<double> sorted_;  // descending
    std::vector<double> prefix_;  // prefix_[m] = sum of the m largest
};

/// Smallest u >= 0 (to within tol_abs) with tail(u) <= level, by bisection.
double tail_threshold(const EtaTail& tail, double level, double tol_abs);

/// pen_j = (1 + alpha) inf{u : E eta_j 1{eta_j >= u} <= level}, with the
/// expectation replaced by one fixed Monte-Carlo sample per block.
/// level <= 0 on input selects the default eps^2.
PenaltyValues mc_penalty(const BlockStats& stats, const OperatorSpectrum& spectrum, double alpha,
                         double level, const McOptions& mc);

/// Upper bound on E[eta_j - pen_j]_+ valid for 0 < delta < 1 / (2 max_var_j).
double lemma1_bound(const BlockStats& stats, const OperatorSpectrum& spectrum, std::size_t j,
                    double pen, double delta);

/// sqrt(2 Sigma_j^2 log(C eps^{-4} Sigma_j^2)), or 0 when the log is not positive.
double lemma2_bound(const BlockStats& stats, std::size_t j, double c = 1.0);

struct A1Report {
    double lhs = 0.0;
    bool side_condition_holds = true;  // phi_j <= 1 - 4 Delta_j for all j
};

A1Report check_a1(const BlockStats& stats, const std::vector<double>& phi);

struct A2Report {
    double sum_over_eps2 = 0.0;
    double std_error = 0.0;
    std::vector<McEstimate> per_block;
};

/// (sum_j E[eta_j - pen_j]_+) / eps^2 with aggregated standard error.
A2Report check_a2(const BlockStats& stats, const OperatorSpectrum& spectrum,
                  const PenaltyValues& pen, const McOptions& mc);

}  // namespace steinhull
