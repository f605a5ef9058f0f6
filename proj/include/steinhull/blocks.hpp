#pragma once

#include <cstddef>
#include <vector>

#include "steinhull/model.hpp"

namespace steinhull {

/// Block boundaries K_0 = 1 < K_1 < ... < K_J = N + 1 (1-based).
/// Block j (1-based) is I_j = [K_{j-1}, K_j - 1].
class BlockScheme {
public:
    explicit BlockScheme(std::vector<std::size_t> boundaries);

    const std::vector<std::size_t>& boundaries() const { return k_; }
    std::size_t block_count() const { return k_.size() - 1; }
    /// Last estimated index.
    std::size_t last_index() const { return k_.back() - 1; }

    std::size_t first(std::size_t j) const { return k_[j - 1]; }
    std::size_t last(std::size_t j) const { return k_[j] - 1; }
    std::size_t length(std::size_t j) const { return k_[j] - k_[j - 1]; }

    bool operator==(const BlockScheme&) const = default;

private:
    std::vector<std::size_t> k_;
};

/// Per-block noise quantities; vectors are indexed by j - 1.
struct BlockStats {
    BlockScheme scheme;
    double epsilon = 0.0;
    std::vector<double> sigma2;   // eps^2 sum b_k^{-2}
    std::vector<double> Sigma2;   // eps^4 sum b_k^{-4}
    std::vector<double> max_var;  // max eps^2 b_k^{-2}
    std::vector<double> Delta;    // max_var / sigma2
    double rho_eps = 0.0;         // max sqrt(Delta)

    std::size_t block_count() const { return sigma2.size(); }
};

/// Smallest integer strictly greater than x (so strict_ceil(3) == 4).
long long strict_ceil(double x);

/// Parameters of the weakly geometric construction for a given noise level.
struct GeometricParams {
    long long nu = 0;      // strict_ceil(log 1/eps)
    double kappa = 0.0;    // 1 / log nu
    double energy_cap = 0.0;  // eps^{-2} kappa^{-3}
};

GeometricParams geometric_params(double epsilon);

/// Untruncated block lengths T_1..T_count of the weakly geometric family.
std::vector<std::size_t> geometric_block_lengths(double epsilon, std::size_t count);

/// Largest m with sum_{k<=m} b_k^{-2} <= cap. Throws if the spectrum never
/// exceeds the cap (it is then too short to locate m).
std::size_t energy_cutoff(const OperatorSpectrum& spectrum, double cap);

/// How the weakly geometric scheme ends once a boundary passes the energy
/// cutoff N-bar. `extend` keeps the full last block (N = K_J - 1 >= N-bar);
/// `clip` cuts it so that N = N-bar exactly, which can leave a very short
/// last block.
enum class LastBlock { extend, clip };

/// Blocks of lengths T_1, T_2, ... until the first boundary K_J > N-bar.
BlockScheme weakly_geometric_scheme(double epsilon, const OperatorSpectrum& spectrum,
                                    LastBlock last = LastBlock::extend);

BlockScheme custom_scheme(std::vector<std::size_t> boundaries);

BlockStats block_stats(const BlockScheme& scheme, const OperatorSpectrum& spectrum, double epsilon);

struct RatioReport {
    bool holds = true;
    double worst_ratio = 1.0;
    bool vacuous = false;  // single block: nothing to compare
};

/// max_{j<J} sigma2_{j+1} / sigma2_j <= 1 + eta.
RatioReport check_ratio_condition(const BlockStats& stats, double eta);

}  // namespace steinhull
