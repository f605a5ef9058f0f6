#pragma once

#include <vector>

#include "steinhull/blocks.hpp"
#include "steinhull/filters.hpp"
#include "steinhull/model.hpp"
#include "steinhull/penalties.hpp"

namespace steinhull {

/// Per-block energy of the rescaled data, sum_{k in I_j} b_k^{-2} y_k^2.
/// Its expectation is ||theta||^2_(j) + sigma_j^2.
struct BlockEnergies {
    BlockScheme scheme;
    double epsilon = 0.0;
    std::vector<double> y_energy;  // indexed by j - 1
};

BlockEnergies block_energies(const Observation& obs, const BlockScheme& scheme,
                             const OperatorSpectrum& spectrum);

/// lambda_j = (1 - sigma_j^2 / y_energy_j)_+.
BlockFilter ure_filter(const BlockEnergies& energies, const BlockStats& stats);

/// lambda*_j = (1 - (sigma_j^2 + pen_j) / y_energy_j)_+.
BlockFilter penalized_stein_filter(const BlockEnergies& energies, const BlockStats& stats,
                                   const PenaltyValues& pen);

/// Penalized unbiased risk estimate
///   sum_j (l_j^2 - 2 l_j)(y_energy_j - sigma_j^2) + l_j^2 sigma_j^2 + 2 l_j pen_j.
double u_p(const BlockEnergies& energies, const BlockStats& stats, const PenaltyValues& pen,
           const BlockFilter& filter);

}  // namespace steinhull
