#include "steinhull/stein.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "steinhull/montecarlo.hpp"

namespace steinhull {

namespace {
void require_same_scheme(const BlockEnergies& e, const BlockStats& s, const char* who) {
    if (!(e.scheme == s.scheme)) {
        throw std::invalid_argument(std::string(who) + ": energies and stats use different schemes");
    }
}

BlockFilter threshold_filter(const BlockEnergies& energies, const BlockStats& stats,
                             const std::vector<double>* pen) {
    std::vector<double> lam(stats.block_count(), 0.0);
    for (std::size_t j = 0; j < lam.size(); ++j) {
        const double e = energies.y_energy[j];
        if (!(e > 0.0)) continue;
        const double cut = stats.sigma2[j] + (pen ? (*pen)[j] : 0.0);
        lam[j] = std::max(0.0, 1.0 - cut / e);
    }
    return BlockFilter(stats.scheme, std::move(lam));
}
}  // namespace

BlockEnergies block_energies(const Observation& obs, const BlockScheme& scheme,
                             const OperatorSpectrum& spectrum) {
    if (obs.y.size() != spectrum.size() || scheme.last_index() > obs.y.size()) {
        throw std::invalid_argument("block_energies: length mismatch");
    }
    BlockEnergies out{scheme, obs.epsilon, std::vector<double>(scheme.block_count(), 0.0)};
    for (std::size_t j = 1; j <= scheme.block_count(); ++j) {
        for (std::size_t k = scheme.first(j); k <= scheme.last(j); ++k) {
            const double r = obs.y[k - 1] / spectrum.at(k);
            out.y_energy[j - 1] += r * r;
        }
    }
    return out;
}

BlockFilter ure_filter(const BlockEnergies& energies, const BlockStats& stats) {
    require_same_scheme(energies, stats, "ure_filter");
    return threshold_filter(energies, stats, nullptr);
}

BlockFilter penalized_stein_filter(const BlockEnergies& energies, const BlockStats& stats,
                                   const PenaltyValues& pen) {
    require_same_scheme(energies, stats, "penalized_stein_filter");
    if (pen.block_count() != stats.block_count()) {
        throw std::invalid_argument("penalized_stein_filter: penalty has wrong number of blocks");
    }
    return threshold_filter(energies, stats, &pen.pen);
}

double u_p(const BlockEnergies& energies, const BlockStats& stats, const PenaltyValues& pen,
           const BlockFilter& filter) {
    require_same_scheme(energies, stats, "u_p");
    if (!(filter.scheme() == stats.scheme) || pen.block_count() != stats.block_count()) {
        throw std::invalid_argument("u_p: filter or penalty does not match the scheme");
    }
    std::vector<double> terms(stats.block_count());
    for (std::size_t j = 0; j < terms.size(); ++j) {
        const double l = filter.values()[j];
        terms[j] = (l * l - 2.0 * l) * (energies.y_energy[j] - stats.sigma2[j]) +
                   l * l * stats.sigma2[j] + 2.0 * l * pen.pen[j];
    }
    return compensated_sum(terms);
}

}  // namespace steinhull
