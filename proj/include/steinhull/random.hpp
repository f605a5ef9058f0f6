#pragma once

#include <cstdint>
#include <random>

namespace steinhull {

/// Deterministic Gaussian stream. Two streams built from the same seed
/// produce the same draws, bit for bit, on the same standard library.
///
/// Independent sub-streams are derived by hashing (seed, index), so a
/// Monte-Carlo loop can give replication r the stream `master.substream(r)`
/// and get results that do not depend on how replications are scheduled.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed);

    std::uint64_t seed() const { return seed_; }

    double gaussian() { return normal_(engine_); }

    RandomStream substream(std::uint64_t index) const;

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace steinhull
