#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "steinhull/model.hpp"

namespace steinhull {

enum class SchemeKind { weakly_geometric, explicit_boundaries };
enum class PenaltyChoice { none, ct, mc };

/// Experiment description. Every field maps to one key of the flat
/// `key = value` config format:
///
///   epsilon, epsilon_grid       noise level(s); comma-separated grid
///   beta, b_scale, n_max        b_k = b_scale k^{-beta}, k <= n_max (0: automatic)
///   signal.kind, signal.params  zero | spike | power_smooth | exp_smooth | explicit
///   scheme, boundaries          weakly_geometric | explicit; K_0..K_J for explicit
///   penalty.kind                none | ct | mc
///   penalty.gamma               ct exponent (default 0.25)
///   penalty.alpha               mc inflation (default 0.5)
///   penalty.level               mc tail level (default eps^2, written as 0)
///   penalty.reps                mc sample size (default 10000)
///   reps, master_seed, out      replications, seed, output path (empty: stdout)
struct ExperimentConfig {
    std::vector<double> epsilon_grid{0.1, 0.05, 0.02, 0.01};
    double beta = 1.0;
    double b_scale = 1.0;
    std::size_t n_max = 0;
    std::optional<SignalKind> signal_kind;
    std::vector<double> signal_params;
    SchemeKind scheme = SchemeKind::weakly_geometric;
    std::vector<std::size_t> boundaries;
    PenaltyChoice penalty = PenaltyChoice::mc;
    double gamma = 0.25;
    double alpha = 0.5;
    double level = 0.0;
    std::size_t penalty_reps = 10000;
    std::size_t reps = 10000;
    std::uint64_t master_seed = 1;
    std::string out;
};

/// Key/value pairs with the place each came from ("file:line" or "flag").
using ConfigEntries = std::map<std::string, std::pair<std::string, std::string>>;

/// Parses `key = value` lines; '#' starts a comment. Duplicate keys are errors.
ConfigEntries read_entries(std::string_view text, const std::string& source);

/// Builds and validates a config. `overrides` replace file entries; the
/// environment variable STEINHULL_SEED, when set, replaces master_seed last.
ExperimentConfig parse_config(std::string_view text, const std::string& source,
                              const std::vector<std::pair<std::string, std::string>>& overrides = {},
                              bool require_signal = true);

ExperimentConfig load_config(const std::string& path,
                             const std::vector<std::pair<std::string, std::string>>& overrides = {},
                             bool require_signal = true);

void validate(const ExperimentConfig& config, bool require_signal);

std::string to_string(SchemeKind kind);
std::string to_string(PenaltyChoice kind);

}  // namespace steinhull
