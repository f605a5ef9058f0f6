#include "steinhull/config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "steinhull/blocks.hpp"
#include "steinhull/csv_io.hpp"

namespace steinhull {

namespace {

const char* const kKnownKeys[] = {
    "epsilon", "epsilon_grid", "beta", "b_scale", "n_max", "signal.kind", "signal.params",
    "scheme", "boundaries", "penalty.kind", "penalty.gamma", "penalty.alpha", "penalty.level",
    "penalty.reps", "reps", "master_seed", "out",
};

bool known_key(const std::string& key) {
    for (const char* k : kKnownKeys) {
        if (key == k) return true;
    }
    return false;
}

std::vector<double> parse_list(const std::string& value, const std::string& what) {
    std::vector<double> out;
    if (trim(value).empty()) return out;
    for (const auto& cell : split(value, ',')) out.push_back(parse_double(cell, what));
    return out;
}

std::size_t parse_count(const std::string& value, const std::string& what) {
    const long long v = parse_integer(value, what);
    if (v < 0) throw std::invalid_argument(what + ": must be >= 0");
    return static_cast<std::size_t>(v);
}

}  // namespace

std::string to_string(SchemeKind kind) {
    return kind == SchemeKind::weakly_geometric ? "weakly_geometric" : "explicit";
}

std::string to_string(PenaltyChoice kind) {
    switch (kind) {
        case PenaltyChoice::none: return "none";
        case PenaltyChoice::ct: return "ct";
        case PenaltyChoice::mc: return "mc";
    }
    return "unknown";
}

ConfigEntries read_entries(std::string_view text, const std::string& source) {
    ConfigEntries entries;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string where = source + ":" + std::to_string(lineno);
        std::string_view body = line;
        if (const auto hash = body.find('#'); hash != std::string_view::npos) body = body.substr(0, hash);
        body = trim(body);
        if (body.empty()) continue;
        const auto eq = body.find('=');
        if (eq == std::string_view::npos) {
            throw std::invalid_argument(where + ": expected 'key = value'");
        }
        const std::string key(trim(body.substr(0, eq)));
        const std::string value(trim(body.substr(eq + 1)));
        if (key.empty()) throw std::invalid_argument(where + ": empty key");
        if (entries.count(key)) {
            throw std::invalid_argument(where + ": duplicate key '" + key + "' (first set at " +
                                        entries[key].second + ")");
        }
        entries[key] = {value, where};
    }
    return entries;
}

ExperimentConfig parse_config(std::string_view text, const std::string& source,
                              const std::vector<std::pair<std::string, std::string>>& overrides,
                              bool require_signal) {
    ConfigEntries entries = read_entries(text, source);
    for (const auto& [key, value] : overrides) entries[key] = {value, "flag --" + key};
    if (const char* env = std::getenv("STEINHULL_SEED"); env && *env) {
        entries["master_seed"] = {env, "environment STEINHULL_SEED"};
    }

    ExperimentConfig cfg;
    if (entries.count("epsilon") && entries.count("epsilon_grid")) {
        throw std::invalid_argument(entries["epsilon"].second +
                                    ": set either 'epsilon' or 'epsilon_grid', not both");
    }
    for (const auto& [key, entry] : entries) {
        const auto& [value, where] = entry;
        const std::string what = where + " (" + key + ")";
        if (!known_key(key)) throw std::invalid_argument(where + ": unknown key '" + key + "'");
        if (key == "epsilon" || key == "epsilon_grid") {
            cfg.epsilon_grid = parse_list(value, what);
        } else if (key == "beta") {
            cfg.beta = parse_double(value, what);
        } else if (key == "b_scale") {
            cfg.b_scale = parse_double(value, what);
        } else if (key == "n_max") {
            cfg.n_max = parse_count(value, what);
        } else if (key == "signal.kind") {
            try {
                cfg.signal_kind = parse_signal_kind(value);
            } catch (const std::invalid_argument& e) {
                throw std::invalid_argument(what + ": " + e.what());
            }
        } else if (key == "signal.params") {
            cfg.signal_params = parse_list(value, what);
        } else if (key == "scheme") {
            if (value == "weakly_geometric") {
                cfg.scheme = SchemeKind::weakly_geometric;
            } else if (value == "explicit") {
                cfg.scheme = SchemeKind::explicit_boundaries;
            } else {
                throw std::invalid_argument(what + ": unknown scheme '" + value + "'");
            }
        } else if (key == "boundaries") {
            cfg.boundaries.clear();
            for (const auto& cell : split(value, ',')) cfg.boundaries.push_back(parse_count(cell, what));
        } else if (key == "penalty.kind") {
            if (value == "none") {
                cfg.penalty = PenaltyChoice::none;
            } else if (value == "ct") {
                cfg.penalty = PenaltyChoice::ct;
            } else if (value == "mc") {
                cfg.penalty = PenaltyChoice::mc;
            } else {
                throw std::invalid_argument(what + ": unknown penalty kind '" + value + "'");
            }
        } else if (key == "penalty.gamma") {
            cfg.gamma = parse_double(value, what);
        } else if (key == "penalty.alpha") {
            cfg.alpha = parse_double(value, what);
        } else if (key == "penalty.level") {
            cfg.level = parse_double(value, what);
        } else if (key == "penalty.reps") {
            cfg.penalty_reps = parse_count(value, what);
        } else if (key == "reps") {
            cfg.reps = parse_count(value, what);
        } else if (key == "master_seed") {
            cfg.master_seed = parse_unsigned(value, what);
        } else if (key == "out") {
            cfg.out = value;
        }
    }
    validate(cfg, require_signal);
    return cfg;
}

ExperimentConfig load_config(const std::string& path,
                             const std::vector<std::pair<std::string, std::string>>& overrides,
                             bool require_signal) {
    std::string text;
    if (!path.empty()) {
        std::ifstream in(path);
        if (!in) throw std::runtime_error("cannot open config file '" + path + "'");
        std::ostringstream buf;
        buf << in.rdbuf();
        text = buf.str();
    }
    return parse_config(text, path.empty() ? "<flags>" : path, overrides, require_signal);
}

void validate(const ExperimentConfig& cfg, bool require_signal) {
    if (cfg.epsilon_grid.empty()) throw std::invalid_argument("config: epsilon grid is empty");
    for (double eps : cfg.epsilon_grid) {
        if (!(eps > 0.0)) throw std::invalid_argument("config: epsilon values must be > 0");
        if (cfg.scheme == SchemeKind::weakly_geometric) geometric_params(eps);
    }
    if (!(cfg.beta > 0.0)) throw std::invalid_argument("config: beta must be > 0");
    if (!(cfg.b_scale > 0.0)) throw std::invalid_argument("config: b_scale must be > 0");
    if (require_signal && !cfg.signal_kind) {
        throw std::invalid_argument("config: signal.kind is required");
    }
    if (cfg.scheme == SchemeKind::explicit_boundaries) {
        if (cfg.boundaries.empty()) {
            throw std::invalid_argument("config: scheme = explicit needs 'boundaries'");
        }
        custom_scheme(cfg.boundaries);
    }
    if (cfg.penalty == PenaltyChoice::ct && (!(cfg.gamma > 0.0) || cfg.gamma > 0.5)) {
        throw std::invalid_argument("config: penalty.gamma must lie in (0, 1/2]");
    }
    if (cfg.penalty == PenaltyChoice::mc) {
        if (!(cfg.alpha >= 0.0)) throw std::invalid_argument("config: penalty.alpha must be >= 0");
        if (cfg.level < 0.0) throw std::invalid_argument("config: penalty.level must be >= 0");
        if (cfg.penalty_reps < 10000) {
            throw std::invalid_argument("config: penalty.reps must be >= 10000");
        }
    }
    if (cfg.reps < 1) throw std::invalid_argument("config: reps must be >= 1");
}

}  // namespace steinhull
