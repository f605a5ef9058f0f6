#include "steinhull/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "steinhull/blocks.hpp"
#include "steinhull/config.hpp"
#include "steinhull/csv_io.hpp"
#include "steinhull/experiment.hpp"
#include "steinhull/filters.hpp"
#include "steinhull/hulls.hpp"
#include "steinhull/montecarlo.hpp"
#include "steinhull/penalties.hpp"
#include "steinhull/stein.hpp"

namespace steinhull {

namespace {

struct FlagKey {
    const char* flag;
    const char* key;
    const char* help;
};

const FlagKey kFlags[] = {
    {"--epsilon", "epsilon", "noise level"},
    {"--epsilon-grid", "epsilon_grid", "comma-separated noise levels"},
    {"--beta", "beta", "spectrum decay exponent"},
    {"--b-scale", "b_scale", "spectrum scale"},
    {"--n-max", "n_max", "spectrum length (0: automatic)"},
    {"--signal", "signal.kind", "zero|spike|power_smooth|exp_smooth|explicit"},
    {"--signal-params", "signal.params", "comma-separated signal parameters"},
    {"--scheme", "scheme", "weakly_geometric|explicit"},
    {"--boundaries", "boundaries", "comma-separated K_0..K_J for explicit schemes"},
    {"--penalty", "penalty.kind", "none|ct|mc"},
    {"--gamma", "penalty.gamma", "ct exponent"},
    {"--alpha", "penalty.alpha", "mc inflation factor"},
    {"--level", "penalty.level", "mc tail level (0: eps^2)"},
    {"--penalty-reps", "penalty.reps", "mc penalty sample size"},
    {"--reps", "reps", "Monte-Carlo replications"},
    {"--seed", "master_seed", "master seed"},
    {"--out", "out", "output path (default stdout)"},
};

struct Common {
    std::string config_path;
    std::vector<std::string> sets;
    std::map<std::string, std::string> flags;
    unsigned threads = 0;
    std::string out_path;  // resolved from the config
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--config", c.config_path, "flat key=value config file");
    cmd->add_option("--set", c.sets, "override a config key (key=value)");
    cmd->add_option("--threads", c.threads, "worker threads (0: hardware default)");
    for (const FlagKey& f : kFlags) {
        cmd->add_option_function<std::string>(
            f.flag, [&c, key = std::string(f.key)](const std::string& v) { c.flags[key] = v; }, f.help);
    }
}

ExperimentConfig make_config(Common& c, bool require_signal) {
    std::vector<std::pair<std::string, std::string>> overrides;
    for (const auto& s : c.sets) {
        const auto eq = s.find('=');
        if (eq == std::string::npos) throw std::invalid_argument("--set expects key=value, got '" + s + "'");
        overrides.emplace_back(std::string(trim(s.substr(0, eq))), std::string(trim(s.substr(eq + 1))));
    }
    for (const auto& [k, v] : c.flags) overrides.emplace_back(k, v);
    set_thread_count(c.threads);
    ExperimentConfig cfg = load_config(c.config_path, overrides, require_signal);
    c.out_path = cfg.out;
    return cfg;
}

double single_epsilon(const ExperimentConfig& cfg) {
    if (cfg.epsilon_grid.size() != 1) {
        throw std::invalid_argument("this subcommand needs a single noise level; pass --epsilon");
    }
    return cfg.epsilon_grid.front();
}

void emit(const std::string& text, const std::string& path, std::ostream& out) {
    if (path.empty()) {
        out << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write '" + path + "'");
    f << text;
    if (!f) throw std::runtime_error("write to '" + path + "' failed");
}

std::ifstream open_input(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open '" + path + "'");
    return f;
}

struct Setup {
    ExperimentConfig cfg;
    double epsilon;
    OperatorSpectrum spectrum;
    BlockStats stats;
};

Setup single_setup(Common& c, bool require_signal) {
    ExperimentConfig cfg = make_config(c, require_signal);
    const double eps = single_epsilon(cfg);
    OperatorSpectrum spectrum = build_spectrum(cfg);
    BlockStats stats = block_stats(build_scheme(cfg, eps, spectrum), spectrum, eps);
    return Setup{std::move(cfg), eps, std::move(spectrum), std::move(stats)};
}

std::string run_blocks(Common& c) {
    const Setup s = single_setup(c, false);
    std::ostringstream os;
    os << "j,K_start,K_end,T_j,sigma2_j,Sigma2_j,Delta_j\n";
    const BlockScheme& scheme = s.stats.scheme;
    for (std::size_t j = 1; j <= scheme.block_count(); ++j) {
        os << j << ',' << scheme.first(j) << ',' << scheme.last(j) << ',' << scheme.length(j) << ','
           << format_double(s.stats.sigma2[j - 1]) << ',' << format_double(s.stats.Sigma2[j - 1]) << ','
           << format_double(s.stats.Delta[j - 1]) << '\n';
    }
    os << "rho_eps=" << format_double(s.stats.rho_eps) << ",N=" << scheme.last_index()
       << ",J=" << scheme.block_count() << '\n';
    return os.str();
}

std::string run_simulate(Common& c, const std::string& spectrum_out, const std::string& signal_out) {
    const ExperimentConfig cfg = make_config(c, true);
    const double eps = single_epsilon(cfg);
    const OperatorSpectrum spectrum = build_spectrum(cfg);
    const SignalCoefficients signal = build_signal(cfg, spectrum.size());
    RandomStream stream(cfg.master_seed);
    const Observation obs = observe(spectrum, signal, eps, stream);
    if (!spectrum_out.empty()) {
        std::ostringstream os;
        write_spectrum(os, spectrum);
        emit(os.str(), spectrum_out, std::cout);
    }
    if (!signal_out.empty()) {
        std::ostringstream os;
        write_signal(os, signal);
        emit(os.str(), signal_out, std::cout);
    }
    std::ostringstream os;
    write_observation(os, obs);
    return os.str();
}

std::string run_estimate(Common& c, const std::string& obs_path, const std::string& spectrum_path,
                         const std::string& filter_out) {
    const ExperimentConfig cfg = make_config(c, false);
    auto obs_in = open_input(obs_path);
    const Observation obs = read_observation(obs_in);
    OperatorSpectrum spectrum = spectrum_path.empty()
                                    ? power_spectrum(cfg.beta, cfg.b_scale, obs.y.size())
                                    : [&] {
                                          auto in = open_input(spectrum_path);
                                          return read_spectrum(in);
                                      }();
    if (spectrum.size() != obs.y.size()) {
        throw std::invalid_argument("estimate: spectrum and observation lengths differ");
    }
    const BlockScheme scheme = build_scheme(cfg, obs.epsilon, spectrum);
    const BlockStats stats = block_stats(scheme, spectrum, obs.epsilon);
    const PenaltyValues pen =
        build_penalty(cfg, stats, spectrum, RandomStream(cfg.master_seed).substream(0).seed());
    const BlockFilter filter = penalized_stein_filter(block_energies(obs, scheme, spectrum), stats, pen);

    std::ostringstream filter_csv;
    write_filter(filter_csv, filter.expand(obs.y.size()));
    std::ostringstream est_csv;
    write_signal(est_csv, apply_filter(filter, obs, spectrum));
    if (!filter_out.empty()) {
        emit(filter_csv.str(), filter_out, std::cout);
        return est_csv.str();
    }
    return filter_csv.str() + "\n" + est_csv.str();
}

std::string run_penalty(Common& c, double lemma2_c) {
    const Setup s = single_setup(c, false);
    const PenaltyValues pen =
        build_penalty(s.cfg, s.stats, s.spectrum, RandomStream(s.cfg.master_seed).substream(0).seed());
    std::ostringstream os;
    os << "j,pen_j,kind,lemma2_bound,sigma2_j\n";
    const std::string kind = s.cfg.penalty == PenaltyChoice::none ? "none" : to_string(pen.kind);
    for (std::size_t j = 1; j <= s.stats.block_count(); ++j) {
        os << j << ',' << format_double(pen.pen[j - 1]) << ',' << kind << ','
           << format_double(lemma2_bound(s.stats, j, lemma2_c)) << ','
           << format_double(s.stats.sigma2[j - 1]) << '\n';
    }
    return os.str();
}

std::string run_verify_hull(Common& c, const std::string& variant, double b, const std::string& c2_text,
                            const std::string& calibrate) {
    const Setup s = single_setup(c, true);
    const SignalCoefficients signal = build_signal(s.cfg, s.spectrum.size());
    const RandomStream root(s.cfg.master_seed);
    const PenaltyValues pen = build_penalty(s.cfg, s.stats, s.spectrum, root.substream(0).seed());
    const McOptions mc{s.cfg.reps, root.substream(1).seed(), 1e-9};

    std::vector<HullVariant> variants;
    if (variant == "both") {
        variants = {HullVariant::V, HullVariant::W};
    } else {
        variants = {parse_hull_variant(variant)};
    }

    double c2 = 0.0;
    if (c2_text == "auto") {
        // residual sized to the measured excess of eta_j over 2 pen_j
        const HullCheck probe = verify_hull(HullSpec{pen, 0.0, 0.0, HullVariant::V}, signal, s.stats,
                                            s.spectrum, McOptions{s.cfg.reps, root.substream(2).seed(), 1e-9});
        c2 = probe.excess_double_pen.mean;
    } else {
        c2 = parse_double(c2_text, "--C2");
    }

    std::ostringstream os;
    os << "variant,B,C2,mean,std_error,holds\n";
    const auto row = [&](HullVariant v, double bval, const HullCheck& h) {
        os << to_string(v) << ',' << format_double(bval) << ',' << format_double(c2) << ','
           << format_double(h.mean) << ',' << format_double(h.std_error) << ','
           << (h.holds ? "true" : "false") << '\n';
    };
    if (!calibrate.empty()) {
        std::vector<double> grid;
        for (const auto& cell : split(calibrate, ',')) grid.push_back(parse_double(cell, "--calibrate"));
        for (HullVariant v : variants) {
            const Calibration cal = calibrate_B(signal, s.stats, s.spectrum, pen, c2, v, mc, grid);
            for (const auto& p : cal.profile) row(v, p.B, p.check);
            if (!cal.B) {
                throw std::runtime_error("calibrate_B: no grid value of B makes " + to_string(v) +
                                         " a hull");
            }
        }
        return os.str();
    }
    for (HullVariant v : variants) {
        row(v, b, verify_hull(HullSpec{pen, b, c2, v}, signal, s.stats, s.spectrum, mc));
    }
    return os.str();
}

std::string run_oracle_ratio_cmd(Common& c) {
    RiskReport report = run_oracle_ratio(make_config(c, true));
    std::ostringstream os;
    write_report(os, report);
    return os.str();
}

std::string run_check(Common& c, double eta, double a2_bound) {
    const Setup s = single_setup(c, false);
    const RandomStream root(s.cfg.master_seed);
    const PenaltyValues pen = build_penalty(s.cfg, s.stats, s.spectrum, root.substream(0).seed());

    std::ostringstream os;
    os << "check,value,std_error,status\n";
    std::vector<double> phi(s.stats.block_count());
    bool phi_positive = true;
    for (std::size_t j = 0; j < phi.size(); ++j) {
        phi[j] = pen.pen[j] / s.stats.sigma2[j];
        phi_positive = phi_positive && phi[j] > 0.0;
    }
    if (phi_positive) {
        const A1Report a1 = check_a1(s.stats, phi);
        os << "a1_lhs," << format_double(a1.lhs) << ",," << (a1.side_condition_holds ? "pass" : "fail") << '\n';
    } else {
        os << "a1_lhs,nan,,skipped\n";
    }
    const McOptions mc{std::max<std::size_t>(s.cfg.penalty_reps, 10000), root.substream(2).seed(), 1e-9};
    const A2Report a2 = check_a2(s.stats, s.spectrum, pen, mc);
    os << "a2_sum_over_eps2," << format_double(a2.sum_over_eps2) << ',' << format_double(a2.std_error) << ','
       << (a2.sum_over_eps2 <= a2_bound ? "pass" : "fail") << '\n';
    const RatioReport ratio = check_ratio_condition(s.stats, eta);
    os << "ratio_condition," << format_double(ratio.worst_ratio) << ",,"
       << (ratio.vacuous ? "vacuous" : ratio.holds ? "pass" : "fail") << '\n';
    return os.str();
}

}  // namespace

int cli_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Adaptive blockwise Stein estimation in the Gaussian sequence model", "steinhull"};
    app.require_subcommand(1);

    std::map<std::string, Common> commons;
    const auto sub = [&](const char* name, const char* help) {
        CLI::App* cmd = app.add_subcommand(name, help);
        add_common(cmd, commons[name]);
        return cmd;
    };

    CLI::App* blocks = sub("blocks", "print the block scheme and per-block statistics");
    CLI::App* simulate = sub("simulate", "draw one observation from the sequence model");
    std::string spectrum_out, signal_out;
    simulate->add_option("--spectrum-out", spectrum_out, "also write the spectrum CSV");
    simulate->add_option("--signal-out", signal_out, "also write the signal CSV");

    CLI::App* estimate = sub("estimate", "penalized blockwise Stein estimate from an observation CSV");
    std::string obs_path, spectrum_path, filter_out;
    estimate->add_option("--observation", obs_path, "observation CSV")->required();
    estimate->add_option("--spectrum", spectrum_path, "spectrum CSV (default: power spectrum)");
    estimate->add_option("--filter-out", filter_out, "write the filter CSV here");

    CLI::App* penalty = sub("penalty", "per-block penalties");
    double lemma2_c = 1.0;
    penalty->add_option("--lemma2-c", lemma2_c, "constant C of the lower bound");

    CLI::App* hull = sub("verify-hull", "Monte-Carlo check of the risk hull inequality");
    std::string variant = "both", c2_text = "auto", calibrate;
    double b_value = 0.0;
    hull->add_option("--variant", variant, "V, W or both");
    hull->add_option("--B", b_value, "hull constant B");
    hull->add_option("--C2", c2_text, "residual constant C2, or 'auto'");
    hull->add_option("--calibrate", calibrate, "comma-separated increasing grid of B");

    CLI::App* ratio = sub("oracle-ratio", "risk of the adaptive estimators relative to the oracles");
    CLI::App* check = sub("check", "assumption checks on the configured penalty");
    double eta = 0.3, a2_bound = 1.0;
    check->add_option("--eta", eta, "tolerance of the neighbouring-block variance ratio");
    check->add_option("--a2-bound", a2_bound, "pass threshold for the normalized excess sum");

    if (args.size() <= 1) {
        err << app.help();
        return 2;
    }
    std::vector<std::string> rev(args.rbegin(), args.rend() - 1);
    try {
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 && e.get_exit_code() == 0 ? 0 : 2;
    }

    try {
        std::string text;
        std::string path;
        const auto finish = [&](const char* name, std::string produced) {
            text = std::move(produced);
            path = commons[name].out_path;
        };
        if (*blocks) {
            finish("blocks", run_blocks(commons["blocks"]));
        } else if (*simulate) {
            finish("simulate", run_simulate(commons["simulate"], spectrum_out, signal_out));
        } else if (*estimate) {
            finish("estimate", run_estimate(commons["estimate"], obs_path, spectrum_path, filter_out));
        } else if (*penalty) {
            finish("penalty", run_penalty(commons["penalty"], lemma2_c));
        } else if (*hull) {
            finish("verify-hull", run_verify_hull(commons["verify-hull"], variant, b_value, c2_text, calibrate));
        } else if (*ratio) {
            finish("oracle-ratio", run_oracle_ratio_cmd(commons["oracle-ratio"]));
        } else if (*check) {
            finish("check", run_check(commons["check"], eta, a2_bound));
        }
        emit(text, path, out);
        return 0;
    } catch (const std::exception& e) {
        err << "steinhull: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace steinhull
