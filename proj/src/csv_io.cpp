#include "steinhull/csv_io.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace steinhull {

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split(std::string_view text, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = text.find(sep, start);
        out.emplace_back(trim(text.substr(start, pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

double parse_double(std::string_view token, std::string_view what) {
    token = trim(token);
    double v = 0.0;
    const auto res = std::from_chars(token.data(), token.data() + token.size(), v);
    if (token.empty() || res.ec != std::errc() || res.ptr != token.data() + token.size()) {
        throw std::invalid_argument(std::string(what) + ": cannot parse '" + std::string(token) +
                                    "' as a number");
    }
    return v;
}

long long parse_integer(std::string_view token, std::string_view what) {
    token = trim(token);
    long long v = 0;
    const auto res = std::from_chars(token.data(), token.data() + token.size(), v);
    if (token.empty() || res.ec != std::errc() || res.ptr != token.data() + token.size()) {
        throw std::invalid_argument(std::string(what) + ": cannot parse '" + std::string(token) +
                                    "' as an integer");
    }
    return v;
}

std::uint64_t parse_unsigned(std::string_view token, std::string_view what) {
    token = trim(token);
    std::uint64_t v = 0;
    const auto res = std::from_chars(token.data(), token.data() + token.size(), v);
    if (token.empty() || res.ec != std::errc() || res.ptr != token.data() + token.size()) {
        throw std::invalid_argument(std::string(what) + ": cannot parse '" + std::string(token) +
                                    "' as an unsigned integer");
    }
    return v;
}

namespace {

void write_series(std::ostream& os, const char* header, const std::vector<double>& v) {
    os << header << '\n';
    for (std::size_t i = 0; i < v.size(); ++i) {
        os << (i + 1) << ',' << format_double(v[i]) << '\n';
    }
}

// Reads `k,value` rows under the expected header. Lines that do not start
// with a digit are handed to `extra` (or rejected when it is null).
template <typename Extra>
std::vector<double> read_series(std::istream& is, std::string_view header, Extra&& extra) {
    std::string line;
    if (!std::getline(is, line) || trim(line) != header) {
        throw std::invalid_argument("expected CSV header '" + std::string(header) + "'");
    }
    std::vector<double> out;
    std::size_t lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        const auto t = trim(line);
        if (t.empty()) continue;
        if (!std::isdigit(static_cast<unsigned char>(t.front()))) {
            extra(t, lineno);
            continue;
        }
        const auto cells = split(t, ',');
        const std::string where = "line " + std::to_string(lineno);
        if (cells.size() != 2) throw std::invalid_argument(where + ": expected two columns");
        const long long k = parse_integer(cells[0], where);
        if (k != static_cast<long long>(out.size()) + 1) {
            throw std::invalid_argument(where + ": indices must run 1, 2, ... in order");
        }
        out.push_back(parse_double(cells[1], where));
    }
    return out;
}

void reject_extra(std::string_view t, std::size_t lineno) {
    throw std::invalid_argument("line " + std::to_string(lineno) + ": unexpected '" +
                                std::string(t) + "'");
}

}  // namespace

void write_spectrum(std::ostream& os, const OperatorSpectrum& spectrum) {
    write_series(os, "k,b_k", spectrum.values());
}

OperatorSpectrum read_spectrum(std::istream& is) {
    return OperatorSpectrum(read_series(is, "k,b_k", reject_extra));
}

void write_signal(std::ostream& os, const SignalCoefficients& signal) {
    write_series(os, "k,theta_k", signal.theta);
}

SignalCoefficients read_signal(std::istream& is) {
    SignalCoefficients s;
    s.theta = read_series(is, "k,theta_k", reject_extra);
    return s;
}

void write_observation(std::ostream& os, const Observation& obs) {
    write_series(os, "k,y_k", obs.y);
    os << "epsilon=" << format_double(obs.epsilon) << ",seed=" << obs.seed << '\n';
}

Observation read_observation(std::istream& is) {
    Observation obs;
    bool have_sidecar = false;
    obs.y = read_series(is, "k,y_k", [&](std::string_view t, std::size_t lineno) {
        const std::string where = "line " + std::to_string(lineno);
        for (const auto& cell : split(t, ',')) {
            const auto eq = cell.find('=');
            if (eq == std::string::npos) throw std::invalid_argument(where + ": malformed sidecar");
            const auto key = trim(std::string_view(cell).substr(0, eq));
            const auto value = std::string_view(cell).substr(eq + 1);
            if (key == "epsilon") {
                obs.epsilon = parse_double(value, where);
            } else if (key == "seed") {
                obs.seed = parse_unsigned(value, where);
            } else {
                throw std::invalid_argument(where + ": unknown sidecar key '" + std::string(key) + "'");
            }
        }
        have_sidecar = true;
    });
    if (!have_sidecar) throw std::invalid_argument("observation: missing epsilon/seed sidecar line");
    if (!(obs.epsilon > 0.0)) throw std::invalid_argument("observation: epsilon must be > 0");
    return obs;
}

void write_filter(std::ostream& os, const std::vector<double>& lambda) {
    write_series(os, "k,lambda_k", lambda);
}

}  // namespace steinhull
