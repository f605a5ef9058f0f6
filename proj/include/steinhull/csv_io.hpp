#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "steinhull/model.hpp"

namespace steinhull {

/// Shortest decimal form that round-trips; "nan" / "inf" / "-inf" otherwise.
std::string format_double(double v);

/// Strict parse of a full token; throws std::invalid_argument naming `what`.
double parse_double(std::string_view token, std::string_view what);
long long parse_integer(std::string_view token, std::string_view what);
std::uint64_t parse_unsigned(std::string_view token, std::string_view what);

std::vector<std::string> split(std::string_view text, char sep);
std::string_view trim(std::string_view s);

void write_spectrum(std::ostream& os, const OperatorSpectrum& spectrum);
OperatorSpectrum read_spectrum(std::istream& is);

void write_signal(std::ostream& os, const SignalCoefficients& signal);
SignalCoefficients read_signal(std::istream& is);

/// `k,y_k` rows followed by the line `epsilon=<value>,seed=<value>`.
void write_observation(std::ostream& os, const Observation& obs);
Observation read_observation(std::istream& is);

/// `k,lambda_k` rows, per-index form.
void write_filter(std::ostream& os, const std::vector<double>& lambda);

}  // namespace steinhull
