// Copyright 2026 The ghzsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef GHZSIM_CLI_COMMANDS_HPP
#define GHZSIM_CLI_COMMANDS_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ghzsim::cli {

/// Bad flag values or combinations; the driver exits with status 2.
class UsageError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Inclusive start:stop:step range in km; a bare number is a single point.
struct DistanceRange {
    double start = 0.0;
    double stop = 200.0;
    double step = 5.0;

    static DistanceRange parse(const std::string& text);
    std::vector<double> values() const;
};

/// Shortest decimal text that reads back to the same double.
std::string format_double(double value);

struct RateSweepOptions {
    std::vector<int> n_users{4};
    DistanceRange distance{};
    std::optional<double> fidelity;
    std::optional<double> a2;
    std::string source = "bell";
    double attenuation_db_per_km = 0.2;
    /// Adds rate_simulated and fidelity_simulated from the full simulation.
    bool simulate = false;
    /// Adds Monte Carlo columns when positive.
    std::uint64_t samples = 0;
    std::uint64_t seed = 1;
    // Used with --source spdc.
    double squeezing_db = 0.43;
    double efficiency = 0.8;
    double dark = 1e-6;
    double t = 0.95;
    int cutoff = 3;
};

struct SpdcSweepOptions {
    std::vector<int> n_users{4};
    DistanceRange distance{0.0, 300.0, 10.0};
    std::vector<double> squeezing_db{0.43};
    std::vector<double> t{0.95};
    /// Herald detectors; the central node always uses photon-number resolution.
    std::vector<std::string> detector{"pnrd"};
    double efficiency = 0.8;
    double dark = 1e-6;
    double attenuation_db_per_km = 0.2;
    /// Photon-number truncation of each squeezed vacuum.
    int cutoff = 3;
    std::uint64_t samples = 0;
    std::uint64_t seed = 1;
};

struct PurifyOptions {
    int n_users = 4;
    DistanceRange distance{50.0, 50.0, 1.0};
    std::optional<double> fidelity;
    std::optional<double> a2;
    double attenuation_db_per_km = 0.2;
};

struct VerifyOptions {
    bool json = false;
    /// Phase added to every central splitter, to check that the suite notices.
    std::optional<double> hbs_phase_fault;
};

void run_rate_sweep(const RateSweepOptions& options, std::ostream& out);
void run_spdc_sweep(const SpdcSweepOptions& options, std::ostream& out);
void run_purify(const PurifyOptions& options, std::ostream& out);

struct CheckResult {
    std::string name;
    double expected = 0.0;
    double got = 0.0;
    double tolerance = 0.0;
    bool passed = false;
};

std::vector<CheckResult> verification_checks(const VerifyOptions& options);

/// Writes the report; returns true iff every check passed.
bool run_verify(const VerifyOptions& options, std::ostream& out);

}  // namespace ghzsim::cli

#endif  // GHZSIM_CLI_COMMANDS_HPP
