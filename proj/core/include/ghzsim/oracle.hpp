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

#ifndef GHZSIM_ORACLE_HPP
#define GHZSIM_ORACLE_HPP

#include <cstdint>
#include <span>
#include <stdexcept>

#include "ghzsim/fock.hpp"
#include "ghzsim/protocol.hpp"

namespace ghzsim {

// Brute-force reference model. Loss is an explicit beamsplitter onto an
// environment mode per link and the central circuit is applied splitter by
// splitter; only the Fock-state containers are shared with the main pipeline.

class OracleResourceError : public std::length_error {
  public:
    using std::length_error::length_error;
};

struct OracleLimits {
    int max_users = 8;
    std::size_t max_terms = 5'000'000;
};

/// Two-mode splitter acting as a_p^dag -> u00 b_p^dag + u10 b_q^dag and
/// a_q^dag -> u01 b_p^dag + u11 b_q^dag.
struct SplitterMatrix {
    Amplitude u00, u01, u10, u11;
};

PureState apply_splitter(const PureState& state, int p, int q, const SplitterMatrix& u);

/// Loss on `modes` by coupling each to a fresh vacuum environment mode with a
/// splitter of transmittance eta and tracing the environment out.
MixedState environment_loss(const PureState& state, std::span<const int> modes, double eta);

struct OracleOutcome {
    double probability = 0.0;
    /// Weight of the ideal-link conditional state in the lossy conditional ensemble.
    double ghz_weight_alpha = 0.0;
    double fidelity = 0.0;
};

/// Bell sources and ideal photon-number-resolving detection, even n only.
OracleOutcome brute_force_outcome(const ProtocolConfig& config, const DetectionPattern& pattern,
                                  const OracleLimits& limits = {});

double brute_force_pattern_prob(const ProtocolConfig& config, const DetectionPattern& pattern,
                                const OracleLimits& limits = {});

struct OracleAggregate {
    double rate = 0.0;
    double fidelity = 0.0;
    int patterns = 0;
};

/// Sum over every pattern with one click pair per block, enumerated here.
OracleAggregate brute_force_aggregate(const ProtocolConfig& config, const OracleLimits& limits = {});

struct MonteCarloEstimate {
    double estimate = 0.0;
    double standard_error = 0.0;
    std::uint64_t samples = 0;
    std::uint64_t successes = 0;
};

/// Samples full detection patterns from the network's click distribution and
/// counts success patterns. Samples are drawn in fixed chunks, each with its own
/// generator seeded from (seed, chunk index), so the result does not depend on
/// the thread count.
MonteCarloEstimate monte_carlo_rate(const ProtocolConfig& config, std::uint64_t samples, std::uint64_t seed);

}  // namespace ghzsim

#endif  // GHZSIM_ORACLE_HPP
