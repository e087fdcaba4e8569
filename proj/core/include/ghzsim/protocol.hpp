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

#ifndef GHZSIM_PROTOCOL_HPP
#define GHZSIM_PROTOCOL_HPP

#include <optional>
#include <vector>

#include "ghzsim/channels.hpp"
#include "ghzsim/fock.hpp"
#include "ghzsim/optics.hpp"
#include "ghzsim/sources.hpp"

namespace ghzsim {

/// How the coherent input filling the spare user port is sized for odd N.
enum class OddAmplitudeRule {
    /// |alpha| = sqrt(p_fly * eta): amplitude of a surviving user photon.
    Amplitude,
    /// |alpha| = p_fly * eta: probability of a surviving user photon.
    Probability,
};

struct OddUserSettings {
    OddAmplitudeRule rule = OddAmplitudeRule::Amplitude;
    std::optional<Amplitude> alpha_override;
};

struct ProtocolConfig {
    int n_users = 4;
    double distance_km = 0.0;
    double attenuation_db_per_km = 0.2;
    /// When set, used instead of the distance-derived link transmittance.
    std::optional<double> transmittance;
    SourceSpec source = BellSource{};
    /// Central-node detectors.
    DetectorModel detector = DetectorModel::pnrd();
    /// Per-mode Fock cutoff of the network state; 0 picks the total photon capacity,
    /// which can never overflow.
    int cutoff = 0;
    OddUserSettings odd;
    CircuitOptions circuit;

    double eta() const;
    void validate() const;
    /// Users the central circuit is built for (n_users rounded up to even).
    int circuit_users() const { return n_users % 2 == 0 ? n_users : n_users + 1; }
};

/// (s1 + sign s2) / sqrt2 on the retained modes, with the overall sign of the s1
/// term as produced by the circuit.
struct GhzTarget {
    FockBasisState first;
    FockBasisState second;
    int relative_sign = 1;
    int leading_sign = 1;

    PureState state(int cutoff = 1) const;
    /// Bitwise complement of both strings; the encoding produced by heralded
    /// single-photon sources.
    GhzTarget complemented() const;
    bool operator==(const GhzTarget&) const = default;
};

struct ConditionalResult {
    DetectionPattern pattern;
    double probability = 0.0;
    /// Conditional ensemble on the retained modes, weights summing to one.
    MixedState state{0};
    double ghz_weight_alpha = 0.0;
    std::vector<double> junk_weights;
    double fidelity = 0.0;
    GhzTarget target;
};

/// One click pair per four-mode block: 6^(n/2 - 1) patterns, each detector
/// outcome 0 or 1, ordered block by block over the pairs (1,2) (1,3) (1,4)
/// (2,3) (2,4) (3,4).
std::vector<DetectionPattern> enumerate_success_patterns(int n_users);

bool is_success_pattern(const DetectionPattern& pattern, int n_users);

/// Target for a success pattern with Bell-type sources. Even n is read off an
/// ideal-link simulation; odd n drops the spare user from the n + 1 target.
GhzTarget ghz_target_for_pattern(const DetectionPattern& pattern, int n_users);

/// Target matching the encoding of the configured source.
GhzTarget ghz_target_for_config(const ProtocolConfig& config, const DetectionPattern& pattern);

/// Coherent amplitude fed into the spare port for odd n.
Amplitude odd_user_alpha(const ProtocolConfig& config);

/// Source states after link loss, ready for the central circuit. Mode order:
/// retained modes of the real users, then the central inputs in circuit order.
class Network {
  public:
    explicit Network(const ProtocolConfig& config);

    const ProtocolConfig& config() const { return config_; }
    const CentralCircuit& circuit() const { return circuit_; }
    int retained_modes() const { return retained_; }
    const std::vector<int>& central_modes() const { return central_; }
    const MixedState& lossy_state() const { return lossy_; }
    /// Lossy state after the central circuit; central modes become detector modes.
    /// Computed on first use, so a Network must not be shared across threads.
    const MixedState& detected_state() const;

    /// Conditional ensemble on the retained modes and its probability.
    ConditionedState condition(const DetectionPattern& pattern) const;

  private:
    ProtocolConfig config_;
    CentralCircuit circuit_;
    int retained_;
    std::vector<int> central_;
    MixedState lossy_;
    mutable std::optional<MixedState> detected_;
    std::vector<IncidentBranch> split_;
};

/// Splits a conditional ensemble into the target weight and orthogonal junk.
ConditionalResult decompose(const DetectionPattern& pattern, double probability, const MixedState& state,
                            const GhzTarget& target);

ConditionalResult run_attempt(const ProtocolConfig& config, const DetectionPattern& pattern);

struct RateResult {
    double rate = 0.0;
    /// sqrt of the probability-weighted target weight over success patterns.
    double fidelity = 0.0;
    std::vector<ConditionalResult> patterns;
};

/// Sums the success probability over every success pattern.
RateResult aggregate_rate(const ProtocolConfig& config);

}  // namespace ghzsim

#endif  // GHZSIM_PROTOCOL_HPP
