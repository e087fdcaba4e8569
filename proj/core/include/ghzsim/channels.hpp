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

#ifndef GHZSIM_CHANNELS_HPP
#define GHZSIM_CHANNELS_HPP

#include <compare>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ghzsim/fock.hpp"
#include "ghzsim/optics.hpp"

namespace ghzsim {

/// Raised when conditioning on a detection pattern that cannot occur.
class ZeroProbabilityPattern : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Transmittance of a fibre link of `length_km` with the given attenuation.
double eta_from_distance(double length_km, double attenuation_db_per_km = 0.2);

struct LossChannel {
    double eta = 1.0;
};

/// Pure-loss channel on each listed mode, as Kraus branches indexed by the number
/// of photons lost per mode. Identical branches are merged.
MixedState apply_loss(const PureState& state, std::span<const int> modes, double eta);
MixedState apply_loss(const MixedState& state, std::span<const int> modes, double eta);

enum class DetectorKind { IdealPNRD, Threshold, QuasiPNRD };

/// Single-mode detector with Fock-diagonal response. Outcomes are photon counts
/// for PNRD, 0/1 for a threshold detector and the number of firing threshold
/// detectors for a quasi-PNRD. Dark counts are an independent per-attempt
/// Bernoulli event: they OR with a threshold click and add one count to a PNRD.
struct DetectorModel {
    DetectorKind kind = DetectorKind::IdealPNRD;
    double efficiency = 1.0;
    double dark_prob = 0.0;
    /// Number of threshold detectors behind the splitter tree (QuasiPNRD only).
    int multiplex = 1;

    static DetectorModel pnrd(double efficiency = 1.0, double dark_prob = 0.0);
    static DetectorModel threshold(double efficiency = 1.0, double dark_prob = 0.0);
    static DetectorModel quasi_pnrd(int n_detectors, double efficiency = 1.0, double dark_prob = 0.0);

    void validate() const;
    bool is_ideal() const;
    /// Largest outcome with non-zero probability for `photons` incident photons.
    int max_outcome(int photons) const;
    /// P(outcome | photons).
    double response(int photons, int outcome) const;
    /// "pnrd", "threshold" or "quasi:<n>".
    std::string name() const;
    /// Parses the forms produced by name().
    static DetectorModel parse(const std::string& text, double efficiency = 1.0, double dark_prob = 0.0);
};

/// Click probability of a threshold detector hit by `photons` photons.
double threshold_click_probability(int photons, double efficiency, double dark_prob);

struct DetectionPattern {
    std::vector<int> outcomes;

    std::size_t size() const { return outcomes.size(); }
    int operator[](std::size_t i) const { return outcomes[i]; }
    std::string to_string() const;
    auto operator<=>(const DetectionPattern&) const = default;
    bool operator==(const DetectionPattern&) const = default;
};

struct PatternOutcome {
    DetectionPattern pattern;
    double probability;
    /// Renormalized ensemble on the undetected modes.
    MixedState residual;
};

/// Every pattern with non-zero probability, in ascending pattern order.
/// Probabilities sum to the ensemble's total weight.
std::vector<PatternOutcome> click_distribution(const MixedState& state, std::span<const int> detector_modes,
                                               const DetectorModel& model);

struct ConditionedState {
    double probability;
    MixedState residual;
};

/// Throws ZeroProbabilityPattern if `pattern` cannot occur.
ConditionedState condition_on_pattern(const MixedState& state, std::span<const int> detector_modes,
                                      const DetectorModel& model, const DetectionPattern& pattern);

/// Unnormalized residual on the undetected modes for one photon-number
/// configuration `incident` on the detected modes.
struct IncidentBranch {
    double weight;
    FockBasisState incident;
    PureState residual;
};

std::vector<IncidentBranch> split_by_incident(const MixedState& state, std::span<const int> detector_modes);

/// Same as above on a precomputed split; lets many patterns share one split.
ConditionedState condition_on_pattern(std::span<const IncidentBranch> split, std::size_t residual_modes,
                                      const DetectorModel& model, const DetectionPattern& pattern);

/// Probability that k photons entering a splitter tree over n threshold detectors
/// all land on one detector, i.e. are read as a single photon: (1/n)^(k-1).
double quasi_pnrd_misid_prob(int n_detectors, int k_photons);

/// Splitter chain with reflectances 1/n, 1/(n-1), ..., 1/2 routing mode 0 onto
/// modes 0..n-1, one threshold detector each.
ModeUnitary quasi_pnrd_splitter_tree(int n_detectors);

/// Distribution of the number of firing detectors when k photons enter the tree,
/// obtained by propagating the Fock state through the splitter tree.
std::vector<double> simulate_quasi_pnrd(int n_detectors, int k_photons, double efficiency = 1.0,
                                        double dark_prob = 0.0);

}  // namespace ghzsim

#endif  // GHZSIM_CHANNELS_HPP
