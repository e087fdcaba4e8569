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

#ifndef GHZSIM_SOURCES_HPP
#define GHZSIM_SOURCES_HPP

#include <string>
#include <variant>

#include "ghzsim/channels.hpp"
#include "ghzsim/fock.hpp"

namespace ghzsim {

/// a|00> + b|11> on (retained, flying), b = sqrt(1 - a^2).
struct BellSource {
    double a = 1.0 / 1.4142135623730951;
};

/// Heralded SPDC: TMSV with tanh-parameter `lambda`, signal heralded by `herald`,
/// idler split on a beamsplitter of transmittance `t` (retained port gets sqrt(t)).
struct HeraldedSpdcSource {
    double lambda = 0.0;
    double t = 0.95;
    int cutoff = 3;
    DetectorModel herald = DetectorModel::pnrd();
};

struct CoherentQubitSource {
    Amplitude alpha{};
};

using SourceSpec = std::variant<BellSource, HeraldedSpdcSource, CoherentQubitSource>;

PureState bell_pair(double a, int cutoff = 1);

/// sqrt(1 - lambda^2) sum_{n <= cutoff} lambda^n |n>_S |n>_I, left sub-normalized.
PureState tmsv_truncated(double lambda, int cutoff);

/// tanh r with r read from a squeezing level of 20 log10(e^r) dB.
double lambda_from_squeezing_db(double squeezing_db);

struct HeraldedState {
    /// Joint probability of the herald firing "single photon", including the
    /// truncation deficit of the TMSV.
    double herald_probability;
    /// Conditional state on (retained, flying).
    MixedState state;
};

/// Throws ZeroProbabilityPattern when the herald can never fire.
HeraldedState herald_single_photon(double lambda, int cutoff, const DetectorModel& herald, double t);

/// (|0> + alpha|1>) / sqrt(1 + |alpha|^2).
PureState coherent_qubit(Amplitude alpha, int cutoff = 1);

/// Most photons a source puts into its two modes.
int max_photons(const SourceSpec& spec);

/// Two-mode (retained, flying) ensemble for a user source; coherent-qubit specs
/// are single-mode and rejected here.
MixedState user_state(const SourceSpec& spec, int cutoff);

std::string source_name(const SourceSpec& spec);

}  // namespace ghzsim

#endif  // GHZSIM_SOURCES_HPP
