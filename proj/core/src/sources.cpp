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

#include "ghzsim/sources.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

#include "ghzsim/optics.hpp"

namespace ghzsim {

PureState bell_pair(double a, int cutoff) {
    if (!(a >= 0.0 && a <= 1.0)) {
        throw std::invalid_argument("Bell source amplitude a must lie in [0, 1]");
    }
    PureState s(2, cutoff);
    s.add({0, 0}, a);
    s.add({1, 1}, std::sqrt(1.0 - a * a));
    return s;
}

PureState tmsv_truncated(double lambda, int cutoff) {
    if (!(lambda >= 0.0 && lambda < 1.0)) {
        throw std::invalid_argument("TMSV parameter lambda must lie in [0, 1)");
    }
    if (cutoff < 1) {
        throw std::invalid_argument("TMSV cutoff must be at least 1");
    }
    PureState s(2, cutoff);
    const double norm = std::sqrt(1.0 - lambda * lambda);
    double power = 1.0;
    for (int n = 0; n <= cutoff; ++n) {
        s.add({n, n}, norm * power);
        power *= lambda;
    }
    return s;
}

double lambda_from_squeezing_db(double squeezing_db) {
    if (squeezing_db < 0.0) {
        throw std::invalid_argument("squeezing level must be non-negative");
    }
    return std::tanh(squeezing_db * std::log(10.0) / 20.0);
}

HeraldedState herald_single_photon(double lambda, int cutoff, const DetectorModel& herald, double t) {
    if (!(t >= 0.0 && t <= 1.0)) {
        throw std::invalid_argument("splitter transmittance t must lie in [0, 1]");
    }
    // Modes: signal, idler, vacuum port of the splitter.
    const PureState pair = tensor(tmsv_truncated(lambda, cutoff), PureState::vacuum(1, cutoff));
    const std::array<int, 1> signal{0};
    const ConditionedState heralded =
        condition_on_pattern(MixedState(pair), signal, herald, DetectionPattern{{1}});

    Eigen::MatrixXcd split(2, 2);
    split << std::sqrt(t), -std::sqrt(1.0 - t), std::sqrt(1.0 - t), std::sqrt(t);
    const std::array<int, 2> ports{0, 1};
    return {heralded.probability, apply(ModeUnitary(std::move(split)), heralded.residual, ports)};
}

PureState coherent_qubit(Amplitude alpha, int cutoff) {
    PureState s(1, cutoff);
    const double norm = std::sqrt(1.0 + std::norm(alpha));
    s.add({0}, 1.0 / norm);
    s.add({1}, alpha / norm);
    return s;
}

int max_photons(const SourceSpec& spec) {
    if (std::holds_alternative<HeraldedSpdcSource>(spec)) {
        return std::get<HeraldedSpdcSource>(spec).cutoff;
    }
    return 1;
}

MixedState user_state(const SourceSpec& spec, int cutoff) {
    if (const auto* bell = std::get_if<BellSource>(&spec)) {
        return MixedState(bell_pair(bell->a, cutoff));
    }
    if (const auto* spdc = std::get_if<HeraldedSpdcSource>(&spec)) {
        const HeraldedState h = herald_single_photon(spdc->lambda, spdc->cutoff, spdc->herald, spdc->t);
        MixedState out(2);
        const MixedState renormalized = h.state.renormalized();
        for (const auto& b : renormalized.branches()) {
            out.add_branch(b.weight, b.state.with_cutoff(cutoff));
        }
        return out;
    }
    throw std::invalid_argument("coherent-qubit sources only fill unused central inputs");
}

std::string source_name(const SourceSpec& spec) {
    if (std::holds_alternative<BellSource>(spec)) {
        return "bell";
    }
    if (std::holds_alternative<HeraldedSpdcSource>(spec)) {
        return "spdc";
    }
    return "coherent";
}

}  // namespace ghzsim
