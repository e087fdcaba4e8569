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

#include "ghzsim/protocol.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace ghzsim {

namespace {

constexpr std::array<std::array<int, 2>, 6> kBlockPairs{{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};

int sign_of(double x) { return x < 0.0 ? -1 : 1; }

double flying_photon_probability(const SourceSpec& source) {
    if (const auto* bell = std::get_if<BellSource>(&source)) {
        return 1.0 - bell->a * bell->a;
    }
    if (const auto* spdc = std::get_if<HeraldedSpdcSource>(&source)) {
        return 1.0 - spdc->t;
    }
    throw std::invalid_argument("user sources must be Bell or heralded SPDC");
}

}  // namespace

double ProtocolConfig::eta() const {
    if (transmittance) {
        return *transmittance;
    }
    return eta_from_distance(distance_km, attenuation_db_per_km);
}

void ProtocolConfig::validate() const {
    if (n_users < 3) {
        throw std::invalid_argument("the protocol needs at least 3 users, got " + std::to_string(n_users));
    }
    if (distance_km < 0.0) {
        throw std::invalid_argument("distance must be non-negative");
    }
    if (transmittance && !(*transmittance >= 0.0 && *transmittance <= 1.0)) {
        throw std::invalid_argument("transmittance must lie in [0, 1]");
    }
    if (cutoff < 0) {
        throw std::invalid_argument("cutoff must be non-negative");
    }
    if (std::holds_alternative<CoherentQubitSource>(source)) {
        throw std::invalid_argument("user sources must be Bell or heralded SPDC");
    }
    detector.validate();
}

PureState GhzTarget::state(int cutoff) const {
    const double s = 1.0 / std::sqrt(2.0);
    PureState out(first.size(), cutoff);
    out.add(first, leading_sign * s);
    out.add(second, leading_sign * relative_sign * s);
    return out;
}

GhzTarget GhzTarget::complemented() const {
    auto flip = [](const FockBasisState& bits) {
        FockBasisState out = bits;
        for (std::size_t i = 0; i < bits.size(); ++i) {
            out.set(i, 1 - bits[i]);
        }
        return out;
    };
    return {flip(first), flip(second), relative_sign, leading_sign};
}

std::vector<DetectionPattern> enumerate_success_patterns(int n_users) {
    if (n_users < 4 || n_users % 2 != 0) {
        throw std::invalid_argument("success patterns are defined for even n >= 4; embed odd n in n + 1");
    }
    const int blocks = n_users / 2 - 1;
    std::vector<DetectionPattern> out;
    std::vector<int> choice(static_cast<std::size_t>(blocks), 0);
    while (true) {
        DetectionPattern p{std::vector<int>(static_cast<std::size_t>(4 * blocks), 0)};
        for (int b = 0; b < blocks; ++b) {
            for (int d : kBlockPairs[static_cast<std::size_t>(choice[static_cast<std::size_t>(b)])]) {
                p.outcomes[static_cast<std::size_t>(4 * b + d)] = 1;
            }
        }
        out.push_back(std::move(p));
        int b = blocks - 1;
        for (; b >= 0; --b) {
            if (++choice[static_cast<std::size_t>(b)] < 6) {
                break;
            }
            choice[static_cast<std::size_t>(b)] = 0;
        }
        if (b < 0) {
            break;
        }
    }
    return out;
}

bool is_success_pattern(const DetectionPattern& pattern, int n_users) {
    const int even = n_users % 2 == 0 ? n_users : n_users + 1;
    if (even < 4 || static_cast<int>(pattern.size()) != 2 * even - 4) {
        return false;
    }
    for (std::size_t b = 0; b < pattern.size() / 4; ++b) {
        int clicks = 0;
        for (std::size_t d = 0; d < 4; ++d) {
            const int o = pattern[4 * b + d];
            if (o != 0 && o != 1) {
                return false;
            }
            clicks += o;
        }
        if (clicks != 2) {
            return false;
        }
    }
    return true;
}

GhzTarget ghz_target_for_pattern(const DetectionPattern& pattern, int n_users) {
    if (!is_success_pattern(pattern, n_users)) {
        throw std::invalid_argument("pattern " + pattern.to_string() + " is not a success pattern for " +
                                    std::to_string(n_users) + " users");
    }
    if (n_users % 2 != 0) {
        GhzTarget even = ghz_target_for_pattern(pattern, n_users + 1);
        std::vector<int> spare{n_users};
        return {even.first.drop(spare), even.second.drop(spare), even.relative_sign, even.leading_sign};
    }
    ProtocolConfig ideal;
    ideal.n_users = n_users;
    ideal.transmittance = 1.0;
    ideal.source = BellSource{1.0 / std::sqrt(2.0)};
    const ConditionedState c = Network(ideal).condition(pattern);
    if (c.residual.size() != 1 || c.residual.branches()[0].state.size() != 2) {
        throw std::logic_error("ideal-link conditional state is not a two-term superposition");
    }
    const auto& terms = c.residual.branches()[0].state.terms();
    // The map is ordered ascending; the larger occupation pattern leads.
    const auto& [second, a2] = *terms.begin();
    const auto& [first, a1] = *terms.rbegin();
    return {first, second, sign_of(a2.real()) * sign_of(a1.real()), sign_of(a1.real())};
}

GhzTarget ghz_target_for_config(const ProtocolConfig& config, const DetectionPattern& pattern) {
    GhzTarget t = ghz_target_for_pattern(pattern, config.n_users);
    return std::holds_alternative<HeraldedSpdcSource>(config.source) ? t.complemented() : t;
}

Amplitude odd_user_alpha(const ProtocolConfig& config) {
    if (config.odd.alpha_override) {
        return *config.odd.alpha_override;
    }
    const double surviving = flying_photon_probability(config.source) * config.eta();
    return config.odd.rule == OddAmplitudeRule::Amplitude ? std::sqrt(surviving) : surviving;
}

Network::Network(const ProtocolConfig& config)
    : config_(config), circuit_(central_circuit((config.validate(), config.circuit_users()), config.circuit)),
      retained_(config.n_users), lossy_(0) {
    const int users = config_.n_users;
    const bool odd = users % 2 != 0;
    const int capacity = users * max_photons(config_.source) + circuit_.layout.connector_count + (odd ? 1 : 0);
    const int cutoff = config_.cutoff > 0 ? config_.cutoff : std::max(capacity, 1);

    // Built as (X_1 X'_1)(X_2 X'_2)...[spare](aux pairs), then reordered.
    MixedState state = user_state(config_.source, cutoff);
    for (int i = 1; i < users; ++i) {
        state = tensor(state, user_state(config_.source, cutoff));
    }
    if (odd) {
        state = tensor(state, MixedState(coherent_qubit(odd_user_alpha(config_), cutoff)));
    }
    for (int k = 0; k < circuit_.layout.connector_count; ++k) {
        state = tensor(state, MixedState(PureState::basis(FockBasisState{1, 0}, cutoff)));
    }
    std::vector<int> order;
    for (int i = 0; i < users; ++i) {
        order.push_back(2 * i);
    }
    for (int i = 0; i < users; ++i) {
        order.push_back(2 * i + 1);
    }
    for (int m = 2 * users; m < static_cast<int>(state.mode_count()); ++m) {
        order.push_back(m);
    }
    state = permute_modes(state, order);

    for (int m = 0; m < circuit_.layout.mode_count; ++m) {
        central_.push_back(retained_ + m);
    }
    std::vector<int> flying(central_.begin(), central_.begin() + users);
    lossy_ = apply_loss(state, flying, config_.eta());
    if (!config_.detector.is_ideal()) {
        detected_ = apply(circuit_.unitary, lossy_, central_);
        split_ = split_by_incident(*detected_, central_);
    }
}

const MixedState& Network::detected_state() const {
    if (!detected_) {
        detected_ = apply(circuit_.unitary, lossy_, central_);
    }
    return *detected_;
}

ConditionedState Network::condition(const DetectionPattern& pattern) const {
    if (static_cast<int>(pattern.size()) != circuit_.layout.mode_count) {
        throw std::invalid_argument("pattern length " + std::to_string(pattern.size()) + " does not match " +
                                    std::to_string(circuit_.layout.mode_count) + " detectors");
    }
    if (!config_.detector.is_ideal()) {
        return condition_on_pattern(split_, static_cast<std::size_t>(retained_), config_.detector, pattern);
    }
    // Ideal PNRD: only the exact photon-number pattern survives, so project.
    std::vector<std::uint8_t> counts;
    for (int o : pattern.outcomes) {
        if (o < 0 || o > 255) {
            throw std::invalid_argument("photon count out of range in pattern " + pattern.to_string());
        }
        counts.push_back(static_cast<std::uint8_t>(o));
    }
    const FockBasisState out(std::move(counts));
    std::vector<Branch> parts;
    double total = 0.0;
    for (const auto& b : lossy_.branches()) {
        PureState r = project_output(circuit_.unitary, b.state, central_, out);
        const double w = b.weight * r.norm_squared();
        if (w > 0.0) {
            parts.push_back({w, std::move(r)});
            total += w;
        }
    }
    if (!(total > 0.0)) {
        throw ZeroProbabilityPattern("detection pattern " + pattern.to_string() + " has zero probability");
    }
    MixedState residual(static_cast<std::size_t>(retained_));
    for (const auto& p : parts) {
        residual.add_branch(p.weight / total, p.state);
    }
    return {total, residual.merged()};
}

ConditionalResult decompose(const DetectionPattern& pattern, double probability, const MixedState& state,
                            const GhzTarget& target) {
    const MixedState rho = state.renormalized();
    const PureState phi = target.state(rho.empty() ? 1 : rho.branches()[0].state.cutoff());
    ConditionalResult r;
    r.pattern = pattern;
    r.probability = probability;
    r.target = target;
    for (const auto& b : rho.branches()) {
        const double overlap = std::norm(inner_product(phi, b.state));
        r.ghz_weight_alpha += b.weight * overlap;
        const double junk = b.weight * (1.0 - overlap);
        if (junk > 1e-15) {
            r.junk_weights.push_back(junk);
        }
    }
    r.fidelity = std::sqrt(std::clamp(r.ghz_weight_alpha, 0.0, 1.0));
    r.state = rho;
    return r;
}

ConditionalResult run_attempt(const ProtocolConfig& config, const DetectionPattern& pattern) {
    const GhzTarget target = ghz_target_for_config(config, pattern);
    const ConditionedState c = Network(config).condition(pattern);
    return decompose(pattern, c.probability, c.residual, target);
}

RateResult aggregate_rate(const ProtocolConfig& config) {
    const Network network(config);
    RateResult out;
    double weighted_alpha = 0.0;
    for (const auto& pattern : enumerate_success_patterns(config.circuit_users())) {
        ConditionedState c{0.0, MixedState(0)};
        try {
            c = network.condition(pattern);
        } catch (const ZeroProbabilityPattern&) {
            continue;
        }
        ConditionalResult r = decompose(pattern, c.probability, c.residual, ghz_target_for_config(config, pattern));
        out.rate += r.probability;
        weighted_alpha += r.probability * r.ghz_weight_alpha;
        out.patterns.push_back(std::move(r));
    }
    if (out.patterns.empty()) {
        throw ZeroProbabilityPattern("no success pattern can occur for this configuration");
    }
    out.fidelity = std::sqrt(std::clamp(weighted_alpha / out.rate, 0.0, 1.0));
    return out;
}

}  // namespace ghzsim
