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

#include "ghzsim/channels.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace ghzsim {

namespace {

double binomial(int n, int k) {
    if (k < 0 || k > n) {
        return 0.0;
    }
    double c = 1.0;
    for (int i = 1; i <= k; ++i) {
        c = c * (n - k + i) / i;
    }
    return c;
}

double binomial_pmf(int k, int n, double p) {
    if (k < 0 || k > n) {
        return 0.0;
    }
    return binomial(n, k) * std::pow(p, k) * std::pow(1.0 - p, n - k);
}

void check_probability(double p, const char* what) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw std::invalid_argument(std::string(what) + " must lie in [0, 1]");
    }
}

}  // namespace

double eta_from_distance(double length_km, double attenuation_db_per_km) {
    if (length_km < 0.0) {
        throw std::invalid_argument("distance must be non-negative");
    }
    if (attenuation_db_per_km < 0.0) {
        throw std::invalid_argument("attenuation must be non-negative");
    }
    return std::pow(10.0, -attenuation_db_per_km * length_km / 10.0);
}

MixedState apply_loss(const PureState& state, std::span<const int> modes, double eta) {
    check_probability(eta, "transmittance");
    validate_modes(modes, state.mode_count());
    // Kraus operator K_l on one mode: |n> -> sqrt(C(n,l) eta^(n-l) (1-eta)^l) |n-l>.
    std::map<std::vector<int>, PureState::TermMap> by_lost;
    std::vector<int> lost(modes.size(), 0);
    for (const auto& [occ, amp] : state.terms()) {
        // Odometer over the lost-photon count of every listed mode.
        std::fill(lost.begin(), lost.end(), 0);
        while (true) {
            double factor = 1.0;
            FockBasisState out = occ;
            for (std::size_t k = 0; k < modes.size(); ++k) {
                const int n = occ[static_cast<std::size_t>(modes[k])];
                const int l = lost[k];
                factor *= std::sqrt(binomial(n, l) * std::pow(eta, n - l) * std::pow(1.0 - eta, l));
                out.set(static_cast<std::size_t>(modes[k]), n - l);
            }
            if (factor != 0.0) {
                by_lost[lost][out] += amp * factor;
            }
            std::size_t k = 0;
            for (; k < modes.size(); ++k) {
                if (lost[k] < occ[static_cast<std::size_t>(modes[k])]) {
                    ++lost[k];
                    break;
                }
                lost[k] = 0;
            }
            if (k == modes.size()) {
                break;
            }
        }
    }
    MixedState out(state.mode_count());
    for (auto& [_, terms] : by_lost) {
        PureState branch =
            PureState::from_terms(state.mode_count(), state.cutoff(), std::move(terms), state.prune_threshold());
        out.add_branch(branch.norm_squared(), branch);
    }
    return out.merged();
}

MixedState apply_loss(const MixedState& state, std::span<const int> modes, double eta) {
    MixedState out(state.mode_count());
    for (const auto& b : state.branches()) {
        const MixedState lossy = apply_loss(b.state, modes, eta);
        for (const auto& nb : lossy.branches()) {
            out.add_branch(b.weight * nb.weight, nb.state);
        }
    }
    return out.merged();
}

DetectorModel DetectorModel::pnrd(double efficiency, double dark_prob) {
    DetectorModel m{DetectorKind::IdealPNRD, efficiency, dark_prob, 1};
    m.validate();
    return m;
}

DetectorModel DetectorModel::threshold(double efficiency, double dark_prob) {
    DetectorModel m{DetectorKind::Threshold, efficiency, dark_prob, 1};
    m.validate();
    return m;
}

DetectorModel DetectorModel::quasi_pnrd(int n_detectors, double efficiency, double dark_prob) {
    DetectorModel m{DetectorKind::QuasiPNRD, efficiency, dark_prob, n_detectors};
    m.validate();
    return m;
}

void DetectorModel::validate() const {
    check_probability(efficiency, "detector efficiency");
    check_probability(dark_prob, "dark-count probability");
    if (kind == DetectorKind::QuasiPNRD && multiplex < 1) {
        throw std::invalid_argument("quasi-PNRD needs at least one detector");
    }
}

bool DetectorModel::is_ideal() const {
    return kind == DetectorKind::IdealPNRD && efficiency == 1.0 && dark_prob == 0.0;
}

int DetectorModel::max_outcome(int photons) const {
    switch (kind) {
        case DetectorKind::IdealPNRD:
            return photons + (dark_prob > 0.0 ? 1 : 0);
        case DetectorKind::Threshold:
            return 1;
        case DetectorKind::QuasiPNRD:
            return multiplex;
    }
    return 0;
}

double threshold_click_probability(int photons, double efficiency, double dark_prob) {
    return 1.0 - (1.0 - dark_prob) * std::pow(1.0 - efficiency, photons);
}

double DetectorModel::response(int photons, int outcome) const {
    if (photons < 0 || outcome < 0) {
        return 0.0;
    }
    switch (kind) {
        case DetectorKind::IdealPNRD:
            return (1.0 - dark_prob) * binomial_pmf(outcome, photons, efficiency) +
                   dark_prob * binomial_pmf(outcome - 1, photons, efficiency);
        case DetectorKind::Threshold: {
            const double click = threshold_click_probability(photons, efficiency, dark_prob);
            return outcome == 1 ? click : outcome == 0 ? 1.0 - click : 0.0;
        }
        case DetectorKind::QuasiPNRD: {
            const int n = multiplex;
            if (outcome > n) {
                return 0.0;
            }
            // P(a given set of t detectors stays silent), photons split uniformly.
            auto silent = [&](int t) {
                return std::pow(1.0 - dark_prob, t) * std::pow(1.0 - t * efficiency / n, photons);
            };
            double exactly = 0.0;
            for (int i = 0; i <= outcome; ++i) {
                exactly += (i % 2 == 0 ? 1.0 : -1.0) * binomial(outcome, i) * silent(n - outcome + i);
            }
            return std::max(0.0, binomial(n, outcome) * exactly);
        }
    }
    return 0.0;
}

std::string DetectorModel::name() const {
    switch (kind) {
        case DetectorKind::IdealPNRD:
            return "pnrd";
        case DetectorKind::Threshold:
            return "threshold";
        case DetectorKind::QuasiPNRD:
            return "quasi:" + std::to_string(multiplex);
    }
    return "unknown";
}

DetectorModel DetectorModel::parse(const std::string& text, double efficiency, double dark_prob) {
    if (text == "pnrd") {
        return pnrd(efficiency, dark_prob);
    }
    if (text == "threshold") {
        return threshold(efficiency, dark_prob);
    }
    if (text.rfind("quasi:", 0) == 0) {
        std::size_t used = 0;
        int n = 0;
        try {
            n = std::stoi(text.substr(6), &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != text.size() - 6) {
            throw std::invalid_argument("malformed quasi-PNRD detector spec: " + text);
        }
        return quasi_pnrd(n, efficiency, dark_prob);
    }
    throw std::invalid_argument("unknown detector kind: " + text);
}

std::string DetectionPattern::to_string() const {
    std::string s = "(";
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
        if (i > 0) {
            s += ',';
        }
        s += std::to_string(outcomes[i]);
    }
    return s + ")";
}

namespace {

MixedState finish(std::size_t mode_count, const std::vector<Branch>& parts, double total) {
    MixedState m(mode_count);
    for (const auto& p : parts) {
        m.add_branch(p.weight / total, p.state);
    }
    return m.merged();
}

}  // namespace

std::vector<IncidentBranch> split_by_incident(const MixedState& state, std::span<const int> modes) {
    validate_modes(modes, state.mode_count());
    std::vector<IncidentBranch> out;
    const std::size_t rest = state.mode_count() - modes.size();
    for (const auto& b : state.branches()) {
        std::map<FockBasisState, PureState::TermMap> groups;
        for (const auto& [occ, amp] : b.state.terms()) {
            groups[occ.select(modes)].emplace(occ.drop(modes), amp);
        }
        for (auto& [incident, terms] : groups) {
            PureState r = PureState::from_terms(rest, b.state.cutoff(), std::move(terms), b.state.prune_threshold());
            if (!r.empty()) {
                out.push_back({b.weight, incident, std::move(r)});
            }
        }
    }
    return out;
}

std::vector<PatternOutcome> click_distribution(const MixedState& state, std::span<const int> detector_modes,
                                               const DetectorModel& model) {
    model.validate();
    const std::size_t rest = state.mode_count() - detector_modes.size();
    std::map<DetectionPattern, std::vector<Branch>> parts;
    std::map<DetectionPattern, double> totals;
    for (const auto& sb : split_by_incident(state, detector_modes)) {
        const double base = sb.weight * sb.residual.norm_squared();
        // Enumerate the product of per-detector outcome distributions.
        std::vector<std::vector<double>> per_detector;
        for (std::size_t d = 0; d < detector_modes.size(); ++d) {
            const int n = sb.incident[d];
            std::vector<double> probs;
            for (int o = 0; o <= model.max_outcome(n); ++o) {
                probs.push_back(model.response(n, o));
            }
            per_detector.push_back(std::move(probs));
        }
        std::vector<int> outcome(detector_modes.size(), 0);
        auto recurse = [&](auto&& self, std::size_t d, double p) -> void {
            if (p == 0.0) {
                return;
            }
            if (d == detector_modes.size()) {
                DetectionPattern pattern{outcome};
                parts[pattern].push_back({base * p, sb.residual});
                totals[pattern] += base * p;
                return;
            }
            for (std::size_t o = 0; o < per_detector[d].size(); ++o) {
                outcome[d] = static_cast<int>(o);
                self(self, d + 1, p * per_detector[d][o]);
            }
        };
        recurse(recurse, 0, 1.0);
    }
    std::vector<PatternOutcome> out;
    for (auto& [pattern, branches] : parts) {
        const double total = totals[pattern];
        if (total > 0.0) {
            out.push_back({pattern, total, finish(rest, branches, total)});
        }
    }
    return out;
}

ConditionedState condition_on_pattern(const MixedState& state, std::span<const int> detector_modes,
                                      const DetectorModel& model, const DetectionPattern& pattern) {
    if (pattern.size() != detector_modes.size()) {
        throw std::invalid_argument("pattern length " + std::to_string(pattern.size()) + " does not match " +
                                    std::to_string(detector_modes.size()) + " detectors");
    }
    return condition_on_pattern(split_by_incident(state, detector_modes),
                                state.mode_count() - detector_modes.size(), model, pattern);
}

ConditionedState condition_on_pattern(std::span<const IncidentBranch> split, std::size_t residual_modes,
                                      const DetectorModel& model, const DetectionPattern& pattern) {
    model.validate();
    std::vector<Branch> parts;
    double total = 0.0;
    for (const auto& sb : split) {
        if (sb.incident.size() != pattern.size()) {
            throw std::invalid_argument("pattern length " + std::to_string(pattern.size()) + " does not match " +
                                        std::to_string(sb.incident.size()) + " detectors");
        }
        double p = 1.0;
        for (std::size_t d = 0; d < pattern.size() && p > 0.0; ++d) {
            p *= model.response(sb.incident[d], pattern[d]);
        }
        if (p == 0.0) {
            continue;
        }
        const double w = sb.weight * sb.residual.norm_squared() * p;
        parts.push_back({w, sb.residual});
        total += w;
    }
    if (!(total > 0.0)) {
        throw ZeroProbabilityPattern("detection pattern " + pattern.to_string() + " has zero probability");
    }
    return {total, finish(residual_modes, parts, total)};
}

double quasi_pnrd_misid_prob(int n_detectors, int k_photons) {
    if (n_detectors < 1 || k_photons < 1) {
        throw std::invalid_argument("quasi-PNRD misidentification needs n >= 1 and k >= 1");
    }
    return std::pow(1.0 / n_detectors, k_photons - 1);
}

ModeUnitary quasi_pnrd_splitter_tree(int n_detectors) {
    if (n_detectors < 1) {
        throw std::invalid_argument("splitter tree needs at least one detector");
    }
    ModeUnitary tree = ModeUnitary::identity(n_detectors);
    for (int k = 0; k + 1 < n_detectors; ++k) {
        const double r = 1.0 / (n_detectors - k);
        Eigen::MatrixXcd bs(2, 2);
        bs << std::sqrt(r), -std::sqrt(1.0 - r), std::sqrt(1.0 - r), std::sqrt(r);
        const std::array<int, 2> pair{k, k + 1};
        tree = ModeUnitary::embed(ModeUnitary(std::move(bs)), pair, n_detectors) * tree;
    }
    return tree;
}

std::vector<double> simulate_quasi_pnrd(int n_detectors, int k_photons, double efficiency, double dark_prob) {
    if (k_photons < 0) {
        throw std::invalid_argument("photon number must be non-negative");
    }
    const ModeUnitary tree = quasi_pnrd_splitter_tree(n_detectors);
    FockBasisState in = FockBasisState::vacuum(static_cast<std::size_t>(n_detectors));
    in.set(0, k_photons);
    const PureState input = PureState::basis(in, std::max(k_photons, 1));
    std::vector<int> modes(static_cast<std::size_t>(n_detectors));
    for (int i = 0; i < n_detectors; ++i) {
        modes[static_cast<std::size_t>(i)] = i;
    }
    const PureState routed = apply(tree, input, modes);

    std::vector<double> clicks(static_cast<std::size_t>(n_detectors) + 1, 0.0);
    for (const auto& [occ, amp] : routed.terms()) {
        // Distribution of the number of firing detectors for this routing.
        std::vector<double> dist{1.0};
        for (int d = 0; d < n_detectors; ++d) {
            const double fire = threshold_click_probability(occ[static_cast<std::size_t>(d)], efficiency, dark_prob);
            std::vector<double> next(dist.size() + 1, 0.0);
            for (std::size_t j = 0; j < dist.size(); ++j) {
                next[j] += dist[j] * (1.0 - fire);
                next[j + 1] += dist[j] * fire;
            }
            dist = std::move(next);
        }
        for (std::size_t j = 0; j < dist.size(); ++j) {
            clicks[j] += std::norm(amp) * dist[j];
        }
    }
    return clicks;
}

}  // namespace ghzsim
