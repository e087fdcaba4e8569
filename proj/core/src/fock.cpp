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

#include "ghzsim/fock.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace ghzsim {

FockBasisState::FockBasisState(std::initializer_list<int> occupations) {
    occupations_.reserve(occupations.size());
    for (int n : occupations) {
        if (n < 0 || n > 255) {
            throw std::invalid_argument("occupation out of range: " + std::to_string(n));
        }
        occupations_.push_back(static_cast<std::uint8_t>(n));
    }
}

void FockBasisState::set(std::size_t mode, int occupation) {
    if (occupation < 0 || occupation > 255) {
        throw std::invalid_argument("occupation out of range: " + std::to_string(occupation));
    }
    occupations_.at(mode) = static_cast<std::uint8_t>(occupation);
}

int FockBasisState::total() const {
    return std::accumulate(occupations_.begin(), occupations_.end(), 0);
}

int FockBasisState::max_occupation() const {
    if (occupations_.empty()) {
        return 0;
    }
    return *std::max_element(occupations_.begin(), occupations_.end());
}

FockBasisState FockBasisState::select(std::span<const int> modes) const {
    std::vector<std::uint8_t> out;
    out.reserve(modes.size());
    for (int m : modes) {
        out.push_back(occupations_[static_cast<std::size_t>(m)]);
    }
    return FockBasisState(std::move(out));
}

FockBasisState FockBasisState::drop(std::span<const int> modes) const {
    std::vector<bool> dropped(occupations_.size(), false);
    for (int m : modes) {
        dropped[static_cast<std::size_t>(m)] = true;
    }
    std::vector<std::uint8_t> out;
    out.reserve(occupations_.size() - modes.size());
    for (std::size_t i = 0; i < occupations_.size(); ++i) {
        if (!dropped[i]) {
            out.push_back(occupations_[i]);
        }
    }
    return FockBasisState(std::move(out));
}

FockBasisState FockBasisState::concat(const FockBasisState& other) const {
    std::vector<std::uint8_t> out = occupations_;
    out.insert(out.end(), other.occupations_.begin(), other.occupations_.end());
    return FockBasisState(std::move(out));
}

std::string FockBasisState::to_string() const {
    const bool separate = max_occupation() > 9;
    std::ostringstream out;
    out << '|';
    for (std::size_t i = 0; i < occupations_.size(); ++i) {
        if (i > 0 && separate) {
            out << ',';
        }
        out << static_cast<int>(occupations_[i]);
    }
    out << '>';
    return out.str();
}

void validate_modes(std::span<const int> modes, std::size_t mode_count) {
    std::vector<bool> seen(mode_count, false);
    for (int m : modes) {
        if (m < 0 || static_cast<std::size_t>(m) >= mode_count) {
            throw std::out_of_range("mode index " + std::to_string(m) + " out of range for " +
                                    std::to_string(mode_count) + " modes");
        }
        if (seen[static_cast<std::size_t>(m)]) {
            throw std::invalid_argument("mode index " + std::to_string(m) + " listed twice");
        }
        seen[static_cast<std::size_t>(m)] = true;
    }
}

PureState::PureState(std::size_t mode_count, int cutoff, double prune_threshold)
    : mode_count_(mode_count), cutoff_(cutoff), prune_threshold_(prune_threshold) {
    if (cutoff < 0 || cutoff > 255) {
        throw std::invalid_argument("cutoff must lie in [0, 255]");
    }
}

PureState PureState::vacuum(std::size_t mode_count, int cutoff) {
    return basis(FockBasisState::vacuum(mode_count), cutoff);
}

PureState PureState::basis(const FockBasisState& occupations, int cutoff) {
    PureState s(occupations.size(), cutoff);
    s.add(occupations, 1.0);
    return s;
}

PureState PureState::from_terms(std::size_t mode_count, int cutoff, TermMap terms, double prune_threshold) {
    PureState s(mode_count, cutoff, prune_threshold);
    for (auto it = terms.begin(); it != terms.end();) {
        s.check_term(it->first);
        if (std::abs(it->second) < prune_threshold) {
            it = terms.erase(it);
        } else {
            ++it;
        }
    }
    s.terms_ = std::move(terms);
    return s;
}

void PureState::check_term(const FockBasisState& occupations) const {
    if (occupations.size() != mode_count_) {
        throw std::invalid_argument("basis state has " + std::to_string(occupations.size()) +
                                    " modes, expected " + std::to_string(mode_count_));
    }
    if (occupations.max_occupation() > cutoff_) {
        throw CutoffOverflow("occupation " + occupations.to_string() + " exceeds cutoff " +
                             std::to_string(cutoff_));
    }
}

void PureState::add(const FockBasisState& occupations, Amplitude amplitude) {
    check_term(occupations);
    auto [it, inserted] = terms_.try_emplace(occupations, amplitude);
    if (!inserted) {
        it->second += amplitude;
    }
    if (std::abs(it->second) < prune_threshold_) {
        terms_.erase(it);
    }
}

Amplitude PureState::amplitude(const FockBasisState& occupations) const {
    auto it = terms_.find(occupations);
    return it == terms_.end() ? Amplitude{} : it->second;
}

double PureState::norm_squared() const {
    double total = 0.0;
    for (const auto& [_, amp] : terms_) {
        total += std::norm(amp);
    }
    return total;
}

double PureState::norm() const { return std::sqrt(norm_squared()); }

double checked_norm(const PureState& state) {
    double n = state.norm();
    if (!(n > 0.0)) {
        throw std::domain_error("cannot normalize a zero-norm state");
    }
    return n;
}

PureState PureState::normalized() const { return scaled(1.0 / checked_norm(*this)); }

PureState PureState::scaled(Amplitude factor) const {
    PureState out(mode_count_, cutoff_, prune_threshold_);
    for (const auto& [occ, amp] : terms_) {
        Amplitude v = amp * factor;
        if (std::abs(v) >= prune_threshold_) {
            out.terms_.emplace_hint(out.terms_.end(), occ, v);
        }
    }
    return out;
}

PureState PureState::with_cutoff(int cutoff) const {
    PureState out(mode_count_, cutoff, prune_threshold_);
    for (const auto& [occ, amp] : terms_) {
        out.check_term(occ);
    }
    out.terms_ = terms_;
    return out;
}

MixedState::MixedState(const PureState& state) : mode_count_(state.mode_count()) {
    add_branch(state.norm_squared(), state);
}

double MixedState::total_weight() const {
    double total = 0.0;
    for (const auto& b : branches_) {
        total += b.weight;
    }
    return total;
}

void MixedState::add_branch(double weight, const PureState& state) {
    if (state.mode_count() != mode_count_) {
        throw std::invalid_argument("branch mode count does not match ensemble");
    }
    if (weight < 0.0) {
        throw std::invalid_argument("branch weight must be non-negative");
    }
    if (weight == 0.0 || state.empty()) {
        return;
    }
    double n = state.norm();
    if (!(n > 0.0)) {
        return;
    }
    branches_.push_back({weight, state.scaled(1.0 / n)});
}

namespace {

// Rotates a normalized state so that its first sizeable amplitude is real positive.
PureState canonical_phase(const PureState& state) {
    for (const auto& [_, amp] : state.terms()) {
        if (std::abs(amp) > 1e-8) {
            return state.scaled(std::conj(amp) / std::abs(amp));
        }
    }
    return state;
}

bool same_up_to_tolerance(const PureState& a, const PureState& b, double tolerance) {
    if (a.size() != b.size()) {
        return false;
    }
    auto ia = a.terms().begin();
    auto ib = b.terms().begin();
    for (; ia != a.terms().end(); ++ia, ++ib) {
        if (ia->first != ib->first || std::abs(ia->second - ib->second) > tolerance) {
            return false;
        }
    }
    return true;
}

}  // namespace

MixedState MixedState::merged(double tolerance) const {
    MixedState out(mode_count_);
    std::vector<PureState> canon;
    std::map<std::vector<FockBasisState>, std::vector<std::size_t>> by_support;
    for (const auto& b : branches_) {
        PureState c = canonical_phase(b.state);
        std::vector<FockBasisState> support;
        support.reserve(c.size());
        for (const auto& [occ, _] : c.terms()) {
            support.push_back(occ);
        }
        auto& candidates = by_support[support];
        bool merged_into_existing = false;
        for (std::size_t idx : candidates) {
            if (same_up_to_tolerance(canon[idx], c, tolerance)) {
                out.branches_[idx].weight += b.weight;
                merged_into_existing = true;
                break;
            }
        }
        if (!merged_into_existing) {
            candidates.push_back(out.branches_.size());
            out.branches_.push_back({b.weight, b.state});
            canon.push_back(std::move(c));
        }
    }
    return out;
}

MixedState MixedState::renormalized() const {
    double total = total_weight();
    if (!(total > 0.0)) {
        throw std::domain_error("cannot renormalize a zero-weight ensemble");
    }
    MixedState out(mode_count_);
    out.branches_ = branches_;
    for (auto& b : out.branches_) {
        b.weight /= total;
    }
    return out;
}

Amplitude inner_product(const PureState& bra, const PureState& ket) {
    if (bra.mode_count() != ket.mode_count()) {
        throw std::invalid_argument("inner product of states with different mode counts");
    }
    const auto& small = bra.size() <= ket.size() ? bra : ket;
    const auto& large = bra.size() <= ket.size() ? ket : bra;
    Amplitude total{};
    for (const auto& [occ, amp] : small.terms()) {
        Amplitude other = large.amplitude(occ);
        if (other != Amplitude{}) {
            total += &small == &bra ? std::conj(amp) * other : std::conj(other) * amp;
        }
    }
    return total;
}

PureState tensor(const PureState& a, const PureState& b) {
    if (a.cutoff() != b.cutoff()) {
        throw std::invalid_argument("tensor product of states with different cutoffs (" +
                                    std::to_string(a.cutoff()) + " vs " + std::to_string(b.cutoff()) + ")");
    }
    PureState::TermMap terms;
    for (const auto& [oa, va] : a.terms()) {
        for (const auto& [ob, vb] : b.terms()) {
            terms.emplace_hint(terms.end(), oa.concat(ob), va * vb);
        }
    }
    return PureState::from_terms(a.mode_count() + b.mode_count(), a.cutoff(), std::move(terms),
                                 std::min(a.prune_threshold(), b.prune_threshold()));
}

MixedState tensor(const MixedState& a, const MixedState& b) {
    MixedState out(a.mode_count() + b.mode_count());
    for (const auto& ba : a.branches()) {
        for (const auto& bb : b.branches()) {
            out.add_branch(ba.weight * bb.weight, tensor(ba.state, bb.state));
        }
    }
    return out;
}

PureState permute_modes(const PureState& state, std::span<const int> order) {
    if (order.size() != state.mode_count()) {
        throw std::invalid_argument("mode permutation must list every mode once");
    }
    validate_modes(order, state.mode_count());
    PureState::TermMap terms;
    for (const auto& [occ, amp] : state.terms()) {
        terms.emplace(occ.select(order), amp);
    }
    return PureState::from_terms(state.mode_count(), state.cutoff(), std::move(terms), state.prune_threshold());
}

MixedState permute_modes(const MixedState& state, std::span<const int> order) {
    MixedState out(state.mode_count());
    for (const auto& b : state.branches()) {
        out.add_branch(b.weight, permute_modes(b.state, order));
    }
    return out;
}

std::vector<MeasurementOutcome> measure_modes(const PureState& state, std::span<const int> modes) {
    if (modes.empty()) {
        throw std::invalid_argument("measure_modes needs at least one mode");
    }
    validate_modes(modes, state.mode_count());
    std::map<FockBasisState, PureState::TermMap> groups;
    for (const auto& [occ, amp] : state.terms()) {
        groups[occ.select(modes)].emplace(occ.drop(modes), amp);
    }
    std::vector<MeasurementOutcome> out;
    out.reserve(groups.size());
    const std::size_t rest = state.mode_count() - modes.size();
    for (auto& [outcome, terms] : groups) {
        PureState residual = PureState::from_terms(rest, state.cutoff(), std::move(terms), state.prune_threshold());
        double p = residual.norm_squared();
        if (p == 0.0) {
            continue;
        }
        out.push_back({outcome, p, residual.scaled(1.0 / std::sqrt(p))});
    }
    return out;
}

double fidelity_sqrt(const PureState& target, const MixedState& rho) {
    if (target.mode_count() != rho.mode_count()) {
        throw std::invalid_argument("fidelity between states with different mode counts");
    }
    double total = rho.total_weight();
    if (!(total > 0.0)) {
        throw std::domain_error("fidelity against a zero-weight mixed state");
    }
    double overlap = 0.0;
    for (const auto& b : rho.branches()) {
        overlap += b.weight * std::norm(inner_product(target, b.state));
    }
    return std::sqrt(std::clamp(overlap / total, 0.0, 1.0));
}

}  // namespace ghzsim
