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

#ifndef GHZSIM_FOCK_HPP
#define GHZSIM_FOCK_HPP

#include <complex>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace ghzsim {

using Amplitude = std::complex<double>;

inline constexpr double kDefaultPruneThreshold = 1e-15;

/// Raised when a transformation would populate a mode beyond the state's cutoff.
class CutoffOverflow : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Photon occupation numbers, one entry per optical mode.
class FockBasisState {
  public:
    FockBasisState() = default;
    explicit FockBasisState(std::vector<std::uint8_t> occupations) : occupations_(std::move(occupations)) {}
    FockBasisState(std::initializer_list<int> occupations);
    static FockBasisState vacuum(std::size_t mode_count) {
        return FockBasisState(std::vector<std::uint8_t>(mode_count, 0));
    }

    std::size_t size() const { return occupations_.size(); }
    int operator[](std::size_t mode) const { return occupations_[mode]; }
    void set(std::size_t mode, int occupation);
    int total() const;
    int max_occupation() const;
    std::span<const std::uint8_t> occupations() const { return occupations_; }

    /// Occupations of `modes`, in the order given.
    FockBasisState select(std::span<const int> modes) const;
    /// Occupations of every mode not listed in `modes`, in ascending mode order.
    FockBasisState drop(std::span<const int> modes) const;
    FockBasisState concat(const FockBasisState& other) const;

    std::string to_string() const;

    auto operator<=>(const FockBasisState&) const = default;
    bool operator==(const FockBasisState&) const = default;

  private:
    std::vector<std::uint8_t> occupations_;
};

/// Sparse superposition over Fock basis states. Sub-normalized states are allowed;
/// normalization only happens through `normalized()`.
class PureState {
  public:
    using TermMap = std::map<FockBasisState, Amplitude>;

    PureState(std::size_t mode_count, int cutoff, double prune_threshold = kDefaultPruneThreshold);

    static PureState vacuum(std::size_t mode_count, int cutoff);
    static PureState basis(const FockBasisState& occupations, int cutoff);
    /// Builds a state from accumulated terms, pruning anything below the threshold.
    static PureState from_terms(std::size_t mode_count, int cutoff, TermMap terms,
                                double prune_threshold = kDefaultPruneThreshold);

    std::size_t mode_count() const { return mode_count_; }
    int cutoff() const { return cutoff_; }
    double prune_threshold() const { return prune_threshold_; }
    const TermMap& terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }

    /// Accumulates `amplitude` onto a basis term; the term is dropped if the sum
    /// falls below the prune threshold.
    void add(const FockBasisState& occupations, Amplitude amplitude);
    Amplitude amplitude(const FockBasisState& occupations) const;

    double norm_squared() const;
    double norm() const;
    PureState normalized() const;
    PureState scaled(Amplitude factor) const;
    /// Same terms under a different per-mode cutoff; lowering below an occupied
    /// level throws CutoffOverflow.
    PureState with_cutoff(int cutoff) const;

  private:
    void check_term(const FockBasisState& occupations) const;

    std::size_t mode_count_;
    int cutoff_;
    double prune_threshold_;
    TermMap terms_;
};

struct Branch {
    double weight;
    PureState state;
};

/// Weighted ensemble of normalized pure branches. Weights sum to at most one.
class MixedState {
  public:
    explicit MixedState(std::size_t mode_count) : mode_count_(mode_count) {}
    /// Single-branch ensemble with weight equal to the norm squared of `state`.
    explicit MixedState(const PureState& state);

    std::size_t mode_count() const { return mode_count_; }
    const std::vector<Branch>& branches() const { return branches_; }
    bool empty() const { return branches_.empty(); }
    std::size_t size() const { return branches_.size(); }
    double total_weight() const;

    /// Adds `weight` times the projector onto `state` (normalized here). Zero
    /// weights and zero states are ignored.
    void add_branch(double weight, const PureState& state);
    /// Merges branches that agree up to a global phase within `tolerance`.
    MixedState merged(double tolerance = 1e-12) const;
    /// Same ensemble with weights divided by the total weight.
    MixedState renormalized() const;

  private:
    std::size_t mode_count_;
    std::vector<Branch> branches_;
};

Amplitude inner_product(const PureState& bra, const PureState& ket);

PureState tensor(const PureState& a, const PureState& b);
/// Reorders modes: mode k of the result is mode `order[k]` of the input.
PureState permute_modes(const PureState& state, std::span<const int> order);
MixedState permute_modes(const MixedState& state, std::span<const int> order);
MixedState tensor(const MixedState& a, const MixedState& b);

struct MeasurementOutcome {
    FockBasisState outcome;
    double probability;
    PureState residual;
};

/// Projective photon-number measurement of `modes`. Outcomes are returned in
/// ascending order; each residual lives on the unmeasured modes and is normalized.
std::vector<MeasurementOutcome> measure_modes(const PureState& state, std::span<const int> modes);

/// Square-root fidelity sqrt(<target|rho|target>) with the ensemble weights
/// renormalized to one.
double fidelity_sqrt(const PureState& target, const MixedState& rho);

/// Raises a zero-norm error when the state cannot be normalized.
double checked_norm(const PureState& state);

void validate_modes(std::span<const int> modes, std::size_t mode_count);

}  // namespace ghzsim

#endif  // GHZSIM_FOCK_HPP
