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

#ifndef GHZSIM_OPTICS_HPP
#define GHZSIM_OPTICS_HPP

#include <array>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "ghzsim/fock.hpp"

namespace ghzsim {

/// Passive linear-optical transformation on a set of modes. Column i holds the
/// output-mode amplitudes of a photon entering mode i, so a creation operator
/// transforms as a_i^dag -> sum_j U(j, i) b_j^dag. For the real symmetric
/// beamsplitter networks built here this coincides with a^dag = U^dag b^dag.
class ModeUnitary {
  public:
    /// Throws std::invalid_argument unless `matrix` is square and unitary to `tolerance`.
    explicit ModeUnitary(Eigen::MatrixXcd matrix, double tolerance = 1e-12);

    static ModeUnitary identity(int dim);
    /// Embeds `block` on `modes` of a `dim`-mode identity.
    static ModeUnitary embed(const ModeUnitary& block, std::span<const int> modes, int dim);

    int dim() const { return static_cast<int>(matrix_.rows()); }
    const Eigen::MatrixXcd& matrix() const { return matrix_; }
    Amplitude operator()(int out, int in) const { return matrix_(out, in); }
    ModeUnitary adjoint() const;
    /// Max-norm distance of U U^dag from the identity.
    double unitarity_residual() const;

    /// `after * before` applies `before` first.
    friend ModeUnitary operator*(const ModeUnitary& after, const ModeUnitary& before);

  private:
    Eigen::MatrixXcd matrix_;
};

/// 50:50 beamsplitter (1/sqrt2)[[1, e^{i phase}], [1, -e^{i phase}]]. The phase is
/// zero for the protocol; a non-zero value exists for fault injection.
ModeUnitary hbs(double phase = 0.0);

/// The 4-mode building block, hbs (x) hbs.
ModeUnitary four_mode_circuit(double hbs_phase = 0.0);

struct CircuitOptions {
    double hbs_phase = 0.0;
};

/// Mode bookkeeping for the central-node interferometer. Input modes are the
/// user flying modes in user order followed by connector aux pairs; output mode d
/// is watched by detector d, and detectors 4b..4b+3 belong to block b.
struct CentralLayout {
    int n_users = 0;
    int mode_count = 0;
    int block_count = 0;
    int connector_count = 0;
    std::vector<int> user_input_mode;
    /// First mode of each pair is fed the auxiliary single photon.
    std::vector<std::pair<int, int>> connector_aux_modes;
    std::vector<int> detector_output_mode;
    /// Input mode feeding each port of each block, after the connector splitters.
    std::vector<std::array<int, 4>> block_ports;

    int block_of_detector(int detector) const { return detector / 4; }
};

struct CentralCircuit {
    ModeUnitary unitary;
    CentralLayout layout;
};

/// Chains n_users/2 - 1 four-mode blocks; neighbouring blocks share a connector
/// splitter whose outputs feed the last port of block k and the first port of
/// block k + 1.
CentralCircuit central_circuit(int n_users, const CircuitOptions& options = {});

/// Permanent via Glynn's formula with Gray-code ordering; O(2^n n).
Amplitude permanent(const Eigen::MatrixXcd& matrix);

/// <out| U |in> for occupation patterns on the unitary's modes.
Amplitude transition_amplitude(const ModeUnitary& u, const FockBasisState& in, const FockBasisState& out);

/// Applies `u` to `modes` of `state` by expanding each creation-operator monomial.
/// Throws CutoffOverflow if a surviving output term exceeds the state's cutoff.
PureState apply(const ModeUnitary& u, const PureState& state, std::span<const int> modes);
MixedState apply(const ModeUnitary& u, const MixedState& state, std::span<const int> modes);

/// (<out|_modes U) |state>: the unnormalized residual on the remaining modes after
/// applying `u` and projecting `modes` onto `out`. Only the amplitudes that survive
/// the projection are computed, via permanents.
PureState project_output(const ModeUnitary& u, const PureState& state, std::span<const int> modes,
                         const FockBasisState& out);

}  // namespace ghzsim

#endif  // GHZSIM_OPTICS_HPP
