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

#ifndef GHZSIM_PURIFICATION_HPP
#define GHZSIM_PURIFICATION_HPP

#include <vector>

#include "ghzsim/fock.hpp"
#include "ghzsim/protocol.hpp"

namespace ghzsim {

struct PurificationOutcome {
    double success_probability = 0.0;
    /// Control-side state after post-selection and the local sign correction.
    MixedState output{0};
    double output_fidelity = 0.0;
};

/// CNOT from control qubit i onto target qubit i for every i, in the occupation
/// encoding. Result modes: control modes then target modes. Throws
/// std::invalid_argument on any occupation above 1.
MixedState transversal_cnot(const MixedState& control, const MixedState& target);

/// One round of two-copy purification: transversal CNOT, Z measurement of the
/// targets, keep the all-ones outcome. The kept state is always the + combination
/// of the two target bitstrings, so for a target with relative sign -1 a Z on the
/// first user set in `target.second` (and a known global sign) restores the target.
PurificationOutcome epl_ghz_purify(const ConditionalResult& control, const ConditionalResult& target);

/// Target bitstring after CNOT for every (control term, target term) pair:
/// entry [i][j] = controls[i] XOR targets[j].
std::vector<std::vector<FockBasisState>> cnot_term_table(const std::vector<FockBasisState>& controls,
                                                         const std::vector<FockBasisState>& targets);

}  // namespace ghzsim

#endif  // GHZSIM_PURIFICATION_HPP
