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

#include "ghzsim/purification.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace ghzsim {

namespace {

void check_qubits(const FockBasisState& s) {
    if (s.max_occupation() > 1) {
        throw std::invalid_argument("occupation above 1 in " + s.to_string() + "; not a qubit state");
    }
}

FockBasisState xor_bits(const FockBasisState& a, const FockBasisState& b) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("bitstring length mismatch");
    }
    FockBasisState out = a;
    for (std::size_t i = 0; i < a.size(); ++i) {
        out.set(i, a[i] ^ b[i]);
    }
    return out;
}

PureState cnot_pure(const PureState& control, const PureState& target) {
    const std::size_t n = control.mode_count();
    PureState out(2 * n, std::max(1, std::max(control.cutoff(), target.cutoff())));
    for (const auto& [c, ac] : control.terms()) {
        check_qubits(c);
        for (const auto& [t, at] : target.terms()) {
            check_qubits(t);
            out.add(c.concat(xor_bits(c, t)), ac * at);
        }
    }
    return out;
}

}  // namespace

MixedState transversal_cnot(const MixedState& control, const MixedState& target) {
    if (control.mode_count() != target.mode_count()) {
        throw std::invalid_argument("control and target must have the same number of qubits");
    }
    MixedState out(2 * control.mode_count());
    for (const auto& c : control.branches()) {
        for (const auto& t : target.branches()) {
            out.add_branch(c.weight * t.weight, cnot_pure(c.state, t.state));
        }
    }
    return out;
}

PurificationOutcome epl_ghz_purify(const ConditionalResult& control, const ConditionalResult& target) {
    if (!(control.target == target.target)) {
        throw std::invalid_argument("purification inputs come from different detection-pattern classes");
    }
    const GhzTarget& ghz = control.target;
    const std::size_t n = ghz.first.size();
    if (control.state.mode_count() != n || target.state.mode_count() != n) {
        throw std::invalid_argument("purification inputs do not match the target size");
    }
    std::size_t z_mode = n;
    if (ghz.relative_sign < 0) {
        for (std::size_t i = 0; i < n; ++i) {
            if (ghz.second[i] == 1) {
                z_mode = i;
                break;
            }
        }
    }

    const MixedState joint = transversal_cnot(control.state.renormalized(), target.state.renormalized());
    std::vector<Branch> kept;
    double success = 0.0;
    for (const auto& b : joint.branches()) {
        PureState residual(n, b.state.cutoff());
        for (const auto& [s, amp] : b.state.terms()) {
            bool all_ones = true;
            for (std::size_t i = n; i < 2 * n && all_ones; ++i) {
                all_ones = s[i] == 1;
            }
            if (!all_ones) {
                continue;
            }
            std::vector<std::uint8_t> head(s.occupations().begin(), s.occupations().begin() + n);
            const FockBasisState c(std::move(head));
            const double z = (z_mode < n && c[z_mode] == 1) ? -1.0 : 1.0;
            residual.add(c, amp * z * static_cast<double>(ghz.leading_sign * ghz.relative_sign));
        }
        const double w = b.weight * residual.norm_squared();
        if (w > 0.0) {
            success += w;
            kept.push_back({w, std::move(residual)});
        }
    }

    PurificationOutcome out;
    out.success_probability = success;
    out.output = MixedState(n);
    if (success > 0.0) {
        for (const auto& k : kept) {
            out.output.add_branch(k.weight / success, k.state);
        }
        out.output = out.output.merged();
        out.output_fidelity = fidelity_sqrt(ghz.state(out.output.branches()[0].state.cutoff()), out.output);
    }
    return out;
}

std::vector<std::vector<FockBasisState>> cnot_term_table(const std::vector<FockBasisState>& controls,
                                                         const std::vector<FockBasisState>& targets) {
    std::vector<std::vector<FockBasisState>> table;
    for (const auto& c : controls) {
        check_qubits(c);
        auto& row = table.emplace_back();
        for (const auto& t : targets) {
            check_qubits(t);
            row.push_back(xor_bits(c, t));
        }
    }
    return table;
}

}  // namespace ghzsim
