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

#include "ghzsim/optics.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace ghzsim {

namespace {

double factorial(int n) {
    double f = 1.0;
    for (int k = 2; k <= n; ++k) {
        f *= k;
    }
    return f;
}

double factorial_product(const FockBasisState& occ) {
    double f = 1.0;
    for (std::size_t i = 0; i < occ.size(); ++i) {
        f *= factorial(occ[i]);
    }
    return f;
}

using Expansion = std::vector<std::pair<FockBasisState, Amplitude>>;

// Output distribution of one input occupation pattern, memoized across terms.
class FockTransformer {
  public:
    explicit FockTransformer(const ModeUnitary& u) : u_(u) {}

    const Expansion& expand(const FockBasisState& in) {
        auto it = cache_.find(in);
        if (it != cache_.end()) {
            return it->second;
        }
        const int dim = u_.dim();
        std::map<FockBasisState, Amplitude> poly{{FockBasisState::vacuum(static_cast<std::size_t>(dim)), 1.0}};
        for (int i = 0; i < dim; ++i) {
            for (int rep = 0; rep < in[static_cast<std::size_t>(i)]; ++rep) {
                std::map<FockBasisState, Amplitude> next;
                for (const auto& [mono, coef] : poly) {
                    for (int j = 0; j < dim; ++j) {
                        Amplitude w = u_(j, i);
                        if (w == Amplitude{}) {
                            continue;
                        }
                        FockBasisState m = mono;
                        m.set(static_cast<std::size_t>(j), m[static_cast<std::size_t>(j)] + 1);
                        next[m] += coef * w;
                    }
                }
                poly = std::move(next);
            }
        }
        Expansion out;
        out.reserve(poly.size());
        const double in_norm = std::sqrt(factorial_product(in));
        for (const auto& [mono, coef] : poly) {
            out.emplace_back(mono, coef * std::sqrt(factorial_product(mono)) / in_norm);
        }
        return cache_.emplace(in, std::move(out)).first->second;
    }

    Amplitude amplitude(const FockBasisState& in, const FockBasisState& out) {
        auto key = in.concat(out);
        auto it = pair_cache_.find(key);
        if (it != pair_cache_.end()) {
            return it->second;
        }
        Amplitude a = transition_amplitude(u_, in, out);
        pair_cache_.emplace(std::move(key), a);
        return a;
    }

  private:
    const ModeUnitary& u_;
    std::map<FockBasisState, Expansion> cache_;
    std::map<FockBasisState, Amplitude> pair_cache_;
};

PureState apply_with(FockTransformer& transformer, const PureState& state, std::span<const int> modes) {
    PureState::TermMap terms;
    for (const auto& [occ, amp] : state.terms()) {
        for (const auto& [out, a] : transformer.expand(occ.select(modes))) {
            FockBasisState full = occ;
            for (std::size_t k = 0; k < modes.size(); ++k) {
                full.set(static_cast<std::size_t>(modes[k]), out[k]);
            }
            terms[full] += amp * a;
        }
    }
    for (const auto& [occ, amp] : terms) {
        if (std::abs(amp) >= state.prune_threshold() && occ.max_occupation() > state.cutoff()) {
            throw CutoffOverflow("output term " + occ.to_string() + " exceeds cutoff " +
                                 std::to_string(state.cutoff()) + "; raise the cutoff for this circuit");
        }
    }
    std::erase_if(terms, [&](const auto& kv) { return std::abs(kv.second) < state.prune_threshold(); });
    return PureState::from_terms(state.mode_count(), state.cutoff(), std::move(terms), state.prune_threshold());
}

void check_apply_args(const ModeUnitary& u, std::size_t mode_count, std::span<const int> modes) {
    if (static_cast<int>(modes.size()) != u.dim()) {
        throw std::invalid_argument("unitary acts on " + std::to_string(u.dim()) + " modes but " +
                                    std::to_string(modes.size()) + " were given");
    }
    validate_modes(modes, mode_count);
}

}  // namespace

ModeUnitary::ModeUnitary(Eigen::MatrixXcd matrix, double tolerance) : matrix_(std::move(matrix)) {
    if (matrix_.rows() != matrix_.cols() || matrix_.rows() == 0) {
        throw std::invalid_argument("mode unitary must be a non-empty square matrix");
    }
    if (unitarity_residual() > tolerance) {
        throw std::invalid_argument("matrix is not unitary within tolerance");
    }
}

ModeUnitary ModeUnitary::identity(int dim) { return ModeUnitary(Eigen::MatrixXcd::Identity(dim, dim)); }

ModeUnitary ModeUnitary::embed(const ModeUnitary& block, std::span<const int> modes, int dim) {
    if (static_cast<int>(modes.size()) != block.dim()) {
        throw std::invalid_argument("embedding needs one mode per block dimension");
    }
    validate_modes(modes, static_cast<std::size_t>(dim));
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(dim, dim);
    for (std::size_t r = 0; r < modes.size(); ++r) {
        for (std::size_t c = 0; c < modes.size(); ++c) {
            m(modes[r], modes[c]) = block.matrix_(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
        }
    }
    return ModeUnitary(std::move(m));
}

ModeUnitary ModeUnitary::adjoint() const { return ModeUnitary(matrix_.adjoint()); }

double ModeUnitary::unitarity_residual() const {
    Eigen::MatrixXcd d = matrix_ * matrix_.adjoint() - Eigen::MatrixXcd::Identity(matrix_.rows(), matrix_.cols());
    return d.cwiseAbs().maxCoeff();
}

ModeUnitary operator*(const ModeUnitary& after, const ModeUnitary& before) {
    if (after.dim() != before.dim()) {
        throw std::invalid_argument("composing unitaries of different dimension");
    }
    return ModeUnitary(after.matrix_ * before.matrix_);
}

ModeUnitary hbs(double phase) {
    const double s = 1.0 / std::numbers::sqrt2;
    const Amplitude e = std::polar(1.0, phase);
    Eigen::MatrixXcd m(2, 2);
    m << s, s * e, s, -s * e;
    return ModeUnitary(std::move(m));
}

ModeUnitary four_mode_circuit(double hbs_phase) {
    const Eigen::MatrixXcd h = hbs(hbs_phase).matrix();
    Eigen::MatrixXcd m(4, 4);
    for (int i1 = 0; i1 < 2; ++i1) {
        for (int i2 = 0; i2 < 2; ++i2) {
            for (int j1 = 0; j1 < 2; ++j1) {
                for (int j2 = 0; j2 < 2; ++j2) {
                    m(2 * i1 + i2, 2 * j1 + j2) = h(i1, j1) * h(i2, j2);
                }
            }
        }
    }
    return ModeUnitary(std::move(m));
}

CentralCircuit central_circuit(int n_users, const CircuitOptions& options) {
    if (n_users < 4 || n_users % 2 != 0) {
        throw std::invalid_argument("central circuit needs an even number of users >= 4, got " +
                                    std::to_string(n_users));
    }
    CentralLayout layout;
    layout.n_users = n_users;
    layout.mode_count = 2 * n_users - 4;
    layout.block_count = n_users / 2 - 1;
    layout.connector_count = n_users / 2 - 2;
    for (int i = 0; i < n_users; ++i) {
        layout.user_input_mode.push_back(i);
    }
    for (int k = 0; k < layout.connector_count; ++k) {
        layout.connector_aux_modes.emplace_back(n_users + 2 * k, n_users + 2 * k + 1);
    }
    for (int d = 0; d < layout.mode_count; ++d) {
        layout.detector_output_mode.push_back(d);
    }

    // Walk the chain: each block takes the next free user modes, with the edge
    // ports between blocks taken by connector outputs.
    int next_user = 0;
    for (int b = 0; b < layout.block_count; ++b) {
        std::array<int, 4> ports{};
        for (int p = 0; p < 4; ++p) {
            if (p == 0 && b > 0) {
                ports[static_cast<std::size_t>(p)] = layout.connector_aux_modes[static_cast<std::size_t>(b - 1)].second;
            } else if (p == 3 && b + 1 < layout.block_count) {
                ports[static_cast<std::size_t>(p)] = layout.connector_aux_modes[static_cast<std::size_t>(b)].first;
            } else {
                ports[static_cast<std::size_t>(p)] = next_user++;
            }
        }
        layout.block_ports.push_back(ports);
    }

    const int dim = layout.mode_count;
    ModeUnitary connectors = ModeUnitary::identity(dim);
    const ModeUnitary splitter = hbs(options.hbs_phase);
    for (const auto& [first, second] : layout.connector_aux_modes) {
        const std::array<int, 2> pair{first, second};
        connectors = ModeUnitary::embed(splitter, pair, dim) * connectors;
    }
    Eigen::MatrixXcd routing = Eigen::MatrixXcd::Zero(dim, dim);
    for (int b = 0; b < layout.block_count; ++b) {
        for (int p = 0; p < 4; ++p) {
            routing(4 * b + p, layout.block_ports[static_cast<std::size_t>(b)][static_cast<std::size_t>(p)]) = 1.0;
        }
    }
    ModeUnitary blocks = ModeUnitary::identity(dim);
    const ModeUnitary block = four_mode_circuit(options.hbs_phase);
    for (int b = 0; b < layout.block_count; ++b) {
        const std::array<int, 4> outs{4 * b, 4 * b + 1, 4 * b + 2, 4 * b + 3};
        blocks = ModeUnitary::embed(block, outs, dim) * blocks;
    }
    return {blocks * ModeUnitary(std::move(routing)) * connectors, std::move(layout)};
}

Amplitude permanent(const Eigen::MatrixXcd& a) {
    const Eigen::Index n = a.rows();
    if (n != a.cols()) {
        throw std::invalid_argument("permanent of a non-square matrix");
    }
    if (n == 0) {
        return 1.0;
    }
    if (n == 1) {
        return a(0, 0);
    }
    // Column sums with every delta = +1, then flip one row per Gray-code step.
    std::vector<Amplitude> sums(static_cast<std::size_t>(n));
    for (Eigen::Index j = 0; j < n; ++j) {
        sums[static_cast<std::size_t>(j)] = a.col(j).sum();
    }
    auto product = [&] {
        Amplitude p = 1.0;
        for (const auto& s : sums) {
            p *= s;
        }
        return p;
    };
    Amplitude total = product();
    std::vector<int> delta(static_cast<std::size_t>(n), 1);
    int sign = 1;
    const std::uint64_t steps = std::uint64_t{1} << (n - 1);
    for (std::uint64_t g = 1; g < steps; ++g) {
        // Row 0 keeps delta = +1; the flipped row follows the lowest set bit.
        const int row = std::countr_zero(g) + 1;
        auto& d = delta[static_cast<std::size_t>(row)];
        for (Eigen::Index j = 0; j < n; ++j) {
            sums[static_cast<std::size_t>(j)] -= 2.0 * d * a(row, j);
        }
        d = -d;
        sign = -sign;
        total += static_cast<double>(sign) * product();
    }
    return total / static_cast<double>(steps);
}

Amplitude transition_amplitude(const ModeUnitary& u, const FockBasisState& in, const FockBasisState& out) {
    if (static_cast<int>(in.size()) != u.dim() || static_cast<int>(out.size()) != u.dim()) {
        throw std::invalid_argument("occupation patterns must match the unitary dimension");
    }
    const int k = in.total();
    if (k != out.total()) {
        return 0.0;
    }
    std::vector<int> rows;
    std::vector<int> cols;
    for (int i = 0; i < u.dim(); ++i) {
        rows.insert(rows.end(), static_cast<std::size_t>(in[static_cast<std::size_t>(i)]), i);
        cols.insert(cols.end(), static_cast<std::size_t>(out[static_cast<std::size_t>(i)]), i);
    }
    // Row r is an input photon, column s an output slot: entry U(out, in).
    Eigen::MatrixXcd sub(k, k);
    for (int r = 0; r < k; ++r) {
        for (int s = 0; s < k; ++s) {
            sub(r, s) = u(cols[static_cast<std::size_t>(s)], rows[static_cast<std::size_t>(r)]);
        }
    }
    return permanent(sub) / std::sqrt(factorial_product(in) * factorial_product(out));
}

PureState apply(const ModeUnitary& u, const PureState& state, std::span<const int> modes) {
    check_apply_args(u, state.mode_count(), modes);
    FockTransformer transformer(u);
    return apply_with(transformer, state, modes);
}

MixedState apply(const ModeUnitary& u, const MixedState& state, std::span<const int> modes) {
    check_apply_args(u, state.mode_count(), modes);
    FockTransformer transformer(u);
    MixedState out(state.mode_count());
    for (const auto& b : state.branches()) {
        out.add_branch(b.weight, apply_with(transformer, b.state, modes));
    }
    return out;
}

PureState project_output(const ModeUnitary& u, const PureState& state, std::span<const int> modes,
                         const FockBasisState& out) {
    check_apply_args(u, state.mode_count(), modes);
    if (out.size() != modes.size()) {
        throw std::invalid_argument("projection pattern must cover every transformed mode");
    }
    FockTransformer transformer(u);
    const int photons = out.total();
    PureState::TermMap terms;
    for (const auto& [occ, amp] : state.terms()) {
        FockBasisState in = occ.select(modes);
        if (in.total() != photons) {
            continue;
        }
        Amplitude a = transformer.amplitude(in, out);
        if (a != Amplitude{}) {
            terms[occ.drop(modes)] += amp * a;
        }
    }
    return PureState::from_terms(state.mode_count() - modes.size(), state.cutoff(), std::move(terms),
                                 state.prune_threshold());
}

}  // namespace ghzsim
