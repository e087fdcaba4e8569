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

#include "ghzsim/oracle.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "ghzsim/channels.hpp"
#include "ghzsim/parallel.hpp"

namespace ghzsim {

namespace {

double binomial(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) {
        r = r * (n - k + i) / i;
    }
    return r;
}

double factorial(int n) { return std::tgamma(n + 1.0); }

void guard(const PureState& s, const OracleLimits& limits) {
    if (s.size() > limits.max_terms) {
        throw OracleResourceError("oracle state grew to " + std::to_string(s.size()) + " terms, limit " +
                                  std::to_string(limits.max_terms));
    }
}

struct OracleLayout {
    int n = 0;
    int connectors = 0;
    int mode_count = 0;
    int retained(int i) const { return i; }
    int flying(int i) const { return n + i; }
    int environment(int i) const { return 2 * n + i; }
    int aux(int k, int which) const { return 3 * n + 2 * k + which; }
    // Physical mode entering (and leaving) port `p` of block `b`.
    std::vector<std::array<int, 4>> ports;
};

OracleLayout make_layout(int n) {
    OracleLayout l;
    l.n = n;
    l.connectors = n / 2 - 2;
    l.mode_count = 3 * n + 2 * l.connectors;
    const int blocks = n / 2 - 1;
    int user = 0;
    for (int b = 0; b < blocks; ++b) {
        std::array<int, 4> p{};
        p[0] = b == 0 ? l.flying(user++) : l.aux(b - 1, 1);
        p[1] = l.flying(user++);
        p[2] = l.flying(user++);
        p[3] = b == blocks - 1 ? l.flying(user++) : l.aux(b, 0);
        l.ports.push_back(p);
    }
    return l;
}

struct OracleRun {
    // Unnormalized retained-mode states keyed by environment occupation.
    std::map<FockBasisState, PureState> by_environment;
    double probability = 0.0;
};

OracleRun run_oracle(int n, double eta, double a, const DetectionPattern& pattern, const OracleLimits& limits) {
    if (n < 4 || n % 2 != 0) {
        throw std::invalid_argument("the oracle handles even n >= 4 only");
    }
    if (n > limits.max_users) {
        throw OracleResourceError("oracle limited to " + std::to_string(limits.max_users) + " users");
    }
    const OracleLayout l = make_layout(n);
    if (static_cast<int>(pattern.size()) != 2 * n - 4) {
        throw std::invalid_argument("pattern length does not match the detector count");
    }
    const int capacity = n + l.connectors;
    const double b = std::sqrt(1.0 - a * a);

    // Sources, vacuum environment, connector photons.
    PureState::TermMap terms;
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        FockBasisState s = FockBasisState::vacuum(static_cast<std::size_t>(l.mode_count));
        Amplitude amp = 1.0;
        for (int i = 0; i < n; ++i) {
            const bool photon = (mask >> i) & 1u;
            s.set(static_cast<std::size_t>(l.retained(i)), photon);
            s.set(static_cast<std::size_t>(l.flying(i)), photon);
            amp *= photon ? b : a;
        }
        for (int k = 0; k < l.connectors; ++k) {
            s.set(static_cast<std::size_t>(l.aux(k, 0)), 1);
        }
        terms.emplace(std::move(s), amp);
    }
    PureState state = PureState::from_terms(static_cast<std::size_t>(l.mode_count), capacity, std::move(terms));

    const SplitterMatrix link{std::sqrt(eta), -std::sqrt(1.0 - eta), std::sqrt(1.0 - eta), std::sqrt(eta)};
    for (int i = 0; i < n; ++i) {
        state = apply_splitter(state, l.flying(i), l.environment(i), link);
        guard(state, limits);
    }

    // Only terms with as many photons at the node as the pattern counts can contribute.
    int wanted = 0;
    for (int o : pattern.outcomes) {
        wanted += o;
    }
    {
        PureState::TermMap kept;
        for (const auto& [s, amp] : state.terms()) {
            int at_node = 0;
            for (int i = 0; i < n; ++i) {
                at_node += s[static_cast<std::size_t>(l.flying(i))];
            }
            for (int k = 0; k < l.connectors; ++k) {
                at_node += s[static_cast<std::size_t>(l.aux(k, 0))] + s[static_cast<std::size_t>(l.aux(k, 1))];
            }
            if (at_node == wanted) {
                kept.emplace(s, amp);
            }
        }
        state = PureState::from_terms(state.mode_count(), state.cutoff(), std::move(kept));
    }

    const double r = 1.0 / std::sqrt(2.0);
    const SplitterMatrix half{r, r, r, -r};
    for (int k = 0; k < l.connectors; ++k) {
        state = apply_splitter(state, l.aux(k, 0), l.aux(k, 1), half);
        guard(state, limits);
    }
    for (const auto& p : l.ports) {
        state = apply_splitter(state, p[0], p[1], half);
        state = apply_splitter(state, p[2], p[3], half);
        state = apply_splitter(state, p[0], p[2], half);
        state = apply_splitter(state, p[1], p[3], half);
        guard(state, limits);
    }

    OracleRun run;
    for (const auto& [s, amp] : state.terms()) {
        bool match = true;
        for (std::size_t d = 0; d < pattern.size() && match; ++d) {
            const auto& p = l.ports[d / 4];
            match = s[static_cast<std::size_t>(p[d % 4])] == pattern[d];
        }
        if (!match) {
            continue;
        }
        std::vector<std::uint8_t> x;
        std::vector<std::uint8_t> e;
        for (int i = 0; i < n; ++i) {
            x.push_back(static_cast<std::uint8_t>(s[static_cast<std::size_t>(l.retained(i))]));
            e.push_back(static_cast<std::uint8_t>(s[static_cast<std::size_t>(l.environment(i))]));
        }
        auto [it, inserted] = run.by_environment.try_emplace(FockBasisState(std::move(e)),
                                                             PureState(static_cast<std::size_t>(n), 1));
        it->second.add(FockBasisState(std::move(x)), amp);
    }
    for (const auto& [e, psi] : run.by_environment) {
        run.probability += psi.norm_squared();
    }
    return run;
}

double bell_amplitude(const ProtocolConfig& config) {
    const auto* bell = std::get_if<BellSource>(&config.source);
    if (bell == nullptr) {
        throw std::invalid_argument("the oracle models Bell sources only");
    }
    if (!config.detector.is_ideal()) {
        throw std::invalid_argument("the oracle models ideal photon-number-resolving detectors only");
    }
    return bell->a;
}

}  // namespace

PureState apply_splitter(const PureState& state, int p, int q, const SplitterMatrix& u) {
    if (p == q || p < 0 || q < 0 || static_cast<std::size_t>(std::max(p, q)) >= state.mode_count()) {
        throw std::invalid_argument("invalid splitter modes");
    }
    const auto mp = static_cast<std::size_t>(p);
    const auto mq = static_cast<std::size_t>(q);
    PureState::TermMap out;
    for (const auto& [s, amp] : state.terms()) {
        const int np = s[mp];
        const int nq = s[mq];
        const double norm_in = 1.0 / std::sqrt(factorial(np) * factorial(nq));
        for (int j = 0; j <= np; ++j) {
            for (int k = 0; k <= nq; ++k) {
                const int op = j + k;
                const int oq = np - j + nq - k;
                const Amplitude c = binomial(np, j) * binomial(nq, k) * std::pow(u.u00, j) *
                                    std::pow(u.u10, np - j) * std::pow(u.u01, k) * std::pow(u.u11, nq - k);
                if (c == Amplitude{}) {
                    continue;
                }
                FockBasisState t = s;
                t.set(mp, op);
                t.set(mq, oq);
                out[t] += amp * c * norm_in * std::sqrt(factorial(op) * factorial(oq));
            }
        }
    }
    return PureState::from_terms(state.mode_count(), state.cutoff(), std::move(out), state.prune_threshold());
}

MixedState environment_loss(const PureState& state, std::span<const int> modes, double eta) {
    if (!(eta >= 0.0 && eta <= 1.0)) {
        throw std::invalid_argument("eta must lie in [0, 1]");
    }
    validate_modes(modes, state.mode_count());
    const std::size_t n = state.mode_count();
    PureState wide = tensor(state, PureState::vacuum(modes.size(), state.cutoff()));
    const SplitterMatrix link{std::sqrt(eta), -std::sqrt(1.0 - eta), std::sqrt(1.0 - eta), std::sqrt(eta)};
    for (std::size_t k = 0; k < modes.size(); ++k) {
        wide = apply_splitter(wide, modes[k], static_cast<int>(n + k), link);
    }
    std::map<FockBasisState, PureState> by_environment;
    for (const auto& [s, amp] : wide.terms()) {
        const auto occ = s.occupations();
        FockBasisState sys(std::vector<std::uint8_t>(occ.begin(), occ.begin() + static_cast<std::ptrdiff_t>(n)));
        FockBasisState env(std::vector<std::uint8_t>(occ.begin() + static_cast<std::ptrdiff_t>(n), occ.end()));
        auto [it, inserted] = by_environment.try_emplace(env, PureState(n, state.cutoff()));
        it->second.add(sys, amp);
    }
    MixedState out(n);
    for (const auto& [env, psi] : by_environment) {
        out.add_branch(psi.norm_squared(), psi);
    }
    return out;
}

OracleOutcome brute_force_outcome(const ProtocolConfig& config, const DetectionPattern& pattern,
                                  const OracleLimits& limits) {
    const double a = bell_amplitude(config);
    const int n = config.n_users;
    const OracleRun lossy = run_oracle(n, config.eta(), a, pattern, limits);
    OracleOutcome out;
    out.probability = lossy.probability;
    if (!(lossy.probability > 0.0)) {
        return out;
    }
    // Reference state: the same pattern on lossless links with balanced sources.
    const OracleRun ideal = run_oracle(n, 1.0, 1.0 / std::sqrt(2.0), pattern, limits);
    if (ideal.by_environment.size() != 1) {
        throw std::logic_error("lossless oracle run left the environment excited");
    }
    const PureState target = ideal.by_environment.begin()->second.normalized();
    double overlap = 0.0;
    for (const auto& [e, psi] : lossy.by_environment) {
        overlap += std::norm(inner_product(target, psi));
    }
    out.ghz_weight_alpha = overlap / lossy.probability;
    out.fidelity = std::sqrt(std::clamp(out.ghz_weight_alpha, 0.0, 1.0));
    return out;
}

double brute_force_pattern_prob(const ProtocolConfig& config, const DetectionPattern& pattern,
                                const OracleLimits& limits) {
    return run_oracle(config.n_users, config.eta(), bell_amplitude(config), pattern, limits).probability;
}

OracleAggregate brute_force_aggregate(const ProtocolConfig& config, const OracleLimits& limits) {
    const int n = config.n_users;
    if (n < 4 || n % 2 != 0) {
        throw std::invalid_argument("the oracle handles even n >= 4 only");
    }
    const int blocks = n / 2 - 1;
    OracleAggregate out;
    double weighted = 0.0;
    // Every 0/1 assignment with exactly two ones in each group of four.
    const std::uint64_t total = std::uint64_t{1} << (4 * blocks);
    for (std::uint64_t mask = 0; mask < total; ++mask) {
        bool ok = true;
        for (int b = 0; b < blocks && ok; ++b) {
            ok = std::popcount((mask >> (4 * b)) & 0xFu) == 2;
        }
        if (!ok) {
            continue;
        }
        DetectionPattern p;
        for (int d = 0; d < 4 * blocks; ++d) {
            p.outcomes.push_back(static_cast<int>((mask >> d) & 1u));
        }
        const OracleOutcome o = brute_force_outcome(config, p, limits);
        ++out.patterns;
        out.rate += o.probability;
        weighted += o.probability * o.ghz_weight_alpha;
    }
    out.fidelity = out.rate > 0.0 ? std::sqrt(std::clamp(weighted / out.rate, 0.0, 1.0)) : 0.0;
    return out;
}

MonteCarloEstimate monte_carlo_rate(const ProtocolConfig& config, std::uint64_t samples, std::uint64_t seed) {
    if (samples < 1) {
        throw std::invalid_argument("monte carlo needs at least one sample");
    }
    const Network network(config);
    const auto outcomes =
        click_distribution(network.detected_state(), network.central_modes(), network.config().detector);
    std::vector<double> cumulative;
    std::vector<bool> success;
    double running = 0.0;
    for (const auto& o : outcomes) {
        running += o.probability;
        cumulative.push_back(running);
        success.push_back(is_success_pattern(o.pattern, config.n_users));
    }

    constexpr std::uint64_t kChunk = 65536;
    const std::uint64_t chunks = (samples + kChunk - 1) / kChunk;
    const auto counts = parallel_map(static_cast<std::size_t>(chunks), [&](std::size_t c) {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(c), static_cast<std::uint32_t>(std::uint64_t{c} >> 32)};
        std::mt19937_64 rng(seq);
        std::uniform_real_distribution<double> uniform(0.0, 1.0);
        const std::uint64_t begin = c * kChunk;
        const std::uint64_t end = std::min(samples, begin + kChunk);
        std::uint64_t hits = 0;
        for (std::uint64_t s = begin; s < end; ++s) {
            const double u = uniform(rng);
            const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
            // u beyond the last cumulative value falls in the pruned remainder.
            if (it != cumulative.end() && success[static_cast<std::size_t>(it - cumulative.begin())]) {
                ++hits;
            }
        }
        return hits;
    });
    MonteCarloEstimate out;
    out.samples = samples;
    for (auto h : counts) {
        out.successes += h;
    }
    const double p = static_cast<double>(out.successes) / static_cast<double>(samples);
    out.estimate = p;
    out.standard_error = std::sqrt(p * (1.0 - p) / static_cast<double>(samples));
    return out;
}

}  // namespace ghzsim
