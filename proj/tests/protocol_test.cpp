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

#include <cmath>
#include <set>
#include <string>

#include <gtest/gtest.h>

namespace ghzsim {
namespace {

ProtocolConfig bell(int n, double eta, double a2) {
    ProtocolConfig c;
    c.n_users = n;
    c.transmittance = eta;
    c.source = BellSource{std::sqrt(a2)};
    return c;
}

FockBasisState bits(const std::string& s) {
    std::vector<std::uint8_t> v;
    for (char c : s) {
        v.push_back(static_cast<std::uint8_t>(c - '0'));
    }
    return FockBasisState(std::move(v));
}

TEST(SuccessPatterns, CountAndShape) {
    EXPECT_EQ(enumerate_success_patterns(4).size(), 6u);
    EXPECT_EQ(enumerate_success_patterns(6).size(), 36u);
    EXPECT_EQ(enumerate_success_patterns(8).size(), 216u);
    EXPECT_THROW(enumerate_success_patterns(5), std::invalid_argument);
    for (const auto& p : enumerate_success_patterns(6)) {
        EXPECT_TRUE(is_success_pattern(p, 6));
        EXPECT_TRUE(is_success_pattern(p, 5));
    }
    EXPECT_FALSE(is_success_pattern(DetectionPattern{{1, 1, 1, 0}}, 4));
    EXPECT_FALSE(is_success_pattern(DetectionPattern{{2, 0, 0, 0}}, 4));
    EXPECT_EQ(enumerate_success_patterns(4).front(), (DetectionPattern{{1, 1, 0, 0}}));
}

TEST(Targets, FourUserTable) {
    struct Row {
        DetectionPattern p;
        const char* first;
        const char* second;
        int lead;
    };
    const Row rows[] = {{{{1, 1, 0, 0}}, "1010", "0101", 1},  {{{1, 0, 1, 0}}, "1100", "0011", 1},
                        {{{1, 0, 0, 1}}, "1001", "0110", 1},  {{{0, 1, 1, 0}}, "1001", "0110", -1},
                        {{{0, 1, 0, 1}}, "1100", "0011", -1}, {{{0, 0, 1, 1}}, "1010", "0101", -1}};
    for (const auto& r : rows) {
        const GhzTarget t = ghz_target_for_pattern(r.p, 4);
        EXPECT_EQ(t.first, bits(r.first));
        EXPECT_EQ(t.second, bits(r.second));
        EXPECT_EQ(t.relative_sign, -1);
        EXPECT_EQ(t.leading_sign, r.lead);
    }
    EXPECT_THROW(ghz_target_for_pattern(DetectionPattern{{1, 0, 0, 0}}, 4), std::invalid_argument);
}

TEST(Targets, LargerNetworksGiveComplementaryBitstrings) {
    for (int n : {6, 8}) {
        for (const auto& p : enumerate_success_patterns(n)) {
            const GhzTarget t = ghz_target_for_pattern(p, n);
            ASSERT_EQ(t.first.size(), static_cast<std::size_t>(n));
            for (std::size_t i = 0; i < t.first.size(); ++i) {
                EXPECT_EQ(t.first[i] + t.second[i], 1);
            }
            EXPECT_EQ(t.first.total(), n / 2);
            EXPECT_NEAR(t.state().norm(), 1.0, 1e-15);
        }
    }
}

TEST(Targets, SpdcEncodingIsComplemented) {
    ProtocolConfig c;
    c.source = HeraldedSpdcSource{0.05};
    const DetectionPattern p{{1, 1, 0, 0}};
    const GhzTarget t = ghz_target_for_config(c, p);
    EXPECT_EQ(t, ghz_target_for_pattern(p, 4).complemented());
    EXPECT_EQ(t.first, bits("0101"));
}

TEST(RunAttempt, LosslessLinkGivesTheTarget) {
    const ConditionalResult r = run_attempt(bell(4, 1.0, 0.5), DetectionPattern{{1, 1, 0, 0}});
    EXPECT_NEAR(r.probability, 0.03125, 1e-15);
    EXPECT_NEAR(r.ghz_weight_alpha, 1.0, 1e-14);
    EXPECT_NEAR(r.fidelity, 1.0, 1e-14);
    EXPECT_TRUE(r.junk_weights.empty());
}

TEST(RunAttempt, HalfTransmittance) {
    const ConditionalResult r = run_attempt(bell(4, 0.5, 0.5), DetectionPattern{{1, 1, 0, 0}});
    EXPECT_NEAR(r.probability, 0.017578125, 1e-15);
    EXPECT_NEAR(r.fidelity, 2.0 / 3.0, 1e-14);
    double total = r.ghz_weight_alpha;
    for (double w : r.junk_weights) {
        total += w;
    }
    EXPECT_NEAR(total, 1.0, 1e-12);
    EXPECT_NEAR(r.fidelity, std::sqrt(r.ghz_weight_alpha), 1e-12);
}

TEST(RunAttempt, JunkLivesOnTheLossSupport) {
    const ConditionalResult r = run_attempt(bell(4, 0.5, 0.5), DetectionPattern{{1, 1, 0, 0}});
    const std::set<FockBasisState> allowed{bits("1011"), bits("1110"), bits("0111"), bits("1101"), bits("1111"),
                                           bits("1010"), bits("0101")};
    const PureState phi = r.target.state();
    double junk = 0.0;
    for (const auto& b : r.state.branches()) {
        const Amplitude overlap = inner_product(phi, b.state);
        PureState orth = b.state;
        for (const auto& [k, v] : phi.terms()) {
            orth.add(k, -overlap * v);
        }
        for (const auto& [k, v] : orth.terms()) {
            EXPECT_TRUE(allowed.count(k) && k != bits("1010") && k != bits("0101")) << k.to_string();
        }
        junk += b.weight * orth.norm_squared();
    }
    EXPECT_NEAR(junk, 1.0 - r.ghz_weight_alpha, 1e-12);
}

TEST(RunAttempt, VacuumSourcesNeverSucceed) {
    EXPECT_THROW(run_attempt(bell(4, 0.5, 1.0), DetectionPattern{{1, 1, 0, 0}}), ZeroProbabilityPattern);
    EXPECT_THROW(run_attempt(bell(4, 0.5, 0.5), DetectionPattern{{1, 1, 1, 0}}), std::invalid_argument);
}

TEST(Aggregate, PatternsAreSymmetric) {
    const RateResult r = aggregate_rate(bell(4, 0.5, 0.5));
    EXPECT_NEAR(r.rate, 0.10546875, 1e-14);
    EXPECT_NEAR(r.fidelity, 2.0 / 3.0, 1e-14);
    ASSERT_EQ(r.patterns.size(), 6u);
    for (const auto& p : r.patterns) {
        EXPECT_NEAR(p.probability, r.patterns[0].probability, 1e-12);
        EXPECT_NEAR(p.fidelity, r.fidelity, 1e-12);
    }
    const RateResult lossless = aggregate_rate(bell(4, 1.0, 0.5));
    EXPECT_NEAR(lossless.rate, 0.1875, 1e-14);
    EXPECT_NEAR(lossless.fidelity, 1.0, 1e-14);
}

TEST(Aggregate, FidelityDoesNotDependOnPatternForSixUsers) {
    const RateResult r = aggregate_rate(bell(6, 0.3, 0.6));
    ASSERT_EQ(r.patterns.size(), 36u);
    for (const auto& p : r.patterns) {
        EXPECT_NEAR(p.fidelity, r.fidelity, 1e-12);
    }
}

TEST(Network, IdealProjectionMatchesFullPropagation) {
    const ProtocolConfig c = bell(6, 0.4, 0.3);
    const Network net(c);
    const auto p = enumerate_success_patterns(6)[7];
    const ConditionedState fast = net.condition(p);
    const ConditionedState full = condition_on_pattern(net.detected_state(), net.central_modes(), c.detector, p);
    EXPECT_NEAR(fast.probability, full.probability, 1e-14);
    const PureState phi = ghz_target_for_pattern(p, 6).state();
    EXPECT_NEAR(fidelity_sqrt(phi, fast.residual), fidelity_sqrt(phi, full.residual), 1e-12);
}

TEST(Network, ExplicitCutoffTooSmallOverflows) {
    ProtocolConfig c = bell(6, 0.5, 0.5);
    c.cutoff = 1;
    c.detector = DetectorModel::threshold();
    EXPECT_THROW(Network{c}, CutoffOverflow);
    c.cutoff = 0;
    EXPECT_NO_THROW(Network{c});
}

TEST(Network, RejectsBadConfigs) {
    EXPECT_THROW(Network{bell(2, 0.5, 0.5)}, std::invalid_argument);
    ProtocolConfig c;
    c.distance_km = -3;
    EXPECT_THROW(Network{c}, std::invalid_argument);
    c.distance_km = 0;
    c.source = CoherentQubitSource{};
    EXPECT_THROW(Network{c}, std::invalid_argument);
}

TEST(OddUsers, EmbedsInTheNextEvenCircuit) {
    const ProtocolConfig c = bell(3, 0.5, 0.5);
    EXPECT_EQ(c.circuit_users(), 4);
    EXPECT_NEAR(std::abs(odd_user_alpha(c)), std::sqrt(0.25), 1e-15);
    const Network net(c);
    EXPECT_EQ(net.retained_modes(), 3);
    const RateResult r = aggregate_rate(c);
    EXPECT_GT(r.rate, 0.0);
    EXPECT_GT(r.fidelity, 0.0);
    EXPECT_LE(r.fidelity, 1.0);
    for (const auto& p : r.patterns) {
        EXPECT_EQ(p.target.first.size(), 3u);
    }
}

TEST(OddUsers, LosslessLinksAndMatchedCoherentInputGiveTheTarget) {
    ProtocolConfig c = bell(3, 1.0, 0.5);
    c.odd.alpha_override = 1.0;
    const RateResult r = aggregate_rate(c);
    EXPECT_GT(r.rate, 0.0);
    EXPECT_NEAR(r.fidelity, 1.0, 1e-12);
    const OddUserSettings probability{OddAmplitudeRule::Probability, std::nullopt};
    ProtocolConfig p = bell(3, 0.5, 0.5);
    p.odd = probability;
    EXPECT_NEAR(std::abs(odd_user_alpha(p)), 0.25, 1e-15);
}

TEST(Spdc, LowSqueezingGivesHighFidelity) {
    ProtocolConfig c;
    c.distance_km = 10;
    c.source = HeraldedSpdcSource{0.02, 0.95, 2, DetectorModel::pnrd()};
    const RateResult r = aggregate_rate(c);
    EXPECT_GT(r.fidelity, 0.95);
    EXPECT_GT(r.rate, 0.0);
}

}  // namespace
}  // namespace ghzsim
