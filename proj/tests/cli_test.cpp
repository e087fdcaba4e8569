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

#include "ghzsim_cli/commands.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "ghzsim/analytics.hpp"

namespace ghzsim::cli {
namespace {

struct Table {
    std::vector<std::string> header;
    std::vector<std::map<std::string, std::string>> rows;

    double num(std::size_t row, const std::string& col) const { return std::stod(rows.at(row).at(col)); }
};

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, ',')) {
        out.push_back(cell);
    }
    if (!line.empty() && line.back() == ',') {
        out.emplace_back();
    }
    return out;
}

Table parse_csv(const std::string& text) {
    Table t;
    std::istringstream in(text);
    std::string line;
    std::getline(in, line);
    t.header = split(line);
    while (std::getline(in, line)) {
        const auto cells = split(line);
        EXPECT_EQ(cells.size(), t.header.size()) << line;
        std::map<std::string, std::string> row;
        for (std::size_t i = 0; i < cells.size() && i < t.header.size(); ++i) {
            row[t.header[i]] = cells[i];
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

template <typename Options, typename Run>
Table run(const Options& o, Run runner) {
    std::ostringstream out;
    runner(o, out);
    return parse_csv(out.str());
}

TEST(DistanceRangeParse, RangesAndPoints) {
    const DistanceRange r = DistanceRange::parse("0:200:5");
    EXPECT_EQ(r.values().size(), 41u);
    EXPECT_DOUBLE_EQ(r.values().back(), 200.0);
    EXPECT_EQ(DistanceRange::parse("50").values(), std::vector<double>{50.0});
    EXPECT_EQ(DistanceRange::parse("0:1:0.1").values().size(), 11u);
    EXPECT_THROW(DistanceRange::parse("0:10"), UsageError);
    EXPECT_THROW(DistanceRange::parse("0:10:0"), UsageError);
    EXPECT_THROW(DistanceRange::parse("10:0:1"), UsageError);
    EXPECT_THROW(DistanceRange::parse("-5:10:1"), UsageError);
    EXPECT_THROW(DistanceRange::parse("a:b:c"), UsageError);
}

TEST(FormatDouble, RoundTripsExactly) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-30.0, 30.0);
    for (int i = 0; i < 2000; ++i) {
        const double x = std::pow(10.0, u(rng)) * (i % 2 ? 1 : -1);
        const std::string s = format_double(x);
        double y = 0.0;
        std::from_chars(s.data(), s.data() + s.size(), y);
        EXPECT_EQ(x, y) << s;
    }
    EXPECT_EQ(format_double(0.1), "0.1");
    EXPECT_EQ(format_double(0.0), "0");
}

TEST(RateSweep, FourUserSweepMatchesClosedForms) {
    RateSweepOptions o;
    o.fidelity = 0.9;
    const Table t = run(o, run_rate_sweep);
    ASSERT_EQ(t.rows.size(), 41u);
    const std::vector<std::string> expected{"distance_km", "eta",     "rate_protocol", "rate_direct",
                                            "fidelity",    "n_users", "source",        "a_squared"};
    EXPECT_EQ(t.header, expected);
    double prev_ratio = 0.0;
    for (std::size_t i = 1; i < t.rows.size(); ++i) {
        const double eta = t.num(i, "eta");
        EXPECT_NEAR(eta, std::pow(10.0, -0.2 * t.num(i, "distance_km") / 10.0), 1e-15);
        const double a2 = vacuum_weight_for_fidelity(4, eta, 0.9);
        EXPECT_EQ(t.num(i, "a_squared"), a2);
        EXPECT_EQ(t.num(i, "rate_protocol"), rate_R(4, eta, std::sqrt(a2)));
        EXPECT_NEAR(t.num(i, "fidelity"), 0.9, 1e-12);
        const double ratio = t.num(i, "rate_protocol") / t.num(i, "rate_direct");
        if (i >= 3) {
            EXPECT_GT(ratio, prev_ratio) << "at " << t.rows[i].at("distance_km") << " km";
        }
        prev_ratio = ratio;
    }
    EXPECT_DOUBLE_EQ(t.num(0, "rate_protocol"), 0.0);
    // The ratio bottoms out near 10 km before rising for good.
    const auto ratio_at = [&](std::size_t i) { return t.num(i, "rate_protocol") / t.num(i, "rate_direct"); };
    EXPECT_LT(ratio_at(2), ratio_at(1));
    EXPECT_LT(ratio_at(2), ratio_at(3));
}

TEST(RateSweep, MoreUsersMeansLowerRate) {
    RateSweepOptions o;
    o.n_users = {4, 6, 8};
    o.distance = DistanceRange::parse("5:100:5");
    o.fidelity = 0.9;
    const Table t = run(o, run_rate_sweep);
    std::map<std::pair<std::string, int>, double> rate;
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        rate[{t.rows[i].at("distance_km"), std::stoi(t.rows[i].at("n_users"))}] = t.num(i, "rate_protocol");
    }
    ASSERT_EQ(rate.size(), 60u);
    for (const auto& [key, r] : rate) {
        if (key.second == 4) {
            EXPECT_GT(r, rate.at({key.first, 6}));
            EXPECT_GT(rate.at({key.first, 6}), rate.at({key.first, 8}));
        }
    }
}

TEST(RateSweep, SimulatedAndSampledColumns) {
    RateSweepOptions o;
    o.distance = DistanceRange::parse("10:20:10");
    o.a2 = 0.5;
    o.simulate = true;
    o.samples = 20000;
    o.seed = 9;
    const Table t = run(o, run_rate_sweep);
    ASSERT_EQ(t.rows.size(), 2u);
    EXPECT_EQ(t.header.back(), "rate_mc_stderr");
    for (std::size_t i = 0; i < 2; ++i) {
        EXPECT_NEAR(t.num(i, "rate_simulated"), t.num(i, "rate_protocol"), 1e-14);
        EXPECT_NEAR(t.num(i, "fidelity_simulated"), t.num(i, "fidelity"), 1e-12);
        EXPECT_LT(std::abs(t.num(i, "rate_mc") - t.num(i, "rate_protocol")), 5 * t.num(i, "rate_mc_stderr"));
    }
    std::ostringstream a;
    std::ostringstream b;
    run_rate_sweep(o, a);
    run_rate_sweep(o, b);
    EXPECT_EQ(a.str(), b.str());
}

TEST(RateSweep, OddUsersUseSimulation) {
    RateSweepOptions o;
    o.n_users = {3};
    o.distance = DistanceRange::parse("10");
    o.a2 = 0.5;
    const Table t = run(o, run_rate_sweep);
    ASSERT_EQ(t.rows.size(), 1u);
    EXPECT_GT(t.num(0, "rate_protocol"), 0.0);
    o.a2.reset();
    o.fidelity = 0.9;
    std::ostringstream sink;
    EXPECT_THROW(run_rate_sweep(o, sink), UsageError);
}

TEST(RateSweep, RejectsConflictingFlags) {
    RateSweepOptions o;
    o.fidelity = 0.9;
    o.a2 = 0.5;
    std::ostringstream sink;
    EXPECT_THROW(run_rate_sweep(o, sink), UsageError);
    o.a2.reset();
    o.source = "laser";
    EXPECT_THROW(run_rate_sweep(o, sink), UsageError);
}

TEST(Purify, ReportsBothSuccessFigures) {
    PurifyOptions o;
    o.a2 = 0.5;
    const Table t = run(o, run_purify);
    ASSERT_EQ(t.rows.size(), 6u);
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        const double alpha = t.num(i, "alpha");
        EXPECT_EQ(t.rows[i].at("pattern").size(), 4u);
        EXPECT_NEAR(t.num(i, "success_probability"), 0.5 * alpha * alpha, 1e-12);
        EXPECT_NEAR(t.num(i, "success_probability_half_alpha"), 0.5 * alpha, 1e-15);
        EXPECT_NEAR(t.num(i, "output_fidelity"), 1.0, 1e-12);
        EXPECT_NEAR(t.num(i, "fidelity_in"), std::sqrt(alpha), 1e-12);
    }
}

TEST(SpdcSweep, SinglePointColumns) {
    SpdcSweepOptions o;
    o.distance = DistanceRange::parse("50");
    o.squeezing_db = {0.2};
    const Table t = run(o, run_spdc_sweep);
    ASSERT_EQ(t.rows.size(), 1u);
    EXPECT_EQ(t.rows[0].at("source"), "spdc");
    EXPECT_EQ(t.rows[0].at("detector"), "pnrd");
    EXPECT_GT(t.num(0, "rate_protocol"), 0.0);
    EXPECT_GT(t.num(0, "fidelity"), 0.5);
    EXPECT_LE(t.num(0, "fidelity"), 1.0);
    EXPECT_NEAR(t.num(0, "lambda"), std::tanh(0.2 * std::log(10.0) / 20.0), 1e-15);
}

}  // namespace
}  // namespace ghzsim::cli
