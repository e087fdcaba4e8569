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

#include <cmath>
#include <complex>
#include <map>
#include <ostream>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "ghzsim/analytics.hpp"
#include "ghzsim/channels.hpp"
#include "ghzsim/oracle.hpp"
#include "ghzsim/protocol.hpp"
#include "ghzsim/purification.hpp"
#include "ghzsim_cli/commands.hpp"

namespace ghzsim::cli {

namespace {

constexpr double kEtaGrid[] = {0.1, 0.3, 0.5, 0.7, 0.9, 1.0};
constexpr double kA2Grid[] = {0.1, 0.3, 0.5, 0.7, 0.9};

class Report {
  public:
    void add(std::string name, double expected, double got, double tolerance) {
        const bool ok = std::abs(got - expected) <= tolerance;
        checks_.push_back({std::move(name), expected, got, tolerance, ok});
    }
    void flag(std::string name, bool ok) { add(std::move(name), 1.0, ok ? 1.0 : 0.0, 0.0); }
    std::vector<CheckResult> take() { return std::move(checks_); }

  private:
    std::vector<CheckResult> checks_;
};

std::string tag(double x) {
    std::string s = format_double(x);
    for (auto& c : s) {
        if (c == '.') {
            c = 'p';
        }
    }
    return s;
}

FockBasisState bits(const char* text) {
    std::vector<std::uint8_t> v;
    for (const char* p = text; *p; ++p) {
        v.push_back(static_cast<std::uint8_t>(*p - '0'));
    }
    return FockBasisState(std::move(v));
}

using DensityMatrix = std::map<std::pair<FockBasisState, FockBasisState>, Amplitude>;

DensityMatrix density(const MixedState& m) {
    DensityMatrix rho;
    for (const auto& b : m.branches()) {
        for (const auto& [r, ar] : b.state.terms()) {
            for (const auto& [c, ac] : b.state.terms()) {
                rho[{r, c}] += b.weight * ar * std::conj(ac);
            }
        }
    }
    return rho;
}

double density_distance(const MixedState& a, const MixedState& b) {
    DensityMatrix d = density(a);
    for (const auto& [k, v] : density(b)) {
        d[k] -= v;
    }
    double worst = 0.0;
    for (const auto& [k, v] : d) {
        worst = std::max(worst, std::abs(v));
    }
    return worst;
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

ProtocolConfig bell(int n, double eta, double a2, double phase) {
    ProtocolConfig c;
    c.n_users = n;
    c.transmittance = eta;
    c.source = BellSource{std::sqrt(a2)};
    c.circuit.hbs_phase = phase;
    return c;
}

void table_checks(Report& r, double phase) {
    struct Row {
        std::vector<int> clicks;
        const char* first;
        const char* second;
        double sign_first;
    };
    const Row table[] = {{{1, 1, 0, 0}, "1010", "0101", 1},  {{1, 0, 1, 0}, "1100", "0011", 1},
                         {{1, 0, 0, 1}, "1001", "0110", 1},  {{0, 1, 1, 0}, "1001", "0110", -1},
                         {{0, 1, 0, 1}, "1100", "0011", -1}, {{0, 0, 1, 1}, "1010", "0101", -1}};
    const double s = 1.0 / std::sqrt(2.0);
    for (const auto& row : table) {
        const DetectionPattern p{row.clicks};
        std::string name = "table.n4.clicks";
        for (std::size_t d = 0; d < row.clicks.size(); ++d) {
            if (row.clicks[d] == 1) {
                name += std::to_string(d + 1);
            }
        }
        double err = 1.0;
        try {
            const ConditionedState c = Network(bell(4, 1.0, 0.5, phase)).condition(p);
            if (c.residual.size() == 1) {
                const PureState& psi = c.residual.branches()[0].state;
                PureState expected(4, 1);
                expected.add(bits(row.first), row.sign_first * s);
                expected.add(bits(row.second), -row.sign_first * s);
                err = 0.0;
                for (const auto& [k, v] : psi.terms()) {
                    err = std::max(err, std::abs(v - expected.amplitude(k)));
                }
                for (const auto& [k, v] : expected.terms()) {
                    err = std::max(err, std::abs(v - psi.amplitude(k)));
                }
            }
        } catch (const ZeroProbabilityPattern&) {
        }
        r.add(name, 0.0, err, 1e-12);
    }
}

void grid_checks(Report& r, double phase) {
    for (int n : {4, 6}) {
        for (double eta : kEtaGrid) {
            for (double a2 : kA2Grid) {
                const std::string key = "n" + std::to_string(n) + ".eta" + tag(eta) + ".a2_" + tag(a2);
                const double a = std::sqrt(a2);
                const double rate = rate_R(n, eta, a);
                const double fid = fidelity_F(n, eta, a);
                const ProtocolConfig c = bell(n, eta, a2, phase);
                double sim_rate = -1.0;
                double sim_fid = -1.0;
                try {
                    const RateResult sim = aggregate_rate(c);
                    sim_rate = sim.rate;
                    sim_fid = sim.fidelity;
                } catch (const ZeroProbabilityPattern&) {
                }
                const OracleAggregate oracle = brute_force_aggregate(c);
                r.add("rate.pipeline." + key, rate, sim_rate, 1e-10);
                r.add("rate.oracle." + key, rate, oracle.rate, 1e-10);
                r.add("fidelity.pipeline." + key, fid, sim_fid, 1e-10);
                r.add("fidelity.oracle." + key, fid, oracle.fidelity, 1e-10);
            }
        }
    }
}

void inversion_checks(Report& r) {
    for (int n : {4, 6, 8}) {
        for (double eta : {0.01, 0.1, 0.5}) {
            for (double f : {0.8, 0.9, 0.95, 0.99}) {
                const double a = std::sqrt(vacuum_weight_for_fidelity(n, eta, f));
                r.add("inversion.n" + std::to_string(n) + ".eta" + tag(eta) + ".f" + tag(f), f,
                      fidelity_F(n, eta, a), 1e-12);
            }
        }
    }
}

void scaling_checks(Report& r, double phase) {
    for (int n : {4, 6, 8}) {
        std::vector<double> x, y, yd;
        for (int k = 0; k < 5; ++k) {
            const double eta = std::pow(10.0, -4.0 + 0.25 * k);
            x.push_back(std::log(eta));
            y.push_back(std::log(aggregate_rate(bell(n, eta, 0.5, phase)).rate));
            yd.push_back(std::log(direct_rate(n, eta)));
        }
        r.add("scaling.protocol.n" + std::to_string(n), n / 2.0, fit_slope(x, y), 0.05);
        r.add("scaling.direct.n" + std::to_string(n), n, fit_slope(x, yd), 0.05);
    }
}

void crossover_checks(Report& r) {
    const int n = 4;
    const double f = 0.9;
    bool ok = true;
    try {
        const double km = crossover_distance(n, f);
        double previous = 0.0;
        for (double d = km + 1.0; d <= km + 300.0; d += 5.0) {
            const double eta = eta_from_distance(d);
            const double ratio = rate_R(n, eta, std::sqrt(vacuum_weight_for_fidelity(n, eta, f))) / direct_rate(n, eta);
            ok = ok && ratio > 1.0 && ratio > previous;
            previous = ratio;
        }
    } catch (const std::domain_error&) {
        ok = false;
    }
    r.flag("crossover.n4.f0p9", ok);
}

void quasi_checks(Report& r) {
    for (int k : {2, 3}) {
        const std::vector<double> clicks = simulate_quasi_pnrd(3, k);
        r.add("quasi_pnrd.n3.k" + std::to_string(k), std::pow(1.0 / 3.0, k - 1), clicks[1], 1e-12);
    }
}

void purification_checks(Report& r, double phase) {
    const char* terms[] = {"1010", "0101", "1011", "1110", "0111", "1101", "1111"};
    std::vector<FockBasisState> t;
    for (const char* s : terms) {
        t.push_back(bits(s));
    }
    const auto table = cnot_term_table(t, t);
    bool table_ok = true;
    for (std::size_t i = 0; i < t.size(); ++i) {
        for (std::size_t j = 0; j < t.size(); ++j) {
            FockBasisState expected = t[i];
            for (std::size_t m = 0; m < 4; ++m) {
                expected.set(m, t[i][m] != t[j][m] ? 1 : 0);
            }
            const bool all_ones = expected == bits("1111");
            const bool ideal_pair = (i == 0 && j == 1) || (i == 1 && j == 0);
            table_ok = table_ok && table[i][j] == expected && all_ones == ideal_pair;
        }
    }
    r.flag("purification.cnot_table", table_ok);

    const DetectionPattern p{{1, 1, 0, 0}};
    const ConditionalResult ideal = run_attempt(bell(4, 1.0, 0.5, phase), p);
    const PurificationOutcome pi = epl_ghz_purify(ideal, ideal);
    r.add("purification.ideal.success_probability", 0.5, pi.success_probability, 1e-12);
    r.add("purification.ideal.output_fidelity", 1.0, pi.output_fidelity, 1e-12);
    const ConditionalResult lossy = run_attempt(bell(4, 0.5, 0.5, phase), p);
    const PurificationOutcome pl = epl_ghz_purify(lossy, lossy);
    r.add("purification.lossy.output_fidelity", 1.0, pl.output_fidelity, 1e-12);
}

PureState random_state(std::mt19937_64& rng, std::size_t modes, int n_max) {
    std::normal_distribution<double> g;
    PureState s(modes, n_max);
    const auto count = static_cast<std::size_t>(std::pow(n_max + 1, static_cast<double>(modes)));
    for (std::size_t idx = 0; idx < count; ++idx) {
        FockBasisState occ = FockBasisState::vacuum(modes);
        std::size_t rest = idx;
        for (std::size_t m = 0; m < modes; ++m) {
            occ.set(m, static_cast<int>(rest % static_cast<std::size_t>(n_max + 1)));
            rest /= static_cast<std::size_t>(n_max + 1);
        }
        s.add(occ, Amplitude(g(rng), g(rng)));
    }
    return s.normalized();
}

void loss_checks(Report& r) {
    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const std::vector<int> modes{0, 2};
    for (int trial = 0; trial < 5; ++trial) {
        const PureState psi = random_state(rng, 3, 2);
        const double e1 = u(rng);
        const double e2 = u(rng);
        const MixedState twice = apply_loss(apply_loss(psi, modes, e1), modes, e2);
        const MixedState once = apply_loss(psi, modes, e1 * e2);
        r.add("loss.composition." + std::to_string(trial), 0.0, density_distance(twice, once), 1e-12);
        r.add("loss.environment." + std::to_string(trial), 0.0,
              density_distance(apply_loss(psi, modes, e1), environment_loss(psi, modes, e1)), 1e-12);
    }
}

}  // namespace

std::vector<CheckResult> verification_checks(const VerifyOptions& options) {
    const double phase = options.hbs_phase_fault.value_or(0.0);
    Report r;
    table_checks(r, phase);
    grid_checks(r, phase);
    inversion_checks(r);
    scaling_checks(r, phase);
    crossover_checks(r);
    quasi_checks(r);
    purification_checks(r, phase);
    loss_checks(r);
    return r.take();
}

bool run_verify(const VerifyOptions& options, std::ostream& out) {
    const auto checks = verification_checks(options);
    bool all = true;
    for (const auto& c : checks) {
        all = all && c.passed;
    }
    if (options.json) {
        nlohmann::json j;
        j["passed"] = all;
        j["checks"] = nlohmann::json::array();
        for (const auto& c : checks) {
            j["checks"].push_back(
                {{"name", c.name}, {"expected", c.expected}, {"got", c.got}, {"tolerance", c.tolerance},
                 {"passed", c.passed}});
        }
        out << j.dump(2) << '\n';
    } else {
        std::size_t failed = 0;
        for (const auto& c : checks) {
            failed += c.passed ? 0 : 1;
            out << (c.passed ? "PASS " : "FAIL ") << c.name << " expected=" << format_double(c.expected)
                << " got=" << format_double(c.got) << " tol=" << format_double(c.tolerance) << '\n';
        }
        out << checks.size() - failed << '/' << checks.size() << " checks passed\n";
    }
    return all;
}

}  // namespace ghzsim::cli
