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

#include "ghzsim/analytics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "ghzsim/channels.hpp"

namespace ghzsim {

namespace {

void check_args(int n_users, double eta, double a) {
    if (n_users < 4 || n_users % 2 != 0) {
        throw std::invalid_argument("closed forms need even n >= 4, got " + std::to_string(n_users));
    }
    if (!(eta >= 0.0 && eta <= 1.0)) {
        throw std::invalid_argument("eta must lie in [0, 1]");
    }
    if (!(a >= 0.0 && a <= 1.0)) {
        throw std::invalid_argument("a must lie in [0, 1]");
    }
}

double b_of(double a) { return std::sqrt(std::max(0.0, 1.0 - a * a)); }

// log of a^2 + b^2 (1 - eta), the per-pair bracket.
double log_bracket(double a, double eta) {
    const double b2 = 1.0 - a * a;
    return std::log(a * a + b2 * (1.0 - eta));
}

double log_binomial(int n, int k) {
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

}  // namespace

double rate_R(int n_users, double eta, double a) {
    check_args(n_users, eta, a);
    const double b = b_of(a);
    if (eta == 0.0 || b == 0.0) {
        return 0.0;
    }
    const double h = n_users / 2.0;
    const double log_r = (h - 1.0) * std::log(3.0) - (n_users - 4) * std::log(2.0) + h * std::log(eta) +
                         n_users * std::log(b) + h * log_bracket(a, eta);
    return std::exp(log_r);
}

double fidelity_F(int n_users, double eta, double a) {
    check_args(n_users, eta, a);
    if (a == 0.0) {
        if (eta == 1.0) {
            throw std::domain_error("undefined fidelity: a = 0 with a lossless link");
        }
        return 0.0;
    }
    // sqrt(a^N / bracket^(N/2)) = (a^2 / bracket)^(N/4)
    return std::exp(n_users / 4.0 * (2.0 * std::log(a) - log_bracket(a, eta)));
}

double vacuum_weight_for_fidelity(int n_users, double eta, double fidelity) {
    check_args(n_users, eta, 0.0);
    if (!(fidelity > 0.0 && fidelity <= 1.0)) {
        throw std::invalid_argument("fidelity must lie in (0, 1]");
    }
    const double x = std::pow(fidelity, 4.0 / n_users);
    const double denominator = 1.0 - eta * x;
    if (!(denominator > 0.0) || eta >= 1.0) {
        throw std::domain_error("no vacuum weight reaches this fidelity at eta = " + std::to_string(eta));
    }
    return (1.0 - eta) * x / denominator;
}

double direct_rate(int n_users, double eta) {
    if (n_users < 1) {
        throw std::invalid_argument("n_users must be positive");
    }
    if (!(eta >= 0.0 && eta <= 1.0)) {
        throw std::invalid_argument("eta must lie in [0, 1]");
    }
    return eta == 0.0 ? 0.0 : std::exp(n_users * std::log(eta));
}

AnalyticBreakdown breakdown(int n_users, double eta, double a) {
    check_args(n_users, eta, a);
    AnalyticBreakdown out;
    out.n_users = n_users;
    out.eta = eta;
    out.a = a;
    out.b = b_of(a);
    const int h = n_users / 2;
    const double inf = -std::numeric_limits<double>::infinity();
    auto safe_log = [inf](double x) { return x > 0.0 ? std::log(x) : inf; };
    double sum = 0.0;
    for (int m = 0; m <= h; ++m) {
        LostPhotonTerm t;
        t.m = m;
        const double log_y = (h - m) * safe_log(a) + (h + m) * safe_log(out.b) - 0.5 * (h - 2) * std::log(2.0);
        const double log_p = h * safe_log(eta) + m * safe_log(1.0 - eta) - (h - 1) * std::log(4.0);
        // 0^0 = 1 for the m = 0 loss factor and the m = h vacuum factor.
        const double y = (m == h && a == 0.0) ? std::exp((h + m) * safe_log(out.b) - 0.5 * (h - 2) * std::log(2.0))
                                              : std::exp(log_y);
        const double p = (m == 0 && eta == 1.0) ? std::exp(-(h - 1) * std::log(4.0)) : std::exp(log_p);
        t.Y = y;
        t.p = p;
        t.term = p * y * y * std::exp(log_binomial(h, m));
        sum += t.term;
        out.per_m.push_back(t);
    }
    out.P_single_pattern = 2.0 * sum;
    out.R_total = std::pow(6.0, h - 1) * out.P_single_pattern;
    out.F = (a == 0.0 && eta == 1.0) ? 0.0 : fidelity_F(n_users, eta, a);
    return out;
}

double crossover_distance(int n_users, double fidelity, double attenuation_db_per_km, double lo_km, double hi_km,
                          double tolerance_km) {
    if (!(lo_km > 0.0 && hi_km > lo_km)) {
        throw std::invalid_argument("need 0 < lo_km < hi_km");
    }
    // Positive once the protocol beats direct transmission.
    auto advantage = [&](double km) {
        const double eta = eta_from_distance(km, attenuation_db_per_km);
        const double a = std::sqrt(vacuum_weight_for_fidelity(n_users, eta, fidelity));
        return std::log(rate_R(n_users, eta, a)) - n_users * std::log(eta);
    };
    double lo = lo_km;
    double hi = hi_km;
    if (advantage(lo) > 0.0 || advantage(hi) <= 0.0) {
        throw std::domain_error("no crossover inside the search interval");
    }
    while (hi - lo > tolerance_km) {
        const double mid = 0.5 * (lo + hi);
        (advantage(mid) > 0.0 ? hi : lo) = mid;
    }
    return hi;
}

}  // namespace ghzsim
