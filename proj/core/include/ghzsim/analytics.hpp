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

#ifndef GHZSIM_ANALYTICS_HPP
#define GHZSIM_ANALYTICS_HPP

#include <vector>

namespace ghzsim {

// Closed forms for Bell sources a|00> + b|11> and ideal photon-number-resolving
// detection, evaluated in log space so tiny eta stays finite.

/// Total success probability summed over all 6^(N/2-1) success patterns.
double rate_R(int n_users, double eta, double a);

/// sqrt(<Phi|rho|Phi>) of the conditional state.
double fidelity_F(int n_users, double eta, double a);

/// a^2 that yields fidelity F at transmittance eta.
double vacuum_weight_for_fidelity(int n_users, double eta, double fidelity);

/// eta^N: preparing the state centrally and sending every photon out.
double direct_rate(int n_users, double eta);

struct LostPhotonTerm {
    int m = 0;
    double Y = 0.0;
    double p = 0.0;
    /// p * Y^2 * C(N/2, m).
    double term = 0.0;
};

struct AnalyticBreakdown {
    int n_users = 0;
    double eta = 0.0;
    double a = 0.0;
    double b = 0.0;
    std::vector<LostPhotonTerm> per_m;
    double P_single_pattern = 0.0;
    double R_total = 0.0;
    double F = 0.0;
};

AnalyticBreakdown breakdown(int n_users, double eta, double a);

/// Smallest distance beyond which rate_R at fixed fidelity exceeds the direct
/// rate, found by bisection on [lo_km, hi_km]. Throws std::domain_error when the
/// interval holds no crossing.
double crossover_distance(int n_users, double fidelity, double attenuation_db_per_km = 0.2, double lo_km = 1e-6,
                          double hi_km = 500.0, double tolerance_km = 1e-9);

}  // namespace ghzsim

#endif  // GHZSIM_ANALYTICS_HPP
