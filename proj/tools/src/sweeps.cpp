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

#include <charconv>
#include <cmath>
#include <ostream>
#include <string>
#include <vector>

#include "ghzsim/analytics.hpp"
#include "ghzsim/channels.hpp"
#include "ghzsim/oracle.hpp"
#include "ghzsim/parallel.hpp"
#include "ghzsim/protocol.hpp"
#include "ghzsim/purification.hpp"
#include "ghzsim/sources.hpp"
#include "ghzsim_cli/commands.hpp"

namespace ghzsim::cli {

namespace {

using Row = std::vector<std::string>;

void write_csv(std::ostream& out, const Row& header, const std::vector<Row>& rows) {
    auto line = [&out](const Row& r) {
        for (std::size_t i = 0; i < r.size(); ++i) {
            out << (i ? "," : "") << r[i];
        }
        out << '\n';
    };
    line(header);
    for (const auto& r : rows) {
        line(r);
    }
}

double parse_number(const std::string& text) {
    double v = 0.0;
    const char* end = text.data() + text.size();
    auto [p, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc{} || p != end) {
        throw UsageError("not a number: '" + text + "'");
    }
    return v;
}

std::string pattern_key(const DetectionPattern& p) {
    std::string s;
    for (int o : p.outcomes) {
        s += std::to_string(o);
    }
    return s;
}

void check_users(const std::vector<int>& users) {
    if (users.empty()) {
        throw UsageError("--n needs at least one value");
    }
    for (int n : users) {
        if (n < 3) {
            throw UsageError("--n values must be at least 3");
        }
    }
}

struct SourceWeight {
    double a2 = 0.0;
    /// Fidelity of the row; the requested one when sweeping at fixed fidelity.
    std::optional<double> fidelity;
};

// Vacuum weight for a Bell-source row. At eta = 1 a fixed fidelity below one is
// only reached in the limit a -> 0, where the rate vanishes.
SourceWeight resolve_weight(int n, double eta, std::optional<double> fidelity, std::optional<double> a2) {
    if (fidelity && a2) {
        throw UsageError("--fidelity and --a2 are mutually exclusive");
    }
    if (a2) {
        if (!(*a2 >= 0.0 && *a2 <= 1.0)) {
            throw UsageError("--a2 must lie in [0, 1]");
        }
        return {*a2, std::nullopt};
    }
    const double f = fidelity.value_or(0.9);
    if (!(f > 0.0 && f <= 1.0)) {
        throw UsageError("--fidelity must lie in (0, 1]");
    }
    if (n % 2 != 0) {
        throw UsageError("fixed-fidelity sweeps need even n; give --a2 for odd n");
    }
    if (eta >= 1.0) {
        return {f == 1.0 ? 1.0 : 0.0, f};
    }
    return {vacuum_weight_for_fidelity(n, eta, f), f};
}

struct Simulated {
    double rate = 0.0;
    std::optional<double> fidelity;
};

Simulated simulate(const ProtocolConfig& config) {
    try {
        const RateResult r = aggregate_rate(config);
        return {r.rate, r.fidelity};
    } catch (const ZeroProbabilityPattern&) {
        return {0.0, std::nullopt};
    }
}

std::string opt(const std::optional<double>& v) { return v ? format_double(*v) : std::string{}; }

ProtocolConfig bell_config(int n, double km, double attenuation, double a2) {
    ProtocolConfig c;
    c.n_users = n;
    c.distance_km = km;
    c.attenuation_db_per_km = attenuation;
    c.source = BellSource{std::sqrt(a2)};
    return c;
}

}  // namespace

DistanceRange DistanceRange::parse(const std::string& text) {
    std::vector<std::string> parts;
    std::size_t begin = 0;
    while (true) {
        const std::size_t colon = text.find(':', begin);
        parts.push_back(text.substr(begin, colon - begin));
        if (colon == std::string::npos) {
            break;
        }
        begin = colon + 1;
    }
    DistanceRange r;
    if (parts.size() == 1) {
        r.start = r.stop = parse_number(parts[0]);
        r.step = 1.0;
    } else if (parts.size() == 3) {
        r.start = parse_number(parts[0]);
        r.stop = parse_number(parts[1]);
        r.step = parse_number(parts[2]);
    } else {
        throw UsageError("distance must be start:stop:step or a single value, got '" + text + "'");
    }
    if (r.start < 0.0 || r.stop < r.start || !(r.step > 0.0)) {
        throw UsageError("distance range needs 0 <= start <= stop and step > 0");
    }
    return r;
}

std::vector<double> DistanceRange::values() const {
    const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
    std::vector<double> v;
    for (std::size_t i = 0; i < count; ++i) {
        v.push_back(start + static_cast<double>(i) * step);
    }
    return v;
}

std::string format_double(double value) {
    if (std::isnan(value)) {
        return "nan";
    }
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, p);
}

void run_rate_sweep(const RateSweepOptions& o, std::ostream& out) {
    check_users(o.n_users);
    if (o.source != "bell" && o.source != "spdc") {
        throw UsageError("--source must be bell or spdc");
    }
    if (o.fidelity && o.a2) {
        throw UsageError("--fidelity and --a2 are mutually exclusive");
    }
    const bool spdc = o.source == "spdc";
    if (spdc && (o.fidelity || o.a2)) {
        throw UsageError("--fidelity and --a2 apply to Bell sources only");
    }
    const auto distances = o.distance.values();
    // Catch flag errors before any work is scheduled.
    for (int n : o.n_users) {
        if (!spdc) {
            resolve_weight(n, 0.5, o.fidelity, o.a2);
        }
    }

    Row header{"distance_km", "eta", "rate_protocol", "rate_direct", "fidelity", "n_users", "source", "a_squared"};
    if (o.simulate) {
        header.insert(header.end(), {"rate_simulated", "fidelity_simulated"});
    }
    if (o.samples > 0) {
        header.insert(header.end(), {"rate_mc", "rate_mc_stderr"});
    }

    const std::size_t per_n = distances.size();
    auto rows = parallel_map(o.n_users.size() * per_n, [&](std::size_t i) {
        const int n = o.n_users[i / per_n];
        const double km = distances[i % per_n];
        const double eta = eta_from_distance(km, o.attenuation_db_per_km);
        ProtocolConfig config;
        Row row{format_double(km), format_double(eta)};
        std::string a_squared;
        if (spdc) {
            const DetectorModel det = DetectorModel::pnrd(o.efficiency, o.dark);
            config.n_users = n;
            config.distance_km = km;
            config.attenuation_db_per_km = o.attenuation_db_per_km;
            config.source = HeraldedSpdcSource{lambda_from_squeezing_db(o.squeezing_db), o.t, o.cutoff, det};
            config.detector = det;
            const Simulated s = simulate(config);
            row.insert(row.end(), {format_double(s.rate), format_double(direct_rate(n, eta)), opt(s.fidelity)});
        } else {
            const SourceWeight w = resolve_weight(n, eta, o.fidelity, o.a2);
            config = bell_config(n, km, o.attenuation_db_per_km, w.a2);
            a_squared = format_double(w.a2);
            if (n % 2 == 0) {
                const double a = std::sqrt(w.a2);
                const double rate = rate_R(n, eta, a);
                std::optional<double> f = w.fidelity;
                if (!f && !(w.a2 == 0.0 && eta == 1.0)) {
                    f = fidelity_F(n, eta, a);
                }
                row.insert(row.end(), {format_double(rate), format_double(direct_rate(n, eta)), opt(f)});
            } else {
                // No closed form for odd n: the protocol columns come from simulation.
                const Simulated s = simulate(config);
                row.insert(row.end(), {format_double(s.rate), format_double(direct_rate(n, eta)), opt(s.fidelity)});
            }
        }
        row.insert(row.end(), {std::to_string(n), o.source, a_squared});
        if (o.simulate) {
            const Simulated s = simulate(config);
            row.insert(row.end(), {format_double(s.rate), opt(s.fidelity)});
        }
        if (o.samples > 0) {
            const MonteCarloEstimate mc = monte_carlo_rate(config, o.samples, o.seed + i);
            row.insert(row.end(), {format_double(mc.estimate), format_double(mc.standard_error)});
        }
        return row;
    });
    write_csv(out, header, rows);
}

void run_spdc_sweep(const SpdcSweepOptions& o, std::ostream& out) {
    check_users(o.n_users);
    if (o.squeezing_db.empty() || o.t.empty() || o.detector.empty()) {
        throw UsageError("--squeezing-db, --t and --detector need at least one value");
    }
    for (double s : o.squeezing_db) {
        if (!(s > 0.0)) {
            throw UsageError("--squeezing-db must be positive");
        }
    }
    for (double t : o.t) {
        if (!(t >= 0.0 && t <= 1.0)) {
            throw UsageError("--t must lie in [0, 1]");
        }
    }
    if (o.cutoff < 1) {
        throw UsageError("--cutoff must be at least 1");
    }
    std::vector<DetectorModel> detectors;
    for (const auto& d : o.detector) {
        try {
            detectors.push_back(DetectorModel::parse(d, o.efficiency, o.dark));
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
    }
    const auto distances = o.distance.values();

    struct Point {
        int n;
        double squeezing;
        double t;
        std::size_t detector;
        double km;
    };
    std::vector<Point> points;
    for (int n : o.n_users) {
        for (double s : o.squeezing_db) {
            for (double t : o.t) {
                for (std::size_t d = 0; d < detectors.size(); ++d) {
                    for (double km : distances) {
                        points.push_back({n, s, t, d, km});
                    }
                }
            }
        }
    }

    Row header{"distance_km", "eta",    "rate_protocol", "rate_direct", "fidelity",   "n_users",  "source",
               "squeezing_db", "lambda", "t",             "detector",    "efficiency", "dark_prob"};
    if (o.samples > 0) {
        header.insert(header.end(), {"rate_mc", "rate_mc_stderr"});
    }
    auto rows = parallel_map(points.size(), [&](std::size_t i) {
        const Point& p = points[i];
        const DetectorModel& det = detectors[p.detector];
        const double lambda = lambda_from_squeezing_db(p.squeezing);
        ProtocolConfig config;
        config.n_users = p.n;
        config.distance_km = p.km;
        config.attenuation_db_per_km = o.attenuation_db_per_km;
        config.source = HeraldedSpdcSource{lambda, p.t, o.cutoff, det};
        config.detector = DetectorModel::pnrd(o.efficiency, o.dark);
        const double eta = config.eta();
        const Simulated s = simulate(config);
        Row row{format_double(p.km),    format_double(eta), format_double(s.rate),
                format_double(direct_rate(p.n, eta)),        opt(s.fidelity),
                std::to_string(p.n),    "spdc",             format_double(p.squeezing),
                format_double(lambda),  format_double(p.t), det.name(),
                format_double(o.efficiency), format_double(o.dark)};
        if (o.samples > 0) {
            const MonteCarloEstimate mc = monte_carlo_rate(config, o.samples, o.seed + i);
            row.insert(row.end(), {format_double(mc.estimate), format_double(mc.standard_error)});
        }
        return row;
    });
    write_csv(out, header, rows);
}

void run_purify(const PurifyOptions& o, std::ostream& out) {
    check_users({o.n_users});
    resolve_weight(o.n_users, 0.5, o.fidelity, o.a2);
    const auto distances = o.distance.values();
    const auto patterns = enumerate_success_patterns(o.n_users % 2 == 0 ? o.n_users : o.n_users + 1);

    Row header{"distance_km",  "eta",         "n_users", "a_squared", "pattern",
               "probability",  "alpha",       "fidelity_in", "success_probability",
               "success_probability_half_alpha", "output_fidelity"};
    const std::size_t per_distance = patterns.size();
    auto rows = parallel_map(distances.size() * per_distance, [&](std::size_t i) {
        const double km = distances[i / per_distance];
        const DetectionPattern& pattern = patterns[i % per_distance];
        const double eta = eta_from_distance(km, o.attenuation_db_per_km);
        const SourceWeight w = resolve_weight(o.n_users, eta, o.fidelity, o.a2);
        const ProtocolConfig config = bell_config(o.n_users, km, o.attenuation_db_per_km, w.a2);
        Row row{format_double(km), format_double(eta), std::to_string(o.n_users), format_double(w.a2),
                pattern_key(pattern)};
        try {
            const ConditionalResult r = run_attempt(config, pattern);
            const PurificationOutcome p = epl_ghz_purify(r, r);
            row.insert(row.end(), {format_double(r.probability), format_double(r.ghz_weight_alpha),
                                   format_double(r.fidelity), format_double(p.success_probability),
                                   format_double(0.5 * r.ghz_weight_alpha), format_double(p.output_fidelity)});
        } catch (const ZeroProbabilityPattern&) {
            row.insert(row.end(), {"0", "", "", "", "", ""});
        }
        return row;
    });
    write_csv(out, header, rows);
}

}  // namespace ghzsim::cli
