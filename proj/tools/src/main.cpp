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

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "ghzsim_cli/commands.hpp"

namespace {

using namespace ghzsim::cli;

// Output goes to --out when given, stdout otherwise.
class Sink {
  public:
    explicit Sink(const std::string& path) {
        if (!path.empty()) {
            file_ = std::make_unique<std::ofstream>(path);
            if (!*file_) {
                throw UsageError("cannot open output file " + path);
            }
        }
    }
    std::ostream& stream() { return file_ ? *file_ : std::cout; }

  private:
    std::unique_ptr<std::ofstream> file_;
};

void add_config(CLI::App* app) {
    app->set_config("--config", "", "Flat key = value file mirroring the flags; flags take precedence");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"GHZ-state distribution over lossy star networks"};
    app.require_subcommand(1);

    std::string out_path;
    std::string distance_text;

    RateSweepOptions rate;
    std::optional<double> fidelity;
    std::optional<double> a2;
    auto* rate_cmd = app.add_subcommand("rate-sweep", "Rate and fidelity versus distance");
    add_config(rate_cmd);
    rate_cmd->add_option("--n", rate.n_users, "Numbers of users")->delimiter(',');
    rate_cmd->add_option("--distance", distance_text, "start:stop:step in km")->default_str("0:200:5");
    auto* fid_opt = rate_cmd->add_option("--fidelity", fidelity, "Target fidelity (default 0.9)");
    rate_cmd->add_option("--a2", a2, "Vacuum weight a^2 of the Bell sources")->excludes(fid_opt);
    rate_cmd->add_option("--source", rate.source, "bell or spdc")->check(CLI::IsMember({"bell", "spdc"}));
    rate_cmd->add_option("--squeezing-db", rate.squeezing_db, "Squeezing for spdc sources");
    rate_cmd->add_option("--t", rate.t, "Splitter transmittance for spdc sources");
    rate_cmd->add_option("--efficiency", rate.efficiency, "Detector efficiency for spdc sources");
    rate_cmd->add_option("--dark", rate.dark, "Dark-count probability for spdc sources");
    rate_cmd->add_option("--cutoff", rate.cutoff, "Photon-number truncation of each squeezed vacuum");
    rate_cmd->add_option("--attenuation", rate.attenuation_db_per_km, "Fiber loss in dB/km");
    rate_cmd->add_flag("--simulate", rate.simulate, "Add columns from the full simulation");
    rate_cmd->add_option("--samples", rate.samples, "Monte Carlo samples per point (0 disables)");
    rate_cmd->add_option("--seed", rate.seed, "Monte Carlo seed");
    rate_cmd->add_option("--out", out_path, "Write CSV here instead of stdout");

    SpdcSweepOptions spdc;
    auto* spdc_cmd = app.add_subcommand("spdc-sweep", "Heralded SPDC sources with realistic detectors");
    add_config(spdc_cmd);
    spdc_cmd->add_option("--n", spdc.n_users, "Numbers of users")->delimiter(',');
    spdc_cmd->add_option("--distance", distance_text, "start:stop:step in km")->default_str("0:300:10");
    spdc_cmd->add_option("--squeezing-db", spdc.squeezing_db, "Squeezing levels in dB")->delimiter(',');
    spdc_cmd->add_option("--t", spdc.t, "Splitter transmittances")->delimiter(',');
    spdc_cmd->add_option("--detector", spdc.detector, "Herald detector: pnrd, threshold or quasi:<n>")->delimiter(',');
    spdc_cmd->add_option("--efficiency", spdc.efficiency, "Detector efficiency");
    spdc_cmd->add_option("--dark", spdc.dark, "Dark-count probability per detector");
    spdc_cmd->add_option("--cutoff", spdc.cutoff, "Photon-number truncation of each squeezed vacuum");
    spdc_cmd->add_option("--attenuation", spdc.attenuation_db_per_km, "Fiber loss in dB/km");
    spdc_cmd->add_option("--samples", spdc.samples, "Monte Carlo samples per point (0 disables)");
    spdc_cmd->add_option("--seed", spdc.seed, "Monte Carlo seed");
    spdc_cmd->add_option("--out", out_path, "Write CSV here instead of stdout");

    PurifyOptions purify;
    auto* purify_cmd = app.add_subcommand("purify", "Two-copy purification of the conditional states");
    add_config(purify_cmd);
    purify_cmd->add_option("--n", purify.n_users, "Number of users");
    purify_cmd->add_option("--distance", distance_text, "km, or start:stop:step")->default_str("50");
    auto* pfid_opt = purify_cmd->add_option("--fidelity", fidelity, "Target fidelity (default 0.9)");
    purify_cmd->add_option("--a2", a2, "Vacuum weight a^2 of the Bell sources")->excludes(pfid_opt);
    purify_cmd->add_option("--attenuation", purify.attenuation_db_per_km, "Fiber loss in dB/km");
    purify_cmd->add_option("--out", out_path, "Write CSV here instead of stdout");

    VerifyOptions verify;
    std::string fault;
    auto* verify_cmd = app.add_subcommand("verify", "Run the verification suite");
    add_config(verify_cmd);
    verify_cmd->add_flag("--json", verify.json, "Machine-readable report");
    verify_cmd->add_option("--inject-fault", fault, "Deliberate defect: hbs-phase")
        ->check(CLI::IsMember({"hbs-phase"}));
    verify_cmd->add_option("--out", out_path, "Write the report here instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        Sink sink(out_path);
        if (*rate_cmd) {
            rate.distance = DistanceRange::parse(distance_text.empty() ? "0:200:5" : distance_text);
            rate.fidelity = fidelity;
            rate.a2 = a2;
            run_rate_sweep(rate, sink.stream());
        } else if (*spdc_cmd) {
            spdc.distance = DistanceRange::parse(distance_text.empty() ? "0:300:10" : distance_text);
            run_spdc_sweep(spdc, sink.stream());
        } else if (*purify_cmd) {
            purify.distance = DistanceRange::parse(distance_text.empty() ? "50" : distance_text);
            purify.fidelity = fidelity;
            purify.a2 = a2;
            run_purify(purify, sink.stream());
        } else if (*verify_cmd) {
            if (fault == "hbs-phase") {
                verify.hbs_phase_fault = 0.3;
            }
            return run_verify(verify, sink.stream()) ? 0 : 1;
        }
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
