// Copyright 2026 The qrngsim Authors
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

#include "qrng/cli.h"

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "qrng/acquisition.h"
#include "qrng/errors.h"
#include "qrng/extraction.h"
#include "qrng/raw_io.h"
#include "qrng/stats.h"

using namespace qrng;

namespace {

constexpr double kDefaultPowerDbm = -35.0;
constexpr double kDefaultWavelengthNm = 1550.0;

struct Options {
    // Physics.
    uint64_t bits = 1000000;
    double eta = 0.1;
    std::optional<double> lambda;
    std::optional<double> power_dbm;
    double wavelength_nm = kDefaultWavelengthNm;
    double rep_rate_hz = 1e6;
    std::optional<double> transmittance;
    double dark = 1e-5;
    double ap_alpha = DetectorConfig::kDefaultAfterpulseAlpha;
    double ap_tau = DetectorConfig::kDefaultAfterpulseTau;
    uint32_t ap_horizon = DetectorConfig::kDefaultAfterpulseHorizon;
    uint32_t dead_gates = 0;
    double gate_delay_ns = 99.0;
    double gate_width_ns = 2.5;
    double pulse_arrival_ns = 100.0;
    double pulse_width_ns = 0.3;
    uint64_t seed = 0;
    bool entropy_seed = false;
    unsigned threads = 1;
    bool dry_run = false;

    // Post-processing.
    uint64_t decimate = 1;
    std::string debias = "none";
    uint32_t peres_depth = kDefaultPeresDepth;
    bool truncate = false;

    // Output.
    std::string out;
    std::string format;
    uint64_t kmax = 100;
    std::string input;

    // Calibration.
    double target_bias = 0.0;
    double tolerance = 1e-3;
    uint64_t window = 1000000;
    uint64_t max_iters = 10;

    // Delay scan.
    double delay_min_ns = 95.0;
    double delay_max_ns = 105.0;
    double delay_step_ns = 0.5;
    uint64_t gates_per_point = 100000;
};

void add_physics(CLI::App &app, Options &o) {
    auto *lambda = app.add_option("--lambda", o.lambda, "Mean photon number per pulse entering the attenuator");
    auto *power = app.add_option("--power-dbm", o.power_dbm, "Average laser power in dBm (default -35)");
    lambda->excludes(power);
    app.add_option("--eta", o.eta, "Detection efficiency")->capture_default_str();
    app.add_option("--wavelength-nm", o.wavelength_nm, "Laser wavelength")->capture_default_str();
    app.add_option("--rep-rate-hz", o.rep_rate_hz, "Pulse repetition rate")->capture_default_str();
    app.add_option("--transmittance", o.transmittance,
                   "Attenuator transmittance (default: 1 with --lambda, balanced otherwise)");
    app.add_option("--dark", o.dark, "Dark-count probability per gate")->capture_default_str();
    app.add_option("--ap-alpha", o.ap_alpha, "Afterpulse amplitude")->capture_default_str();
    app.add_option("--ap-tau", o.ap_tau, "Afterpulse decay constant in gates")->capture_default_str();
    app.add_option("--ap-horizon", o.ap_horizon, "Afterpulse memory in gates")->capture_default_str();
    app.add_option("--dead-gates", o.dead_gates, "Dead time in gates")->capture_default_str();
    app.add_option("--gate-delay-ns", o.gate_delay_ns, "Gate opening time")->capture_default_str();
    app.add_option("--gate-width-ns", o.gate_width_ns, "Gate width")->capture_default_str();
    app.add_option("--pulse-arrival-ns", o.pulse_arrival_ns, "Pulse arrival time")->capture_default_str();
    app.add_option("--pulse-width-ns", o.pulse_width_ns, "Pulse width")->capture_default_str();
    auto *seed = app.add_option("--seed", o.seed, "RNG seed")->capture_default_str();
    app.add_flag("--entropy-seed", o.entropy_seed, "Seed from the operating system (printed to stderr)")
        ->excludes(seed);
    app.add_flag("--dry-run", o.dry_run, "Print the resolved configuration and exit");
    app.add_option("--threads", o.threads, "Worker threads (0 = all cores); never changes results")
        ->capture_default_str();
}

void add_extraction(CLI::App &app, Options &o) {
    app.add_option("--decimate", o.decimate, "Keep every n-th bit (7 skips the afterpulse horizon)")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_option("--debias", o.debias, "Debiasing extractor")
        ->check(CLI::IsMember({"none", "vn", "peres"}))
        ->capture_default_str();
    app.add_option("--peres-depth", o.peres_depth, "Peres recursion depth")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
}

void add_output(CLI::App &app, Options &o, std::vector<std::string> formats, std::string default_format) {
    o.format = default_format;
    app.add_option("--out", o.out, "Output file (default: standard output)");
    app.add_option("--format", o.format, "Output format")->check(CLI::IsMember(formats))->capture_default_str();
}

void add_config(CLI::App &app) {
    app.set_config("--config", "", "Read flags from a key=value file; command-line flags take precedence");
    app.allow_config_extras(CLI::config_extras_mode::error);
}

RunConfig build_run_config(const Options &o, std::ostream &err) {
    RunConfig rc;
    rc.source.center_frequency_hz = wavelength_nm_to_frequency_hz(o.wavelength_nm);
    rc.source.rep_rate_hz = o.rep_rate_hz;
    rc.source.pulse_arrival_ns = o.pulse_arrival_ns;
    rc.source.pulse_width_ns = o.pulse_width_ns;
    if (o.lambda) {
        rc.source.mean_photons_override = *o.lambda;
    } else {
        rc.source.avg_power_watts = dbm_to_watts(o.power_dbm.value_or(kDefaultPowerDbm));
    }
    rc.detector.eta = o.eta;
    rc.detector.p_dark = o.dark;
    rc.detector.gate_delay_ns = o.gate_delay_ns;
    rc.detector.gate_width_ns = o.gate_width_ns;
    rc.detector.dead_time_gates = o.dead_gates;
    rc.detector.afterpulse_alpha = o.ap_alpha;
    rc.detector.afterpulse_tau_gates = o.ap_tau;
    rc.detector.afterpulse_horizon_gates = o.ap_horizon;
    rc.n_gates = o.bits;
    rc.seed = o.seed;
    if (o.entropy_seed) {
        rc.seed = entropy_seed();
        err << "seed=" << rc.seed << "\n";
    }
    rc.validate();

    if (o.transmittance) {
        rc.attenuator = AttenuatorSetting(*o.transmittance);
    } else if (!o.lambda) {
        double overlap = gate_overlap_fraction(rc.source, rc.detector);
        if (overlap > 0) {
            rc.attenuator = balance_transmittance(rc.source, rc.detector.eta * overlap, rc.detector.p_dark);
        }
    }
    return rc;
}

BitStream post_process(BitStream bits, const Options &o) {
    if (o.decimate > 1) {
        bits = decimate(bits, o.decimate);
    }
    if (o.debias == "vn") {
        bits = von_neumann(bits);
    } else if (o.debias == "peres") {
        bits = peres(bits, o.peres_depth);
    }
    return bits;
}

void write_output(const Options &o, const std::string &payload, std::ostream &out) {
    if (o.out.empty()) {
        out << payload;
        out.flush();
        return;
    }
    std::ofstream f(o.out, std::ios::binary | std::ios::trunc);
    if (!f) {
        throw IoError("Cannot open '" + o.out + "' for writing");
    }
    f << payload;
    if (!f) {
        throw IoError("Failed writing '" + o.out + "'");
    }
}

void emit_stream(const BitStream &bits, const Options &o, std::ostream &out) {
    if (o.format == "raw") {
        BitStream payload = o.truncate ? truncate_to_bytes(bits) : bits;
        if (o.out.empty()) {
            auto bytes = pack_msb_first(payload);
            out.write(reinterpret_cast<const char *>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
            out.flush();
        } else {
            export_raw(payload, o.out);
        }
    } else if (o.format == "csv") {
        write_output(o, correlogram(bits, o.kmax, o.threads).to_csv(), out);
    } else if (o.format == "report") {
        write_output(o, ent_report(bits).to_text(), out);
    } else {
        write_output(o, ent_report(bits).to_key_values(), out);
    }
}

std::string format_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

std::string describe(const RunConfig &rc) {
    std::string text;
    auto put = [&](const char *key, const std::string &value) {
        text += key;
        text += "=";
        text += value;
        text += "\n";
    };
    if (rc.source.mean_photons_override) {
        put("lambda", format_double(*rc.source.mean_photons_override));
    } else {
        put("power_watts", format_double(*rc.source.avg_power_watts));
    }
    put("frequency_hz", format_double(rc.source.center_frequency_hz));
    put("rep_rate_hz", format_double(rc.source.rep_rate_hz));
    put("pulse_arrival_ns", format_double(rc.source.pulse_arrival_ns));
    put("pulse_width_ns", format_double(rc.source.pulse_width_ns));
    put("transmittance", format_double(rc.attenuator.transmittance()));
    put("eta", format_double(rc.detector.eta));
    put("dark", format_double(rc.detector.p_dark));
    put("gate_delay_ns", format_double(rc.detector.gate_delay_ns));
    put("gate_width_ns", format_double(rc.detector.gate_width_ns));
    put("dead_gates", std::to_string(rc.detector.dead_time_gates));
    put("ap_alpha", format_double(rc.detector.afterpulse_alpha));
    put("ap_tau", format_double(rc.detector.afterpulse_tau_gates));
    put("ap_horizon", std::to_string(rc.detector.afterpulse_horizon_gates));
    put("bits", std::to_string(rc.n_gates));
    put("seed", std::to_string(rc.seed));
    return text;
}

using Command = std::function<void(std::ostream &, std::ostream &)>;

// Builds the parser for one command and returns the action to run once
// parsing succeeded.
Command configure(const std::string &name, CLI::App &app, Options &o) {
    const std::vector<std::string> stream_formats{"raw", "csv", "report", "kv"};
    if (name == "simulate" || name == "export") {
        app.description(name == "simulate" ? "Simulate a raw QRNG bitstream"
                                           : "Simulate and write a headerless byte file for external test batteries");
        add_physics(app, o);
        add_extraction(app, o);
        app.add_option("--bits", o.bits, "Number of gates")->check(CLI::PositiveNumber)->capture_default_str();
        if (name == "simulate") {
            add_output(app, o, stream_formats, "raw");
            app.add_flag("--truncate", o.truncate, "Drop trailing bits to a whole number of bytes (raw format)");
            app.add_option("--kmax", o.kmax, "Largest lag for csv output")->capture_default_str();
        } else {
            o.format = "raw";
            o.truncate = true;
            app.add_option("--out", o.out, "Output file")->required();
        }
        add_config(app);
        return [&o](std::ostream &out, std::ostream &err) {
            RunConfig rc = build_run_config(o, err);
            if (o.dry_run) {
                out << describe(rc);
                return;
            }
            emit_stream(post_process(run_stream(rc), o), o, out);
        };
    }
    if (name == "extract") {
        app.description("Decimate and/or debias an existing raw file");
        app.add_option("input", o.input, "Raw input file")->required();
        add_extraction(app, o);
        o.format = "raw";
        o.truncate = true;
        app.add_option("--out", o.out, "Output file (default: standard output)");
        add_config(app);
        return [&o](std::ostream &out, std::ostream &err) {
            BitStream bits = post_process(import_raw(o.input), o);
            err << "bits_in_output=" << bits.size() << "\n";
            emit_stream(bits, o, out);
        };
    }
    if (name == "analyze") {
        app.description("ENT-style report or correlogram of a raw file");
        app.add_option("input", o.input, "Raw input file")->required();
        add_output(app, o, {"report", "kv", "csv"}, "report");
        app.add_option("--kmax", o.kmax, "Largest lag for csv output")->capture_default_str();
        app.add_option("--threads", o.threads, "Worker threads (0 = all cores)")->capture_default_str();
        add_config(app);
        return [&o](std::ostream &out, std::ostream &) {
            emit_stream(import_raw(o.input), o, out);
        };
    }
    if (name == "calibrate") {
        app.description("Adjust the attenuator until the bias reaches the target");
        add_physics(app, o);
        add_output(app, o, {"kv"}, "kv");
        app.add_option("--target-bias", o.target_bias, "Requested P(0) - 1/2")->capture_default_str();
        app.add_option("--tolerance", o.tolerance, "Accepted |bias error|")->capture_default_str();
        app.add_option("--window", o.window, "Gates per measurement window")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
        app.add_option("--max-iters", o.max_iters, "Iteration budget")->check(CLI::PositiveNumber)->capture_default_str();
        add_config(app);
        return [&o](std::ostream &out, std::ostream &err) {
            RunConfig rc = build_run_config(o, err);
            if (o.dry_run) {
                out << describe(rc);
                return;
            }
            auto r = calibrate(rc, o.target_bias, o.tolerance, o.window, o.max_iters);
            std::string text;
            text += "transmittance=" + format_double(r.transmittance) + "\n";
            text += "achieved_bias=" + format_double(r.achieved_bias) + "\n";
            text += "iterations=" + std::to_string(r.iterations) + "\n";
            text += std::string("converged=") + (r.converged ? "true" : "false") + "\n";
            write_output(o, text, out);
        };
    }
    if (name == "scan-delay") {
        app.description("Sweep the gate delay and locate the maximum count rate");
        add_physics(app, o);
        add_output(app, o, {"csv", "kv"}, "csv");
        app.add_option("--delay-min-ns", o.delay_min_ns, "First gate delay")->capture_default_str();
        app.add_option("--delay-max-ns", o.delay_max_ns, "Last gate delay")->capture_default_str();
        app.add_option("--delay-step-ns", o.delay_step_ns, "Delay step")->capture_default_str();
        app.add_option("--gates-per-point", o.gates_per_point, "Gates per delay")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
        add_config(app);
        return [&o](std::ostream &out, std::ostream &err) {
            Options fixed = o;
            // Scanning starts from weak attenuation unless told otherwise.
            if (!fixed.transmittance) {
                fixed.transmittance = 1.0;
            }
            RunConfig rc = build_run_config(fixed, err);
            if (o.dry_run) {
                out << describe(rc);
                return;
            }
            auto r = scan_delay(rc, o.delay_min_ns, o.delay_max_ns, o.delay_step_ns, o.gates_per_point, o.threads);
            std::string text;
            if (o.format == "csv") {
                text = "delay_ns,clicks\n";
                for (const auto &p : r.profile) {
                    text += format_double(p.delay_ns) + "," + std::to_string(p.clicks) + "\n";
                }
            } else {
                text = "best_delay_ns=" + format_double(r.best_delay_ns) + "\n";
                text += "points=" + std::to_string(r.profile.size()) + "\n";
            }
            write_output(o, text, out);
        };
    }
    return nullptr;
}

const char *kUsage =
    "usage: qrngsim <command> [flags]\n"
    "commands: simulate, export, calibrate, scan-delay, extract, analyze\n"
    "run 'qrngsim <command> --help' for the flags of a command\n";

}  // namespace

int qrng::run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
    if (argc < 2) {
        err << kUsage;
        return kExitDomainError;
    }
    std::string name = argv[1];
    if (name == "--help" || name == "-h") {
        out << kUsage;
        return kExitOk;
    }
    Options options;
    CLI::App app("qrngsim " + name);
    app.name("qrngsim " + name);
    Command command = configure(name, app, options);
    if (!command) {
        err << "error: unknown command '" << name << "'\n" << kUsage;
        return kExitDomainError;
    }
    try {
        app.parse(argc - 1, argv + 1);
    } catch (const CLI::FileError &e) {
        err << "error: " << e.what() << "\n";
        return kExitIoError;
    } catch (const CLI::ParseError &e) {
        if (e.get_exit_code() == 0) {
            return app.exit(e, out, err);
        }
        err << "error: " << e.what() << "\n";
        return kExitDomainError;
    }
    try {
        command(out, err);
    } catch (const IoError &e) {
        err << "error: " << e.what() << "\n";
        return kExitIoError;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << "\n";
        return kExitDomainError;
    }
    return kExitOk;
}
