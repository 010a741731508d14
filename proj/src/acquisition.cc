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

#include "qrng/acquisition.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "qrng/errors.h"
#include "qrng/parallel.h"

using namespace qrng;

void RunConfig::validate() const {
    source.validate();
    detector.validate();
    if (n_gates < 1) {
        throw DomainError("A run needs at least one gate");
    }
}

double RunConfig::gate_mean_photons() const {
    return source_mean_photons(source) * attenuator.transmittance() * gate_overlap_fraction(source, detector);
}

AcquisitionEngine::AcquisitionEngine(const RunConfig &config)
    : config_(config),
      model_((config.validate(), config.detector)),
      photons_(config.gate_mean_photons()),
      rng_(config.seed) {
}

void AcquisitionEngine::set_transmittance(const AttenuatorSetting &att) {
    config_.attenuator = att;
    photons_ = PoissonSampler(config_.gate_mean_photons());
}

template <typename Sink>
void AcquisitionEngine::run_gates(uint64_t n_gates, Sink &&sink) {
    for (uint64_t g = 0; g < n_gates; g++) {
        uint64_t n = photons_(rng_);
        sink(g, model_.step(n, state_, rng_));
    }
}

BitStream AcquisitionEngine::run(uint64_t n_gates) {
    std::vector<uint64_t> words((n_gates + 63) / 64, 0);
    run_gates(n_gates, [&](uint64_t g, bool click) {
        words[g >> 6] |= uint64_t{click} << (g & 63);
    });
    return BitStream::from_words(std::move(words), n_gates);
}

uint64_t AcquisitionEngine::count_clicks(uint64_t n_gates) {
    uint64_t clicks = 0;
    run_gates(n_gates, [&](uint64_t, bool click) {
        clicks += click;
    });
    return clicks;
}

BitStream qrng::run_stream(const RunConfig &config) {
    AcquisitionEngine engine(config);
    return engine.run(config.n_gates);
}

std::vector<BitStream> qrng::run_replicas(const RunConfig &config, size_t count, unsigned threads) {
    config.validate();
    std::vector<BitStream> out(count);
    parallel_for(count, threads, [&](size_t i) {
        RunConfig replica = config;
        replica.seed = derive_seed(config.seed, i);
        out[i] = run_stream(replica);
    });
    return out;
}

ScanResult qrng::scan_delay(
    const RunConfig &config,
    double delay_min_ns,
    double delay_max_ns,
    double step_ns,
    uint64_t gates_per_point,
    unsigned threads) {
    if (!(delay_min_ns < delay_max_ns)) {
        throw DomainError("Delay scan needs delay_min < delay_max");
    }
    if (!(step_ns > 0) || !std::isfinite(step_ns)) {
        throw DomainError("Delay scan step must be > 0");
    }
    if (gates_per_point < 1) {
        throw DomainError("Delay scan needs at least one gate per point");
    }
    // Points are min + i * step; the small slack keeps an endpoint that is
    // reached up to rounding.
    size_t points = static_cast<size_t>(std::floor((delay_max_ns - delay_min_ns) / step_ns + 1e-9)) + 1;

    ScanResult result{delay_min_ns, std::vector<ScanPoint>(points)};
    parallel_for(points, threads, [&](size_t i) {
        RunConfig point = config;
        point.detector.gate_delay_ns = delay_min_ns + static_cast<double>(i) * step_ns;
        point.n_gates = gates_per_point;
        point.seed = derive_seed(config.seed, i);
        AcquisitionEngine engine(point);
        result.profile[i] = ScanPoint{point.detector.gate_delay_ns, engine.count_clicks(gates_per_point)};
    });

    uint64_t best_clicks = result.profile[0].clicks;
    for (const auto &p : result.profile) {
        if (p.clicks > best_clicks) {
            best_clicks = p.clicks;
            result.best_delay_ns = p.delay_ns;
        }
    }
    return result;
}

CalibrationResult qrng::calibrate(
    const RunConfig &config, double target_bias, double tolerance, uint64_t window_gates, uint64_t max_iters) {
    if (!(tolerance > 0)) {
        throw DomainError("Calibration tolerance must be > 0");
    }
    if (!(target_bias > -0.5 && target_bias < 0.5)) {
        throw DomainError("Target bias must be in (-0.5, 0.5)");
    }
    if (window_gates < 1 || max_iters < 1) {
        throw DomainError("Calibration needs a positive window and iteration budget");
    }
    config.validate();
    const double eta = config.detector.eta;
    const double p_dark = config.detector.p_dark;
    const double target_p0 = 0.5 + target_bias;
    if (!(eta > 0)) {
        throw InfeasibleError("Cannot calibrate a detector with zero efficiency");
    }
    if (target_p0 >= 1 - p_dark) {
        throw InfeasibleError("Dark counts alone push the no-click probability below the target");
    }
    const double target_mu = std::log((1 - p_dark) / target_p0);

    // Unit-transmittance reference: detected mean per gate at T = 1.
    RunConfig unit = config;
    unit.attenuator = AttenuatorSetting(1.0);
    const double mu_at_unit = eta * unit.gate_mean_photons();
    if (mu_at_unit < target_mu) {
        throw InfeasibleError(
            "Source too weak to reach the target bias: needs transmittance " + std::to_string(target_mu / mu_at_unit));
    }

    AcquisitionEngine engine(config);
    double t = config.attenuator.transmittance();
    const double window = static_cast<double>(window_gates);
    CalibrationResult result{t, 0.0, 0, false};
    for (uint64_t iter = 1; iter <= max_iters; iter++) {
        uint64_t clicks = engine.count_clicks(window_gates);
        double f0 = 1.0 - static_cast<double>(clicks) / window;
        result.iterations = iter;
        result.achieved_bias = f0 - 0.5;
        result.transmittance = t;
        if (std::fabs(f0 - target_p0) <= tolerance) {
            result.converged = true;
            return result;
        }
        if (iter == max_iters) {
            break;
        }
        // Re-invert f0 = (1 - p_dark) exp(-mu) for the apparent mean, keeping
        // the ratio away from 0 and 1 so the logarithm stays finite.
        double floor = 0.5 / window;
        double ratio = std::clamp(f0, floor, 1.0 - floor) / (1 - p_dark);
        ratio = std::min(ratio, 1.0 - floor);
        double mu_hat = -std::log(ratio);
        double next = t * target_mu / mu_hat;
        if (next > 1) {
            if (t == 1) {
                throw InfeasibleError("Calibration requires transmittance above 1");
            }
            next = 1;
        }
        t = next;
        engine.set_transmittance(AttenuatorSetting(t));
    }
    return result;
}
