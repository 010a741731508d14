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

#include "qrng/detector.h"

#include <algorithm>
#include <string>

#include "qrng/errors.h"

using namespace qrng;

namespace {

uint64_t horizon_mask(uint32_t horizon) {
    return horizon >= 64 ? ~uint64_t{0} : (uint64_t{1} << horizon) - 1;
}

double afterpulse_term(const DetectorConfig &config, uint32_t age) {
    return config.afterpulse_alpha * std::exp(-static_cast<double>(age - 1) / config.afterpulse_tau_gates);
}

}  // namespace

void DetectorConfig::validate() const {
    if (!(eta >= 0 && eta <= 1)) {
        throw DomainError("Detection efficiency must be in [0, 1], got " + std::to_string(eta));
    }
    if (!(p_dark >= 0 && p_dark < 1)) {
        throw DomainError("Dark-count probability must be in [0, 1), got " + std::to_string(p_dark));
    }
    if (!(gate_delay_ns >= 0) || !std::isfinite(gate_delay_ns)) {
        throw DomainError("Gate delay must be >= 0 ns");
    }
    if (!(gate_width_ns > 0) || !std::isfinite(gate_width_ns)) {
        throw DomainError("Gate width must be > 0 ns");
    }
    if (!(afterpulse_alpha >= 0 && afterpulse_alpha < 1)) {
        throw DomainError("Afterpulse amplitude must be in [0, 1), got " + std::to_string(afterpulse_alpha));
    }
    if (!(afterpulse_tau_gates > 0) || !std::isfinite(afterpulse_tau_gates)) {
        throw DomainError("Afterpulse time constant must be > 0 gates");
    }
    if (afterpulse_horizon_gates > kMaxHorizon) {
        throw DomainError("Afterpulse horizon must be <= " + std::to_string(kMaxHorizon) + " gates");
    }
}

DetectorConfig DetectorConfig::ideal() const {
    DetectorConfig result = *this;
    result.p_dark = 0;
    result.afterpulse_alpha = 0;
    result.dead_time_gates = 0;
    return result;
}

std::vector<uint32_t> DetectorState::click_ages() const {
    std::vector<uint32_t> ages;
    for (uint32_t j = 0; j < 64; j++) {
        if ((history >> j) & 1) {
            ages.push_back(j + 1);
        }
    }
    return ages;
}

uint64_t qrng::sample_photon_count(double lambda, Rng &rng) {
    return PoissonSampler(lambda)(rng);
}

double qrng::afterpulse_probability(const DetectorState &state, const DetectorConfig &config) {
    double survive = 1.0;
    for (uint32_t age = 1; age <= config.afterpulse_horizon_gates; age++) {
        if ((state.history >> (age - 1)) & 1) {
            survive *= 1.0 - afterpulse_term(config, age);
        }
    }
    return 1.0 - survive;
}

GateOutcome qrng::gate_decision(
    uint64_t n_photons, const DetectorState &state, const DetectorConfig &config, Rng &rng) {
    uint64_t mask = horizon_mask(config.afterpulse_horizon_gates);
    GateOutcome out{false, state};
    if (state.dead_countdown > 0) {
        out.state.dead_countdown--;
        out.state.history = (state.history << 1) & mask;
        return out;
    }
    bool photon = false;
    if (n_photons > 0 && config.eta > 0) {
        double p = 1.0 - std::pow(1.0 - config.eta, static_cast<double>(n_photons));
        photon = uniform01(rng) < p;
    }
    bool dark = config.p_dark > 0 && uniform01(rng) < config.p_dark;
    double p_ap = afterpulse_probability(state, config);
    bool afterpulse = p_ap > 0 && uniform01(rng) < p_ap;

    out.click = photon || dark || afterpulse;
    out.state.history = ((state.history << 1) | uint64_t{out.click}) & mask;
    if (out.click) {
        out.state.dead_countdown = config.dead_time_gates;
    }
    return out;
}

double qrng::gate_overlap_fraction(const SourceConfig &source, const DetectorConfig &config) {
    double pulse_begin = source.pulse_arrival_ns;
    double pulse_end = source.pulse_arrival_ns + source.pulse_width_ns;
    double gate_begin = config.gate_delay_ns;
    double gate_end = config.gate_delay_ns + config.gate_width_ns;
    if (gate_begin <= pulse_begin && pulse_end <= gate_end) {
        return 1.0;
    }
    double overlap = std::min(pulse_end, gate_end) - std::max(pulse_begin, gate_begin);
    if (overlap <= 0) {
        return 0.0;
    }
    return std::clamp(overlap / source.pulse_width_ns, 0.0, 1.0);
}

GateModel::GateModel(const DetectorConfig &config)
    : eta_(config.eta),
      no_dark_(1.0 - config.p_dark),
      dead_time_(config.dead_time_gates),
      horizon_mask_(horizon_mask(config.afterpulse_horizon_gates)),
      history_bytes_(config.afterpulse_alpha > 0 ? (config.afterpulse_horizon_gates + 7) / 8 : 0),
      no_afterpulse_(8) {
    config.validate();
    double miss = 1.0;
    for (size_t n = 0; n < 64; n++) {
        miss_.push_back(miss);
        miss *= 1.0 - eta_;
    }
    for (size_t b = 0; b < 8; b++) {
        for (size_t m = 0; m < 256; m++) {
            double survive = 1.0;
            for (size_t j = 0; j < 8; j++) {
                uint32_t age = static_cast<uint32_t>(8 * b + j + 1);
                if (((m >> j) & 1) && age <= config.afterpulse_horizon_gates) {
                    survive *= 1.0 - afterpulse_term(config, age);
                }
            }
            no_afterpulse_[b][m] = survive;
        }
    }
}
