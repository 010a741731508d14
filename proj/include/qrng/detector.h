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

#ifndef QRNG_DETECTOR_H
#define QRNG_DETECTOR_H

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include "qrng/optics.h"
#include "qrng/random.h"

namespace qrng {

/// Gated avalanche photodiode parameters.
///
/// Afterpulsing: a click k gates in the past (k = 1 for the immediately
/// preceding gate) adds an independent trigger chance of
/// alpha * exp(-(k - 1) / tau) while k <= afterpulse_horizon_gates.
struct DetectorConfig {
    static constexpr uint32_t kMaxHorizon = 64;
    static constexpr double kDefaultAfterpulseAlpha = 6.2e-4;
    static constexpr double kDefaultAfterpulseTau = 2.0;
    static constexpr uint32_t kDefaultAfterpulseHorizon = 20;

    double eta = 0.1;
    double p_dark = 1e-5;
    double gate_delay_ns = 99.0;
    double gate_width_ns = 2.5;
    uint32_t dead_time_gates = 0;
    double afterpulse_alpha = kDefaultAfterpulseAlpha;
    double afterpulse_tau_gates = kDefaultAfterpulseTau;
    uint32_t afterpulse_horizon_gates = kDefaultAfterpulseHorizon;

    void validate() const;

    /// Same detector with dark counts, afterpulsing and dead time removed.
    DetectorConfig ideal() const;
};

/// Runtime memory of the detector between gates.
///
/// `history` bit j set means a click happened j + 1 gates before the next
/// gate to be decided. Bits at or above the horizon are always clear.
struct DetectorState {
    uint64_t history = 0;
    uint32_t dead_countdown = 0;

    /// Ages of remembered clicks, youngest first.
    std::vector<uint32_t> click_ages() const;

    bool operator==(const DetectorState &) const = default;
};

/// Draws a Poisson(lambda) photon count.
uint64_t sample_photon_count(double lambda, Rng &rng);

/// 1 - prod(1 - alpha exp(-(age - 1) / tau)) over remembered clicks.
double afterpulse_probability(const DetectorState &state, const DetectorConfig &config);

struct GateOutcome {
    bool click;
    DetectorState state;
};

/// Decides one gate. A dead detector outputs no click. Otherwise photon,
/// dark and afterpulse triggers combine as independent Bernoulli events.
/// Every click (whatever its origin) enters the afterpulse memory and
/// restarts the dead time.
GateOutcome gate_decision(
    uint64_t n_photons, const DetectorState &state, const DetectorConfig &config, Rng &rng);

/// Fraction of a top-hat pulse's energy that falls inside the gate window.
double gate_overlap_fraction(const SourceConfig &source, const DetectorConfig &config);

/// Precomputed per-gate click model for long runs.
///
/// Equivalent in distribution to gate_decision, but draws exactly one uniform per
/// live gate for the combined trigger and uses tables for the afterpulse
/// product and the photon-click probability.
class GateModel {
   public:
    explicit GateModel(const DetectorConfig &config);

    /// Probability that no remembered click triggers an afterpulse.
    double afterpulse_survival(uint64_t history) const {
        double survive = 1.0;
        for (size_t b = 0; b < history_bytes_; b++) {
            survive *= no_afterpulse_[b][(history >> (8 * b)) & 0xFF];
        }
        return survive;
    }

    double afterpulse_probability(uint64_t history) const {
        return 1.0 - afterpulse_survival(history);
    }

    /// Probability that none of n photons is detected, (1 - eta)^n.
    double photon_miss_probability(uint64_t n_photons) const {
        if (n_photons < miss_.size()) {
            return miss_[n_photons];
        }
        return std::pow(1.0 - eta_, static_cast<double>(n_photons));
    }

    /// Advances `state` by one gate and returns whether it clicked.
    bool step(uint64_t n_photons, DetectorState &state, Rng &rng) const {
        if (state.dead_countdown > 0) {
            state.dead_countdown--;
            state.history = (state.history << 1) & horizon_mask_;
            return false;
        }
        double p_none = photon_miss_probability(n_photons) * no_dark_ * afterpulse_survival(state.history);
        bool click = uniform01(rng) >= p_none;
        state.history = ((state.history << 1) | uint64_t{click}) & horizon_mask_;
        state.dead_countdown = click ? dead_time_ : 0;
        return click;
    }

   private:
    double eta_;
    double no_dark_;
    uint32_t dead_time_;
    uint64_t horizon_mask_;
    // Afterpulse tables consulted per gate; 0 when afterpulsing is off.
    size_t history_bytes_;
    std::vector<double> miss_;
    // no_afterpulse_[b][m]: product of (1 - c_age) over the set bits of the
    // byte m sitting at history byte b.
    std::vector<std::array<double, 256>> no_afterpulse_;
};

}  // namespace qrng

#endif
