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

#ifndef QRNG_ACQUISITION_H
#define QRNG_ACQUISITION_H

#include <cstdint>
#include <vector>

#include "qrng/bitstream.h"
#include "qrng/detector.h"
#include "qrng/optics.h"
#include "qrng/random.h"

namespace qrng {

struct RunConfig {
    SourceConfig source;
    AttenuatorSetting attenuator{1.0};
    DetectorConfig detector;
    uint64_t n_gates = 1;
    uint64_t seed = 0;

    void validate() const;

    /// Mean photon number reaching the detector inside the gate:
    /// source mean * T * gate overlap.
    double gate_mean_photons() const;
};

/// One sequential detector thread: a single RNG and DetectorState carried
/// from gate to gate. The transmittance may change between calls (as an
/// attenuator adjustment would) without resetting the detector memory.
class AcquisitionEngine {
   public:
    explicit AcquisitionEngine(const RunConfig &config);

    void set_transmittance(const AttenuatorSetting &att);
    const RunConfig &config() const {
        return config_;
    }
    const DetectorState &state() const {
        return state_;
    }

    /// Runs n gates, returning one bit per gate (click = 1).
    BitStream run(uint64_t n_gates);
    /// Runs n gates and only counts clicks.
    uint64_t count_clicks(uint64_t n_gates);

   private:
    template <typename Sink>
    void run_gates(uint64_t n_gates, Sink &&sink);

    RunConfig config_;
    GateModel model_;
    PoissonSampler photons_;
    Rng rng_;
    DetectorState state_;
};

/// Exactly config.n_gates bits, reproducible from (config, seed).
BitStream run_stream(const RunConfig &config);

/// `count` independent streams, replica i seeded with derive_seed(seed, i).
/// The result does not depend on `threads` (0 = hardware concurrency).
std::vector<BitStream> run_replicas(const RunConfig &config, size_t count, unsigned threads = 1);

struct ScanPoint {
    double delay_ns;
    uint64_t clicks;
};

struct ScanResult {
    double best_delay_ns;
    std::vector<ScanPoint> profile;
};

/// Sweeps gate_delay_ns over [delay_min, delay_max] in steps, running
/// gates_per_point gates at each point (point i seeded with
/// derive_seed(seed, i)). The best delay has the most clicks; ties go to the
/// smallest delay.
ScanResult scan_delay(
    const RunConfig &config,
    double delay_min_ns,
    double delay_max_ns,
    double step_ns,
    uint64_t gates_per_point,
    unsigned threads = 1);

struct CalibrationResult {
    double transmittance;
    double achieved_bias;
    uint64_t iterations;
    bool converged;
};

/// Bias-zeroing loop. Each iteration measures the no-click frequency f0 over
/// window_gates gates, stops if |f0 - 0.5 - target_bias| <= tolerance, and
/// otherwise re-inverts the memoryless model to set
/// eta * lambda_d = ln((1 - p_dark) / (0.5 + target_bias)).
/// All windows belong to one continuous detector stream.
CalibrationResult calibrate(
    const RunConfig &config, double target_bias, double tolerance, uint64_t window_gates, uint64_t max_iters);

}  // namespace qrng

#endif
