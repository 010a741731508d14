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

#include <gtest/gtest.h>

#include <cmath>

#include "qrng/errors.h"

using namespace qrng;

namespace {

SourceConfig nominal_source() {
    SourceConfig s;
    s.avg_power_watts = dbm_to_watts(-35);
    s.center_frequency_hz = wavelength_nm_to_frequency_hz(1550);
    return s;
}

RunConfig balanced_memoryless(uint64_t gates, uint64_t seed) {
    RunConfig rc;
    rc.source = nominal_source();
    rc.detector = rc.detector.ideal();
    rc.attenuator = balance_transmittance(rc.source, rc.detector.eta, 0.0);
    rc.n_gates = gates;
    rc.seed = seed;
    return rc;
}

}  // namespace

TEST(acquisition, single_gate_without_sources_is_zero) {
    RunConfig rc;
    rc.source.mean_photons_override = 0.0;
    rc.detector.p_dark = 0;
    rc.detector.afterpulse_alpha = 0;
    rc.n_gates = 1;
    EXPECT_EQ(run_stream(rc).str(), "0");
}

TEST(acquisition, rejects_zero_gates) {
    RunConfig rc;
    rc.source.mean_photons_override = 1.0;
    rc.n_gates = 0;
    EXPECT_THROW(run_stream(rc), DomainError);
}

TEST(acquisition, propagates_source_errors) {
    RunConfig rc;
    rc.source.mean_photons_override = -1.0;
    EXPECT_THROW(run_stream(rc), DomainError);
}

TEST(acquisition, balanced_stream_is_half_ones) {
    auto rc = balanced_memoryless(10000000, 3);
    auto bits = run_stream(rc);
    ASSERT_EQ(bits.size(), rc.n_gates);
    double ones = static_cast<double>(bits.count_ones()) / static_cast<double>(bits.size());
    EXPECT_NEAR(ones, 0.5, 4 * 0.5 / std::sqrt(1e7));
}

TEST(acquisition, deterministic_replay) {
    RunConfig rc;
    rc.source = nominal_source();
    rc.attenuator = balance_transmittance(rc.source, 0.1, rc.detector.p_dark);
    rc.n_gates = 100000;
    rc.seed = 42;
    EXPECT_EQ(run_stream(rc), run_stream(rc));
    auto other = rc;
    other.seed = 43;
    EXPECT_NE(run_stream(rc), run_stream(other));
}

TEST(acquisition, one_state_thread_across_calls) {
    RunConfig rc;
    rc.source.mean_photons_override = 6.93;
    rc.detector.afterpulse_alpha = 0.3;
    rc.detector.dead_time_gates = 2;
    rc.n_gates = 5000;
    rc.seed = 11;
    AcquisitionEngine engine(rc);
    BitStream joined = engine.run(1234);
    joined.append(engine.run(5000 - 1234));
    EXPECT_EQ(joined, run_stream(rc));
}

TEST(acquisition, engine_state_is_a_function_of_prefix) {
    RunConfig rc;
    rc.source.mean_photons_override = 6.93;
    rc.detector.afterpulse_alpha = 0.1;
    rc.detector.dead_time_gates = 1;
    rc.seed = 5;
    AcquisitionEngine a(rc), b(rc);
    a.run(777);
    b.count_clicks(777);
    EXPECT_EQ(a.state(), b.state());
}

TEST(acquisition, replicas_do_not_depend_on_thread_count) {
    RunConfig rc;
    rc.source.mean_photons_override = 6.93;
    rc.n_gates = 20000;
    rc.seed = 9;
    auto one = run_replicas(rc, 6, 1);
    auto four = run_replicas(rc, 6, 4);
    EXPECT_EQ(one, four);
    EXPECT_NE(one[0], one[1]);
    RunConfig first = rc;
    first.seed = derive_seed(rc.seed, 0);
    EXPECT_EQ(one[0], run_stream(first));
}

TEST(acquisition, delay_scan_finds_the_pulse) {
    RunConfig rc;
    rc.source = nominal_source();
    rc.source.pulse_arrival_ns = 100.0;
    rc.source.pulse_width_ns = 0.3;
    rc.detector.gate_width_ns = 2.5;
    rc.attenuator = AttenuatorSetting(1e-5);  // weak attenuation, ~2.5 detected photons
    rc.seed = 1;
    auto r = scan_delay(rc, 95.0, 105.0, 0.5, 100000);
    ASSERT_EQ(r.profile.size(), 21u);
    EXPECT_GE(r.best_delay_ns, 97.8);
    EXPECT_LE(r.best_delay_ns, 100.0);

    // Full-overlap delays beat zero-overlap delays by far more than 10 sigma.
    double gates = 100000;
    for (const auto &p : r.profile) {
        RunConfig probe = rc;
        probe.detector.gate_delay_ns = p.delay_ns;
        double overlap = gate_overlap_fraction(probe.source, probe.detector);
        if (overlap == 1.0) {
            for (const auto &q : r.profile) {
                probe.detector.gate_delay_ns = q.delay_ns;
                if (gate_overlap_fraction(probe.source, probe.detector) == 0.0) {
                    double pf = static_cast<double>(p.clicks) / gates;
                    double sigma = std::sqrt(pf * (1 - pf) / gates + 1.0 / gates);
                    EXPECT_GT(pf - static_cast<double>(q.clicks) / gates, 10 * sigma);
                }
            }
        }
    }
}

TEST(acquisition, delay_scan_flat_profile_ties_to_minimum) {
    RunConfig rc;
    rc.source.mean_photons_override = 0.0;
    rc.detector.p_dark = 1e-3;
    rc.detector.afterpulse_alpha = 0;
    rc.seed = 2;
    auto r = scan_delay(rc, 95.0, 96.0, 0.25, 100000);
    EXPECT_EQ(r.profile.size(), 5u);
    for (const auto &p : r.profile) {
        EXPECT_NEAR(static_cast<double>(p.clicks), 100.0, 4 * std::sqrt(100.0));
    }
    // Exact ties go to the smallest delay.
    rc.detector.p_dark = 0;
    auto flat = scan_delay(rc, 95.0, 96.0, 0.25, 1000);
    EXPECT_EQ(flat.best_delay_ns, 95.0);
}

TEST(acquisition, delay_scan_single_point_when_step_exceeds_range) {
    RunConfig rc;
    rc.source.mean_photons_override = 10.0;
    auto r = scan_delay(rc, 98.0, 99.0, 5.0, 1000);
    ASSERT_EQ(r.profile.size(), 1u);
    EXPECT_EQ(r.best_delay_ns, 98.0);
    EXPECT_THROW(scan_delay(rc, 99.0, 98.0, 0.5, 10), DomainError);
    EXPECT_THROW(scan_delay(rc, 98.0, 99.0, 0.0, 10), DomainError);
}

TEST(acquisition, delay_scan_independent_of_threads) {
    RunConfig rc;
    rc.source.mean_photons_override = 10.0;
    rc.seed = 4;
    auto a = scan_delay(rc, 97.0, 101.0, 0.5, 5000, 1);
    auto b = scan_delay(rc, 97.0, 101.0, 0.5, 5000, 3);
    ASSERT_EQ(a.profile.size(), b.profile.size());
    for (size_t i = 0; i < a.profile.size(); i++) {
        EXPECT_EQ(a.profile[i].clicks, b.profile[i].clicks);
    }
    EXPECT_EQ(a.best_delay_ns, b.best_delay_ns);
}

TEST(acquisition, calibrate_memoryless_from_mis_set_attenuator) {
    for (double factor : {0.25, 4.0}) {
        auto rc = balanced_memoryless(1, 10);
        rc.detector.p_dark = 1e-5;
        rc.attenuator = AttenuatorSetting(rc.attenuator.transmittance() * factor);
        auto r = calibrate(rc, 0.0, 1e-3, 1000000, 10);
        EXPECT_TRUE(r.converged) << factor;
        EXPECT_LE(std::fabs(r.achieved_bias), 1e-3);
        EXPECT_LE(r.iterations, 3u);
    }
}

TEST(acquisition, calibrate_fixed_point_takes_one_iteration) {
    auto rc = balanced_memoryless(1, 12);
    auto r = calibrate(rc, 0.0, 1e-3, 1000000, 10);
    EXPECT_TRUE(r.converged);
    EXPECT_EQ(r.iterations, 1u);
    EXPECT_EQ(r.transmittance, rc.attenuator.transmittance());
}

TEST(acquisition, calibrate_is_idempotent) {
    auto rc = balanced_memoryless(1, 13);
    rc.attenuator = AttenuatorSetting(rc.attenuator.transmittance() * 3);
    auto first = calibrate(rc, 0.0, 1e-3, 1000000, 10);
    ASSERT_TRUE(first.converged);
    RunConfig again = rc;
    again.attenuator = AttenuatorSetting(first.transmittance);
    again.seed = 99;
    auto second = calibrate(again, 0.0, 1e-3, 1000000, 10);
    // Noise floor of the window on the no-click frequency, mapped through
    // d(ln f0) = df0 / f0 onto the relative change of T.
    double floor = std::sqrt(0.25 / 1e6) / 0.5 / std::log(2.0);
    EXPECT_LT(std::fabs(second.transmittance / first.transmittance - 1), 2 * floor);
}

TEST(acquisition, calibrate_honours_target_bias) {
    auto rc = balanced_memoryless(1, 14);
    auto r = calibrate(rc, 0.05, 1e-3, 1000000, 10);
    EXPECT_TRUE(r.converged);
    EXPECT_NEAR(r.achieved_bias, 0.05, 1e-3);
}

TEST(acquisition, calibrate_reports_non_convergence) {
    auto rc = balanced_memoryless(1, 15);
    rc.attenuator = AttenuatorSetting(rc.attenuator.transmittance() * 4);
    auto r = calibrate(rc, 0.0, 1e-6, 1000, 3);
    EXPECT_FALSE(r.converged);
    EXPECT_EQ(r.iterations, 3u);
}

TEST(acquisition, calibrate_infeasible_for_weak_source) {
    RunConfig rc;
    rc.source.mean_photons_override = 5.0;  // eta * lambda <= 0.5 even at T = 1
    EXPECT_THROW(calibrate(rc, 0.0, 1e-3, 10000, 5), InfeasibleError);
    EXPECT_THROW(calibrate(rc, 0.0, 0.0, 10000, 5), DomainError);
    EXPECT_THROW(calibrate(rc, 0.5, 1e-3, 10000, 5), DomainError);
}

TEST(acquisition, calibrated_no_click_frequency_matches_model) {
    auto rc = balanced_memoryless(1, 16);
    rc.detector.p_dark = 1e-3;
    rc.attenuator = AttenuatorSetting(rc.attenuator.transmittance() * 2);
    auto r = calibrate(rc, 0.0, 1e-3, 1000000, 10);
    ASSERT_TRUE(r.converged);
    RunConfig check = rc;
    check.attenuator = AttenuatorSetting(r.transmittance);
    check.n_gates = 4000000;
    check.seed = 1234;
    auto bits = run_stream(check);
    double f0 = 1 - static_cast<double>(bits.count_ones()) / static_cast<double>(bits.size());
    double lambda_d = check.detector.eta * check.gate_mean_photons();
    double expected = (1 - check.detector.p_dark) * std::exp(-lambda_d);
    EXPECT_NEAR(f0, expected, 4 * std::sqrt(expected * (1 - expected) / 4e6));
}
