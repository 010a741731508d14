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

#include <gtest/gtest.h>

#include <cmath>

#include "qrng/acquisition.h"
#include "qrng/errors.h"
#include "qrng/stats.h"

using namespace qrng;

namespace {

// Sequential-search Poisson inversion, the textbook form of what the guide
// table accelerates.
uint64_t naive_poisson_inversion(double mean, Rng &rng) {
    double u = uniform01(rng);
    double p = std::exp(-mean);
    double f = p;
    uint64_t n = 0;
    while (u >= f) {
        n++;
        p *= mean / static_cast<double>(n);
        f += p;
    }
    return n;
}

DetectorConfig memoryless(double eta) {
    DetectorConfig c;
    c.eta = eta;
    c.p_dark = 0;
    c.afterpulse_alpha = 0;
    c.dead_time_gates = 0;
    return c;
}

}  // namespace

TEST(detector, poisson_zero_mean) {
    Rng rng(1);
    for (int i = 0; i < 1000; i++) {
        EXPECT_EQ(sample_photon_count(0.0, rng), 0u);
    }
}

TEST(detector, poisson_rejects_bad_mean) {
    Rng rng(1);
    EXPECT_THROW(sample_photon_count(-1.0, rng), DomainError);
    EXPECT_THROW(sample_photon_count(INFINITY, rng), DomainError);
    EXPECT_THROW(sample_photon_count(NAN, rng), DomainError);
}

TEST(detector, poisson_moments_at_balance_mean) {
    const double mean = 6.93;
    const int draws = 1000000;
    PoissonSampler sampler(mean);
    Rng rng(17);
    double sum = 0;
    int zeros = 0;
    for (int i = 0; i < draws; i++) {
        uint64_t n = sampler(rng);
        sum += static_cast<double>(n);
        zeros += n == 0;
    }
    EXPECT_NEAR(sum / draws, mean, 4 * std::sqrt(mean / draws));
    double p0 = std::exp(-mean);
    EXPECT_NEAR(static_cast<double>(zeros) / draws, p0, 4 * std::sqrt(p0 * (1 - p0) / draws));
}

TEST(detector, poisson_inversion_matches_sequential_search) {
    for (double mean : {0.3, 0.693, 6.93, 40.0}) {
        PoissonSampler sampler(mean);
        Rng a(99);
        Rng b(99);
        for (int i = 0; i < 100000; i++) {
            ASSERT_EQ(sampler(a), naive_poisson_inversion(mean, b)) << mean << " draw " << i;
        }
    }
}

TEST(detector, poisson_large_mean_moments) {
    for (double mean : {64.0, 100.0, 1000.0, 2.5e5}) {
        PoissonSampler sampler(mean);
        Rng rng(5);
        const int draws = 200000;
        double sum = 0, sum_sq = 0;
        for (int i = 0; i < draws; i++) {
            double n = static_cast<double>(sampler(rng));
            sum += n;
            sum_sq += n * n;
        }
        double m = sum / draws;
        double var = sum_sq / draws - m * m;
        EXPECT_NEAR(m, mean, 4 * std::sqrt(mean / draws)) << mean;
        // Var of the sample variance of a Poisson is about 2 mean^2 / draws.
        EXPECT_NEAR(var, mean, 4 * mean * std::sqrt(2.0 / draws) + 1) << mean;
    }
}

TEST(detector, afterpulse_probability_examples) {
    DetectorConfig c;
    c.afterpulse_alpha = 6e-4;
    c.afterpulse_tau_gates = 2;
    DetectorState s;
    EXPECT_EQ(afterpulse_probability(s, c), 0.0);
    s.history = 0b1;  // one click at age 1
    EXPECT_NEAR(afterpulse_probability(s, c), 6e-4, 1e-16);
    s.history = 0b11;  // ages 1 and 2
    EXPECT_NEAR(afterpulse_probability(s, c), 0.0009637000447901833, 1e-16);
    EXPECT_NEAR(afterpulse_probability(s, c), 9.64e-4, 1e-6);
}

TEST(detector, afterpulse_ignores_clicks_past_horizon) {
    DetectorConfig c;
    c.afterpulse_horizon_gates = 3;
    DetectorState s;
    s.history = uint64_t{1} << 5;
    EXPECT_EQ(afterpulse_probability(s, c), 0.0);
}

TEST(detector, gate_model_afterpulse_table_matches_direct_product) {
    DetectorConfig c;
    c.afterpulse_alpha = 0.05;
    c.afterpulse_tau_gates = 3.5;
    c.afterpulse_horizon_gates = 45;
    GateModel model(c);
    Rng rng(2);
    for (int i = 0; i < 2000; i++) {
        DetectorState s;
        s.history = rng() & ((uint64_t{1} << 45) - 1);
        EXPECT_NEAR(model.afterpulse_probability(s.history), afterpulse_probability(s, c), 1e-15);
    }
}

TEST(detector, click_ages_view) {
    DetectorState s;
    s.history = 0b1001;
    EXPECT_EQ(s.click_ages(), (std::vector<uint32_t>{1, 4}));
}

TEST(detector, no_source_means_no_click) {
    DetectorConfig c = memoryless(0.1);
    Rng rng(4);
    DetectorState s;
    for (int i = 0; i < 10000; i++) {
        auto out = gate_decision(0, s, c, rng);
        ASSERT_FALSE(out.click);
        s = out.state;
    }
}

TEST(detector, perfect_efficiency_always_clicks_on_photons) {
    DetectorConfig c = memoryless(1.0);
    Rng rng(4);
    DetectorState s;
    for (int i = 0; i < 10000; i++) {
        auto out = gate_decision(5, s, c, rng);
        ASSERT_TRUE(out.click);
        s = out.state;
    }
}

TEST(detector, state_update_ages_and_drops) {
    DetectorConfig c = memoryless(1.0);
    c.afterpulse_horizon_gates = 3;
    Rng rng(4);
    auto a = gate_decision(1, DetectorState{}, c, rng);
    EXPECT_EQ(a.state.click_ages(), (std::vector<uint32_t>{1}));
    auto b = gate_decision(0, a.state, c, rng);
    EXPECT_EQ(b.state.click_ages(), (std::vector<uint32_t>{2}));
    auto d = gate_decision(1, b.state, c, rng);
    EXPECT_EQ(d.state.click_ages(), (std::vector<uint32_t>{1, 3}));
    auto e = gate_decision(0, d.state, c, rng);
    EXPECT_EQ(e.state.click_ages(), (std::vector<uint32_t>{2}));
}

TEST(detector, dead_time_forces_no_click) {
    DetectorConfig c = memoryless(1.0);
    c.dead_time_gates = 3;
    Rng rng(4);
    DetectorState s;
    std::vector<bool> clicks;
    for (int i = 0; i < 12; i++) {
        auto out = gate_decision(10, s, c, rng);
        clicks.push_back(out.click);
        EXPECT_LE(out.state.dead_countdown, c.dead_time_gates);
        s = out.state;
    }
    EXPECT_EQ(clicks, (std::vector<bool>{1, 0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 0}));
}

TEST(detector, gate_decision_click_rate_matches_closed_form) {
    DetectorConfig c;
    c.eta = 0.1;
    c.p_dark = 1e-5;
    c.afterpulse_alpha = 0;
    PoissonSampler photons(6.93);
    Rng rng(21);
    DetectorState s;
    const int gates = 10000000;
    int clicks = 0;
    for (int i = 0; i < gates; i++) {
        auto out = gate_decision(photons(rng), s, c, rng);
        clicks += out.click;
        s = out.state;
    }
    double expected = 1 - (1 - c.p_dark) * (1 - click_probability(0.1, 6.93));
    double rate = static_cast<double>(clicks) / gates;
    EXPECT_NEAR(rate, 0.5, 4 * 0.5 / std::sqrt(gates));
    EXPECT_NEAR(rate, expected, 4 * 0.5 / std::sqrt(gates));
}

TEST(detector, gate_model_agrees_with_gate_decision) {
    // Strong afterpulsing and dead time make any mismatch in the update rules
    // visible in the click and pair rates.
    DetectorConfig c;
    c.eta = 0.3;
    c.p_dark = 0.01;
    c.afterpulse_alpha = 0.2;
    c.afterpulse_tau_gates = 1.5;
    c.afterpulse_horizon_gates = 10;
    c.dead_time_gates = 1;
    GateModel model(c);
    PoissonSampler photons(1.0);
    const int gates = 1000000;
    Rng r1(1), r2(2);
    DetectorState s1, s2;
    // Dead time 1 forbids lag-1 pairs, so compare lag-2 pairs.
    int c1 = 0, c2 = 0, pairs1 = 0, pairs2 = 0;
    bool last1 = false, last2 = false, older1 = false, older2 = false;
    for (int i = 0; i < gates; i++) {
        auto out = gate_decision(photons(r1), s1, c, r1);
        s1 = out.state;
        bool k2 = model.step(photons(r2), s2, r2);
        c1 += out.click;
        c2 += k2;
        pairs1 += out.click && older1;
        pairs2 += k2 && older2;
        older1 = last1;
        older2 = last2;
        last1 = out.click;
        last2 = k2;
    }
    auto close = [&](int x, int y) {
        double p = static_cast<double>(x) / gates;
        double sigma = std::sqrt(2 * p * (1 - p) / gates);
        EXPECT_NEAR(p, static_cast<double>(y) / gates, 5 * sigma);
    };
    close(c1, c2);
    close(pairs1, pairs2);
}

TEST(detector, gate_overlap_examples) {
    SourceConfig s;
    s.mean_photons_override = 1;
    s.pulse_arrival_ns = 100.0;
    s.pulse_width_ns = 0.3;
    DetectorConfig c;
    c.gate_width_ns = 2.5;
    c.gate_delay_ns = 99.0;
    EXPECT_EQ(gate_overlap_fraction(s, c), 1.0);
    c.gate_delay_ns = 90.0;
    EXPECT_EQ(gate_overlap_fraction(s, c), 0.0);
    c.gate_delay_ns = 100.3;
    EXPECT_EQ(gate_overlap_fraction(s, c), 0.0);
    c.gate_delay_ns = 100.15;
    EXPECT_NEAR(gate_overlap_fraction(s, c), 0.5, 1e-12);
    c.gate_delay_ns = 97.65;  // gate ends at 100.15
    EXPECT_NEAR(gate_overlap_fraction(s, c), 0.5, 1e-12);
}

TEST(detector, config_validation) {
    DetectorConfig c;
    EXPECT_NO_THROW(c.validate());
    auto bad = c;
    bad.eta = 1.5;
    EXPECT_THROW(bad.validate(), DomainError);
    bad = c;
    bad.p_dark = 1.0;
    EXPECT_THROW(bad.validate(), DomainError);
    bad = c;
    bad.afterpulse_alpha = 1.0;
    EXPECT_THROW(bad.validate(), DomainError);
    bad = c;
    bad.afterpulse_tau_gates = 0;
    EXPECT_THROW(bad.validate(), DomainError);
    bad = c;
    bad.afterpulse_horizon_gates = 65;
    EXPECT_THROW(bad.validate(), DomainError);
    bad = c;
    bad.gate_width_ns = 0;
    EXPECT_THROW(bad.validate(), DomainError);
}

TEST(detector, dead_time_separation_on_streams) {
    for (uint32_t dead : {1u, 2u, 5u}) {
        RunConfig rc;
        rc.source.mean_photons_override = 20.0;
        rc.detector.dead_time_gates = dead;
        rc.detector.afterpulse_alpha = 0.1;
        rc.n_gates = 200000;
        rc.seed = dead;
        auto bits = run_stream(rc);
        int64_t last = -1000;
        size_t clicks = 0;
        for (size_t i = 0; i < bits.size(); i++) {
            if (bits[i]) {
                ASSERT_GE(static_cast<int64_t>(i) - last, static_cast<int64_t>(dead) + 1);
                last = static_cast<int64_t>(i);
                clicks++;
            }
        }
        EXPECT_GT(clicks, bits.size() / (dead + 2));
    }
}

TEST(detector, memoryless_clicks_are_uncorrelated) {
    RunConfig rc;
    rc.source.mean_photons_override = 6.93;
    rc.detector = memoryless(0.1);
    rc.n_gates = 1000000;
    rc.seed = 77;
    auto bits = run_stream(rc);
    auto cg = correlogram(bits, 100);
    double bound = 4 / std::sqrt(static_cast<double>(rc.n_gates));
    for (const auto &[k, a] : cg.entries) {
        EXPECT_LE(std::fabs(a), bound) << "lag " << k;
    }
}

TEST(detector, photon_click_marginal_matches_optics) {
    Rng rng(8);
    for (auto [eta, lambda] : {std::pair{0.1, 6.93}, std::pair{0.5, 0.4}, std::pair{0.9, 2.0}}) {
        PoissonSampler photons(lambda);
        DetectorConfig c = memoryless(eta);
        const int gates = 1000000;
        int clicks = 0;
        DetectorState s;
        for (int i = 0; i < gates; i++) {
            auto out = gate_decision(photons(rng), s, c, rng);
            clicks += out.click;
            s = out.state;
        }
        double p = click_probability(eta, lambda);
        EXPECT_NEAR(static_cast<double>(clicks) / gates, p, 4 * std::sqrt(p * (1 - p) / gates));
    }
}
