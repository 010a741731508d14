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

#ifndef QRNG_OPTICS_H
#define QRNG_OPTICS_H

#include <cstdint>
#include <optional>

namespace qrng {

constexpr double kPlanckConstant = 6.62607015e-34;  // J s
constexpr double kSpeedOfLight = 299792458.0;       // m / s

/// Pulsed laser parameters.
///
/// The per-pulse mean photon number entering the attenuator comes from
/// exactly one of `avg_power_watts` (converted with h nu f_rep) or
/// `mean_photons_override`.
struct SourceConfig {
    std::optional<double> avg_power_watts;
    double center_frequency_hz = kSpeedOfLight / 1550e-9;
    double rep_rate_hz = 1e6;
    double pulse_arrival_ns = 100.0;
    double pulse_width_ns = 0.3;
    std::optional<double> mean_photons_override;

    /// Throws DomainError when an invariant is broken.
    void validate() const;
};

double wavelength_nm_to_frequency_hz(double wavelength_nm);

/// Attenuator transmittance T in (0, 1].
class AttenuatorSetting {
   public:
    explicit AttenuatorSetting(double transmittance);

    double transmittance() const {
        return transmittance_;
    }

   private:
    double transmittance_;
};

/// Detected photon number distribution: Poisson with mean eta * lambda.
double photon_number_pmf(int64_t n, double eta, double lambda);

/// Probability that at least one photon is detected, 1 - exp(-eta lambda).
double click_probability(double eta, double lambda);

/// Mean photon number per pulse leaving the source, before attenuation.
double source_mean_photons(const SourceConfig &source);

/// Mean detected photons per gate, P T eta / (h nu f_rep). Requires the
/// power path of `source`.
double detected_mean(const SourceConfig &source, const AttenuatorSetting &att, double eta);

/// Transmittance that makes the no-click probability, including independent
/// dark counts, exactly one half: eta * lambda_d = ln(2 (1 - p_dark)).
/// Accepts either source path. Throws InfeasibleError if T would exceed 1.
AttenuatorSetting balance_transmittance(const SourceConfig &source, double eta, double p_dark);

double dbm_to_watts(double p_dbm);

}  // namespace qrng

#endif
