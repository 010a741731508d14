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

#include "qrng/optics.h"

#include <cmath>
#include <string>

#include "qrng/errors.h"

using namespace qrng;

namespace {

void check_eta_lambda(double eta, double lambda) {
    if (!(eta >= 0 && eta <= 1)) {
        throw DomainError("Detection efficiency must be in [0, 1], got " + std::to_string(eta));
    }
    if (!(lambda >= 0) || !std::isfinite(lambda)) {
        throw DomainError("Mean photon number must be finite and >= 0, got " + std::to_string(lambda));
    }
}

bool positive_finite(double x) {
    return x > 0 && std::isfinite(x);
}

}  // namespace

void SourceConfig::validate() const {
    if (avg_power_watts.has_value() == mean_photons_override.has_value()) {
        throw DomainError("Source needs exactly one of average power or mean photon number");
    }
    if (avg_power_watts && !positive_finite(*avg_power_watts)) {
        throw DomainError("Average power must be > 0 W");
    }
    if (mean_photons_override && (!(*mean_photons_override >= 0) || !std::isfinite(*mean_photons_override))) {
        throw DomainError("Mean photon number must be >= 0");
    }
    if (!positive_finite(center_frequency_hz)) {
        throw DomainError("Center frequency must be > 0 Hz");
    }
    if (!positive_finite(rep_rate_hz)) {
        throw DomainError("Repetition rate must be > 0 Hz");
    }
    if (!(pulse_arrival_ns >= 0) || !std::isfinite(pulse_arrival_ns)) {
        throw DomainError("Pulse arrival time must be >= 0 ns");
    }
    if (!positive_finite(pulse_width_ns)) {
        throw DomainError("Pulse width must be > 0 ns");
    }
}

double qrng::wavelength_nm_to_frequency_hz(double wavelength_nm) {
    if (!positive_finite(wavelength_nm)) {
        throw DomainError("Wavelength must be > 0 nm");
    }
    return kSpeedOfLight / (wavelength_nm * 1e-9);
}

AttenuatorSetting::AttenuatorSetting(double transmittance) : transmittance_(transmittance) {
    if (!(transmittance > 0 && transmittance <= 1)) {
        throw DomainError("Transmittance must be in (0, 1], got " + std::to_string(transmittance));
    }
}

double qrng::photon_number_pmf(int64_t n, double eta, double lambda) {
    check_eta_lambda(eta, lambda);
    if (n < 0) {
        throw DomainError("Photon number must be >= 0");
    }
    double mu = eta * lambda;
    if (mu == 0) {
        return n == 0 ? 1.0 : 0.0;
    }
    if (n <= 20) {
        double term = std::exp(-mu);
        for (int64_t k = 1; k <= n; k++) {
            term *= mu / static_cast<double>(k);
        }
        return term;
    }
    double nd = static_cast<double>(n);
    return std::exp(nd * std::log(mu) - mu - std::lgamma(nd + 1));
}

double qrng::click_probability(double eta, double lambda) {
    return 1.0 - photon_number_pmf(0, eta, lambda);
}

double qrng::source_mean_photons(const SourceConfig &source) {
    source.validate();
    if (source.mean_photons_override) {
        return *source.mean_photons_override;
    }
    return *source.avg_power_watts / (kPlanckConstant * source.center_frequency_hz * source.rep_rate_hz);
}

double qrng::detected_mean(const SourceConfig &source, const AttenuatorSetting &att, double eta) {
    if (!source.avg_power_watts) {
        throw DomainError("detected_mean needs a source with average power specified");
    }
    check_eta_lambda(eta, 0);
    return source_mean_photons(source) * att.transmittance() * eta;
}

AttenuatorSetting qrng::balance_transmittance(const SourceConfig &source, double eta, double p_dark) {
    if (!(eta > 0 && eta <= 1)) {
        throw DomainError("Balancing needs detection efficiency in (0, 1]");
    }
    if (!(p_dark >= 0 && p_dark < 0.5)) {
        throw DomainError("Balancing needs dark-count probability in [0, 0.5)");
    }
    double target = std::log(2 * (1 - p_dark));
    double full = source_mean_photons(source) * eta;
    double t = target / full;
    if (!(t > 0) || !std::isfinite(t)) {
        throw InfeasibleError("Balancing transmittance is not positive");
    }
    if (t > 1) {
        throw InfeasibleError("Source too weak to balance: needs transmittance " + std::to_string(t));
    }
    return AttenuatorSetting(t);
}

double qrng::dbm_to_watts(double p_dbm) {
    return std::pow(10.0, p_dbm / 10.0) * 1e-3;
}
