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

#ifndef QRNG_STATS_H
#define QRNG_STATS_H

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qrng/bitstream.h"

namespace qrng {

struct Correlogram {
    std::vector<std::pair<uint64_t, double>> entries;  // (k, a_k), k ascending
    uint64_t n_bits = 0;

    /// CSV with header "k,a_k".
    std::string to_csv() const;
};

/// Number of i with bit i and bit i + k both set.
uint64_t count_lag_pairs(const BitStream &stream, uint64_t k);

/// Lag-k serial correlation coefficient of a bitstream,
///
///   a_k = sum_{i<N-k} (Y_i - m)(Y_{i+k} - m) / sum_i (Y_i - m)^2,
///
/// evaluated exactly from integer counts: with S ones, P lag-k (1,1) pairs,
/// and H, T the ones in the first / last N-k positions,
///
///   a_k = (N^2 P - N S (H + T) + (N - k) S^2) / (N S (N - S)).
///
/// Throws DegenerateStreamError for a constant stream and DomainError for
/// k = 0 or k >= N.
double serial_correlation(const BitStream &stream, uint64_t k);

/// Mergeable single-pass summary for lags 1..k_max.
///
/// A summary of a stream segment holds bit and one counts, lag pair counts
/// inside the segment, and its first and last k_max bits. Merging two
/// adjacent summaries adds the pairs that straddle the boundary, so the
/// result is independent of how a stream was cut into segments.
class SerialCorrelator {
   public:
    explicit SerialCorrelator(uint64_t k_max);

    static SerialCorrelator summarize(const BitStream &segment, uint64_t k_max);

    /// Appends the next segment of the stream.
    void consume(const BitStream &segment);
    /// Appends a summary of the segment that directly follows this one.
    void merge(const SerialCorrelator &later);

    uint64_t size() const {
        return n_;
    }
    uint64_t ones() const {
        return ones_;
    }
    uint64_t k_max() const {
        return k_max_;
    }

    double coefficient(uint64_t k) const;
    Correlogram correlogram() const;

   private:
    uint64_t k_max_;
    uint64_t n_ = 0;
    uint64_t ones_ = 0;
    std::vector<uint64_t> pairs_;  // pairs_[k - 1]
    BitStream head_;
    BitStream tail_;
};

/// a_k for k = 1..k_max. Segments are summarized on up to `threads` workers
/// and merged in order; values are identical to serial_correlation.
Correlogram correlogram(const BitStream &stream, uint64_t k_max, unsigned threads = 1);

double shannon_entropy(const BitStream &stream);

struct ChiSquareResult {
    double statistic;
    double exceed_probability;
};

/// Survival function of the chi-square distribution with one degree of
/// freedom: P(X > x) = erfc(sqrt(x / 2)).
double chi_square_survival_1df(double statistic);

/// Two-bin (zeros / ones) chi-square against a fair coin.
ChiSquareResult chi_square_bits(const BitStream &stream);

struct MonteCarloPiResult {
    double pi_estimate;
    double error_percent;
    uint64_t samples_used;
};

/// Monte Carlo pi from consecutive non-overlapping 48-bit blocks. Within a
/// block the first 24 bits are x and the next 24 are y, each read
/// most-significant bit first and scaled by 2^-24; a point is inside when
/// x^2 + y^2 < 1.
MonteCarloPiResult monte_carlo_pi(const BitStream &stream);

struct EntReport {
    uint64_t n_bits = 0;
    double entropy_bits_per_bit = 0;
    double compression_percent = 0;
    double chi_square = 0;
    double chi_square_exceed_prob = 0;
    double arithmetic_mean = 0;
    double monte_carlo_pi = 0;
    double pi_error_percent = 0;
    uint64_t pi_samples = 0;
    /// Empty when the stream is constant and the coefficient is undefined.
    std::optional<double> serial_correlation_lag1;

    /// Human-readable layout in the style of the ENT tool's bit mode.
    std::string to_text() const;
    /// One key=value pair per line.
    std::string to_key_values() const;
};

EntReport ent_report(const BitStream &stream);

}  // namespace qrng

#endif
