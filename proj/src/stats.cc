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

#include "qrng/stats.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "qrng/errors.h"
#include "qrng/parallel.h"

using namespace qrng;

namespace {

constexpr size_t kBlockWords = 4096;

// Pairs (i, i + k) with both bits set, for the words [begin, end) as the
// first element's position. Bits past the stream end are zero so pairs
// reaching past it never count.
uint64_t lag_pairs_in_block(std::span<const uint64_t> w, uint64_t k, size_t begin, size_t end) {
    size_t q = static_cast<size_t>(k >> 6);
    unsigned r = static_cast<unsigned>(k & 63);
    size_t nw = w.size();
    if (q >= nw) {
        return 0;
    }
    end = std::min(end, nw - q);
    uint64_t total = 0;
    if (r == 0) {
        for (size_t i = begin; i < end; i++) {
            total += std::popcount(w[i] & w[i + q]);
        }
        return total;
    }
    // Every word but the very last one has a successor to borrow from.
    size_t safe_end = std::min(end, nw - q - 1);
    size_t i = begin;
    for (; i < safe_end; i++) {
        uint64_t shifted = (w[i + q] >> r) | (w[i + q + 1] << (64 - r));
        total += std::popcount(w[i] & shifted);
    }
    for (; i < end; i++) {
        total += std::popcount(w[i] & (w[i + q] >> r));
    }
    return total;
}

// Adds pair counts for k = 1..k_max into out[k - 1], walking the stream in
// cache-sized blocks so each block is read once for all lags.
void add_lag_pairs(const BitStream &stream, uint64_t k_max, std::vector<uint64_t> &out) {
    auto w = stream.words();
    for (size_t begin = 0; begin < w.size(); begin += kBlockWords) {
        size_t end = std::min(w.size(), begin + kBlockWords);
        for (uint64_t k = 1; k <= k_max; k++) {
            out[k - 1] += lag_pairs_in_block(w, k, begin, end);
        }
    }
}

BitStream first_bits(const BitStream &s, uint64_t n) {
    return s.slice(0, std::min<uint64_t>(n, s.size()));
}

BitStream last_bits(const BitStream &s, uint64_t n) {
    return s.slice(s.size() - std::min<uint64_t>(n, s.size()), s.size());
}

double coefficient_from_counts(uint64_t n, uint64_t ones, uint64_t k, uint64_t pairs, uint64_t head, uint64_t tail) {
    if (k == 0 || k >= n) {
        throw DomainError("Serial correlation lag must satisfy 1 <= k < N");
    }
    if (ones == 0 || ones == n) {
        throw DegenerateStreamError("Serial correlation is undefined for a constant stream");
    }
    using I = __int128;
    I N = n, S = ones, K = k;
    I numerator = N * N * I(pairs) - N * S * (I(head) + I(tail)) + (N - K) * S * S;
    I denominator = N * S * (N - S);
    return static_cast<double>(numerator) / static_cast<double>(denominator);
}

std::string format(const char *fmt, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof(buf), fmt, args...);
    return buf;
}

}  // namespace

std::string Correlogram::to_csv() const {
    std::string out = "k,a_k\n";
    for (const auto &[k, a] : entries) {
        out += format("%llu,%.12g\n", static_cast<unsigned long long>(k), a);
    }
    return out;
}

uint64_t qrng::count_lag_pairs(const BitStream &stream, uint64_t k) {
    return lag_pairs_in_block(stream.words(), k, 0, stream.words().size());
}

double qrng::serial_correlation(const BitStream &stream, uint64_t k) {
    uint64_t n = stream.size();
    if (k == 0 || k >= n) {
        throw DomainError("Serial correlation lag must satisfy 1 <= k < N");
    }
    uint64_t ones = stream.count_ones();
    uint64_t head = ones - stream.count_ones(n - k, n);
    uint64_t tail = ones - stream.count_ones(0, k);
    return coefficient_from_counts(n, ones, k, count_lag_pairs(stream, k), head, tail);
}

SerialCorrelator::SerialCorrelator(uint64_t k_max) : k_max_(k_max), pairs_(k_max, 0) {
    if (k_max < 1) {
        throw DomainError("Correlogram needs k_max >= 1");
    }
}

SerialCorrelator SerialCorrelator::summarize(const BitStream &segment, uint64_t k_max) {
    SerialCorrelator s(k_max);
    s.n_ = segment.size();
    s.ones_ = segment.count_ones();
    add_lag_pairs(segment, k_max, s.pairs_);
    s.head_ = first_bits(segment, k_max);
    s.tail_ = last_bits(segment, k_max);
    return s;
}

void SerialCorrelator::consume(const BitStream &segment) {
    merge(summarize(segment, k_max_));
}

void SerialCorrelator::merge(const SerialCorrelator &later) {
    if (later.k_max_ != k_max_) {
        throw DomainError("Cannot merge correlators with different k_max");
    }
    if (later.n_ == 0) {
        return;
    }
    if (n_ == 0) {
        *this = later;
        return;
    }
    BitStream seam = tail_;
    seam.append(later.head_);
    for (uint64_t k = 1; k <= k_max_; k++) {
        pairs_[k - 1] += later.pairs_[k - 1] + count_lag_pairs(seam, k) - count_lag_pairs(tail_, k) -
                         count_lag_pairs(later.head_, k);
    }
    if (head_.size() < k_max_) {
        head_.append(later.head_);
        head_ = first_bits(head_, k_max_);
    }
    BitStream joined_tail = tail_;
    joined_tail.append(later.tail_);
    tail_ = last_bits(joined_tail, k_max_);
    n_ += later.n_;
    ones_ += later.ones_;
}

double SerialCorrelator::coefficient(uint64_t k) const {
    if (k == 0 || k > k_max_) {
        throw DomainError("Lag outside the correlator's range");
    }
    if (k >= n_) {
        throw DomainError("Serial correlation lag must satisfy 1 <= k < N");
    }
    // head_/tail_ hold at least k bits here because k < n and k <= k_max.
    uint64_t head = ones_ - last_bits(tail_, k).count_ones();
    uint64_t tail = ones_ - first_bits(head_, k).count_ones();
    return coefficient_from_counts(n_, ones_, k, pairs_[k - 1], head, tail);
}

Correlogram SerialCorrelator::correlogram() const {
    Correlogram out;
    out.n_bits = n_;
    for (uint64_t k = 1; k <= k_max_; k++) {
        out.entries.emplace_back(k, coefficient(k));
    }
    return out;
}

Correlogram qrng::correlogram(const BitStream &stream, uint64_t k_max, unsigned threads) {
    if (k_max < 1 || k_max >= stream.size()) {
        throw DomainError("Correlogram needs 1 <= k_max < N");
    }
    if (threads == 0) {
        threads = default_thread_count();
    }
    size_t words = stream.words().size();
    size_t segments = std::max<size_t>(1, std::min<size_t>(threads, words / kBlockWords));
    if (segments == 1) {
        return SerialCorrelator::summarize(stream, k_max).correlogram();
    }
    size_t per = (words + segments - 1) / segments;
    std::vector<SerialCorrelator> parts(segments, SerialCorrelator(k_max));
    parallel_for(segments, threads, [&](size_t i) {
        uint64_t begin = std::min<uint64_t>(stream.size(), uint64_t{64} * per * i);
        uint64_t end = std::min<uint64_t>(stream.size(), uint64_t{64} * per * (i + 1));
        parts[i] = SerialCorrelator::summarize(stream.slice(begin, end), k_max);
    });
    SerialCorrelator total(k_max);
    for (const auto &p : parts) {
        total.merge(p);
    }
    return total.correlogram();
}

double qrng::shannon_entropy(const BitStream &stream) {
    if (stream.empty()) {
        throw DomainError("Entropy of an empty stream is undefined");
    }
    double n = static_cast<double>(stream.size());
    double h = 0;
    for (uint64_t count : {stream.size() - stream.count_ones(), stream.count_ones()}) {
        if (count > 0) {
            double p = static_cast<double>(count) / n;
            h -= p * std::log2(p);
        }
    }
    return h;
}

double qrng::chi_square_survival_1df(double statistic) {
    if (!(statistic >= 0)) {
        throw DomainError("Chi-square statistic must be >= 0");
    }
    return std::erfc(std::sqrt(statistic / 2));
}

ChiSquareResult qrng::chi_square_bits(const BitStream &stream) {
    if (stream.empty()) {
        throw DomainError("Chi-square of an empty stream is undefined");
    }
    double expected = static_cast<double>(stream.size()) / 2;
    double ones = static_cast<double>(stream.count_ones());
    double zeros = static_cast<double>(stream.size()) - ones;
    double stat = ((zeros - expected) * (zeros - expected) + (ones - expected) * (ones - expected)) / expected;
    return ChiSquareResult{stat, chi_square_survival_1df(stat)};
}

MonteCarloPiResult qrng::monte_carlo_pi(const BitStream &stream) {
    uint64_t samples = stream.size() / 48;
    if (samples == 0) {
        throw InsufficientDataError("Monte Carlo pi needs at least one 48-bit block");
    }
    auto read24 = [&](uint64_t pos) {
        uint64_t raw = stream.window64(pos);
        uint64_t v = 0;
        for (int j = 0; j < 24; j++) {
            v = (v << 1) | ((raw >> j) & 1);
        }
        return v;
    };
    constexpr uint64_t kOne = uint64_t{1} << 48;  // (2^24)^2
    uint64_t inside = 0;
    for (uint64_t s = 0; s < samples; s++) {
        uint64_t x = read24(48 * s);
        uint64_t y = read24(48 * s + 24);
        inside += x * x + y * y < kOne;
    }
    double estimate = 4.0 * static_cast<double>(inside) / static_cast<double>(samples);
    double error = 100.0 * std::fabs(estimate - std::numbers::pi) / std::numbers::pi;
    return MonteCarloPiResult{estimate, error, samples};
}

EntReport qrng::ent_report(const BitStream &stream) {
    if (stream.size() < 48) {
        throw InsufficientDataError("ENT report needs at least 48 bits");
    }
    EntReport r;
    r.n_bits = stream.size();
    r.entropy_bits_per_bit = shannon_entropy(stream);
    r.compression_percent = std::clamp(100.0 * (1.0 - r.entropy_bits_per_bit), 0.0, 100.0);
    auto chi = chi_square_bits(stream);
    r.chi_square = chi.statistic;
    r.chi_square_exceed_prob = chi.exceed_probability;
    r.arithmetic_mean = static_cast<double>(stream.count_ones()) / static_cast<double>(stream.size());
    auto pi = monte_carlo_pi(stream);
    r.monte_carlo_pi = pi.pi_estimate;
    r.pi_error_percent = pi.error_percent;
    r.pi_samples = pi.samples_used;
    try {
        r.serial_correlation_lag1 = serial_correlation(stream, 1);
    } catch (const DegenerateStreamError &) {
        r.serial_correlation_lag1.reset();
    }
    return r;
}

std::string EntReport::to_text() const {
    auto n = static_cast<unsigned long long>(n_bits);
    std::string out;
    out += format("Entropy = %.6f bits per bit.\n\n", entropy_bits_per_bit);
    out += format("Optimum compression would reduce the size\nof this %llu bit file by %.0f percent.\n\n", n,
                  compression_percent);
    out += format("Chi square distribution for %llu samples is %.2f, and randomly\n", n, chi_square);
    if (chi_square_exceed_prob < 1e-4) {
        out += "would exceed this value less than 0.01 percent of the times.\n\n";
    } else {
        out += format("would exceed this value %.2f percent of the times.\n\n", 100.0 * chi_square_exceed_prob);
    }
    out += format("Arithmetic mean value of data bits is %.4f (0.5 = random).\n", arithmetic_mean);
    out += format("Monte Carlo value for Pi is %.9f (error %.2f percent).\n", monte_carlo_pi, pi_error_percent);
    if (serial_correlation_lag1) {
        out += format("Serial correlation coefficient is %.6f (totally uncorrelated = 0.0).\n",
                      *serial_correlation_lag1);
    } else {
        out += "Serial correlation coefficient is undefined (all values equal!).\n";
    }
    return out;
}

std::string EntReport::to_key_values() const {
    std::string out;
    out += format("bits=%llu\n", static_cast<unsigned long long>(n_bits));
    out += format("entropy_bits_per_bit=%.9f\n", entropy_bits_per_bit);
    out += format("compression_percent=%.6f\n", compression_percent);
    out += format("chi_square=%.9g\n", chi_square);
    out += format("chi_square_exceed_prob=%.9g\n", chi_square_exceed_prob);
    out += format("arithmetic_mean=%.9f\n", arithmetic_mean);
    out += format("monte_carlo_pi=%.9f\n", monte_carlo_pi);
    out += format("pi_error_percent=%.6f\n", pi_error_percent);
    out += format("pi_samples=%llu\n", static_cast<unsigned long long>(pi_samples));
    if (serial_correlation_lag1) {
        out += format("serial_correlation_lag1=%.9g\n", *serial_correlation_lag1);
    } else {
        out += "serial_correlation_lag1=undefined\n";
    }
    return out;
}
