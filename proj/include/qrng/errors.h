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

#ifndef QRNG_ERRORS_H
#define QRNG_ERRORS_H

#include <stdexcept>
#include <string>

namespace qrng {

/// An argument lies outside the mathematical domain of an operation.
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

/// A constant bitstream was given to a statistic that is undefined for it.
struct DegenerateStreamError : DomainError {
    using DomainError::DomainError;
};

/// Too few bits to compute a statistic (e.g. no complete 48-bit block).
struct InsufficientDataError : DomainError {
    using DomainError::DomainError;
};

/// The requested operating point cannot be reached with the given hardware,
/// e.g. balancing would need a transmittance above 1.
struct InfeasibleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace qrng

#endif
