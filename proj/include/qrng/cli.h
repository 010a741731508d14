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

#ifndef QRNG_CLI_H
#define QRNG_CLI_H

#include <iosfwd>

namespace qrng {

constexpr int kExitOk = 0;
constexpr int kExitDomainError = 1;
constexpr int kExitIoError = 2;

/// Entry point of the qrngsim tool:
///
///   qrngsim <simulate|export|calibrate|scan-delay|extract|analyze> [flags]
///
/// Returns 0 on success, 1 on configuration or domain errors and 2 on I/O
/// errors, after printing a one-line diagnostic to `err`.
int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

}  // namespace qrng

#endif
