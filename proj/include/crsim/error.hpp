// SPDX-License-Identifier: Apache-2.0
//
// crsim - compressive fronthaul simulation for uplink C-RAN
// Copyright (C) 2026 The crsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <stdexcept>
#include <string>

namespace crsim {

// Invalid user-supplied parameters (bad config value, dimension mismatch at an API boundary).
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A formula evaluated outside the region where it is defined.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Solver or factorization failure during a trial.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace crsim
