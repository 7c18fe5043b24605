// SPDX-License-Identifier: Apache-2.0
//
// ddlink-sim: delay-Doppler / NOMA downlink link-level simulator
// Copyright (C) 2026 The ddlink-sim Authors
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

namespace ddlink {

/// Base class of every error raised by the simulator library.
class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// A channel matrix was not diagonalized by the spectral basis.
class NotBlockCirculant : public Error
{
public:
    NotBlockCirculant(double residual, double scale);

    double residual() const noexcept { return residual_; }
    double scale() const noexcept { return scale_; }

private:
    double residual_;
    double scale_;
};

/// Every equalizer coefficient is zero, so the detection SNR is undefined.
class DegenerateSpectrum : public Error
{
public:
    using Error::Error;
};

/// Power allocation requested for a user whose effective gain is zero.
class ZeroGain : public Error
{
public:
    explicit ZeroGain(int user);

    int user() const noexcept { return user_; }

private:
    int user_;
};

/// A configuration value violates a constraint. `key()` names the offending field.
class ValidationError : public Error
{
public:
    ValidationError(std::string key, const std::string &constraint);

    const std::string &key() const noexcept { return key_; }

private:
    std::string key_;
};

} // namespace ddlink
