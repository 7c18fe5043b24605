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

#include "ddlink/errors.hpp"

#include <sstream>

namespace ddlink {

namespace {

std::string describe_residual(double residual, double scale)
{
    std::ostringstream os;
    os << "matrix is not block-circulant under the DD stacking: off-diagonal residual "
       << residual << " against diagonal scale " << scale;
    return os.str();
}

} // namespace

NotBlockCirculant::NotBlockCirculant(double residual, double scale)
    : Error(describe_residual(residual, scale)), residual_(residual), scale_(scale)
{
}

ZeroGain::ZeroGain(int user)
    : Error("LM user " + std::to_string(user) + " has zero effective gain"), user_(user)
{
}

ValidationError::ValidationError(std::string key, const std::string &constraint)
    : Error("invalid config '" + key + "': " + constraint), key_(std::move(key))
{
}

} // namespace ddlink
