// Copyright 2026 The qmeasure Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qmeasure/errors.hpp"

namespace qmeasure {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::InvalidInput:
        return "InvalidInput";
    case ErrorCode::InvalidDensity:
        return "InvalidDensity";
    case ErrorCode::NotHermitian:
        return "NotHermitian";
    case ErrorCode::InvalidProjectorFamily:
        return "InvalidProjectorFamily";
    case ErrorCode::ZeroProbabilityBranch:
        return "ZeroProbabilityBranch";
    case ErrorCode::NotUnitary:
        return "NotUnitary";
    case ErrorCode::NotDecohered:
        return "NotDecohered";
    }
    return "Unknown";
}

} // namespace qmeasure
