// Copyright 2026 The lcmc Authors
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

#pragma once

#include <string>

namespace lcmc {

enum class SamplerId { ULA, MALA, MRW };

std::string to_string(SamplerId id);
/// Accepts "ULA", "MALA", "MRW" in any case.
SamplerId parse_sampler(const std::string& text);

}  // namespace lcmc
