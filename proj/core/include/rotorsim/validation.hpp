// SPDX-License-Identifier: Apache-2.0
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


/**
 * @file validation.hpp
 * @brief Built-in oracle and invariant checks, run by `rotorsim validate`.
 *
 * These are quick, self-contained versions of the unit-test oracles so an
 * installed binary can confirm it computes what it should.
 */

#pragma once

#include <string>
#include <vector>

namespace rotorsim {

struct CheckResult
{
    std::string name;
    bool passed{false};
    std::string detail;
};

std::vector<CheckResult> run_self_checks();

}  // namespace rotorsim
