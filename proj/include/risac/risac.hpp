// SPDX-License-Identifier: Apache-2.0
//
// risac: RIS-assisted over-the-air computation optimization library
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

#ifndef RISAC_RISAC_HPP
#define RISAC_RISAC_HPP

#include "risac/aircomp.hpp"
#include "risac/altermin.hpp"
#include "risac/channel.hpp"
#include "risac/config.hpp"
#include "risac/experiment.hpp"
#include "risac/rng.hpp"
#include "risac/saddle.hpp"
#include "risac/types.hpp"

#endif  // RISAC_RISAC_HPP
