// Copyright 2026 The lowdim Authors
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

#ifndef LOWDIM_LOWDIM_HPP
#define LOWDIM_LOWDIM_HPP

#include "lowdim/applications.hpp"
#include "lowdim/engine_bounded.hpp"
#include "lowdim/engine_nonneg.hpp"
#include "lowdim/fixed_target_dp.hpp"
#include "lowdim/guess_search.hpp"
#include "lowdim/model.hpp"
#include "lowdim/numeric.hpp"
#include "lowdim/oracle.hpp"
#include "lowdim/unknown_w.hpp"
#include "lowdim/verify.hpp"

#endif  // LOWDIM_LOWDIM_HPP
