// Copyright 2026 The allocflow Authors
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

#ifndef ALLOCFLOW_ALLOCFLOW_HPP_
#define ALLOCFLOW_ALLOCFLOW_HPP_

#include "allocflow/cycle_finding.hpp"
#include "allocflow/errors.hpp"
#include "allocflow/gen.hpp"
#include "allocflow/heuristic.hpp"
#include "allocflow/io.hpp"
#include "allocflow/model.hpp"
#include "allocflow/network.hpp"
#include "allocflow/oracle.hpp"
#include "allocflow/solver.hpp"
#include "allocflow/stats.hpp"

#endif  // ALLOCFLOW_ALLOCFLOW_HPP_
