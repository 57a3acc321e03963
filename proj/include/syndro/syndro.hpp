// Copyright 2026 The Syndro Authors
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

#include "syndro/calendar.hpp"
#include "syndro/candidates.hpp"
#include "syndro/coverage_mask.hpp"
#include "syndro/dataset.hpp"
#include "syndro/dsl.hpp"
#include "syndro/error.hpp"
#include "syndro/learner.hpp"
#include "syndro/objective.hpp"
#include "syndro/report.hpp"
#include "syndro/service.hpp"
#include "syndro/syndrome.hpp"
#include "syndro/synthbench.hpp"
#include "syndro/time_index.hpp"
