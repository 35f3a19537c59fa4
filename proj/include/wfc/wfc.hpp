// Copyright 2026 The wfc Authors
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

// Umbrella header.

#include "wfc/error.hpp"
#include "wfc/explorer.hpp"
#include "wfc/frontier.hpp"
#include "wfc/hash.hpp"
#include "wfc/metrics.hpp"
#include "wfc/profile_store.hpp"
#include "wfc/proxy.hpp"
#include "wfc/rng.hpp"
#include "wfc/selector.hpp"
#include "wfc/simulator.hpp"
#include "wfc/types.hpp"
#include "wfc/workflow_ir.hpp"
