// SPDX-License-Identifier: Apache-2.0
//
// Copyright 2026 The irs-cache-dof Authors
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

#include "irscache/common.hpp"
#include "irscache/combinatorics.hpp"
#include "irscache/params.hpp"
#include "irscache/channel_model.hpp"
#include "irscache/cache_placement.hpp"
#include "irscache/delivery_scheduler.hpp"
#include "irscache/irs_configurator.hpp"
#include "irscache/zf_precoder.hpp"
#include "irscache/dof_analytics.hpp"
#include "irscache/link_simulator.hpp"
#include "irscache/io.hpp"
