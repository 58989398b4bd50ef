// SPDX-License-Identifier: Apache-2.0
//
// twoway-tc: transmission capacity analysis for two-way Poisson ad hoc networks
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy
// of the License at http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include "twoway/allocation.hpp"
#include "twoway/analytic.hpp"
#include "twoway/experiments.hpp"
#include "twoway/feedback.hpp"
#include "twoway/montecarlo.hpp"
#include "twoway/types.hpp"
