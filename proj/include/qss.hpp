// Copyright 2026 The qss-sim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#pragma once

#include "qss/adversary.hpp"
#include "qss/bitvec.hpp"
#include "qss/config.hpp"
#include "qss/driver.hpp"
#include "qss/empirical.hpp"
#include "qss/entangle.hpp"
#include "qss/error.hpp"
#include "qss/leakage.hpp"
#include "qss/metrics.hpp"
#include "qss/protocol.hpp"
#include "qss/qsim.hpp"
#include "qss/random.hpp"
#include "qss/report_json.hpp"
#include "qss/stats.hpp"
#include "qss/threshold.hpp"
#include "qss/transcript.hpp"
