// Copyright 2026 The lsent Authors. All Rights Reserved.
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

#include "lsent/classifier.hpp"
#include "lsent/corpus.hpp"
#include "lsent/entropy.hpp"
#include "lsent/error.hpp"
#include "lsent/evaluation.hpp"
#include "lsent/grouping.hpp"
#include "lsent/levenshtein.hpp"
#include "lsent/pipeline.hpp"
#include "lsent/plugin.hpp"
#include "lsent/rng.hpp"
#include "lsent/sampling.hpp"
#include "lsent/synthesis.hpp"
#include "lsent/tokenize.hpp"
