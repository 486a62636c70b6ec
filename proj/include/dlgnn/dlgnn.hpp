// Copyright 2026 The dlgnn Authors
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

#include "dlgnn/canonical.hpp"
#include "dlgnn/error.hpp"
#include "dlgnn/graph.hpp"
#include "dlgnn/graph_io.hpp"
#include "dlgnn/matrix.hpp"
#include "dlgnn/region.hpp"
#include "dlgnn/rng.hpp"
#include "dlgnn/walks.hpp"
#include "dlgnn/wl.hpp"
#include "dlgnn/nn/adam.hpp"
#include "dlgnn/nn/checkpoint.hpp"
#include "dlgnn/nn/model.hpp"
#include "dlgnn/nn/tape.hpp"
#include "dlgnn/nn/train.hpp"
#include "dlgnn/experiment/config.hpp"
#include "dlgnn/experiment/dataset.hpp"
#include "dlgnn/experiment/folds.hpp"
#include "dlgnn/experiment/io.hpp"
#include "dlgnn/experiment/reports.hpp"
#include "dlgnn/experiment/runner.hpp"
