/*
 * Copyright 2026 The mixcmi Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *   http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include "mixcmi/bins.hpp"
#include "mixcmi/causal.hpp"
#include "mixcmi/chi2.hpp"
#include "mixcmi/citest.hpp"
#include "mixcmi/column.hpp"
#include "mixcmi/complexity.hpp"
#include "mixcmi/datagen.hpp"
#include "mixcmi/dataset.hpp"
#include "mixcmi/error.hpp"
#include "mixcmi/estimators.hpp"
#include "mixcmi/grid.hpp"
#include "mixcmi/hist1d.hpp"
#include "mixcmi/histmd.hpp"
#include "mixcmi/parallel.hpp"
