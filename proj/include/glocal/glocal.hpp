// Copyright 2026 The glocal Authors
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

// Umbrella header.

#pragma once

#include "glocal/config.hpp"
#include "glocal/degeneracy.hpp"
#include "glocal/dynamics.hpp"
#include "glocal/energetics.hpp"
#include "glocal/equilibration.hpp"
#include "glocal/errors.hpp"
#include "glocal/experiment.hpp"
#include "glocal/gaussian.hpp"
#include "glocal/gge.hpp"
#include "glocal/lattice.hpp"
#include "glocal/scalar_search.hpp"
#include "glocal/thermometry.hpp"
#include "glocal/tolerances.hpp"
