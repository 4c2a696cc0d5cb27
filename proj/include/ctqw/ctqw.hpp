// Copyright 2026 The ctqw-fid Authors
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

#include "ctqw/decomposition.hpp"
#include "ctqw/errors.hpp"
#include "ctqw/generators.hpp"
#include "ctqw/graph.hpp"
#include "ctqw/graph_io.hpp"
#include "ctqw/invariants.hpp"
#include "ctqw/localization.hpp"
#include "ctqw/matrix.hpp"
#include "ctqw/spectral.hpp"
#include "ctqw/walk.hpp"
