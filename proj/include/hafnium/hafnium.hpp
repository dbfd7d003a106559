/*
 * Copyright 2026 The Hafnium Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include "hafnium/bench.hpp"
#include "hafnium/engine.hpp"
#include "hafnium/error.hpp"
#include "hafnium/lowrank.hpp"
#include "hafnium/matrix.hpp"
#include "hafnium/matrix_io.hpp"
#include "hafnium/oracle.hpp"
#include "hafnium/powertrace.hpp"
#include "hafnium/series.hpp"
