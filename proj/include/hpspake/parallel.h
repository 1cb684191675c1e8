/*
 * Copyright 2026 The hpspake Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef HPSPAKE_PARALLEL_H_
#define HPSPAKE_PARALLEL_H_

#include <cstdint>

namespace hpspake {

// Every data-parallel kernel ships with a serial reference path. The two
// must produce bit-identical results; tests compare them and the benchmark
// target times them against each other.
enum class ExecutionPolicy { kSerial, kParallel };

int MaxThreads();

}  // namespace hpspake

#endif  // HPSPAKE_PARALLEL_H_
