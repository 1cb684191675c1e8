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

#ifndef HPSPAKE_TESTS_TEST_UTIL_H_
#define HPSPAKE_TESTS_TEST_UTIL_H_

#include "hpspake/tag_phf.h"

namespace hpspake::testing {

// q = 11, p = 23.
inline const PhfParams& TinyParams() {
  static const PhfParams pp = *MakeToyParams(4, 1);
  return pp;
}

// Largest toy group: q just under 2^16, least-bits KDF, kappa = 8.
inline const PhfParams& ToyParams() {
  static const PhfParams pp = *MakeToyParams(16, 7);
  return pp;
}

// 64-bit q with the hash KDF and kappa = 128.
inline const PhfParams& HashedParams() {
  static const PhfParams pp = *MakeHashedParams(64, 11);
  return pp;
}

}  // namespace hpspake::testing

#endif  // HPSPAKE_TESTS_TEST_UTIL_H_
