/*
 * Copyright 2026 The hpca Authors.
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

// Message-routing policy over a transcript. The transcript is everything the
// honest-but-curious parties see, so the policy is checked per delivered
// message against the receiver's role:
//   (a) reduced rows reach only the consumer;
//   (b) the HE aggregator receives ciphertext matrices from providers, plus
//       server broadcasts and sample counts;
//   (c) the server receives only aggregates (HE aggregates, SS local share
//       sums) and sample counts;
//   (d) a provider receives only server broadcasts (public key, mean,
//       transfer matrix), shares on the SS path and sample counts;
//   (e) the consumer receives only reduced rows.

#ifndef HPCA_PRIVACY_H_
#define HPCA_PRIVACY_H_

#include <cstddef>
#include <string>
#include <vector>

#include "hpca/message.h"
#include "hpca/session.h"

namespace hpca {

struct Violation {
  char rule = '?';  // 'a' .. 'e'
  size_t index = 0;  // position in the transcript
  std::string detail;
};

// Empty when the transcript complies.
std::vector<Violation> AssertPrivacy(const Transcript& transcript,
                                     const SessionConfig& cfg);

std::string FormatViolation(const Violation& v);

}  // namespace hpca

#endif  // HPCA_PRIVACY_H_
