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

// Session parameters shared by every role.
//
// Party ids are fixed by the party count M: the server is 0, data provider i
// (0-based) is i + 1, and the data consumer is M + 1.

#ifndef HPCA_SESSION_H_
#define HPCA_SESSION_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "hpca/encoding.h"
#include "hpca/linalg.h"
#include "hpca/message.h"
#include "hpca/prg.h"

namespace hpca {

enum class Method { kHe, kSs };

absl::StatusOr<Method> ParseMethod(std::string_view name);  // "he" | "ss"
std::string_view MethodName(Method method);

enum class Role { kServer, kProvider, kConsumer };

absl::StatusOr<Role> ParseRole(std::string_view name);
std::string_view RoleName(Role role);

struct SessionConfig {
  int parties = 2;  // M, the number of data providers
  Method method = Method::kHe;
  size_t k = 2;
  // Provider (party id) that aggregates ciphertexts on the HE path.
  PartyId aggregator = 1;
  FixedPointConfig fixed_point;
  FloatEncodingConfig float_encoding;
  int key_bits = 2048;
  bool allow_test_keys = false;
  // Fixed seed for reproducible runs. Without it every party draws its
  // randomness from the operating system.
  std::optional<uint64_t> seed;
  uint64_t session_id = 0;
  JacobiOptions jacobi;

  // Checks everything that does not depend on the data (k < d is checked
  // once d is known).
  absl::Status Validate() const;

  PartyId server() const { return 0; }
  PartyId provider(int index) const { return static_cast<PartyId>(index + 1); }
  PartyId consumer() const { return static_cast<PartyId>(parties + 1); }
  bool IsProvider(PartyId id) const { return id >= 1 && id <= parties; }
  int ProviderIndex(PartyId id) const { return static_cast<int>(id) - 1; }
  absl::StatusOr<Role> RoleOf(PartyId id) const;

  // Per-party randomness: a labelled stream of the fixed seed, or entropy.
  Prg MakePrg(PartyId party) const;
};

}  // namespace hpca

#endif  // HPCA_SESSION_H_
