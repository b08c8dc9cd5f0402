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

#include "hpca/session.h"

#include "absl/strings/str_cat.h"
#include <string>

#include "absl/strings/str_format.h"

namespace hpca {

absl::StatusOr<Method> ParseMethod(std::string_view name) {
  if (name == "he") return Method::kHe;
  if (name == "ss") return Method::kSs;
  return absl::InvalidArgumentError(
      absl::StrFormat("unknown method '%s' (expected he or ss)",
                      std::string(name)));
}

std::string_view MethodName(Method method) {
  return method == Method::kHe ? "he" : "ss";
}

absl::StatusOr<Role> ParseRole(std::string_view name) {
  if (name == "server") return Role::kServer;
  if (name == "provider") return Role::kProvider;
  if (name == "consumer") return Role::kConsumer;
  return absl::InvalidArgumentError(absl::StrFormat(
      "unknown role '%s' (expected server, provider or consumer)",
      std::string(name)));
}

std::string_view RoleName(Role role) {
  switch (role) {
    case Role::kServer:
      return "server";
    case Role::kProvider:
      return "provider";
    case Role::kConsumer:
      return "consumer";
  }
  return "unknown";
}

absl::Status SessionConfig::Validate() const {
  if (parties < 2) {
    return absl::InvalidArgumentError(
        absl::StrFormat("need at least 2 data providers, got %d", parties));
  }
  if (parties > 1000) {
    return absl::InvalidArgumentError(
        absl::StrFormat("too many data providers: %d", parties));
  }
  if (k < 1) return absl::InvalidArgumentError("k must be at least 1");
  if (method == Method::kHe &&
      (aggregator < 1 || static_cast<int>(aggregator) > parties - 1)) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "aggregator must be a provider in [1, %d], got %d", parties - 1,
        aggregator));
  }
  if (absl::Status s = fixed_point.Validate(); !s.ok()) return s;
  if (absl::Status s = float_encoding.Validate(); !s.ok()) return s;
  if (key_bits != 512 && key_bits != 1024 && key_bits != 2048 &&
      key_bits != 3072) {
    return absl::InvalidArgumentError(
        absl::StrFormat("unsupported key size %d", key_bits));
  }
  if (key_bits == 512 && !allow_test_keys) {
    return absl::InvalidArgumentError("512-bit keys require test mode");
  }
  return absl::OkStatus();
}

absl::StatusOr<Role> SessionConfig::RoleOf(PartyId id) const {
  if (id == server()) return Role::kServer;
  if (IsProvider(id)) return Role::kProvider;
  if (id == consumer()) return Role::kConsumer;
  return absl::InvalidArgumentError(
      absl::StrFormat("party %d is not part of a %d-provider session", id,
                      parties));
}

Prg SessionConfig::MakePrg(PartyId party) const {
  if (seed.has_value()) {
    return Prg::FromSeed(*seed, absl::StrCat("party-", party));
  }
  return Prg::FromEntropy();
}

}  // namespace hpca
