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

#include "hpca/privacy.h"

#include <algorithm>
#include <vector>

#include "gtest/gtest.h"
#include "hpca/protocol.h"
#include "hpca/wire.h"

namespace hpca {
namespace {

SessionConfig Config(Method method, int parties) {
  SessionConfig cfg;
  cfg.method = method;
  cfg.parties = parties;
  cfg.k = 2;
  cfg.key_bits = 512;
  cfg.allow_test_keys = true;
  cfg.seed = 3;
  return cfg;
}

std::vector<Matrix> Parts(int parties) {
  std::vector<Matrix> out;
  for (int p = 0; p < parties; ++p) {
    Matrix m(4, 3);
    for (size_t r = 0; r < 4; ++r) {
      for (size_t c = 0; c < 3; ++c) m(r, c) = (p + 1) * (r + 1.0) + c * c * r;
    }
    out.push_back(m);
  }
  return out;
}

bool HasRule(const std::vector<Violation>& v, char rule) {
  return std::any_of(v.begin(), v.end(),
                     [rule](const Violation& x) { return x.rule == rule; });
}

TEST(PrivacyTest, CorrectRunsPass) {
  for (Method method : {Method::kHe, Method::kSs}) {
    for (int parties : {2, 3, 4}) {
      SessionConfig cfg = Config(method, parties);
      ProtocolResult r = *RunSimulated(cfg, Parts(parties));
      std::vector<Violation> v = AssertPrivacy(r.transcript, cfg);
      EXPECT_TRUE(v.empty()) << MethodName(method) << " M=" << parties << ": "
                             << (v.empty() ? "" : FormatViolation(v.front()));
    }
  }
}

class InjectedFaultTest : public ::testing::Test {
 protected:
  void SetUp() override {
    cfg_ = Config(Method::kHe, 3);
    transcript_ = RunSimulated(cfg_, Parts(3))->transcript;
  }
  std::vector<Violation> With(const ProtocolMessage& forged) {
    Transcript t = transcript_;
    t.messages.push_back(forged);
    return AssertPrivacy(t, cfg_);
  }
  SessionConfig cfg_;
  Transcript transcript_;
};

TEST_F(InjectedFaultTest, RawRowsToServer) {
  ProtocolMessage m{MessageType::kReducedRows, cfg_.provider(1), cfg_.server(),
                    99, EncodeRealMatrix(Parts(3)[1])};
  std::vector<Violation> v = With(m);
  EXPECT_TRUE(HasRule(v, 'a'));
  EXPECT_TRUE(HasRule(v, 'c'));
}

TEST_F(InjectedFaultTest, PlaintextSumsToAggregator) {
  const std::vector<double> sums = ColumnSums(Parts(3)[1]);
  ProtocolMessage m{MessageType::kEncryptedSums, cfg_.provider(1),
                    cfg_.aggregator, 99, EncodeRealVector(sums)};
  std::vector<Violation> v = With(m);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].rule, 'b');
  EXPECT_EQ(v[0].index, transcript_.messages.size());
}

TEST_F(InjectedFaultTest, ReducedRowsToProvider) {
  ProtocolMessage m{MessageType::kReducedRows, cfg_.provider(0),
                    cfg_.provider(2), 99, EncodeRealMatrix(Matrix(2, 2))};
  std::vector<Violation> v = With(m);
  EXPECT_TRUE(HasRule(v, 'a'));
  EXPECT_TRUE(HasRule(v, 'd'));
}

TEST_F(InjectedFaultTest, CiphertextSumsDirectlyToServer) {
  const ProtocolMessage* sums = nullptr;
  for (const ProtocolMessage& m : transcript_.messages) {
    if (m.type == MessageType::kEncryptedSums) sums = &m;
  }
  ASSERT_NE(sums, nullptr);
  ProtocolMessage m = *sums;
  m.receiver = cfg_.server();
  std::vector<Violation> v = With(m);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].rule, 'c');
}

TEST_F(InjectedFaultTest, ConsumerReceivesMean) {
  ProtocolMessage m{MessageType::kPlainMean, cfg_.server(), cfg_.consumer(), 99,
                    EncodeRealVector(std::vector<double>{1, 2, 3})};
  std::vector<Violation> v = With(m);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].rule, 'e');
}

TEST_F(InjectedFaultTest, UnknownReceiver) {
  ProtocolMessage m{MessageType::kPlainMean, cfg_.server(), 40, 99, {}};
  EXPECT_TRUE(HasRule(With(m), 'a'));
}

TEST(PrivacyTest, FormatViolationNamesRuleAndPosition) {
  Violation v{'c', 7, "x"};
  EXPECT_EQ(FormatViolation(v), "rule (c) at message 7: x");
}

}  // namespace
}  // namespace hpca
