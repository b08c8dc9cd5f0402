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

#include "cli.h"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "absl/time/time.h"
#include "hpca/dataset.h"
#include "hpca/evaluation.h"
#include "hpca/privacy.h"
#include "hpca/protocol.h"
#include "hpca/roles.h"
#include "hpca/session.h"
#include "hpca/tcp_transport.h"

namespace hpca::cli {
namespace {

using nlohmann::json;

struct Settings {
  // Data.
  std::string input;
  std::string delimiter;  // empty: sniffed from the first line
  bool no_header = false;
  std::string label;
  // Session.
  int parties = 2;
  size_t k = 2;
  std::string method = "he";
  int aggregator = 1;
  int key_bits = 2048;
  bool test_keys = false;
  uint64_t seed = 1;
  bool has_seed = false;
  int ring_bits = 64;
  int frac_bits = 24;
  int base = 16;
  int precision = 14;
  uint64_t session_id = 0;
  double timeout_seconds = 30;
  std::string out;
  // compare
  std::string methods = "all";
  int folds = 5;
  bool standardize = false;
  std::string task = "auto";
  bool timings = false;
  // bench
  std::vector<int> bench_parties = {2, 3, 4};
  // role
  std::string role;
  int party = -1;
  std::string listen;
  std::vector<std::string> connect;
};

struct Failure {
  int code;
  std::string message;
};

absl::Status ApplyConfig(const json& j, Settings& s) {
  static const char* const kKeys[] = {
      "input",      "delimiter", "header",    "label",      "parties",
      "k",          "method",    "aggregator", "key_bits",  "test_keys",
      "seed",       "ring_bits", "frac_bits", "base",       "precision",
      "session_id", "timeout_seconds", "out", "methods",    "folds",
      "standardize", "task",     "timings",   "bench_parties", "role",
      "party",      "listen",    "peers"};
  if (!j.is_object()) {
    return absl::InvalidArgumentError("config must be a JSON object");
  }
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (const char* k : kKeys) known = known || key == k;
    if (!known) {
      return absl::InvalidArgumentError(
          absl::StrFormat("unknown config key '%s'", key));
    }
  }
  try {
    s.input = j.value("input", s.input);
    s.delimiter = j.value("delimiter", s.delimiter);
    s.no_header = !j.value("header", !s.no_header);
    s.label = j.value("label", s.label);
    s.parties = j.value("parties", s.parties);
    s.k = j.value("k", s.k);
    s.method = j.value("method", s.method);
    s.aggregator = j.value("aggregator", s.aggregator);
    s.key_bits = j.value("key_bits", s.key_bits);
    s.test_keys = j.value("test_keys", s.test_keys);
    if (j.contains("seed")) {
      s.seed = j.at("seed").get<uint64_t>();
      s.has_seed = true;
    }
    s.ring_bits = j.value("ring_bits", s.ring_bits);
    s.frac_bits = j.value("frac_bits", s.frac_bits);
    s.base = j.value("base", s.base);
    s.precision = j.value("precision", s.precision);
    s.session_id = j.value("session_id", s.session_id);
    s.timeout_seconds = j.value("timeout_seconds", s.timeout_seconds);
    s.out = j.value("out", s.out);
    s.methods = j.value("methods", s.methods);
    s.folds = j.value("folds", s.folds);
    s.standardize = j.value("standardize", s.standardize);
    s.task = j.value("task", s.task);
    s.timings = j.value("timings", s.timings);
    s.bench_parties = j.value("bench_parties", s.bench_parties);
    s.role = j.value("role", s.role);
    s.party = j.value("party", s.party);
    s.listen = j.value("listen", s.listen);
    if (j.contains("peers")) {
      for (const auto& [id, addr] : j.at("peers").items()) {
        s.connect.push_back(absl::StrCat(id, "=", addr.get<std::string>()));
      }
    }
  } catch (const json::exception& e) {
    return absl::InvalidArgumentError(
        absl::StrFormat("bad config value: %s", e.what()));
  }
  return absl::OkStatus();
}

absl::Status LoadConfigFile(const std::string& path, Settings& s) {
  std::ifstream in(path);
  if (!in) {
    return absl::NotFoundError(absl::StrFormat("cannot open config '%s'", path));
  }
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    return absl::InvalidArgumentError(
        absl::StrFormat("config '%s' is not valid JSON: %s", path, e.what()));
  }
  return ApplyConfig(j, s);
}

// Value of --config, if any, so the file can seed the settings before the
// flags override them.
std::optional<std::string> FindConfigPath(int argc, const char* const* argv) {
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--config" && i + 1 < argc) return std::string(argv[i + 1]);
    if (arg.rfind("--config=", 0) == 0) return arg.substr(9);
  }
  return std::nullopt;
}

absl::StatusOr<SessionConfig> BuildSession(const Settings& s) {
  SessionConfig cfg;
  absl::StatusOr<Method> method = ParseMethod(s.method);
  if (!method.ok()) return method.status();
  cfg.method = *method;
  cfg.parties = s.parties;
  cfg.k = s.k;
  if (s.aggregator < 0 || s.aggregator > 0xffff) {
    return absl::InvalidArgumentError("aggregator out of range");
  }
  cfg.aggregator = static_cast<PartyId>(s.aggregator);
  cfg.key_bits = s.key_bits;
  cfg.allow_test_keys = s.test_keys;
  if (s.has_seed) cfg.seed = s.seed;
  cfg.fixed_point.ring_bits = s.ring_bits;
  cfg.fixed_point.frac_bits = s.frac_bits;
  cfg.float_encoding.base = s.base;
  cfg.float_encoding.precision = s.precision;
  cfg.session_id = s.session_id;
  if (absl::Status st = cfg.Validate(); !st.ok()) return st;
  return cfg;
}

absl::StatusOr<char> ResolveDelimiter(const Settings& s,
                                      const std::string& text) {
  if (s.delimiter == "tab" || s.delimiter == "\\t") return '\t';
  if (s.delimiter.size() == 1) return s.delimiter[0];
  if (!s.delimiter.empty()) {
    return absl::InvalidArgumentError(
        absl::StrFormat("delimiter must be one character, got '%s'",
                        s.delimiter));
  }
  const std::string first = text.substr(0, text.find('\n'));
  char best = ',';
  size_t best_count = 0;
  for (char c : {',', ';', '\t'}) {
    const size_t count = std::count(first.begin(), first.end(), c);
    if (count > best_count) {
      best = c;
      best_count = count;
    }
  }
  return best;
}

// Loads --input. With `label_required` and no --label, the last column
// becomes the label.
absl::StatusOr<Dataset> LoadInput(const Settings& s, bool label_required) {
  if (s.input.empty()) return absl::InvalidArgumentError("--input is required");
  std::ifstream in(s.input, std::ios::binary);
  if (!in) {
    return absl::NotFoundError(absl::StrFormat("cannot open '%s'", s.input));
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  absl::StatusOr<char> delimiter = ResolveDelimiter(s, text);
  if (!delimiter.ok()) return delimiter.status();
  CsvOptions options;
  options.delimiter = *delimiter;
  options.header = !s.no_header;
  if (!s.label.empty()) options.label_column = s.label;
  absl::StatusOr<Dataset> ds = ParseCsv(text, options);
  if (!ds.ok()) {
    return absl::Status(ds.status().code(), absl::StrFormat(
        "%s: %s", s.input, ds.status().message()));
  }
  if (label_required && !ds->has_labels()) {
    const size_t d = ds->features.cols();
    if (d < 2) {
      return absl::InvalidArgumentError("need a label and at least one feature");
    }
    std::vector<double> values;
    for (size_t r = 0; r < ds->rows(); ++r) {
      for (size_t c = 0; c + 1 < d; ++c) values.push_back(ds->features(r, c));
      ds->labels.push_back(ds->features(r, d - 1));
    }
    absl::StatusOr<Matrix> features =
        Matrix::Create(ds->rows(), d - 1, std::move(values));
    if (!features.ok()) return features.status();
    ds->features = *std::move(features);
    ds->label_name = ds->feature_names.back();
    ds->feature_names.pop_back();
  }
  return ds;
}

absl::Status WriteText(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    return absl::PermissionDeniedError(
        absl::StrFormat("cannot write '%s'", path));
  }
  out << text;
  return out.good() ? absl::OkStatus()
                    : absl::DataLossError(absl::StrFormat("short write to '%s'", path));
}

std::vector<std::string> ComponentNames(size_t k) {
  std::vector<std::string> names;
  for (size_t i = 0; i < k; ++i) names.push_back(absl::StrCat("pc", i + 1));
  return names;
}

std::string TranscriptSummary(const Transcript& t) {
  std::string out = absl::StrFormat("messages: %d, payload bytes: %d\n",
                                    t.messages.size(), t.TotalPayloadBytes());
  for (const auto& [type, count] : t.CountByType()) {
    out += absl::StrFormat("  %-22s %d\n", std::string(MessageTypeName(type)),
                           count);
  }
  return out;
}

std::optional<Failure> RunSimulate(const Settings& s, std::ostream& out,
                                   std::ostream& err) {
  absl::StatusOr<SessionConfig> cfg = BuildSession(s);
  if (!cfg.ok()) return Failure{kExitUsage, std::string(cfg.status().message())};
  absl::StatusOr<Dataset> ds = LoadInput(s, false);
  if (!ds.ok()) return Failure{kExitData, std::string(ds.status().message())};
  absl::StatusOr<std::vector<Partition>> parts =
      PartitionHorizontal(*ds, cfg->parties, s.seed);
  if (!parts.ok()) return Failure{kExitData, std::string(parts.status().message())};
  std::vector<Matrix> data;
  for (const Partition& p : *parts) data.push_back(p.data.features);
  absl::StatusOr<ProtocolResult> result = RunSimulated(*cfg, data);
  if (!result.ok()) {
    return Failure{kExitProtocol, std::string(result.status().message())};
  }
  const std::vector<std::string> header = ComponentNames(cfg->k);
  const std::string csv = FormatCsv(result->reduced, header);
  std::ostream* summary = &err;
  if (s.out.empty()) {
    out << csv;
  } else {
    if (absl::Status st = WriteText(s.out, csv); !st.ok()) {
      return Failure{kExitData, std::string(st.message())};
    }
    summary = &out;
  }
  const std::vector<Violation> violations =
      AssertPrivacy(result->transcript, *cfg);
  *summary << absl::StrFormat(
      "method %s, providers %d, rows %d, features %d, k %d\n",
      std::string(MethodName(cfg->method)), cfg->parties, ds->rows(),
      ds->features.cols(), cfg->k);
  *summary << TranscriptSummary(result->transcript);
  if (!violations.empty()) {
    std::string detail;
    for (const Violation& v : violations) detail += FormatViolation(v) + "\n";
    return Failure{kExitProtocol, "privacy policy violated:\n" + detail};
  }
  *summary << "privacy policy: pass\n";
  return std::nullopt;
}

std::optional<Failure> RunCompare(const Settings& s, std::ostream& out,
                                  std::ostream&) {
  absl::StatusOr<SessionConfig> cfg = BuildSession(s);
  if (!cfg.ok()) return Failure{kExitUsage, std::string(cfg.status().message())};
  absl::StatusOr<std::vector<EvalMethod>> methods = ParseEvalMethods(s.methods);
  if (!methods.ok()) {
    return Failure{kExitUsage, std::string(methods.status().message())};
  }
  CompareOptions options;
  if (s.task == "regression") {
    options.task = Task::kRegression;
  } else if (s.task == "classification") {
    options.task = Task::kClassification;
  } else if (s.task != "auto") {
    return Failure{kExitUsage, absl::StrFormat("unknown task '%s'", s.task)};
  }
  absl::StatusOr<Dataset> ds = LoadInput(s, true);
  if (!ds.ok()) return Failure{kExitData, std::string(ds.status().message())};
  options.parties = cfg->parties;
  options.k = cfg->k;
  options.methods = *methods;
  options.seed = s.seed;
  options.folds = s.folds;
  options.standardize = s.standardize;
  options.session = *cfg;
  absl::StatusOr<std::vector<RunReport>> reports = Compare(*ds, options);
  if (!reports.ok()) {
    return Failure{kExitProtocol, std::string(reports.status().message())};
  }
  out << FormatReport(*reports, s.timings);
  if (!s.out.empty()) {
    if (absl::Status st = WriteText(s.out, FormatReportCsv(*reports));
        !st.ok()) {
      return Failure{kExitData, std::string(st.message())};
    }
  }
  for (const RunReport& r : *reports) {
    if (r.privacy_violations > 0) {
      return Failure{kExitProtocol,
                     absl::StrFormat("%s: %d privacy-policy violations",
                                     std::string(EvalMethodName(r.method)),
                                     r.privacy_violations)};
    }
  }
  return std::nullopt;
}

std::optional<Failure> RunBenchCommand(const Settings& s, std::ostream& out,
                                       std::ostream&) {
  Settings checked = s;
  // The party count is swept, so validate with the smallest one.
  if (!s.bench_parties.empty()) {
    checked.parties = *std::min_element(s.bench_parties.begin(),
                                        s.bench_parties.end());
  }
  absl::StatusOr<SessionConfig> cfg = BuildSession(checked);
  if (!cfg.ok()) return Failure{kExitUsage, std::string(cfg.status().message())};
  absl::StatusOr<Dataset> ds = LoadInput(s, false);
  if (!ds.ok()) return Failure{kExitData, std::string(ds.status().message())};
  BenchOptions options;
  options.parties = s.bench_parties;
  options.k = cfg->k;
  options.seed = s.seed;
  options.session = *cfg;
  absl::StatusOr<std::vector<BenchRow>> rows = RunBench(*ds, options);
  if (!rows.ok()) {
    return Failure{kExitProtocol, std::string(rows.status().message())};
  }
  out << FormatBench(*rows);
  for (const BenchRow& r : *rows) {
    if (!r.counts_match) {
      return Failure{kExitProtocol,
                     absl::StrFormat("message counts for %d providers differ "
                                     "from the protocol's",
                                     r.parties)};
    }
  }
  return std::nullopt;
}

std::optional<Failure> RunRole(const Settings& s, std::ostream& out,
                               std::ostream&) {
  absl::StatusOr<SessionConfig> cfg = BuildSession(s);
  if (!cfg.ok()) return Failure{kExitUsage, std::string(cfg.status().message())};
  absl::StatusOr<Role> role = ParseRole(s.role);
  if (!role.ok()) return Failure{kExitUsage, std::string(role.status().message())};
  PartyId id = cfg->server();
  std::optional<Matrix> data;
  if (*role == Role::kConsumer) id = cfg->consumer();
  if (*role == Role::kProvider) {
    if (s.party < 1 || s.party > cfg->parties) {
      return Failure{kExitUsage,
                     absl::StrFormat("--party must be in [1, %d] for a provider",
                                     cfg->parties)};
    }
    id = static_cast<PartyId>(s.party);
    absl::StatusOr<Dataset> ds = LoadInput(s, false);
    if (!ds.ok()) return Failure{kExitData, std::string(ds.status().message())};
    data = ds->features;
  }
  if (s.listen.empty()) return Failure{kExitUsage, "--listen is required"};
  absl::StatusOr<TcpAddress> listen = ParseTcpAddress(s.listen);
  if (!listen.ok()) {
    return Failure{kExitUsage, std::string(listen.status().message())};
  }
  std::map<PartyId, TcpAddress> peers;
  for (const std::string& entry : s.connect) {
    const size_t eq = entry.find('=');
    uint32_t peer = 0;
    if (eq == std::string::npos || !absl::SimpleAtoi(entry.substr(0, eq), &peer) ||
        peer > 0xffff) {
      return Failure{kExitUsage,
                     absl::StrFormat("--connect expects ID=host:port, got '%s'",
                                     entry)};
    }
    absl::StatusOr<TcpAddress> addr = ParseTcpAddress(entry.substr(eq + 1));
    if (!addr.ok()) return Failure{kExitUsage, std::string(addr.status().message())};
    peers[static_cast<PartyId>(peer)] = *addr;
  }
  absl::StatusOr<std::unique_ptr<RoleMachine>> machine =
      MakeRole(*cfg, id, std::move(data));
  if (!machine.ok()) {
    return Failure{kExitUsage, std::string(machine.status().message())};
  }
  absl::StatusOr<std::unique_ptr<TcpTransport>> transport =
      TcpTransport::Listen(id, cfg->session_id, *listen);
  if (!transport.ok()) {
    return Failure{kExitProtocol, std::string(transport.status().message())};
  }
  const absl::Duration timeout = absl::Seconds(s.timeout_seconds);
  (*transport)->SetPeers(peers);
  (*transport)->set_connect_timeout(timeout);
  if (absl::Status st = DriveRole(**machine, **transport, timeout); !st.ok()) {
    return Failure{kExitProtocol, std::string(st.message())};
  }
  if (*role == Role::kConsumer) {
    const auto& consumer = static_cast<const ConsumerRole&>(**machine);
    const std::string csv = FormatCsv(consumer.reduced(), ComponentNames(cfg->k));
    if (s.out.empty()) {
      out << csv;
    } else if (absl::Status st = WriteText(s.out, csv); !st.ok()) {
      return Failure{kExitData, std::string(st.message())};
    }
  } else if (*role == Role::kServer) {
    const auto& server = static_cast<const ServerRole&>(**machine);
    out << absl::StrFormat("server done: %d rows, eigenvalues %s\n",
                           server.total_rows(),
                           absl::StrJoin(server.eigenvalues(), " "));
  } else {
    out << absl::StrFormat("provider %d done\n", id);
  }
  return std::nullopt;
}

void AddDataOptions(CLI::App* app, Settings& s) {
  app->add_option("--input", s.input, "CSV file");
  app->add_option("--delimiter", s.delimiter,
                  "Field delimiter (one character or 'tab'); sniffed if unset");
  app->add_flag("--no-header", s.no_header, "The CSV has no header line");
  app->add_option("--label", s.label, "Label column (name, or index without a header)");
}

void AddSessionOptions(CLI::App* app, Settings& s, bool party_count,
                       CLI::Option*& seed) {
  app->add_option("--config", "JSON config file; flags override its values");
  if (party_count) {
    app->add_option("--parties", s.parties, "Number of data providers M");
  }
  app->add_option("--k", s.k, "Target dimension");
  app->add_option("--method", s.method, "he or ss");
  app->add_option("--aggregator", s.aggregator,
                  "Provider party id that aggregates ciphertexts (he)");
  app->add_option("--key-bits", s.key_bits, "Paillier modulus size");
  app->add_flag("--test-keys", s.test_keys, "Allow 512-bit keys");
  seed = app->add_option("--seed", s.seed, "Fixed seed for reproducible runs");
  app->add_option("--ring-bits", s.ring_bits, "Secret-sharing ring width l");
  app->add_option("--frac-bits", s.frac_bits, "Fixed-point fractional bits f");
  app->add_option("--base", s.base, "Float-encoding base B");
  app->add_option("--precision", s.precision, "Float-encoding digits");
  app->add_option("--out", s.out, "Output file");
}

}  // namespace

int Main(int argc, const char* const* argv, std::ostream& out,
         std::ostream& err) {
  Settings s;
  if (std::optional<std::string> path = FindConfigPath(argc, argv)) {
    if (absl::Status st = LoadConfigFile(*path, s); !st.ok()) {
      err << "error: " << st.message() << "\n";
      return kExitUsage;
    }
  }

  CLI::App app{"Joint PCA over horizontally partitioned data", "hpca"};
  app.require_subcommand(1);
  std::vector<CLI::Option*> seeds;
  auto add_common = [&](CLI::App* sub, bool party_count = true) {
    CLI::Option* seed = nullptr;
    AddDataOptions(sub, s);
    AddSessionOptions(sub, s, party_count, seed);
    seeds.push_back(seed);
  };

  CLI::App* simulate =
      app.add_subcommand("simulate", "Run every role in one process");
  add_common(simulate);

  CLI::App* role = app.add_subcommand("role", "Run one role over TCP");
  add_common(role);
  role->add_option("--role", s.role, "server, provider or consumer");
  role->add_option("--party", s.party, "Provider party id in [1, M]");
  role->add_option("--listen", s.listen, "host:port to listen on");
  role->add_option("--connect", s.connect, "Peer address as ID=host:port")
      ->take_all();
  role->add_option("--session-id", s.session_id, "Session identifier");
  role->add_option("--timeout", s.timeout_seconds, "Receive timeout, seconds");

  CLI::App* compare = app.add_subcommand(
      "compare", "Cross-validated comparison against centralized PCA");
  add_common(compare);
  compare->add_option("--methods", s.methods,
                      "Comma list of centralized, separate, pppca-he, "
                      "pppca-ss, or all");
  compare->add_option("--folds", s.folds, "Cross-validation folds");
  compare->add_flag("--standardize", s.standardize,
                    "Scale features to unit variance per training fold");
  compare->add_option("--task", s.task, "auto, regression or classification");
  compare->add_flag("--timings", s.timings, "Add per-phase seconds");

  CLI::App* bench =
      app.add_subcommand("bench", "Protocol time and messages per party count");
  add_common(bench, /*party_count=*/false);
  bench->add_option("--parties", s.bench_parties, "Party counts, e.g. 2,3,4")
      ->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }
  for (CLI::Option* seed : seeds) {
    if (seed != nullptr && seed->count() > 0) s.has_seed = true;
  }
  std::optional<Failure> failure;
  if (simulate->parsed()) {
    failure = RunSimulate(s, out, err);
  } else if (role->parsed()) {
    failure = RunRole(s, out, err);
  } else if (compare->parsed()) {
    failure = RunCompare(s, out, err);
  } else if (bench->parsed()) {
    failure = RunBenchCommand(s, out, err);
  }
  if (failure.has_value()) {
    err << "error: " << failure->message << "\n";
    return failure->code;
  }
  return kExitOk;
}

}  // namespace hpca::cli
