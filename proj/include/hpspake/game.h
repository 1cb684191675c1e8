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

#ifndef HPSPAKE_GAME_H_
#define HPSPAKE_GAME_H_

#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "absl/status/statusor.h"
#include "hpspake/bytes.h"
#include "hpspake/pake.h"
#include "hpspake/parallel.h"
#include "hpspake/rng.h"
#include "hpspake/tag_phf.h"
#include "hpspake/wire.h"

namespace hpspake {

// Party 0 is the server; clients are 1..n.
inline constexpr int kServerParty = 0;

// One run of the oracle game: n clients with dictionary passwords, one
// server that is never corrupted, and an instance table keyed by
// (party, label). Messages cross the oracle boundary as encoded frames.
class World {
 public:
  struct Transcript {
    Bytes flow1;
    Bytes flow2;
    Bytes flow3;
  };

  struct Corruption {
    uint64_t password = 0;
    std::vector<Bytes> stats;
  };

  // passwords[i - 1] belongs to client i.
  static absl::StatusOr<World> Create(const PhfParams& params,
                                      uint64_t dictionary_size,
                                      const std::vector<uint64_t>& passwords,
                                      Mode mode, Rng rng);
  // Passwords drawn uniformly from {1..N} with `rng`.
  static absl::StatusOr<World> CreateRandom(const PhfParams& params,
                                            uint64_t dictionary_size,
                                            int clients, Mode mode, Rng rng);

  World(World&&) = default;
  World& operator=(World&&) = default;

  // Honest run between client i and the server; returns all three flows.
  absl::StatusOr<Transcript> Execute(int client, uint64_t client_label,
                                     uint64_t server_label);

  // d = 0: start client instance (msg ignored), reply Flow1.
  // d = 1: Flow1 to a fresh server instance, reply Flow2 or reject.
  // d = 2: Flow2 to a client instance, reply Flow3 or reject.
  // d = 3: Flow3 to a server instance, empty reply or reject.
  // Role/flow mismatches and label misuse are refused and not counted.
  absl::StatusOr<Bytes> Send(int d, int party, uint64_t label,
                             std::span<const uint8_t> msg);

  absl::StatusOr<BitString> Reveal(int party, uint64_t label);
  absl::StatusOr<Corruption> Corrupt(int client);
  absl::StatusOr<BitString> Test(int party, uint64_t label);

  const PhfSecretKey& LeakServerKey() {
    server_key_leaked_ = true;
    return server_.sk;
  }

  int clients() const { return static_cast<int>(client_cfgs_.size()); }
  uint64_t dictionary_size() const { return dictionary_size_; }
  const PhfParams& params() const { return server_.params; }
  const Projection& projection() const { return server_.proj; }
  const std::string& server_id() const { return server_.server_id; }
  const std::string& client_id(int client) const;
  Mode mode() const { return server_.mode; }
  const ServerConfig& server_config() const { return server_; }

  // Ground truth, for scoring only.
  uint64_t password(int client) const;
  bool hidden_bit() const { return hidden_bit_; }
  bool corrupted(int client) const { return corrupted_.contains(client); }
  bool server_key_leaked() const { return server_key_leaked_; }

  // Q_i for client i; Sends that name no registered client land in the
  // unattributed bucket.
  uint64_t send_count(int client) const;
  uint64_t unattributed_sends() const { return unattributed_sends_; }
  uint64_t total_sends() const { return total_sends_; }

  // Index i - 1 is Non-Auth_i: some accepted instance of client i (on
  // either side, with both ends uncorrupted) has partner count != 1.
  std::vector<bool> NonAuth() const;
  int PartnerCount(int party, uint64_t label) const;

  const SessionState* Instance(int party, uint64_t label) const;
  size_t instance_count() const { return instances_.size(); }

 private:
  struct InstanceEntry {
    SessionState state;
    int client = 0;  // Client(instance); 0 when unattributable
  };
  using Key = std::pair<int, uint64_t>;

  World(ServerConfig server, std::vector<ClientConfig> client_cfgs,
        uint64_t dictionary_size, Rng rng);

  int ClientIndex(std::string_view id) const;
  void Count(int client);
  bool IsTestPartner(const Key& key) const;

  ServerConfig server_;
  std::vector<ClientConfig> client_cfgs_;
  std::map<std::string, int, std::less<>> index_by_id_;
  uint64_t dictionary_size_ = 0;
  Rng rng_;
  std::map<Key, InstanceEntry> instances_;
  std::set<int> corrupted_;
  std::set<Key> revealed_;
  std::vector<uint64_t> send_counts_;
  uint64_t unattributed_sends_ = 0;
  uint64_t total_sends_ = 0;
  bool hidden_bit_ = false;
  std::optional<Key> tested_;
  bool server_key_leaked_ = false;
};

struct AttackOutcome {
  std::vector<bool> non_auth;  // index i - 1 for client i
  std::vector<uint64_t> send_counts;
  uint64_t unattributed_sends = 0;
  uint64_t total_sends = 0;
  uint64_t mac_steps = 0;
  int broken = 0;
  bool succ_test = false;

  static AttackOutcome From(const World& w);
};

// Aggregate of one named experiment. `frequency` is the success frequency,
// `expected` the model value it is compared against, `threshold` the
// decision bound in force.
struct ExperimentReport {
  std::string scenario;
  uint64_t trials = 0;
  uint64_t successes = 0;
  double frequency = 0;
  double sigma = 0;
  double expected = 0;
  double threshold = 0;
  bool pass = false;
  std::vector<std::pair<std::string, std::string>> details;
  std::string note;

  void Add(std::string key, std::string value);
  void Add(std::string key, double value);
  std::string CsvHeader() const;
  std::string CsvRow() const;
  std::string Json() const;
};

// |observed - p| <= 3 sqrt(p (1 - p) / n); for p = 0 or 1 the count must
// be exact.
bool WithinThreeSigma(uint64_t successes, uint64_t trials, double p);
double BinomialSigma(double p, uint64_t trials);

struct GuessingConfig {
  enum class Target {
    kDirect,     // all guesses at client 1's account
    kIsolation,  // all guesses at client 2; Non-Auth_1 is scored
  };
  uint64_t dictionary_size = 16;
  int clients = 2;
  int guesses = 4;
  uint64_t trials = 10000;
  uint64_t seed = 1;
  Target target = Target::kDirect;
  int executes = 0;  // honest Execute queries on client 1 before guessing
  Mode mode = Mode::kSquareTrick;
};

absl::StatusOr<ExperimentReport> RunOnlineGuessing(
    const PhfParams& params, const GuessingConfig& cfg,
    ExecutionPolicy policy = ExecutionPolicy::kParallel);

// Same seeds with and without Execute queries; PASS iff the Non-Auth_1
// frequencies agree within 3 sigma of their difference.
absl::StatusOr<ExperimentReport> RunExecutePaired(
    const PhfParams& params, GuessingConfig cfg, int executes,
    ExecutionPolicy policy = ExecutionPolicy::kParallel);

struct InsiderConfig {
  uint64_t dictionary_size = 16;
  int clients = 2;
  uint64_t trials = 1000;
  uint64_t seed = 1;
  Mode mode = Mode::kSquareTrick;
};

absl::StatusOr<ExperimentReport> RunInsiderAttack(
    const PhfParams& params, const InsiderConfig& cfg,
    ExecutionPolicy policy = ExecutionPolicy::kParallel);

struct PersistencyConfig {
  uint64_t dictionary_size = 32;
  int clients = 16;
  double alpha = 0.3;
  int ell = 10;
  uint64_t trials = 10000;
  uint64_t seed = 1;
  // MAC budget; defaults to floor(alpha * ell * N).
  std::optional<uint64_t> budget;
  Mode mode = Mode::kSquareTrick;
};

absl::StatusOr<ExperimentReport> RunPersistency(
    const PhfParams& params, const PersistencyConfig& cfg,
    ExecutionPolicy policy = ExecutionPolicy::kParallel);

struct PartneringConfig {
  int sessions = 1000;
  int clients = 4;
  uint64_t seed = 1;
  int duplicate_flow2_every = 7;
  int drop_flow3_every = 11;
  Mode mode = Mode::kSquareTrick;
};

absl::StatusOr<ExperimentReport> RunPartneringSuite(
    const PhfParams& params, const PartneringConfig& cfg);

struct SecrecyConfig {
  uint64_t trials = 10000;
  uint64_t seed = 1;
  Mode mode = Mode::kSquareTrick;
};

absl::StatusOr<ExperimentReport> RunSecrecySmoke(
    const PhfParams& params, const SecrecyConfig& cfg,
    ExecutionPolicy policy = ExecutionPolicy::kParallel);

}  // namespace hpspake

#endif  // HPSPAKE_GAME_H_
