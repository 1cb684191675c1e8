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

// hpspake: key generation, registration, a TCP login server and client, and
// the red-ball and attack experiments.

#include <algorithm>
#include <condition_variable>
#include <csignal>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hpspake/game.h"
#include "hpspake/redball.h"
#include "hpspake/store.h"
#include "hpspake/transcript.h"
#include "hpspake/transport.h"

namespace hpspake {
namespace {

int Fail(const absl::Status& st) {
  std::cerr << "error: " << st.message() << "\n";
  return 1;
}

// 2048 selects the fixed MODP group, <= 16 the toy profile, anything else a
// generated group with the hash KDF.
absl::StatusOr<PhfParams> ParamsForBits(int bits, uint64_t seed) {
  if (bits == 2048) return MakeDemoParams(seed);
  if (bits <= 16) return MakeToyParams(bits, seed);
  if (bits > 1024) {
    return absl::InvalidArgumentError(
        "generated groups are limited to 1024 bits; use 2048 for the fixed "
        "group");
  }
  return MakeHashedParams(bits, seed);
}

std::optional<std::string> OptionalFlag(const std::string& v) {
  if (v.empty()) return std::nullopt;
  return v;
}

std::string FormatRational(const mpq_class& q) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", q.get_d());
  return buf;
}

std::string FormatDouble(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

struct KeygenArgs {
  int bits = 64;
  uint64_t seed = 1;
  uint64_t dictionary = 16;
  std::string server_id = "S";
  std::string store;
};

int RunKeygen(const KeygenArgs& a) {
  auto pp = ParamsForBits(a.bits, a.seed);
  if (!pp.ok()) return Fail(pp.status());
  if (mpz_class(a.dictionary) >= pp->gp.q) {
    return Fail(absl::InvalidArgumentError("dictionary size must be below q"));
  }
  Rng rng = Rng::FromOs();
  auto [sk, proj] = Keygen(*pp, rng);
  const std::string dir = ResolveStoreDir(OptionalFlag(a.store));
  PublicParams pub{*pp, proj, a.server_id, a.dictionary};
  if (auto st = InitStore(dir, pub, sk); !st.ok()) return Fail(st);
  std::cout << "wrote " << dir << "/" << kServerFile << " and " << dir << "/"
            << kPublicFile << " (q: " << pp->gp.bits << " bits, kappa "
            << pp->kappa << ", N " << a.dictionary << ")\n";
  return 0;
}

struct RegisterArgs {
  std::string client;
  uint64_t password = 0;
  std::string store;
};

int RunRegister(const RegisterArgs& a) {
  Rng rng = Rng::FromOs();
  const std::string dir = ResolveStoreDir(OptionalFlag(a.store));
  if (auto st = RegisterClient(dir, a.client, a.password, rng); !st.ok()) {
    return Fail(st);
  }
  std::cout << "registered " << a.client << "\n";
  return 0;
}

struct ServeArgs {
  std::string addr = "127.0.0.1:7878";
  std::string mode = "square";
  std::string store;
  int max_sessions = 0;
};

int RunServe(const ServeArgs& a) {
  auto ep = ParseEndpoint(a.addr);
  if (!ep.ok()) return Fail(ep.status());
  auto mode = ParseMode(a.mode);
  if (!mode.ok()) return Fail(mode.status());
  auto store = LoadServerStore(ResolveStoreDir(OptionalFlag(a.store)));
  if (!store.ok()) return Fail(store.status());
  auto cfg = store->ToServerConfig(*mode);
  if (!cfg.ok()) return Fail(cfg.status());

  PakeServer server(std::move(*cfg), store->pub);
  if (auto st = server.Listen(*ep); !st.ok()) return Fail(st);

  std::mutex mu;
  std::condition_variable done;
  int sessions = 0;
  server.set_on_session([&](const SessionEvent& ev) {
    std::lock_guard lock(mu);
    if (ev.accepted) {
      std::cout << "session " << ev.client_id << " accepted, key fingerprint "
                << ev.fingerprint << std::endl;
    } else {
      std::cout << "session " << ev.client_id << " rejected" << std::endl;
    }
    ++sessions;
    done.notify_all();
  });
  std::cout << "listening on " << (ep->host.empty() ? "127.0.0.1" : ep->host)
            << ":" << server.port() << " mode " << ModeName(*mode)
            << std::endl;
  server.Start();

  sigset_t set;
  sigemptyset(&set);
  sigaddset(&set, SIGINT);
  sigaddset(&set, SIGTERM);
  if (a.max_sessions > 0) {
    std::unique_lock lock(mu);
    done.wait(lock, [&] { return sessions >= a.max_sessions; });
  } else {
    int sig = 0;
    sigwait(&set, &sig);
  }
  server.Stop();
  return 0;
}

struct LoginArgs {
  std::string addr = "127.0.0.1:7878";
  std::string client;
  uint64_t password = 0;
  std::string mode = "square";
  std::string store;
};

int RunLogin(const LoginArgs& a) {
  auto ep = ParseEndpoint(a.addr);
  if (!ep.ok()) return Fail(ep.status());
  auto mode = ParseMode(a.mode);
  if (!mode.ok()) return Fail(mode.status());
  // Prefer the distributed public.json; fall back to asking the server.
  absl::StatusOr<PublicParams> pub =
      LoadPublicParams(ResolveStoreDir(OptionalFlag(a.store)));
  if (!pub.ok()) pub = FetchPublicParams(*ep);
  if (!pub.ok()) return Fail(pub.status());
  Rng rng = Rng::FromOs();
  auto res = Login(*ep, *pub, a.client, a.password, *mode, rng);
  if (!res.ok()) {
    if (absl::IsPermissionDenied(res.status())) {
      std::cerr << "authentication rejected\n";
      return 2;
    }
    return Fail(res.status());
  }
  std::cout << "authenticated, key fingerprint " << res->fingerprint << "\n";
  return 0;
}

struct RedballArgs {
  std::vector<int> boxes;
  int t = 0;
  int ell = 0;
  uint64_t trials = 10000;
  uint64_t seed = 1;
  double alpha = -1;
};

int RunRedball(const RedballArgs& a) {
  auto inst = RedBallInstance::Make(a.boxes, a.t, a.ell);
  if (!inst.ok()) return Fail(inst.status());
  const mpq_class closed = ThetaClosedForm(*inst);
  auto dp = ThetaOptimalDp(*inst);
  const SimulationResult sim = SimulateGreedy(*inst, a.trials, a.seed);

  double alpha = a.alpha;
  if (alpha < 0) {
    const int a_min = *std::min_element(a.boxes.begin(), a.boxes.end());
    alpha = a.ell > 0 ? static_cast<double>(a.t) / (a.ell * a_min) : 0.5;
  }
  std::string bound = "1";
  if (alpha > 0 && alpha < 0.5) {
    auto b = HoeffdingBound(*std::min_element(a.boxes.begin(), a.boxes.end()),
                            BoundParams{alpha}, a.ell);
    if (!b.ok()) return Fail(b.status());
    bound = FormatDouble(*b);
  } else if (a.alpha >= 0) {
    return Fail(absl::InvalidArgumentError("alpha must lie in (0, 0.5)"));
  }
  if (!dp.ok()) std::cerr << "dp: " << dp.status().message() << "\n";

  std::cout << "closed_form,dp_value,empirical,hoeffding_bound\n"
            << FormatRational(closed) << ","
            << (dp.ok() ? FormatRational(*dp) : std::string("NA")) << ","
            << FormatDouble(sim.frequency) << "," << bound << "\n";
  return 0;
}

struct AttackArgs {
  std::string scenario = "guessing";
  uint64_t seed = 1;
  uint64_t trials = 0;
  std::string format = "csv";
  int bits = 64;
  std::string mode = "square";
};

int RunAttack(const AttackArgs& a) {
  auto pp = ParamsForBits(a.bits, a.seed);
  if (!pp.ok()) return Fail(pp.status());
  auto mode = ParseMode(a.mode);
  if (!mode.ok()) return Fail(mode.status());
  auto pick = [&](uint64_t dflt) { return a.trials ? a.trials : dflt; };

  std::vector<absl::StatusOr<ExperimentReport>> reports;
  if (a.scenario == "guessing") {
    GuessingConfig g;
    g.seed = a.seed;
    g.trials = pick(10000);
    g.mode = *mode;
    reports.push_back(RunOnlineGuessing(*pp, g));
    g.target = GuessingConfig::Target::kIsolation;
    reports.push_back(RunOnlineGuessing(*pp, g));
    g.target = GuessingConfig::Target::kDirect;
    reports.push_back(RunExecutePaired(*pp, g, 2));
  } else if (a.scenario == "insider") {
    InsiderConfig c;
    c.seed = a.seed;
    c.trials = pick(1000);
    c.mode = *mode;
    reports.push_back(RunInsiderAttack(*pp, c));
  } else if (a.scenario == "persistency") {
    PersistencyConfig c;
    c.seed = a.seed;
    c.trials = pick(10000);
    c.mode = *mode;
    reports.push_back(RunPersistency(*pp, c));
  } else if (a.scenario == "partnering") {
    PartneringConfig c;
    c.seed = a.seed;
    c.sessions = static_cast<int>(pick(1000));
    c.mode = *mode;
    reports.push_back(RunPartneringSuite(*pp, c));
  } else if (a.scenario == "secrecy") {
    SecrecyConfig c;
    c.seed = a.seed;
    c.trials = pick(10000);
    c.mode = *mode;
    reports.push_back(RunSecrecySmoke(*pp, c));
  } else {
    return Fail(absl::InvalidArgumentError("unknown scenario " + a.scenario));
  }

  bool all_pass = true;
  if (a.format == "json") std::cout << "[\n";
  for (size_t i = 0; i < reports.size(); ++i) {
    if (!reports[i].ok()) return Fail(reports[i].status());
    const ExperimentReport& r = *reports[i];
    all_pass = all_pass && r.pass;
    if (a.format == "json") {
      std::cout << r.Json() << (i + 1 < reports.size() ? ",\n" : "\n");
    } else {
      std::cout << r.CsvHeader() << "\n" << r.CsvRow() << "\n";
    }
  }
  if (a.format == "json") std::cout << "]\n";
  return all_pass ? 0 : 3;
}

struct TranscriptArgs {
  uint64_t seed = 1;
  std::string mode = "square";
  std::string out;
};

int RunTranscript(const TranscriptArgs& a) {
  auto mode = ParseMode(a.mode);
  if (!mode.ok()) return Fail(mode.status());
  auto t = MakeGoldenTranscript(a.seed, *mode);
  if (!t.ok()) return Fail(t.status());
  if (a.out.empty()) {
    std::cout << t->ToJson();
    return 0;
  }
  std::ofstream f(a.out);
  f << t->ToJson();
  if (!f) return Fail(absl::InternalError("cannot write " + a.out));
  return 0;
}

}  // namespace
}  // namespace hpspake

int main(int argc, char** argv) {
  using namespace hpspake;
  // serve waits for these with sigwait; block them before any thread starts.
  sigset_t set;
  sigemptyset(&set);
  sigaddset(&set, SIGINT);
  sigaddset(&set, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &set, nullptr);

  CLI::App app{"Asymmetric PAKE from tag-based hash proof systems"};
  app.require_subcommand(1);

  KeygenArgs keygen;
  auto* kg = app.add_subcommand("keygen", "Create server keys and a store");
  kg->add_option("--bits", keygen.bits, "Bits of q (2048: fixed MODP group)");
  kg->add_option("--seed", keygen.seed, "Seed for the public parameters");
  kg->add_option("--dictionary", keygen.dictionary, "Dictionary size N");
  kg->add_option("--server-id", keygen.server_id, "Server identity");
  kg->add_option("--store", keygen.store, "Store directory");

  RegisterArgs reg;
  auto* rg = app.add_subcommand("register", "Register a client password");
  rg->add_option("--client", reg.client, "Client id")->required();
  rg->add_option("--password", reg.password, "Password in [1, N]")->required();
  rg->add_option("--store", reg.store, "Store directory");

  ServeArgs serve;
  auto* sv = app.add_subcommand("serve", "Run the login server");
  sv->add_option("--addr", serve.addr, "host:port (port 0: ephemeral)");
  sv->add_option("--mode", serve.mode, "base | square");
  sv->add_option("--store", serve.store, "Store directory");
  sv->add_option("--max-sessions", serve.max_sessions,
                 "Exit after this many sessions (0: run until signalled)");

  LoginArgs login;
  auto* lg = app.add_subcommand("login", "Log in to a server");
  lg->add_option("--addr", login.addr, "host:port");
  lg->add_option("--client", login.client, "Client id")->required();
  lg->add_option("--password", login.password, "Password in [1, N]")->required();
  lg->add_option("--mode", login.mode, "base | square");
  lg->add_option("--store", login.store, "Directory holding public.json");

  RedballArgs rb;
  auto* rbc = app.add_subcommand("redball", "Red-ball values for one instance");
  rbc->add_option("--boxes", rb.boxes, "Box sizes, e.g. 2,2")
      ->required()
      ->delimiter(',');
  rbc->add_option("--t", rb.t, "Draw budget")->required();
  rbc->add_option("--ell", rb.ell, "Red balls needed")->required();
  rbc->add_option("--trials", rb.trials, "Monte Carlo trials");
  rbc->add_option("--seed", rb.seed, "Monte Carlo seed");
  rbc->add_option("--alpha", rb.alpha, "alpha for the tail bound");

  AttackArgs atk;
  auto* ac = app.add_subcommand("attack", "Run a scripted adversary");
  ac->add_option("--scenario", atk.scenario,
                 "guessing | insider | persistency | partnering | secrecy");
  ac->add_option("--seed", atk.seed, "Seed");
  ac->add_option("--trials", atk.trials, "Trials (0: scenario default)");
  ac->add_option("--format", atk.format, "csv | json");
  ac->add_option("--bits", atk.bits, "Group size, as for keygen");
  ac->add_option("--mode", atk.mode, "base | square");

  TranscriptArgs tr;
  auto* tc = app.add_subcommand("transcript", "Emit a toy-profile golden transcript");
  tc->add_option("--seed", tr.seed, "Seed");
  tc->add_option("--mode", tr.mode, "base | square");
  tc->add_option("--out", tr.out, "Output file (default stdout)");

  CLI11_PARSE(app, argc, argv);

  if (*kg) return RunKeygen(keygen);
  if (*rg) return RunRegister(reg);
  if (*sv) return RunServe(serve);
  if (*lg) return RunLogin(login);
  if (*rbc) return RunRedball(rb);
  if (*ac) return RunAttack(atk);
  if (*tc) return RunTranscript(tr);
  return 1;
}
