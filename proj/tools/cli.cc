// Copyright 2026 The memassist Authors. All rights reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.h"

#include <signal.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "memassist/experiment_config.h"
#include "memassist/http_server.h"
#include "memassist/metrics.h"
#include "memassist/policy_eval.h"
#include "memassist/qlearn.h"
#include "memassist/session.h"

namespace memassist {
namespace {

namespace fs = std::filesystem;

struct GlobalFlags {
  std::optional<uint64_t> seed;
  std::string config;
  std::optional<std::string> out;
  std::optional<std::string> mode;
};

struct TrainFlags {
  std::optional<int> episodes;
};

struct SimulateFlags {
  std::optional<std::string> policy;
  std::optional<int> games;
  int threads = 1;
  std::string format = "csv";
};

struct EvalFlags {
  std::string policy;
  std::string json;
};

struct CompareFlags {
  std::string a;
  std::string b;
  std::string json;
};

struct ExportFlags {
  std::string input;
  std::string format;
};

struct ServeFlags {
  std::string listen = "127.0.0.1:8080";
  std::string policies = "policies";
  std::string logs = "session_logs";
};

ExperimentConfig BuildConfig(const GlobalFlags& g) {
  ExperimentConfig c = g.config.empty() ? ExperimentConfig{} : LoadExperimentConfig(g.config);
  if (g.seed) c.seed = *g.seed;
  if (g.out) c.out = *g.out;
  if (g.mode) c.mode = ModeFromString(*g.mode);
  return c;
}

void WriteFile(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << content;
  if (!f) throw std::runtime_error("write failed: " + path.string());
}

std::optional<TemplateSet> LoadTemplates(const ExperimentConfig& c) {
  if (c.templates.empty()) return std::nullopt;
  try {
    return TemplateSet::Load(c.templates);
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
}

std::string Line(const char* fmt, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), fmt, args...);
  return buf;
}

int CmdTrain(const GlobalFlags& g, const TrainFlags& t, std::ostream& out) {
  ExperimentConfig c = BuildConfig(g);
  if (t.episodes) c.episodes = *t.episodes;
  c.Validate();
  TrainResult r = Train(ToTrainOptions(c));
  r.table.meta.experiment = ExperimentConfigToJson(c);
  const fs::path dir(c.out);
  fs::create_directories(dir);
  SaveQTable(r.table, (dir / "qtable.json").string());
  WriteFile(dir / "training_curve.csv", TrainingCurveToCsv(c, r.curve));
  out << Line("trained %d episodes (seed %llu, mode %s)\n", c.episodes,
              static_cast<unsigned long long>(c.seed), std::string(ToString(c.mode)).c_str());
  out << "wrote " << (dir / "qtable.json").string() << " and "
      << (dir / "training_curve.csv").string() << '\n';
  return kExitOk;
}

int CmdSimulate(const GlobalFlags& g, const SimulateFlags& s, std::ostream& out) {
  ExperimentConfig c = BuildConfig(g);
  if (s.policy) c.policy = *s.policy;
  if (s.games) c.n_games = *s.games;
  c.Validate();
  const ExportFormat format = FormatFromString(s.format);

  std::optional<QTable> policy;
  if (c.policy != kPolicyNone && c.policy != kPolicyPerfect) {
    try {
      policy = LoadQTable(c.policy);
    } catch (const std::exception& e) {
      throw ConfigError("cannot load policy " + c.policy + ": " + e.what());
    }
  }
  const std::optional<TemplateSet> templates = LoadTemplates(c);
  SimulationOptions opts = ToSimulationOptions(c, policy ? &*policy : nullptr,
                                               templates ? &*templates : nullptr);
  opts.threads = s.threads;

  RunStats stats{c, Simulate(opts)};
  const fs::path path =
      fs::path(c.out) / (format == ExportFormat::kCsv ? "simulation.csv" : "simulation.json");
  fs::create_directories(c.out);
  WriteRunStats(stats, path.string(), format);

  for (Metric m : kAllMetrics) {
    const Aggregate a = stats.Of(m);
    out << Line("%-24s mean %10.4f  sd %9.4f  n %d\n", std::string(ToString(m)).c_str(),
                a.mean, a.sd, a.count);
  }
  out << Line("completed %d/%d\n", stats.completed(), static_cast<int>(stats.games.size()));
  out << "wrote " << path.string() << '\n';
  return kExitOk;
}

int CmdEval(const EvalFlags& e, std::ostream& out) {
  QTable q;
  try {
    q = LoadQTable(e.policy);
  } catch (const std::exception& ex) {
    throw ConfigError("cannot load policy " + e.policy + ": " + ex.what());
  }
  const PolicyReport r = EvaluatePolicy(q);
  out << FormatPolicyGrid(r) << '\n' << FormatPolicyChecks(r);
  if (!e.json.empty()) WriteFile(e.json, PolicyReportToJson(r).dump(2) + "\n");
  return r.all_pass() ? kExitOk : kExitCheckFailed;
}

RunStats ReadStatsOrThrow(const std::string& path) {
  try {
    return ReadRunStats(path);
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

int CmdCompare(const CompareFlags& f, std::ostream& out) {
  const RunStats a = ReadStatsOrThrow(f.a);
  const RunStats b = ReadStatsOrThrow(f.b);
  const CompareReport r = Compare(a, b);
  out << "A = " << f.a << "\nB = " << f.b << '\n' << FormatCompareReport(r, "A", "B");
  if (!f.json.empty()) WriteFile(f.json, CompareReportToJson(r).dump(2) + "\n");
  return kExitOk;
}

int CmdExport(const GlobalFlags& g, const ExportFlags& f, std::ostream& out) {
  const RunStats stats = ReadStatsOrThrow(f.input);
  const ExportFormat format = FormatFromString(f.format);
  const fs::path dir(g.out.value_or("."));
  fs::create_directories(dir);
  const fs::path path = dir / (fs::path(f.input).stem().string() +
                               (format == ExportFormat::kCsv ? ".csv" : ".json"));
  if (fs::exists(path) && fs::equivalent(path, f.input)) {
    throw ConfigError("refusing to overwrite the input file " + f.input);
  }
  WriteRunStats(stats, path.string(), format);
  out << "wrote " << path.string() << " (" << stats.games.size() << " games)\n";
  return kExitOk;
}

int CmdServe(const ServeFlags& f, std::ostream& out) {
  const std::size_t colon = f.listen.rfind(':');
  if (colon == std::string::npos) throw ConfigError("--listen must be host:port");
  ServerOptions opts;
  opts.address = f.listen.substr(0, colon);
  try {
    const int port = std::stoi(f.listen.substr(colon + 1));
    if (port < 0 || port > 65535) throw std::out_of_range("port");
    opts.port = static_cast<uint16_t>(port);
  } catch (const std::exception&) {
    throw ConfigError("bad port in --listen " + f.listen);
  }

  // Block the stop signals before any thread starts so only sigwait sees them.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  PolicyCatalog catalog(f.policies);
  SessionManagerOptions sopts;
  sopts.log_dir = f.logs;
  SessionManager sessions(&catalog, sopts);
  HttpServer server(&sessions, &catalog, opts);
  server.Start();
  out << "listening on " << opts.address << ':' << server.port() << " (policies "
      << f.policies << ", logs " << f.logs << ")" << std::endl;
  int sig = 0;
  sigwait(&signals, &sig);
  server.Stop();
  out << "stopped\n";
  return kExitOk;
}

}  // namespace

int RunCli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Train, simulate and serve the memory-game assistant"};
  app.require_subcommand(1);

  GlobalFlags g;
  app.add_option("--seed", g.seed, "Base seed");
  app.add_option("--config", g.config, "Experiment config JSON");
  app.add_option("--out", g.out, "Output directory");
  app.add_option("--mode", g.mode, "Assistance mode")->check(CLI::IsMember({"tom", "notom"}));

  TrainFlags tf;
  CLI::App* train = app.add_subcommand("train", "Train a Q-table");
  train->fallthrough();
  train->add_option("--episodes", tf.episodes, "Training episodes")->check(CLI::PositiveNumber);

  SimulateFlags sf;
  CLI::App* simulate = app.add_subcommand("simulate", "Run seeded batch games");
  simulate->fallthrough();
  simulate->add_option("--policy", sf.policy, "Q-table path, 'perfect' or 'none'");
  simulate->add_option("--games", sf.games, "Number of games")->check(CLI::PositiveNumber);
  simulate->add_option("--threads", sf.threads, "Worker threads")->check(CLI::PositiveNumber);
  simulate->add_option("--format", sf.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));

  EvalFlags ef;
  CLI::App* eval = app.add_subcommand("eval-policy", "Check a trained policy's structure");
  eval->fallthrough();
  eval->add_option("policy", ef.policy, "Q-table path")->required();
  eval->add_option("--json", ef.json, "Also write the report as JSON");

  CompareFlags cf;
  CLI::App* compare = app.add_subcommand("compare", "Compare two simulation runs");
  compare->fallthrough();
  compare->add_option("a", cf.a, "First run (csv or json)")->required();
  compare->add_option("b", cf.b, "Second run (csv or json)")->required();
  compare->add_option("--json", cf.json, "Also write the report as JSON");

  ExportFlags xf;
  CLI::App* exp = app.add_subcommand("export", "Convert a run between csv and json");
  exp->fallthrough();
  exp->add_option("input", xf.input, "Run file (csv or json)")->required();
  exp->add_option("--format", xf.format, "csv or json")
      ->required()
      ->check(CLI::IsMember({"csv", "json"}));

  ServeFlags vf;
  CLI::App* serve = app.add_subcommand("serve", "Run the live play server");
  serve->fallthrough();
  serve->add_option("--listen", vf.listen, "host:port")->envname("MEMASSIST_LISTEN");
  serve->add_option("--policies", vf.policies, "Policy directory")
      ->envname("MEMASSIST_POLICY_DIR");
  serve->add_option("--logs", vf.logs, "Session log directory")->envname("MEMASSIST_LOG_DIR");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*train) return CmdTrain(g, tf, out);
    if (*simulate) return CmdSimulate(g, sf, out);
    if (*eval) return CmdEval(ef, out);
    if (*compare) return CmdCompare(cf, out);
    if (*exp) return CmdExport(g, xf, out);
    if (*serve) return CmdServe(vf, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  return kExitUsage;
}

}  // namespace memassist
