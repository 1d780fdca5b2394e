#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "moran/analytic.hpp"
#include "moran/count_sim.hpp"
#include "moran/lineage.hpp"
#include "moran/moran_sim.hpp"
#include "moran/reference.hpp"
#include "moran/verify.hpp"

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

void check_keys(const json& j, const std::string& where,
                std::initializer_list<const char*> allowed) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* k : allowed) ok = ok || it.key() == k;
    if (!ok)
      throw moran::domain_error("config: unknown key \"" + it.key() + "\" in " +
                                where);
  }
}

json default_config() {
  return json{
      {"version", 1},
      {"model", {{"n", 2}, {"N", 100}, {"alpha", 0.5}, {"s0", 1.0}, {"m", 1.0}}},
      {"window", {{"lo", -40}, {"hi", 40}, {"center", 0.0}}},
      {"simulate",
       {{"T", 5.0},
        {"snapshot_cadence", 0.1},
        {"filter", "off"},
        {"boundary", "pinned"},
        {"log_t_min", 0.0}}},
      {"trace", {{"T", 5.0}, {"horizon", 2.5}, {"k", 2}, {"K0", 1.0}}},
      {"pde", {{"T", 5.0}, {"dt", 0.0}, {"cadence", 0.1}}},
      {"sde",
       {{"z0", 0.0},
        {"T", 100.0},
        {"dt", 1e-3},
        {"burn_in", 0.0},
        {"thin", 1},
        {"samples", 0}}},
      {"kingman", {{"k", 5}, {"reps", 100}}},
      {"verify", {{"criteria", json::array()}}}};
}

json merge_config(const std::string& path) {
  json cfg = default_config();
  if (path.empty()) return cfg;
  std::ifstream in(path);
  if (!in) throw moran::domain_error("config: cannot open " + path);
  json user = json::parse(in);
  check_keys(user, "top level",
             {"version", "model", "window", "simulate", "trace", "pde", "sde",
              "kingman", "verify"});
  if (!user.contains("version") || user["version"] != 1)
    throw moran::domain_error("config: missing or unsupported \"version\" (expect 1)");
  for (auto it = user.begin(); it != user.end(); ++it) {
    if (it.key() == "version") continue;
    const json& defs = cfg[it.key()];
    for (auto f = it->begin(); f != it->end(); ++f) {
      if (!defs.contains(f.key()))
        throw moran::domain_error("config: unknown key \"" + f.key() + "\" in " +
                                  it.key());
      cfg[it.key()][f.key()] = f.value();
    }
  }
  return cfg;
}

moran::ModelParams params_of(const json& cfg) {
  const json& m = cfg["model"];
  return moran::derive_constants(m["n"].get<int>(), m["N"].get<int>(),
                                 m["alpha"].get<double>(), m["s0"].get<double>(),
                                 m["m"].get<double>());
}

std::ofstream open_out(const std::string& dir, const std::string& name) {
  fs::create_directories(dir);
  std::ofstream os(fs::path(dir) / name);
  if (!os) throw moran::domain_error("cannot write " + name + " in " + dir);
  return os;
}

int cmd_simulate(const json& cfg, const std::string& out, uint64_t seed) {
  auto p = params_of(cfg);
  const json& w = cfg["window"];
  const json& s = cfg["simulate"];
  moran::CounterRng init(seed);
  auto boundary = s["boundary"] == "closed" ? moran::BoundaryMode::closed
                                            : moran::BoundaryMode::pinned;
  auto st = moran::build_initial(p, w["lo"].get<int>(), w["hi"].get<int>(),
                                 w["center"].get<double>(), init, boundary);
  moran::RunOptions opt;
  std::string filter = s["filter"].get<std::string>();
  opt.filter = filter == "full"            ? moran::LogFilter::full
               : filter == "a_parent_only" ? moran::LogFilter::a_parent_only
                                           : moran::LogFilter::off;
  opt.snapshot_cadence = s["snapshot_cadence"].get<double>();
  opt.log_t_min = s["log_t_min"].get<double>();
  auto rr = moran::run(p, st, s["T"].get<double>(), seed, opt);

  auto os = open_out(out, "snapshots.csv");
  os << "time,x,p\n";
  char buf[128];
  for (const auto& snap : rr.snapshots)
    for (size_t i = 0; i < snap.p.size(); ++i) {
      snprintf(buf, sizeof buf, "%.12g,%.12g,%.12g\n", snap.time,
               double(snap.lo + int32_t(i)) / p.n, snap.p[i]);
      os << buf;
    }
  if (opt.filter != moran::LogFilter::off) {
    auto es = open_out(out, "events.jsonl");
    moran::LogMeta meta;
    meta.seed = seed;
    meta.params = p;
    meta.win_lo = w["lo"].get<int>();
    meta.win_hi = w["hi"].get<int>();
    meta.filter = filter;
    rr.log.write_jsonl(es, meta);
  }
  std::cout << "simulate: T=" << s["T"].get<double>() << " events=" << rr.log.size()
            << " snapshots=" << rr.snapshots.size() << " -> " << out << "\n";
  return 0;
}

int cmd_trace(const json& cfg, const std::string& out, uint64_t seed) {
  auto p = params_of(cfg);
  const json& w = cfg["window"];
  const json& t = cfg["trace"];
  const double T = t["T"].get<double>(), horizon = t["horizon"].get<double>();
  moran::CounterRng init(seed);
  auto st = moran::build_initial(p, w["lo"].get<int>(), w["hi"].get<int>(),
                                 w["center"].get<double>(), init);
  moran::RunOptions opt;
  opt.filter = moran::LogFilter::a_parent_only;
  opt.log_t_min = T - horizon;
  opt.snapshot_cadence = 0.0;
  auto rr = moran::run(p, st, T, seed, opt);
  moran::CounterRng pick(seed ^ 0x9e3779b97f4a7c15ull);
  auto slots =
      moran::sample_near_front(st, t["K0"].get<double>(), t["k"].get<int>(), pick);
  auto tr = moran::trace(rr.log, T, slots, horizon, w["lo"].get<int>(),
                         w["hi"].get<int>(), T - horizon);
  auto ls = open_out(out, "lineages.csv");
  ls << "sample,t_back,site,index\n";
  for (const auto& path : tr.paths) path.write_csv(ls);
  auto ts = open_out(out, "tau.csv");
  tr.tau.write_csv(ts);
  std::cout << "trace: " << tr.paths.size() << " lineages over horizon " << horizon
            << " -> " << out << "\n";
  return 0;
}

int cmd_pde(const json& cfg, const std::string& out) {
  auto p = params_of(cfg);
  const json& w = cfg["window"];
  const json& c = cfg["pde"];
  moran::LatticeField u0;
  u0.n = p.n;
  u0.lo = w["lo"].get<int>();
  int32_t hi = w["hi"].get<int>();
  u0.u.resize(size_t(hi - u0.lo + 1));
  for (size_t i = 0; i < u0.u.size(); ++i)
    u0.u[i] = moran::wave_profile(u0.x_of(i) - w["center"].get<double>(), p.kappa);
  double dt = c["dt"].get<double>();
  if (dt <= 0.0) dt = 1.0 / (2.0 * p.m * p.n * p.n);
  auto traj = moran::pde_solve(p, u0, c["T"].get<double>(), dt,
                               c["cadence"].get<double>());
  auto os = open_out(out, "fields.csv");
  os << "time,x,u\n";
  char buf[128];
  for (const auto& f : traj)
    for (size_t i = 0; i < f.u.size(); ++i) {
      snprintf(buf, sizeof buf, "%.12g,%.12g,%.12g\n", f.time, f.x_of(i), f.u[i]);
      os << buf;
    }
  std::cout << "pde: " << traj.size() << " fields -> " << out << "\n";
  return 0;
}

int cmd_sde(const json& cfg, const std::string& out, uint64_t seed) {
  auto p = params_of(cfg);
  const json& c = cfg["sde"];
  char buf[64];
  if (c["samples"].get<int>() > 0) {
    auto s = moran::sde_stationary_sample(p, c["z0"].get<double>(),
                                          c["burn_in"].get<double>(),
                                          c["dt"].get<double>(), c["thin"].get<int>(),
                                          c["samples"].get<int>(), seed);
    auto os = open_out(out, "sde_samples.csv");
    os << "z\n";
    for (double z : s) {
      snprintf(buf, sizeof buf, "%.12g\n", z);
      os << buf;
    }
    std::cout << "sde: " << s.size() << " stationary samples -> " << out << "\n";
  } else {
    auto path = moran::sde_simulate(p, c["z0"].get<double>(), c["T"].get<double>(),
                                    c["dt"].get<double>(), seed);
    auto os = open_out(out, "sde_path.csv");
    os << "t,z\n";
    for (size_t i = 0; i < path.size(); ++i) {
      snprintf(buf, sizeof buf, "%.12g,%.12g\n", i * c["dt"].get<double>(), path[i]);
      os << buf;
    }
    std::cout << "sde: path of " << path.size() << " steps -> " << out << "\n";
  }
  return 0;
}

int cmd_kingman(const json& cfg, const std::string& out, uint64_t seed) {
  const json& c = cfg["kingman"];
  auto os = open_out(out, "kingman.csv");
  os << "rep,time,b1,b2\n";
  char buf[128];
  int reps = c["reps"].get<int>();
  for (int r = 0; r < reps; ++r) {
    auto res = moran::kingman_sample(c["k"].get<int>(), seed + uint64_t(r));
    for (const auto& mg : res.mergers) {
      snprintf(buf, sizeof buf, "%d,%.12g,%d,%d\n", r, mg.time, mg.b1, mg.b2);
      os << buf;
    }
  }
  std::cout << "kingman: " << reps << " genealogies -> " << out << "\n";
  return 0;
}

int cmd_verify(const json& cfg, const std::string& out, uint64_t seed,
               double budget, std::vector<int> ids) {
  if (ids.empty())
    for (const auto& v : cfg["verify"]["criteria"]) ids.push_back(v.get<int>());
  auto results = moran::run_criteria(ids, seed, budget);
  fs::create_directories(out);
  std::ofstream os(fs::path(out) / "verify.txt");
  bool all = true;
  for (const auto& r : results) {
    std::string line = "criterion " + std::to_string(r.id) + " [" + r.name +
                       "]: " + (r.pass ? "PASS" : "FAIL") + " -- " + r.detail +
                       " (" + std::to_string(r.seconds) + " s)";
    std::cout << line << "\n";
    os << line << "\n";
    all = all && r.pass;
  }
  std::cout << (all ? "all criteria passed" : "SOME CRITERIA FAILED") << "\n";
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Exact simulator of a structured Moran model with bistable selection,\n"
      "with backward ancestral-lineage tracing and verification against the\n"
      "travelling-wave / lineage-diffusion / pair-coalescent limit objects."};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path, out_dir = "out";
  uint64_t seed = 1;
  int jobs = 1;
  double budget = 0.0;
  app.add_option("--config", config_path, "JSON config file (version 1)");
  app.add_option("--out", out_dir, "output directory")->capture_default_str();
  app.add_option("--seed", seed, "master RNG seed")->capture_default_str();
  app.add_option("--jobs", jobs, "worker count (accepted; execution is sequential)");
  app.add_option("--budget", budget,
                 "wall-clock budget in seconds for verify (0 = unlimited)");

  auto* c_sim = app.add_subcommand("simulate", "forward Gillespie run, snapshots + log");
  auto* c_trc = app.add_subcommand("trace", "backward lineage tracing from a run");
  auto* c_pde = app.add_subcommand("pde", "deterministic wave reference solution");
  auto* c_sde = app.add_subcommand("sde", "lineage diffusion reference path/samples");
  auto* c_kng = app.add_subcommand("kingman", "Kingman coalescent reference draws");
  auto* c_ver = app.add_subcommand("verify", "acceptance criteria suite");
  std::vector<int> verify_ids;
  c_ver->add_option("ids", verify_ids,
                    "criterion numbers to run (default: all, or config list)");

  CLI11_PARSE(app, argc, argv);
  try {
    json cfg = merge_config(config_path);
    if (c_sim->parsed()) return cmd_simulate(cfg, out_dir, seed);
    if (c_trc->parsed()) return cmd_trace(cfg, out_dir, seed);
    if (c_pde->parsed()) return cmd_pde(cfg, out_dir);
    if (c_sde->parsed()) return cmd_sde(cfg, out_dir, seed);
    if (c_kng->parsed()) return cmd_kingman(cfg, out_dir, seed);
    if (c_ver->parsed()) return cmd_verify(cfg, out_dir, seed, budget, verify_ids);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
