#include "momentplan/cli/commands.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "momentplan/baselines/nlp.hpp"
#include "momentplan/baselines/rrt.hpp"
#include "momentplan/cli/render.hpp"
#include "momentplan/cli/seeding.hpp"
#include "momentplan/conic/sdpa.hpp"
#include "momentplan/mmp/planner.hpp"
#include "momentplan/scene/benchmark.hpp"

namespace momentplan {

using Json = nlohmann::ordered_json;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Json num(double v) {
  if (std::isfinite(v)) return v;
  return v > 0 ? "inf" : (v < 0 ? "-inf" : "nan");
}

std::string fmt_g(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

}  // namespace

// ---------------------------------------------------------------- planners

Json to_json(const PlannerSettings& p) {
  return Json{{"planner", p.planner}, {"s", p.s},         {"r", p.r},
              {"lambda", p.lambda},   {"iters", p.iters}, {"starts", p.starts},
              {"lambda_ramp", p.lambda_ramp}, {"tol", p.tol}};
}

PlanOutcome run_planner(const ProblemData& data, const PlannerSettings& st, std::uint64_t seed) {
  PlanOutcome out;
  out.planner = st.planner;
  const auto t0 = std::chrono::steady_clock::now();
  bool completed = true;
  if (st.planner == "mmp") {
    MmpConfig c;
    if (st.s > 0) c.s = st.s;
    c.r = st.r;
    c.lambda = st.lambda;
    if (st.iters > 0) c.N = st.iters;
    c.seed = seed;
    c.lambda_ramp = st.lambda_ramp;
    const MmpResult res = st.starts > 1 ? run_mmp_multistart(data, c, st.starts) : run_mmp(data, c);
    completed = res.completed;
    if (res.path.s() > 0) out.path = res.path;
    out.diagnostics_csv = mmp_diagnostics_csv(res);
    out.info = Json{{"completed", res.completed}, {"message", res.message},  {"order", res.order},
                    {"lambda", res.lambda},       {"final_J", res.final_J},  {"iterations", res.trace.size()},
                    {"seed", res.seed}};
  } else if (st.planner == "rrt") {
    RrtConfig c;
    c.seed = seed;
    if (st.iters > 0) c.max_iters = st.iters;
    const RrtResult res = rrt_plan(data, c);
    out.path = res.path;
    out.info = Json{{"iterations", res.iterations}, {"nodes", res.nodes}, {"seed", seed}};
  } else if (st.planner == "nlp") {
    NlpConfig c;
    if (st.s > 0) c.s = st.s;
    c.seed = seed;
    if (st.iters > 0) c.max_outer = st.iters;
    const NlpResult res = nlp_plan(data, c);
    out.path = res.final_iterate;
    out.info = Json{{"max_violation", res.max_violation}, {"outer_iterations", res.outer_iterations}, {"seed", seed}};
  } else {
    throw std::invalid_argument("unknown planner '" + st.planner + "' (expected mmp, rrt or nlp)");
  }
  out.seconds = seconds_since(t0);
  if (out.path) out.metrics = compute_metrics(*out.path, data, st.tol);
  out.success = completed && out.path && out.metrics.feasible;
  return out;
}

// ------------------------------------------------------------ lower bounds

int lower_bound_exit_code(const std::vector<LowerBoundCertificate>& certs) {
  bool failed = false;
  for (const auto& c : certs) {
    if (c.infeasible()) return kExitInfeasible;
    if (!c.solved()) failed = true;
  }
  return failed ? kExitFailure : kExitOk;
}

Json to_json(const LowerBoundCertificate& c) {
  Json j{{"r", c.r},
         {"s", c.s},
         {"sparse", c.sparse},
         {"rho", num(c.rho)},
         {"status", to_string(c.status)},
         {"primal_residual", c.primal_residual},
         {"dual_residual", c.dual_residual},
         {"gap", c.gap},
         {"num_vars", c.num_vars},
         {"build_seconds", c.build_seconds},
         {"solve_seconds", c.solve_seconds},
         {"flat", c.flat},
         {"message", c.message}};
  Json res = Json::array();
  for (const auto& r : c.residuals) res.push_back(Json{{"u", r.u}, {"v", r.v}, {"z", r.z}, {"degree", r.degree}});
  j["flatness_residuals"] = res;
  j["extracted_path"] = c.extracted ? Json::parse(serialize_path(*c.extracted)) : Json(nullptr);
  return j;
}

// ------------------------------------------------------------------- bench

std::uint64_t bench_scene_seed(std::uint64_t root, int n, int k) {
  return derive_seed(root, "scene", (static_cast<std::uint64_t>(n) << 32) | static_cast<std::uint32_t>(k));
}

Scene bench_scene(std::uint64_t root, int n, int k, int obstacles, bool dynamic) {
  BenchmarkParams bp;
  bp.n = n;
  bp.obstacles = obstacles;
  bp.dynamic = dynamic;
  bp.seed = bench_scene_seed(root, n, k);
  Scene sc = generate_benchmark(bp);
  sc.name = "bench_n" + std::to_string(n) + "_k" + std::to_string(k);
  return sc;
}

BenchResult run_bench(const BenchOptions& opts) {
  for (int n : opts.n_list)
    if (n < 1) throw std::invalid_argument("bench dimensions must be positive");
  if (opts.instances < 0) throw std::invalid_argument("instances must be nonnegative");
  for (const auto& p : opts.planners)
    if (p != "mmp" && p != "rrt" && p != "nlp") throw std::invalid_argument("unknown planner '" + p + "'");

  struct Task {
    int n, k;
  };
  std::vector<Task> tasks;
  for (int n : opts.n_list)
    for (int k = 0; k < opts.instances; ++k) tasks.push_back({n, k});
  const std::size_t P = opts.planners.size();
  std::vector<BenchRow> rows(tasks.size() * P);

  // Workers claim whole instances; each slot of `rows` is written by one worker only.
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t t; (t = next.fetch_add(1)) < tasks.size();) {
      const auto [n, k] = tasks[t];
      const Scene sc = bench_scene(opts.seed, n, k, opts.obstacles, opts.dynamic);
      for (std::size_t p = 0; p < P; ++p) {
        PlannerSettings st = opts.settings;
        st.planner = opts.planners[p];
        const std::uint64_t pseed =
            derive_seed(opts.seed, "planner/" + st.planner, (static_cast<std::uint64_t>(n) << 32) | static_cast<std::uint32_t>(k));
        BenchRow& row = rows[t * P + p];
        row.n = n;
        row.instance = k;
        row.scene_seed = bench_scene_seed(opts.seed, n, k);
        row.planner = st.planner;
        try {
          row.outcome = run_planner(sc.data, st, pseed);
        } catch (const std::exception& e) {
          row.outcome = PlanOutcome{};
          row.outcome.planner = st.planner;
          row.outcome.info = Json{{"error", e.what()}};
        }
      }
    }
  };
  const int threads = std::max(1, std::min<int>(opts.threads, static_cast<int>(tasks.size())));
  std::vector<std::thread> pool;
  for (int i = 1; i < threads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  return BenchResult{std::move(rows), opts.planners, opts.n_list};
}

std::string bench_rows_csv(const BenchResult& r) {
  std::ostringstream out;
  out << "n,instance,scene_seed,planner,success,length,smoothness,min_margin,solve_seconds\n";
  for (const auto& row : r.rows) {
    const auto& m = row.outcome.metrics;
    const bool has = row.outcome.path.has_value();
    out << row.n << ',' << row.instance << ',' << row.scene_seed << ',' << row.planner << ',' << (row.outcome.success ? 1 : 0)
        << ',' << (has ? fmt_g(m.length) : "") << ',' << (has ? fmt_g(m.smoothness) : "") << ','
        << (has ? fmt_g(m.min_margin) : "") << ',' << fmt_g(row.outcome.seconds) << '\n';
  }
  return out.str();
}

namespace {

// rows grouped by n then instance, in planner order.
std::map<int, std::map<int, std::vector<const BenchRow*>>> group(const BenchResult& r) {
  std::map<int, std::map<int, std::vector<const BenchRow*>>> g;
  for (const auto& row : r.rows) g[row.n][row.instance].push_back(&row);
  return g;
}

}  // namespace

std::string bench_aggregate_csv(const BenchResult& r) {
  std::ostringstream out;
  out << "n,planner,instances,successes,success_rate,mutual_successes,mean_length,mean_smoothness\n";
  const auto g = group(r);
  for (int n : r.n_list) {
    const auto it = g.find(n);
    for (std::size_t p = 0; p < r.planners.size(); ++p) {
      int count = 0, ok = 0, mutual = 0;
      double len = 0.0, sm = 0.0;
      if (it != g.end()) {
        for (const auto& [k, rows] : it->second) {
          ++count;
          const BenchRow* row = rows[p];
          ok += row->outcome.success;
          const bool all = std::all_of(rows.begin(), rows.end(), [](const BenchRow* x) { return x->outcome.success; });
          if (all) {
            ++mutual;
            len += row->outcome.metrics.length;
            sm += row->outcome.metrics.smoothness;
          }
        }
      }
      out << n << ',' << r.planners[p] << ',' << count << ',' << ok << ',' << fmt_g(count ? double(ok) / count : 0.0) << ','
          << mutual << ',' << (mutual ? fmt_g(len / mutual) : "") << ',' << (mutual ? fmt_g(sm / mutual) : "") << '\n';
    }
  }
  return out.str();
}

std::string bench_timing_csv(const BenchResult& r) {
  std::ostringstream out;
  out << "n,planner,mean_solve_seconds\n";
  for (int n : r.n_list) {
    for (const auto& p : r.planners) {
      double t = 0.0;
      int c = 0;
      for (const auto& row : r.rows) {
        if (row.n != n || row.planner != p) continue;
        t += row.outcome.seconds;
        ++c;
      }
      out << n << ',' << p << ',' << (c ? fmt_g(t / c) : "") << '\n';
    }
  }
  return out.str();
}

// ------------------------------------------------------------------ parsing

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    if (item.find_first_not_of(" \t") == std::string::npos) continue;
    std::size_t used = 0;
    const double v = std::stod(item, &used);
    if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument("bad number '" + item + "'");
    out.push_back(v);
  }
  return out;
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    if (item.find_first_not_of(" \t") == std::string::npos) continue;
    // "3..6" ranges are accepted too.
    if (const auto dots = item.find(".."); dots != std::string::npos) {
      const int a = std::stoi(item.substr(0, dots)), b = std::stoi(item.substr(dots + 2));
      for (int v = a; v <= b; ++v) out.push_back(v);
      continue;
    }
    std::size_t used = 0;
    const int v = std::stoi(item, &used);
    if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument("bad integer '" + item + "'");
    out.push_back(v);
  }
  return out;
}

// ---------------------------------------------------------------------- cli

namespace {

namespace fs = std::filesystem;

Scene load_scene_arg(const std::string& arg) {
  if (arg == "builtin:example1") return example1_scene();
  return load_scene(arg);
}

struct Manifest {
  Json j;
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();

  Manifest(const std::string& command, int argc, char** argv) {
    j["tool"] = "momentplan";
    j["command"] = command;
    Json args = Json::array();
    for (int i = 0; i < argc; ++i) args.push_back(argv[i]);
    j["argv"] = args;
    j["cwd"] = fs::current_path().string();
    j["solver_backend"] = solver_backend();
    j["scenes"] = Json::array();
    j["config"] = Json::object();
    j["artifacts"] = Json::array();
    j["timings"] = Json::object();
  }
  void scene(const std::string& path, const Scene& sc) { j["scenes"].push_back(Json{{"path", path}, {"name", sc.name}}); }
  void artifact(const fs::path& p) { j["artifacts"].push_back(p.string()); }
  void write(const fs::path& dir, int exit_code) {
    j["exit_code"] = exit_code;
    j["timings"]["total_seconds"] = seconds_since(t0);
    write_text((dir / "manifest.json").string(), j.dump(2) + "\n");
  }
};

fs::path ensure_dir(const std::string& dir) {
  fs::create_directories(dir);
  return fs::path(dir);
}

void emit(Manifest& m, const fs::path& p, const std::string& text) {
  write_text(p.string(), text);
  m.artifact(p);
}

}  // namespace

int run_cli(int argc, char** argv) {
  CLI::App app{"Moment-relaxation motion planning: lower bounds, planners, benchmarks and rendering."};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Expand all help");

  std::string scene_arg, path_arg, out_dir = "out", r_list = "3..6", times_arg, project_arg, output;
  int s = 0, r = 2, iters = 0, starts = 1, threads = 1, n = 2, index = 0, obstacles = 10, instances = 10;
  bool sparse = false, export_flag = false, ramp = false, dynamic = false, example1 = false, no_extract = false;
  double lambda = 0.1, tol = kFeasibilityTol, flat_tol = LowerBoundOptions{}.flat_tol;
  std::uint64_t seed = 0;
  std::string planner = "mmp", planners = "mmp,rrt,nlp", n_list = "2,3,4";

  auto scene_opt = [&](CLI::App* c) {
    c->add_option("--scene", scene_arg, "Scene JSON file, or builtin:example1")->required();
  };
  auto out_opt = [&](CLI::App* c) { c->add_option("--out-dir", out_dir, "Artifact directory")->capture_default_str(); };

  auto* lb = app.add_subcommand("lower-bound", "Hierarchy lower bounds rho(r, s) for a list of orders");
  scene_opt(lb);
  lb->add_option("--s", s, "Number of pieces")->required();
  lb->add_option("--r", r_list, "Orders, e.g. 3,4,5,6 or 3..6")->capture_default_str();
  lb->add_flag("--sparse", sparse, "Clique-sparse relaxation");
  lb->add_option("--tol", flat_tol, "Flatness tolerance")->capture_default_str();
  lb->add_flag("--export-sdpa", export_flag, "Also write each program as .dat-s");
  lb->add_flag("--no-extract", no_extract, "Skip the flatness test and path readout");
  out_opt(lb);

  auto* plan = app.add_subcommand("plan", "Plan a path with mmp, rrt or nlp");
  scene_opt(plan);
  plan->add_option("--planner", planner, "mmp | rrt | nlp")->capture_default_str();
  plan->add_option("--s", s, "Pieces (mmp, nlp)");
  plan->add_option("--r", r, "MMP order")->capture_default_str();
  plan->add_option("--lambda", lambda, "MMP penalty weight")->capture_default_str();
  plan->add_option("--iters", iters, "MMP iterations, RRT max iterations or NLP outer iterations");
  plan->add_option("--starts", starts, "MMP random restarts")->capture_default_str();
  plan->add_flag("--lambda-ramp", ramp, "Raise lambda while the MMP path is uncertified");
  plan->add_option("--seed", seed, "Command seed")->capture_default_str();
  plan->add_option("--tol", tol, "Certification tolerance")->capture_default_str();
  out_opt(plan);

  auto* cert = app.add_subcommand("certify", "Certify a path against a scene");
  scene_opt(cert);
  cert->add_option("--path", path_arg, "Path JSON file")->required();
  cert->add_option("--tol", tol, "Certification tolerance")->capture_default_str();

  auto* bench = app.add_subcommand("bench", "Benchmark planners on generated scenes");
  bench->add_option("--n", n_list, "Dimensions, e.g. 2,3,4")->capture_default_str();
  bench->add_option("--instances", instances, "Scenes per dimension")->capture_default_str();
  bench->add_option("--obstacles", obstacles, "Spheres per scene")->capture_default_str();
  bench->add_flag("--dynamic", dynamic, "Moving spheres");
  bench->add_option("--planners", planners, "Comma-separated planners")->capture_default_str();
  bench->add_option("--seed", seed, "Command seed")->capture_default_str();
  bench->add_option("--threads", threads, "Worker threads")->capture_default_str();
  bench->add_option("--s", s, "Pieces (mmp, nlp)");
  bench->add_option("--r", r, "MMP order")->capture_default_str();
  bench->add_option("--lambda", lambda, "MMP penalty weight")->capture_default_str();
  bench->add_option("--iters", iters, "Planner iteration budget");
  bench->add_option("--tol", tol, "Certification tolerance")->capture_default_str();
  out_opt(bench);

  auto* render = app.add_subcommand("render", "SVG frames of the scene and an optional path");
  scene_opt(render);
  render->add_option("--path", path_arg, "Path JSON file");
  auto* times_opt = render->add_option("--render-times", times_arg, "Comma-separated times (default 0,T/2,T; empty for none)");
  render->add_option("--project", project_arg, "Coordinate pair for n >= 3, e.g. 0,2");
  out_opt(render);

  auto* exp = app.add_subcommand("export-sdpa", "Write the SDP(r, s) program as SDPA sparse text");
  scene_opt(exp);
  exp->add_option("--s", s, "Number of pieces")->required();
  exp->add_option("--r", r, "Order")->required();
  exp->add_flag("--sparse", sparse, "Clique-sparse relaxation");
  exp->add_option("--export-sdpa", output, "Output .dat-s path (default <out-dir>/<scene>_s<s>_r<r>.dat-s)");
  out_opt(exp);

  auto* gen = app.add_subcommand("generate", "Write a benchmark scene or the Example 1 scene");
  gen->add_flag("--example1", example1, "Example 1 instead of a generated scene");
  gen->add_option("--n", n, "Dimension")->capture_default_str();
  gen->add_option("--index", index, "Instance index within the bench sweep")->capture_default_str();
  gen->add_option("--obstacles", obstacles, "Spheres")->capture_default_str();
  gen->add_flag("--dynamic", dynamic, "Moving spheres");
  gen->add_option("--seed", seed, "Command seed (same rule as bench)")->capture_default_str();
  gen->add_option("--out", output, "Output scene file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*lb) {
      Manifest m("lower-bound", argc, argv);
      const Scene sc = load_scene_arg(scene_arg);
      m.scene(scene_arg, sc);
      const auto orders = parse_int_list(r_list);
      const fs::path dir = ensure_dir(out_dir);
      m.j["config"] = Json{{"s", s}, {"r", orders}, {"sparse", sparse}, {"flat_tol", flat_tol}, {"extract", !no_extract}};
      std::vector<LowerBoundCertificate> certs;
      std::string csv = sweep_csv_header() + "\n";
      std::cout << sweep_csv_header() << std::endl;
      Json cj = Json::array();
      for (int order : orders) {
        RelaxationConfig rc;
        rc.s = s;
        rc.r = order;
        rc.sparse = sparse;
        if (export_flag) {
          const fs::path p = dir / ("program_s" + std::to_string(s) + "_r" + std::to_string(order) + ".dat-s");
          emit(m, p, export_sdpa(build_relaxation(sc.data, rc).program));
        }
        LowerBoundOptions lo;
        lo.flat_tol = flat_tol;
        lo.extract = !no_extract;
        certs.push_back(solve_lower_bound(sc.data, rc, lo));
        const std::string row = sweep_csv_row(certs.back());
        std::cout << row << std::endl;
        csv += row + "\n";
        cj.push_back(to_json(certs.back()));
        m.j["timings"]["r" + std::to_string(order)] = certs.back().build_seconds + certs.back().solve_seconds;
      }
      emit(m, dir / "lower_bound.csv", csv);
      emit(m, dir / "certificates.json", cj.dump(2) + "\n");
      for (const auto& c : certs) {
        if (!c.extracted) continue;
        emit(m, dir / ("extracted_r" + std::to_string(c.r) + ".json"), serialize_path(*c.extracted));
      }
      const int code = lower_bound_exit_code(certs);
      m.write(dir, code);
      return code;
    }

    if (*plan) {
      Manifest m("plan", argc, argv);
      const Scene sc = load_scene_arg(scene_arg);
      m.scene(scene_arg, sc);
      PlannerSettings st;
      st.planner = planner;
      st.s = s;
      st.r = r;
      st.lambda = lambda;
      st.iters = iters;
      st.starts = starts;
      st.lambda_ramp = ramp;
      st.tol = tol;
      const std::uint64_t pseed = derive_seed(seed, "planner/" + planner);
      m.j["config"] = to_json(st);
      m.j["seed"] = seed;
      m.j["planner_seed"] = pseed;
      const PlanOutcome out = run_planner(sc.data, st, pseed);
      const fs::path dir = ensure_dir(out_dir);
      if (out.path) emit(m, dir / "path.json", serialize_path(*out.path));
      emit(m, dir / "metrics.csv",
           metrics_csv_header() + "\n" + metrics_csv_row(sc.name, planner, out.success, out.metrics, out.seconds) + "\n");
      if (!out.diagnostics_csv.empty()) emit(m, dir / "mmp_diagnostics.csv", out.diagnostics_csv);
      m.j["result"] = out.info;
      m.j["result"]["success"] = out.success;
      m.j["timings"]["plan_seconds"] = out.seconds;
      std::cout << metrics_csv_header() << "\n"
                << metrics_csv_row(sc.name, planner, out.success, out.metrics, out.seconds) << std::endl;
      const int code = out.success ? kExitOk : kExitFailure;
      m.write(dir, code);
      return code;
    }

    if (*cert) {
      const Scene sc = load_scene_arg(scene_arg);
      const PiecewiseLinearPath p = parse_path(read_text(path_arg));
      if (p.dim() != sc.data.n) throw std::invalid_argument("path dimension does not match the scene");
      const FeasibilityReport rep = certify_path_feasibility(p, sc.data, tol);
      const PathMetrics met = compute_metrics(p);
      std::cout << Json{{"feasible", rep.feasible},
                        {"min_margin", rep.min_margin},
                        {"worst_piece", rep.worst_piece},
                        {"worst_constraint", rep.worst_constraint},
                        {"worst_time", rep.worst_time},
                        {"continuity_error", rep.continuity_error},
                        {"length", met.length},
                        {"smoothness", met.smoothness}}
                       .dump(2)
                << std::endl;
      return rep.feasible ? kExitOk : kExitFailure;
    }

    if (*bench) {
      Manifest m("bench", argc, argv);
      BenchOptions bo;
      bo.n_list = parse_int_list(n_list);
      bo.instances = instances;
      bo.obstacles = obstacles;
      bo.dynamic = dynamic;
      bo.planners.clear();
      std::stringstream ps(planners);
      for (std::string p; std::getline(ps, p, ',');)
        if (!p.empty()) bo.planners.push_back(p);
      bo.seed = seed;
      bo.threads = threads;
      bo.settings.s = s;
      bo.settings.r = r;
      bo.settings.lambda = lambda;
      bo.settings.iters = iters;
      bo.settings.tol = tol;
      m.j["config"] = Json{{"n", bo.n_list},         {"instances", instances}, {"obstacles", obstacles},
                           {"dynamic", dynamic},      {"planners", bo.planners}, {"threads", threads},
                           {"settings", to_json(bo.settings)}};
      m.j["seed"] = seed;
      const auto t0 = std::chrono::steady_clock::now();
      const BenchResult res = run_bench(bo);
      m.j["timings"]["bench_seconds"] = seconds_since(t0);
      const fs::path dir = ensure_dir(out_dir);
      emit(m, dir / "bench_instances.csv", bench_rows_csv(res));
      const std::string agg = bench_aggregate_csv(res);
      emit(m, dir / "bench_aggregate.csv", agg);
      emit(m, dir / "bench_timing.csv", bench_timing_csv(res));
      std::cout << agg;
      m.write(dir, kExitOk);
      return kExitOk;
    }

    if (*render) {
      Manifest m("render", argc, argv);
      const Scene sc = load_scene_arg(scene_arg);
      m.scene(scene_arg, sc);
      std::optional<PiecewiseLinearPath> p;
      if (!path_arg.empty()) p = parse_path(read_text(path_arg));
      RenderOptions ro;
      if (!project_arg.empty()) {
        const auto pair = parse_int_list(project_arg);
        if (pair.size() != 2) throw std::invalid_argument("--project expects two coordinate indices");
        ro.px = pair[0];
        ro.py = pair[1];
      } else if (sc.data.n >= 3) {
        std::cerr << "error: scenes with n >= 3 need --project i,j" << std::endl;
        return kExitFailure;
      }
      const std::vector<double> times =
          times_opt->count() > 0 ? parse_double_list(times_arg) : std::vector<double>{0.0, sc.data.T / 2, sc.data.T};
      m.j["config"] = Json{{"times", times}, {"project", {ro.px, ro.py}}, {"grid", ro.grid}};
      const fs::path dir = ensure_dir(out_dir);
      for (std::size_t k = 0; k < times.size(); ++k) {
        char name[32];
        std::snprintf(name, sizeof name, "frame_%03zu.svg", k);
        emit(m, dir / name, render_frame(sc, p ? &*p : nullptr, times[k], ro));
      }
      m.write(dir, kExitOk);
      return kExitOk;
    }

    if (*exp) {
      const Scene sc = load_scene_arg(scene_arg);
      RelaxationConfig rc;
      rc.s = s;
      rc.r = r;
      rc.sparse = sparse;
      fs::path target = output;
      if (output.empty()) {
        const std::string stem = sc.name.empty() ? "scene" : sc.name;
        target = ensure_dir(out_dir) / (stem + "_s" + std::to_string(s) + "_r" + std::to_string(r) + ".dat-s");
      } else if (target.has_parent_path()) {
        fs::create_directories(target.parent_path());
      }
      write_text(target.string(), export_sdpa(build_relaxation(sc.data, rc).program));
      std::cout << target.string() << std::endl;
      return kExitOk;
    }

    if (*gen) {
      Scene sc = example1 ? example1_scene() : bench_scene(seed, n, index, obstacles, dynamic);
      if (!example1) {
        sc.metadata["generator"] = Json{{"command_seed", seed}, {"n", n}, {"index", index}, {"obstacles", obstacles},
                                        {"dynamic", dynamic}, {"scene_seed", bench_scene_seed(seed, n, index)}};
      }
      const fs::path target = output;
      if (target.has_parent_path()) fs::create_directories(target.parent_path());
      save_scene(sc, target.string());
      return kExitOk;
    }
  } catch (const SceneError& e) {
    std::cerr << "scene error: " << e.what() << std::endl;
    return kExitFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return kExitFailure;
  }
  return kExitFailure;
}

}  // namespace momentplan
