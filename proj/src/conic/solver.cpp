#include "momentplan/conic/solver.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "momentplan/conic/sdpa.hpp"

namespace momentplan {

std::string solver_backend() {
  const char* env = std::getenv("MOMENTPLAN_SOLVER");
  if (!env || std::string(env).empty()) return "ipm";
  return env;
}

Solution solve(const ConicProgram& program, const SolverOptions& opts) {
  const std::string backend = solver_backend();
  if (backend == "ipm") return solve_ipm(program, opts);
  if (backend == "sdpa") {
    const char* cmd = std::getenv("MOMENTPLAN_SDPA_CMD");
    return solve_external(program, cmd ? cmd : "python3 tools/sdpa_solve.py");
  }
  throw std::invalid_argument("unknown MOMENTPLAN_SOLVER backend: " + backend);
}

Solution solve_external(const ConicProgram& program, const std::string& command) {
  namespace fs = std::filesystem;
  const auto t0 = std::chrono::steady_clock::now();
  std::random_device rd;
  const fs::path dir = fs::temp_directory_path() / ("momentplan_" + std::to_string(rd()));
  fs::create_directories(dir);
  const fs::path in = dir / "problem.dat-s";
  const fs::path out = dir / "solution.txt";
  {
    std::ofstream f(in);
    f << export_sdpa(program);
  }
  const std::string cmd = command + " '" + in.string() + "' '" + out.string() + "'";
  const int rc = std::system(cmd.c_str());

  Solution sol;
  sol.x = Eigen::VectorXd::Zero(program.num_vars());
  std::ifstream f(out);
  std::string status;
  if (rc != 0 || !(f >> status)) {
    sol.status = SolveStatus::Failed;
    sol.message = "external solver failed: " + cmd;
  } else {
    double obj = 0.0;
    f >> obj;
    for (int k = 0; k < program.num_vars(); ++k) f >> sol.x[k];
    if (status == "optimal") {
      sol.status = SolveStatus::Optimal;
    } else if (status == "infeasible") {
      sol.status = SolveStatus::Infeasible;
    } else if (status == "unbounded") {
      sol.status = SolveStatus::Unbounded;
    } else if (status == "inaccurate") {
      sol.status = SolveStatus::Inaccurate;
    } else {
      sol.status = SolveStatus::Failed;
    }
    sol.objective_value = program.objective().eval(sol.x);
    sol.message = "external: " + status;
  }
  std::error_code ec;
  fs::remove_all(dir, ec);
  sol.solve_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return sol;
}

}  // namespace momentplan
