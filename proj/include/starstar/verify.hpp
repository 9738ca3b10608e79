#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "starstar/rains.hpp"

namespace starstar {

enum class Command {
  eval_gamma,        // seeded Gamma evaluations + reflection residual
  eval_phi,          // seeded Phi evaluations + product/series agreement
  verify_reflection, // the five special-function identities
  verify_rains,      // transformation formula residuals
  verify_star_star,  // star-star relation residuals
  verify_chain,      // equivalence chain: V1 <-> I <-> I~ <-> V2
  partition_demo,    // chain partition functions vs the star integrals
};

enum class ReportFormat { json, csv };

Command parse_command(const std::string& name);  // ConfigError on unknown
std::string command_name(Command command);

struct RunConfig {
  Command command = Command::verify_reflection;
  double nome_p = 0.2;
  double nome_q = 0.2;
  int n = 2;
  std::uint64_t seed = 42;
  int draws = 20;
  int grid_n = 128;       // final per-dimension grid of each integral
  int max_grid_n = 128;   // refinement cap (>= grid_n)
  double rel_tol = 1e-9;  // pass threshold on the per-draw residual
  std::string output_path;  // empty: report not written to disk
  ReportFormat format = ReportFormat::json;
};

struct DrawRecord {
  int index = 0;
  // Seed-derived inputs of the draw, already serialized (name, value).
  std::vector<std::pair<std::string, std::string>> params;
  // Named sub-residuals; `residual` is their maximum and the pass metric.
  std::vector<std::pair<std::string, double>> residuals;
  double residual = 0.0;
  int grid_used = 0;
  double est_rel_err = 0.0;
  bool converged = false;
  std::string error;  // non-empty if the draw raised
  double wall_ms = 0.0;
};

struct VerificationReport {
  RunConfig config;
  std::vector<DrawRecord> draws;
  double max_residual = 0.0;
  double median_residual = 0.0;
  bool pass = false;

  // Deterministic serializations: fixed key order, floating-point numbers as
  // 17-significant-digit strings. Only the wall_ms fields vary between runs.
  std::string to_json() const;
  std::string to_csv() const;
  std::string summary_line() const;  // "PASS max_residual=..." / "FAIL ..."
};

// Runs the configured suite; writes the report to config.output_path when one
// is given. pass = every draw converged and max_residual < rel_tol.
VerificationReport run(const RunConfig& config);

// %.17g — round-trip exact decimal form used everywhere in reports.
std::string format17(double x);

}  // namespace starstar
