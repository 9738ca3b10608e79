#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "checks.hpp"
#include "starstar/sampling.hpp"
#include "starstar/verify.hpp"

using namespace starstar;
using nlohmann::json;

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

// Two reports are equal up to timing if their JSON forms match once every
// per-draw wall_ms entry is cleared.
json without_wall(const std::string& serialized) {
  json j = json::parse(serialized);
  for (auto& draw : j.at("draws")) draw["wall_ms"] = "0";
  return j;
}

std::vector<std::string> split_csv_row(const std::string& line) {
  // The writer quotes only the error/residuals/params fields and never emits
  // commas inside quotes, so a quote-aware linear split is enough.
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (const char c : line) {
    if (c == '"') {
      quoted = !quoted;
    } else if (c == ',' && !quoted) {
      fields.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  fields.push_back(cur);
  return fields;
}

}  // namespace

TEST_CASE("splitmix and xoshiro produce their reference streams") {
  SplitMix64 sm{42};
  CHECK(sm.next() == 13679457532755275413ULL);
  CHECK(sm.next() == 2949826092126892291ULL);
  CHECK(sm.next() == 5139283748462763858ULL);

  Xoshiro256pp rng(42);
  CHECK(rng.next() == 15021278609987233951ULL);
  CHECK(rng.next() == 5881210131331364753ULL);
  CHECK(rng.next() == 18149643915985481100ULL);
}

TEST_CASE("per-draw streams are reproducible and independent") {
  Xoshiro256pp d0 = Xoshiro256pp::for_draw(42, 0);
  CHECK(d0.uniform() == 0.46595656575797717);
  CHECK(d0.uniform() == 0.22481622941510371);
  Xoshiro256pp d0_again = Xoshiro256pp::for_draw(42, 0);
  CHECK(d0_again.uniform() == 0.46595656575797717);
  Xoshiro256pp d1 = Xoshiro256pp::for_draw(42, 1);
  CHECK(d1.uniform() == 0.58546142065028195);
  Xoshiro256pp g = Xoshiro256pp::for_draw(7, 3);
  CHECK(g.uniform(2.0, 5.0) == 2.4851377261808696);
  for (int i = 0; i < 1000; ++i) {
    const double u = g.uniform(2.0, 5.0);
    CHECK(u >= 2.0);
    CHECK(u < 5.0);
  }
}

TEST_CASE("sampled spins and rapidities respect their constraints") {
  const EllipticNomes nm(0.2, 0.2);
  Xoshiro256pp rng(7);
  for (int i = 0; i < 100; ++i) {
    const Spin s2 = sample_spin(rng, 2);   // constructor revalidates
    const Spin s3 = sample_spin(rng, 3);
    CHECK(s2.n() == 2);
    CHECK(s3.n() == 3);
    const RapidityData rap = sample_rapidities(rng, nm);
    CHECK(rap.v == 0.0);
    const double band = nm.eta_re();
    for (const double a :
         {rap.alpha1(), rap.alpha2(), rap.alpha3(), rap.alpha4()}) {
      CHECK(a > 0.1 * band);
      CHECK(a < 0.9 * band);
    }
  }
}

TEST_CASE("the seeded draw-0 configuration is frozen") {
  const EllipticNomes nm(0.2, 0.2);
  Xoshiro256pp rng = Xoshiro256pp::for_draw(42, 0);
  const StarConfig cfg = sample_regime(rng, 2, nm);
  CHECK(cfg.rap.u == 0.76088632122619526);
  CHECK(cfg.rap.u_prime == 0.24267147620282892);
  CHECK(cfg.rap.v == 0.0);
  CHECK(cfg.rap.v_prime == -0.20773452540150139);
  CHECK(cfg.a[0] == 2.5978789755620637);
  CHECK(cfg.a[1] == 0.54371367802772941);
  CHECK(cfg.b[0] == 1.7829498242899098);
  CHECK(cfg.c[0] == 2.8001423699045902);
  CHECK(cfg.d[0] == 1.6000158577159076);

  Xoshiro256pp rng_again = Xoshiro256pp::for_draw(42, 0);
  const StarConfig cfg_again = sample_regime(rng_again, 2, nm);
  CHECK(cfg_again.a == cfg.a);
  CHECK(cfg_again.d == cfg.d);
}

TEST_CASE("command names round-trip") {
  for (const Command c :
       {Command::eval_gamma, Command::eval_phi, Command::verify_reflection,
        Command::verify_rains, Command::verify_star_star,
        Command::verify_chain, Command::partition_demo})
    CHECK(parse_command(command_name(c)) == c);
  CHECK_THROWS_AS(parse_command("frobnicate"), ConfigError);
}

TEST_CASE("run configuration validation") {
  RunConfig rc;
  rc.command = Command::eval_phi;
  rc.draws = 1;

  RunConfig bad = rc;
  bad.nome_p = 1.0;
  CHECK_THROWS_AS(run(bad), ConfigError);
  bad = rc;
  bad.n = 1;
  CHECK_THROWS_AS(run(bad), ConfigError);
  bad = rc;
  bad.draws = 0;
  CHECK_THROWS_AS(run(bad), ConfigError);
  bad = rc;
  bad.grid_n = 15;
  CHECK_THROWS_AS(run(bad), ConfigError);
  bad = rc;
  bad.grid_n = 34;  // even but not matched by max_grid below
  bad.max_grid_n = 32;
  CHECK_THROWS_AS(run(bad), ConfigError);
  bad = rc;
  bad.rel_tol = 0.0;
  CHECK_THROWS_AS(run(bad), ConfigError);
}

TEST_CASE("pointwise suites pass with tight tolerances") {
  RunConfig rc;
  rc.nome_p = 0.25;
  rc.nome_q = 0.4;
  rc.seed = 42;
  rc.draws = 5;

  rc.command = Command::verify_reflection;
  rc.rel_tol = 1e-12;
  const VerificationReport ref = run(rc);
  CHECK(ref.pass);
  REQUIRE(ref.draws.size() == 5);
  const auto& names = ref.draws[0].residuals;
  REQUIRE(names.size() == 5);
  CHECK(names[0].first == "reflection");
  CHECK(names[1].first == "periodicity");
  CHECK(names[2].first == "gamma_bridge");
  CHECK(names[3].first == "gamma_reflection");
  CHECK(names[4].first == "nome_swap");

  rc.command = Command::eval_phi;
  rc.rel_tol = 1e-11;
  CHECK(run(rc).pass);

  rc.command = Command::eval_gamma;
  rc.rel_tol = 1e-12;
  CHECK(run(rc).pass);
}

TEST_CASE("integral suites pass at their production grids") {
  RunConfig rc;
  rc.nome_p = rc.nome_q = 0.2;
  rc.n = 2;
  rc.seed = 42;

  rc.command = Command::verify_star_star;
  rc.draws = 3;
  rc.grid_n = 128;
  rc.max_grid_n = 128;
  rc.rel_tol = 1e-9;
  const VerificationReport ss = run(rc);
  CHECK(ss.pass);
  CHECK(ss.draws[0].grid_used == 128);
  CHECK(ss.draws[0].residuals[0].first == "star_star");

  rc.command = Command::verify_rains;
  rc.draws = 2;
  const VerificationReport rr = run(rc);
  CHECK(rr.pass);
  CHECK(rr.draws[0].residuals[0].first == "rains_transformation");

  rc.command = Command::verify_chain;
  rc.draws = 2;
  rc.grid_n = 64;
  rc.max_grid_n = 64;
  rc.rel_tol = 1e-8;
  const VerificationReport ch = run(rc);
  CHECK(ch.pass);
  REQUIRE(ch.draws[0].residuals.size() == 3);
  CHECK(ch.draws[0].residuals[0].first == "equivalence_v1");
  CHECK(ch.draws[0].residuals[1].first == "equivalence_v2");
  CHECK(ch.draws[0].residuals[2].first == "w_factor");
  bool found_budget = false;
  for (const auto& [key, value] : ch.draws[0].params)
    if (key == "within_error_budget") {
      found_budget = true;
      CHECK(value == "true");
    }
  CHECK(found_budget);

  rc.command = Command::partition_demo;
  rc.draws = 1;
  rc.grid_n = 16;
  rc.max_grid_n = 16;
  rc.rel_tol = 1e-9;
  const VerificationReport pd = run(rc);
  CHECK(pd.pass);
  CHECK(pd.max_residual == 0.0);  // site-vs-star comparisons are bit-identical
}

TEST_CASE("an unconverged grid is reported as a failure, not an error") {
  RunConfig rc;
  rc.command = Command::verify_star_star;
  rc.nome_p = rc.nome_q = 0.2;
  rc.n = 2;
  rc.seed = 42;
  rc.draws = 2;
  rc.grid_n = 32;  // too coarse for 1e-9 on the second draw
  rc.max_grid_n = 32;
  rc.rel_tol = 1e-9;
  const VerificationReport rep = run(rc);
  CHECK(!rep.pass);
  CHECK(rep.max_residual > 1e-9);
  CHECK(rep.max_residual < 1e-6);
  for (const DrawRecord& d : rep.draws) {
    CHECK(d.converged);
    CHECK(d.error.empty());
  }
  CHECK(rep.summary_line().substr(0, 4) == "FAIL");
}

TEST_CASE("a draw that raises is captured instead of aborting the run") {
  RunConfig rc;
  rc.command = Command::partition_demo;
  rc.nome_p = rc.nome_q = 0.2;
  rc.n = 4;  // two four-component sites exceed the supported patch size
  rc.draws = 1;
  rc.grid_n = 16;
  rc.max_grid_n = 16;
  const VerificationReport rep = run(rc);
  CHECK(!rep.pass);
  REQUIRE(rep.draws.size() == 1);
  CHECK(!rep.draws[0].error.empty());
  CHECK(!rep.draws[0].converged);
  const json j = json::parse(rep.to_json());
  CHECK(j.at("summary").at("draws_converged") == 0);
  CHECK(j.at("draws").at(0).at("error") != "");
}

TEST_CASE("json reports are schema-stable and deterministic up to timing") {
  RunConfig rc;
  rc.command = Command::verify_star_star;
  rc.nome_p = rc.nome_q = 0.2;
  rc.n = 2;
  rc.seed = 42;
  rc.draws = 2;
  rc.grid_n = 32;
  rc.max_grid_n = 32;
  rc.rel_tol = 1e-6;

  const VerificationReport a = run(rc);
  const VerificationReport b = run(rc);
  const std::string ja = a.to_json();
  CHECK(ja.back() == '\n');
  CHECK(without_wall(ja) == without_wall(b.to_json()));

  const json j = json::parse(ja);
  CHECK(j.at("config").at("command") == "verify-star-star");
  CHECK(j.at("config").at("p") == "0.20000000000000001");
  CHECK(j.at("config").at("seed") == 42);
  CHECK(j.at("config").at("grid") == 32);
  REQUIRE(j.at("draws").size() == 2);
  for (const auto& draw : j.at("draws")) {
    CHECK(draw.contains("params"));
    CHECK(draw.contains("residuals"));
    CHECK(draw.contains("residual"));
    CHECK(draw.contains("grid_used"));
    CHECK(draw.contains("est_rel_err"));
    CHECK(draw.contains("converged"));
    CHECK(draw.at("params").contains("a"));
  }
  CHECK(j.at("summary").at("pass") == true);
  // The summary is consistent with the recorded draws.
  const double r0 = std::stod(j.at("draws").at(0).at("residual").get<std::string>());
  const double r1 = std::stod(j.at("draws").at(1).at("residual").get<std::string>());
  const double max_res =
      std::stod(j.at("summary").at("max_residual").get<std::string>());
  const double med_res =
      std::stod(j.at("summary").at("median_residual").get<std::string>());
  CHECK(max_res == std::max(r0, r1));
  CHECK(med_res == doctest::Approx(0.5 * (r0 + r1)).epsilon(1e-15));
}

TEST_CASE("csv reports carry one row per draw and differ only in timing") {
  RunConfig rc;
  rc.command = Command::verify_star_star;
  rc.nome_p = rc.nome_q = 0.2;
  rc.n = 2;
  rc.seed = 42;
  rc.draws = 3;
  rc.grid_n = 32;
  rc.max_grid_n = 32;
  rc.rel_tol = 1e-6;

  const std::string csv_a = run(rc).to_csv();
  const std::string csv_b = run(rc).to_csv();

  std::vector<std::string> rows_a, rows_b;
  {
    std::istringstream sa(csv_a), sb(csv_b);
    std::string line;
    while (std::getline(sa, line)) rows_a.push_back(line);
    while (std::getline(sb, line)) rows_b.push_back(line);
  }
  REQUIRE(rows_a.size() == 4);  // header + one row per draw
  REQUIRE(rows_b.size() == 4);
  CHECK(rows_a[0] ==
        "index,residual,grid_used,est_rel_err,converged,error,wall_ms,"
        "residuals,params");
  for (std::size_t r = 1; r < rows_a.size(); ++r) {
    std::vector<std::string> fa = split_csv_row(rows_a[r]);
    std::vector<std::string> fb = split_csv_row(rows_b[r]);
    REQUIRE(fa.size() == 9);
    REQUIRE(fb.size() == 9);
    fa[6] = fb[6] = "0";  // wall_ms column
    CHECK(fa == fb);
  }
}

TEST_CASE("reports are written to the configured output path") {
  namespace fs = std::filesystem;
  RunConfig rc;
  rc.command = Command::eval_gamma;
  rc.nome_p = rc.nome_q = 0.3;
  rc.draws = 2;
  rc.rel_tol = 1e-11;

  const fs::path dir = fs::temp_directory_path();
  const fs::path json_path = dir / "starstar_test_report.json";
  const fs::path csv_path = dir / "starstar_test_report.csv";
  rc.output_path = json_path.string();
  const VerificationReport rep = run(rc);
  CHECK(read_file(json_path) == rep.to_json());

  rc.output_path = csv_path.string();
  rc.format = ReportFormat::csv;
  const VerificationReport rep_csv = run(rc);
  CHECK(read_file(csv_path) == rep_csv.to_csv());
  fs::remove(json_path);
  fs::remove(csv_path);

  rc.output_path = "/nonexistent-starstar-dir/report.json";
  CHECK_THROWS_AS(run(rc), ConfigError);
}

TEST_CASE("doubles are serialized with round-trip precision") {
  CHECK(format17(0.5) == "0.5");
  CHECK(format17(1.0 / 3.0) == "0.33333333333333331");
  CHECK(format17(std::numeric_limits<double>::infinity()) == "inf");
}
