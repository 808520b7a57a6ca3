#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "qg/euler_estimator.hpp"
#include "qg/io_util.hpp"
#include "qg/metric_graph.hpp"
#include "qg/resonance.hpp"
#include "qg/solver.hpp"

namespace fs = std::filesystem;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
};

const fs::path& work_dir() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / "qg_cli_test";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

RunResult run(const std::string& args) {
  const fs::path out_path = work_dir() / "last_stdout.txt";
  const std::string cmd =
      std::string(QG_CLI_BIN) + " " + args + " > " + out_path.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  RunResult result;
  result.exit_code = WEXITSTATUS(status);
  std::ifstream in(out_path);
  std::ostringstream text;
  text << in.rdbuf();
  result.out = text.str();
  return result;
}

std::string path_of(const std::string& name) { return (work_dir() / name).string(); }

bool contains(const std::string& haystack, const std::string& needle) {
  return haystack.find(needle) != std::string::npos;
}

std::string data_rows(const std::string& file) {
  // Everything after the header line.
  const std::string text = qg::read_file(file);
  return text.substr(text.find('\n') + 1);
}

}  // namespace

TEST_CASE("gen writes deterministic graph files") {
  const auto a = run("gen --complete 4 --lmin 0.155 --total 1.494 --seed 7 -o " + path_of("a.graph"));
  REQUIRE(a.exit_code == 0);
  CHECK(contains(a.out, "chi: -2"));
  const auto b = run("gen --complete 4 --lmin 0.155 --total 1.494 --seed 7 -o " + path_of("b.graph"));
  REQUIRE(b.exit_code == 0);
  CHECK(qg::read_file(path_of("a.graph")) == qg::read_file(path_of("b.graph")));
}

TEST_CASE("infeasible generation exits 1 with a diagnostic") {
  const auto r = run("gen --complete 5 --lmin 1.0 --total 3.0 --seed 7 -o " + path_of("bad.graph"));
  CHECK(r.exit_code == 1);
  CHECK(contains(r.out, "error:"));
  CHECK(contains(r.out, "infeasible"));
}

TEST_CASE("unknown flags and missing files exit 1") {
  CHECK(run("gen --no-such-flag 3").exit_code == 1);
  CHECK(run("spectrum --graph " + path_of("missing.graph") + " --count 5 -o " +
            path_of("s.csv")).exit_code == 1);
  CHECK(run("frobnicate").exit_code == 1);
}

TEST_CASE("full pipeline on the K4 analog finds chi = -2") {
  REQUIRE(run("gen --complete 4 --lmin 0.155 --total 1.494 --seed 7 -o " + path_of("k4.graph"))
              .exit_code == 0);
  const auto solve = run("spectrum --graph " + path_of("k4.graph") + " --count 40 -o " +
                         path_of("k4.csv"));
  REQUIRE(solve.exit_code == 0);
  CHECK(contains(solve.out, "levels: 40"));
  CHECK(contains(solve.out, "estk_bound: pass"));

  const auto analyze =
      run("analyze --graph " + path_of("k4.graph") + " --count 40 -o " + path_of("k4_curve.csv"));
  REQUIRE(analyze.exit_code == 0);
  CHECK(contains(analyze.out, "chi: -2"));
  CHECK(contains(analyze.out, "beta: 3"));
  CHECK(contains(analyze.out, "planarity: planar"));
  CHECK(contains(analyze.out, "complete_with_vertices 4"));
  CHECK(contains(analyze.out, "K_used: 28"));
  CHECK(contains(analyze.out, "gap_flags: none"));
}

TEST_CASE("analyze equals the manual gen/spectrum/chi pipeline") {
  // analyze defaults: K = k_required(exact), grid = [0.5 t0, 8 t0] x 60.
  const qg::GraphSummary s = qg::summarize(qg::gen_complete(4, {0.155, 1.494}, 7));
  const auto k_req = qg::k_required(4, s.lt0, 0.25, qg::KMode::exact);

  std::ostringstream manual;
  manual << "chi --spectrum " << path_of("k4.csv") << " --K " << k_req << " --t-lo "
         << qg::format_g(0.5 * s.t0, 17) << " --t-hi " << qg::format_g(8.0 * s.t0, 17)
         << " --t-steps 60 -o " << path_of("manual_curve.csv");
  const auto chi = run(manual.str());
  REQUIRE(chi.exit_code == 0);
  CHECK(contains(chi.out, "chi: -2"));

  CHECK(qg::read_file(path_of("manual_curve.csv")) == qg::read_file(path_of("k4_curve.csv")));
}

TEST_CASE("under-truncated chi exits 2 with an actionable message") {
  const auto r = run("chi --spectrum " + path_of("k4.csv") + " --K 5");
  CHECK(r.exit_code == 2);
  CHECK(contains(r.out, "found: false"));
  CHECK(contains(r.out, "no plateau"));
}

TEST_CASE("ingest round-trips a clean synthetic export with zero gap flags") {
  const qg::Spectrum sp = qg::solve(qg::gen_complete(4, {0.155, 1.494}, 7), 25);
  qg::save_resonance_file(qg::dataset_from_spectrum(sp, 2.06, "synthetic"), path_of("res.csv"));

  const auto r = run("ingest --in " + path_of("res.csv") + " -o " + path_of("ingested.csv"));
  REQUIRE(r.exit_code == 0);
  CHECK(contains(r.out, "levels: 25"));
  CHECK(contains(r.out, "gap_flags: none"));

  const qg::Spectrum back = qg::load_spectrum(path_of("ingested.csv"));
  REQUIRE(back.size() == sp.size());
  for (std::size_t i = 0; i < sp.size(); ++i) {
    CHECK(back.values[i] == doctest::Approx(sp.values[i]).epsilon(1e-9));
  }

  // The dielectric stays metadata; overriding it must not move the levels.
  const auto o = run("ingest --in " + path_of("res.csv") + " --dielectric 3.5 -o " +
                     path_of("ingested2.csv"));
  REQUIRE(o.exit_code == 0);
  CHECK(contains(o.out, "dielectric: 3.5"));
  CHECK(data_rows(path_of("ingested2.csv")) == data_rows(path_of("ingested.csv")));
}

TEST_CASE("perturb with the identity policy copies the data rows") {
  const auto r = run("perturb --in " + path_of("k4.csv") + " -o " + path_of("same.csv") +
                     " --drop-prob 0 --jitter 0 --seed 5");
  REQUIRE(r.exit_code == 0);
  CHECK(data_rows(path_of("same.csv")) == data_rows(path_of("k4.csv")));
  CHECK(contains(qg::read_file(path_of("same.csv")), "provenance=perturbed"));
}

TEST_CASE("analyze accepts a bare spectrum file and uses all levels") {
  const auto r = run("analyze --spectrum " + path_of("k4.csv") + " -o " + path_of("sp_curve.csv"));
  REQUIRE(r.exit_code == 0);
  CHECK(contains(r.out, "K_used: 40"));
  CHECK(contains(r.out, "chi: -2"));
  // Spectrum-only mode cannot derive the graph-based requirements.
  CHECK_FALSE(contains(r.out, "k_required_exact"));
}
