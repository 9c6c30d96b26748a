#include "doctest.h"

#include "clsig/seifert.hpp"

#include "test_support.hpp"

#include <nlohmann/json.hpp>

#include <string>

#ifdef CLSIG_CLI_PATH

namespace {

using testsup::CmdResult;
using testsup::contains;
using testsup::file_exists;
using testsup::read_file;
using testsup::run_cli;
using testsup::scratch_path;

// One shared trefoil file for the whole suite.
const std::string& trefoil_file() {
  static std::string path = [] {
    std::string p = scratch_path("trefoil.json");
    clsig::BraidWord w;
    w.strands = 2;
    w.letters = {1, 1, 1};
    clsig::save_seifert_file(clsig::braid_seifert(w, "trefoil"), p);
    return p;
  }();
  return path;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("braid writes the canonical file") {
    std::string out = scratch_path("braid.json");
    CmdResult r = run_cli("braid --strands 2 --word \"1 1 1\" --label trefoil --out " + out);
    CHECK(r.code == 0);
    CHECK(r.out.empty());
    clsig::BraidWord w;
    w.strands = 2;
    w.letters = {1, 1, 1};
    CHECK(read_file(out) == clsig::to_canonical_json(clsig::braid_seifert(w, "trefoil")));
  }

  TEST_CASE("torus writes the canonical file and comma words parse") {
    std::string out = scratch_path("t23.json");
    CHECK(run_cli("torus --p 2 --q 3 --out " + out).code == 0);
    CHECK(read_file(out) == clsig::to_canonical_json(clsig::torus_link_data(2, 3)));

    std::string out2 = scratch_path("braid-commas.json");
    CHECK(run_cli("braid --strands 3 --word 1,-2,1,-2 --out " + out2).code == 0);
    clsig::BraidWord w;
    w.strands = 3;
    w.letters = {1, -2, 1, -2};
    CHECK(read_file(out2) == clsig::to_canonical_json(clsig::braid_seifert(w)));
  }

  TEST_CASE("sig evaluates exactly at -1") {
    CmdResult r = run_cli("sig --link " + trefoil_file() + " --omega 1/2");
    CHECK(r.code == 0);
    CHECK(r.out == "signature=-2 nullity=0\n");
    CHECK(r.err.empty());
  }

  TEST_CASE("sig at angle zero warns about the degenerate form") {
    CmdResult r = run_cli("sig --link " + trefoil_file() + " --omega 0");
    CHECK(r.code == 0);
    CHECK(r.out == "signature=0 nullity=2\n");
    CHECK(contains(r.err, "angle 0"));
  }

  TEST_CASE("sig rejects a coordinate-count mismatch") {
    CmdResult r = run_cli("sig --link " + trefoil_file() + " --omega 1/2,1/3");
    CHECK(r.code == 2);
    CHECK(contains(r.err, "error:"));
  }

  TEST_CASE("integrate reproduces the trefoil average") {
    CmdResult r = run_cli("integrate --link " + trefoil_file());
    CHECK(r.code == 0);
    CHECK(contains(r.out, "value="));
    double v = std::stod(r.out.substr(r.out.find("value=") + 6));
    CHECK(v == doctest::Approx(-4.0 / 3.0).epsilon(0.02));
    CHECK(contains(r.out, "budget_exceeded=0"));
  }

  TEST_CASE("integrate over a degenerate subgroup needs authorization") {
    std::string args = "integrate --link " + trefoil_file() + " --group \"n=1; rel=2\"";
    CmdResult refused = run_cli(args);
    CHECK(refused.code == 2);
    CHECK(contains(refused.err, "degenerate"));

    CmdResult ok = run_cli(args + " --fallback-degenerate");
    CHECK(ok.code == 0);
    CHECK(contains(ok.out, "value=-1 "));
    CHECK(contains(ok.out, "grid=1 "));
    CHECK(contains(ok.out, "degenerate_samples=1 "));
  }

  TEST_CASE("integrate reports a clamped budget with exit 3") {
    // Three split unknots: rank-3 torus, every sample trivially zero.
    clsig::ColoredSeifertData d;
    d.colors = 3;
    d.dim = 0;
    d.label = "three split unknots";
    d.matrices.assign(8, clsig::IntMat::Zero(0, 0));
    std::string link = scratch_path("unknots3.json");
    clsig::save_seifert_file(d, link);

    CmdResult r = run_cli("integrate --link " + link + " --grid 4096 --format csv");
    CHECK(r.code == 3);
    CHECK(contains(r.out, "value,grid,estimated_error,degenerate_samples,budget_exceeded\n"));
    CHECK(contains(r.out, ",101,"));
    CHECK(contains(r.out, ",1\n"));
  }

  TEST_CASE("integrate writes --out and --samples-out files") {
    std::string out = scratch_path("result.txt");
    std::string samples = scratch_path("samples.csv");
    CmdResult r = run_cli("integrate --link " + trefoil_file() +
                          " --grid 64 --single-grid --out " + out + " --samples-out " + samples);
    CHECK(r.code == 0);
    CHECK(r.out.empty());
    CHECK(contains(read_file(out), "value="));
    std::string rows = read_file(samples);
    CHECK(contains(rows, "omega_angles,signature,nullity,weight\n"));
    CHECK(std::count(rows.begin(), rows.end(), '\n') == 65);  // header + 64 samples
  }

  TEST_CASE("integrate is worker-invariant byte for byte") {
    std::string t34 = scratch_path("t34.json");
    REQUIRE(run_cli("torus --p 3 --q 4 --out " + t34).code == 0);
    std::string base = "integrate --link " + t34 + " --grid 256 --single-grid";
    std::string s1 = scratch_path("w1.csv"), s4 = scratch_path("w4.csv"),
                s8 = scratch_path("w8.csv");
    CmdResult r1 = run_cli(base + " --workers 1 --samples-out " + s1);
    CmdResult r4 = run_cli(base + " --workers 4 --samples-out " + s4);
    CmdResult r8 = run_cli(base + " --workers 8 --samples-out " + s8);
    CHECK(r1.code == 0);
    CHECK(r1.out == r4.out);
    CHECK(r1.out == r8.out);
    std::string rows = read_file(s1);
    CHECK(rows == read_file(s4));
    CHECK(rows == read_file(s8));
    CHECK(contains(rows, "omega_angles,signature,nullity,weight\n"));
  }

  TEST_CASE("integrate json format carries every field") {
    CmdResult r = run_cli("integrate --link " + trefoil_file() +
                          " --grid 128 --single-grid --format json");
    CHECK(r.code == 0);
    nlohmann::json doc = nlohmann::json::parse(r.out);
    CHECK(doc["grid"] == 128);
    CHECK(doc["budget_exceeded"] == false);
    CHECK(doc["degenerate_samples"] == 0);
    CHECK(doc["value"].get<double>() == doctest::Approx(-4.0 / 3.0).epsilon(0.05));
  }

  TEST_CASE("twist classify lines") {
    CHECK(run_cli("twist classify 5").out == "Order4 (21 = 3·7)\n");
    CHECK(run_cli("twist classify --n=-1").out == "InfiniteOrder\n");
    CHECK(run_cli("twist classify 2").out == "AlgebraicallySlice (9 = 3^2)\n");
    CmdResult missing = run_cli("twist classify");
    CHECK(missing.code == 2);
    CHECK(contains(missing.err, "error:"));
  }

  TEST_CASE("twist exceptions audit text output") {
    CmdResult r = run_cli("twist exceptions --nmax 150 --paper-diff");
    CHECK(r.code == 0);
    CHECK(contains(r.out, "exceptions search: nmax=150 mode=default\n"));
    CHECK(contains(r.out,
                   "self-consistency bound: every candidate exception satisfies n <= 93"));
    CHECK(contains(r.out, "candidates (33): 1 3 4 9 10 11 15 16 18 22 24 25 27 28 29 36 37 38 "
                          "39 45 48 49 55 61 64 66 69 70 79 83 84 87 93\n"));
    CHECK(contains(r.out, "tamulis-filtered (10): 1 11 16 29 36 38 55 61 66 83\n"));
    CHECK(contains(r.out, "paper-diff candidates: missing from computed: 34 51 58 67 78 101; "
                          "extra in computed: (none)\n"));
    CHECK(contains(r.out, "  n=34: obstructed by decomposition (6,2) with f=1\n"));
    CHECK(contains(r.out, "  n=51: obstructed by decomposition (7,3) with f=10\n"));
    CHECK(contains(r.out, "  n=58: obstructed by decomposition (7,4) with f=5\n"));
    CHECK(contains(r.out, "  n=67: obstructed by decomposition (7,5) with f=4\n"));
    CHECK(contains(r.out, "  n=78: obstructed by decomposition (7,6) with f=7\n"));
    CHECK(contains(r.out, "  n=101: obstructed by decomposition (5,9) with f=8\n"));
    CHECK(contains(r.out, "paper-diff filtered: missing from computed: 51 101; "
                          "extra in computed: (none)\n"));
    CHECK(contains(r.out, "n=73 [293 = 293] obstructed; decompositions: (9,1) f=80; "
                          "x-witness: x=8\n"));
  }

  TEST_CASE("twist exceptions json output") {
    CmdResult r = run_cli("twist exceptions --nmax 150 --paper-diff --format json");
    CHECK(r.code == 0);
    nlohmann::json doc = nlohmann::json::parse(r.out);
    CHECK(doc["self_consistency_bound"] == 93);
    CHECK(doc["candidates"].size() == 33);
    CHECK(doc["tamulis_filtered"].size() == 10);
    CHECK(doc["paper_diff"]["candidates"]["missing"] ==
          nlohmann::json::array({34, 51, 58, 67, 78, 101}));
    CHECK(doc["paper_diff"]["filtered"]["missing"] == nlohmann::json::array({51, 101}));
    CHECK(doc["audits"][0]["n"] == 1);
    CHECK(doc["audits"][0]["verdict"] == "candidate-exception");
    bool saw67 = false;
    for (const auto& a : doc["audits"]) {
      if (a["n"] == 67) {
        saw67 = true;
        CHECK(a["verdict"] == "obstructed");
        CHECK(a["witness"]["a"] == 7);
        CHECK(a["witness"]["b"] == 5);
        CHECK(a["witness"]["f"] == 4);
      }
    }
    CHECK(saw67);
  }

  TEST_CASE("strict geometry mode is reported") {
    CmdResult r = run_cli("twist exceptions --nmax 110 --strict-geometry --paper-diff");
    CHECK(r.code == 0);
    CHECK(contains(r.out, "mode=strict (a>=b)"));
    CHECK(contains(r.out, "self-consistency bound: none in strict mode"));
    CHECK(contains(r.out, "missing from computed: 34 51 58 67 78;"));
  }

  TEST_CASE("failed construction leaves no partial file") {
    std::string out = scratch_path("never-written.json");
    CmdResult r = run_cli("torus --p 3 --q 0 --out " + out);
    CHECK(r.code == 2);
    CHECK(contains(r.err, "error:"));
    CHECK(!file_exists(out));
  }

  TEST_CASE("bad command lines exit 2") {
    CHECK(run_cli("sig --link missing.json").code == 2);       // --omega required
    CHECK(run_cli("frobnicate").code == 2);                    // unknown subcommand
    CHECK(run_cli("integrate --link x --format yaml").code == 2);
    CHECK(run_cli("twist exceptions").code == 2);              // --nmax required
  }

  TEST_CASE("missing input file is a clean error") {
    CmdResult r = run_cli("sig --link " + scratch_path("nonexistent.json") + " --omega 1/2");
    CHECK(r.code == 2);
    CHECK(contains(r.err, "error:"));
  }

  TEST_CASE("help exits zero and names every subcommand") {
    CmdResult r = run_cli("--help");
    CHECK(r.code == 0);
    for (const char* cmd : {"sig", "integrate", "twist", "braid", "torus"}) {
      CHECK(contains(r.out, cmd));
    }
  }
}

#endif  // CLSIG_CLI_PATH
