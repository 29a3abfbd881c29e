#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "imcf/checkpoint.hpp"
#include "imcf/runner.hpp"
#include "imcf/scenario.hpp"
#include "imcf/timeseries.hpp"

using namespace imcf;
namespace fs = std::filesystem;

namespace {

const char* kMinimalUmbilic = R"(name = umbilic-min
[domain]
kind = homogeneous
n = 4
[seed]
family = umbilic
lambda0 = 1.0
[flow]
variant = simplified
[step]
method = rk4
cfl = 1.0
dt_max = 1e-3
t_end = 0.01
record_every = 5
)";

std::string tmpdir(const char* leaf) {
  fs::path p = fs::temp_directory_path() / "imcf_test" / leaf;
  fs::remove_all(p);
  fs::create_directories(p);
  return p.string();
}

bool has_issue(const ScenarioParse& r, const std::string& field) {
  for (const auto& i : r.issues)
    if (i.field == field) return true;
  return false;
}

}  // namespace

TEST_CASE("minimal umbilic document parses to n=4, lambda0=1") {
  ScenarioParse r = parse_scenario(kMinimalUmbilic);
  REQUIRE(r.ok());
  CHECK(r.scenario->domain.n == 4);
  CHECK(r.scenario->lambda0 == 1.0);
  CHECK(r.scenario->domain.kind == DomainKind::Homogeneous);
  CHECK(r.scenario->variant == FlowVariant::Simplified);
  CHECK(r.scenario->step.record_every == 5);
}

TEST_CASE("validation error catalogue, all errors reported at once") {
  // missing dt_max AND bad cfl AND incompatible seed: all three reported
  const char* bad = R"(name = broken
[domain]
kind = homogeneous
n = 4
[seed]
family = torus-random
amplitude = 0.1
seed = 7
[flow]
variant = simplified
[step]
method = rk4
cfl = 1.5
t_end = 0.01
)";
  ScenarioParse r = parse_scenario(bad);
  CHECK(!r.ok());
  CHECK(has_issue(r, "step.dt_max"));
  CHECK(has_issue(r, "step.cfl"));
  CHECK(has_issue(r, "seed.family"));
  CHECK(r.issues.size() >= 3);
}

TEST_CASE("parse errors carry line numbers") {
  ScenarioParse r = parse_scenario("name = x\n???\n[bogus]\nk = v\n");
  CHECK(!r.ok());
  bool line2 = false, bogus = false;
  for (const auto& i : r.issues) {
    if (i.line == 2) line2 = true;
    if (i.line == 3) bogus = true;
  }
  CHECK(line2);
  CHECK(bogus);
}

TEST_CASE("more validation cases: radius, points, variant, boundary") {
  const char* bad = R"(name = p
[domain]
kind = patch
n = 3
points = 3
radius = 0.9
boundary = sticky
[seed]
family = umbilic
lambda0 = -1
[flow]
variant = fancy
[step]
method = leapfrog
cfl = 0.5
dt_max = 1e-3
t_end = 1.0
)";
  ScenarioParse r = parse_scenario(bad);
  CHECK(!r.ok());
  CHECK(has_issue(r, "domain.points"));
  CHECK(has_issue(r, "domain.radius"));
  CHECK(has_issue(r, "domain.boundary"));
  CHECK(has_issue(r, "seed.lambda0"));
  CHECK(has_issue(r, "flow.variant"));
  CHECK(has_issue(r, "step.method"));
}

TEST_CASE("CSV header is frozen (golden)") {
  CHECK(std::string(kCsvHeader) ==
        "t,H_min,H_max,A2_min,A2_max,eps,beta,F_n,D1,D2,normG2,normC2,"
        "sec_min,sec_max,vol,s1,s2");
  // and a written file starts with exactly that line
  std::string dir = tmpdir("csv");
  DiagnosticsRecord r;
  r.t = 0.5;
  emit_timeseries({r}, dir + "/ts.csv");
  std::ifstream in(dir + "/ts.csv");
  std::string line;
  std::getline(in, line);
  CHECK(line == kCsvHeader);
  std::getline(in, line);
  CHECK(line.substr(0, 4) == "0.5,");
}

TEST_CASE("checkpoint round-trips bit-exactly and rejects version/magic damage") {
  DomainSpec dom = DomainSpec::torus(2, 8, 1.0);
  Checkpoint ck;
  ck.scenario_hash = 0xdeadbeefcafef00dULL;
  ck.scenario_text = "name = x\n";
  ck.t = 0.125;
  ck.step = 77;
  ck.M_norm = 2.5;
  ck.g = Sym2Field(dom);
  ck.h = Sym2Field(dom);
  for (std::size_t i = 0; i < ck.g.raw().size(); ++i) {
    ck.g.raw()[i] = 1.0 + 0.1 * static_cast<double>(i);
    ck.h.raw()[i] = -0.3 * static_cast<double>(i);
  }
  GaugeData gd{ck.g, VectorField(dom)};
  for (std::size_t i = 0; i < gd.F.raw().size(); ++i) gd.F.raw()[i] = 0.01 * i;
  ck.gauge = gd;

  std::string dir = tmpdir("ckpt");
  std::string path = dir + "/a.ck";
  save_checkpoint(path, ck);
  Checkpoint re = load_checkpoint(path);
  CHECK(re.scenario_hash == ck.scenario_hash);
  CHECK(re.scenario_text == ck.scenario_text);
  CHECK(re.t == ck.t);
  CHECK(re.step == ck.step);
  CHECK(re.M_norm == ck.M_norm);
  CHECK(re.g.raw() == ck.g.raw());
  CHECK(re.h.raw() == ck.h.raw());
  REQUIRE(re.gauge.has_value());
  CHECK(re.gauge->F.raw() == gd.F.raw());
  CHECK(re.g.dom() == dom);

  // corrupt the version field (offset 8, after the magic)
  {
    std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
    f.seekp(8);
    std::uint32_t v = 99;
    f.write(reinterpret_cast<const char*>(&v), 4);
  }
  CHECK_THROWS_AS((void)load_checkpoint(path), CheckpointError);
  {
    std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
    f.seekp(0);
    f.write("NOTMAGIC", 8);
  }
  CHECK_THROWS_AS((void)load_checkpoint(path), CheckpointError);
}

TEST_CASE("execute_scenario writes CSV, summary and final checkpoint; exit 0") {
  ScenarioParse r = parse_scenario(kMinimalUmbilic);
  REQUIRE(r.ok());
  std::string dir = tmpdir("exec");
  ExecutionReport rep = execute_scenario(*r.scenario, dir);
  CHECK(rep.exit_code == 0);
  CHECK(rep.reason == Termination::Completed);
  CHECK(fs::exists(rep.csv_path));
  CHECK(fs::exists(rep.summary_path));
  CHECK(fs::exists(rep.final_checkpoint_path));
  CHECK(rep.result.records.front().H_min == doctest::Approx(4.0));

  // F_n conserved on the umbilic run (summary-level conservation oracle)
  double f0 = rep.result.records.front().F_n;
  for (const auto& row : rep.result.records)
    CHECK(row.F_n == doctest::Approx(f0).epsilon(1e-10));
}

TEST_CASE("save mid-run, resume, final state matches the straight run bitwise") {
  const char* sc_text = R"(name = resume-roundtrip
[domain]
kind = torus
n = 2
points = 16
extent = 1.0
[seed]
family = torus-random
amplitude = 0.15
seed = 2024
[flow]
variant = simplified
[step]
method = rk4
cfl = 0.5
dt_max = 2e-4
t_end = 0.01
record_every = 10
checkpoint_every = 20
)";
  ScenarioParse r = parse_scenario(sc_text);
  REQUIRE(r.ok());
  std::string dir_a = tmpdir("straight");
  ExecutionReport straight = execute_scenario(*r.scenario, dir_a);
  CHECK(straight.exit_code == 0);
  CHECK(straight.result.steps == 50);

  std::string mid = dir_a + "/checkpoint_00000020.ck";
  REQUIRE(fs::exists(mid));
  std::string dir_b = tmpdir("resumed");
  ExecutionReport resumed = resume_checkpoint(mid, dir_b);
  CHECK(resumed.exit_code == 0);

  CHECK(resumed.result.final_state.t == straight.result.final_state.t);
  CHECK(resumed.result.final_state.g.raw() == straight.result.final_state.g.raw());
  CHECK(resumed.result.final_state.h.raw() == straight.result.final_state.h.raw());

  // the final checkpoint files are byte-identical
  auto slurp = [](const std::string& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
  };
  CHECK(slurp(straight.final_checkpoint_path) == slurp(resumed.final_checkpoint_path));

  // resumed records coincide with the straight run's tail
  std::size_t tail = resumed.result.records.size();
  REQUIRE(tail > 0);
  std::size_t off = straight.result.records.size() - tail;
  for (std::size_t i = 0; i < tail; ++i) {
    CHECK(resumed.result.records[i].t == straight.result.records[off + i].t);
    CHECK(resumed.result.records[i].F_n == straight.result.records[off + i].F_n);
    CHECK(resumed.result.records[i].s1 == straight.result.records[off + i].s1);
  }
}

TEST_CASE("deliberate instability scenario exits with the positivity code") {
  const char* sc_text = R"(name = unstable-demo
[domain]
kind = torus
n = 2
points = 16
extent = 1.0
[seed]
family = torus-random
amplitude = 0.0
seed = 1
h_scale = 0.0
rough_amplitude = 0.7
rough_mode = 4
[flow]
variant = raw
[step]
method = euler
cfl = 1.0
dt_max = 1e9
t_end = 2.0
record_every = 1000000
)";
  ScenarioParse r = parse_scenario(sc_text);
  REQUIRE(r.ok());
  std::string dir = tmpdir("unstable");
  ExecutionReport rep = execute_scenario(*r.scenario, dir);
  CHECK(rep.exit_code == kExitPositivityLost);
  CHECK(rep.reason == Termination::PositivityLost);
  CHECK(rep.result.final_state.t < 2.0);
}

TEST_CASE("exit code mapping table") {
  CHECK(exit_code_for(Termination::Completed) == 0);
  CHECK(exit_code_for(Termination::PositivityLost) == 4);
  CHECK(exit_code_for(Termination::Instability) == 5);
  CHECK(exit_code_for(Termination::MapLeftDomainStop) == 6);
}
