#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "dtwin/dynsys/oracle.hpp"
#include "dtwin/dynsys/system.hpp"
#include "dtwin/error.hpp"
#include "dtwin/io/binary.hpp"
#include "dtwin/io/config.hpp"
#include "dtwin/io/csv.hpp"
#include "dtwin/io/files.hpp"
#include "dtwin/io/model_file.hpp"
#include "dtwin/twin/detect.hpp"
#include "dtwin/twin/twin.hpp"

using namespace dtwin;
namespace fs = std::filesystem;

namespace {

twin::TrainedTwin small_twin() {
  twin::TrainingPlan plan;
  plan.system = dynsys::make_system("oscillator");
  plan.train_params = {0.9, 1.1};
  plan.samples_per_param = 600;
  plan.transient = 10;
  reservoir::ReservoirConfig c;
  c.size = 60;
  c.input_dim = c.output_dim = 2;
  c.density = 0.1;
  c.warmup = 100;
  c.seed = 42;
  c.input_noise = 1e-4;
  return twin::train_twin(twin::assemble_training_data(plan), c);
}

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("dtwin_test_" + name);
  fs::remove_all(p);
  return p;
}

}  // namespace

TEST_CASE("byte reader and writer") {
  io::ByteWriter w;
  w.u8(7);
  w.u32(0xdeadbeef);
  w.u64(1ULL << 60);
  w.f64(-0.1);
  w.str("hello");
  const std::string bytes = w.bytes();
  CHECK(static_cast<unsigned char>(bytes[1]) == 0xef);  // little-endian
  io::ByteReader r(bytes);
  CHECK(r.u8() == 7);
  CHECK(r.u32() == 0xdeadbeef);
  CHECK(r.u64() == (1ULL << 60));
  CHECK(r.f64() == -0.1);
  CHECK(r.str() == "hello");
  CHECK(r.done());
  CHECK_THROWS_AS(r.u8(), Error);
}

TEST_CASE("model file round trip is bitwise stable") {
  const twin::TrainedTwin t = small_twin();
  const std::string a = io::encode_model(t);
  const twin::TrainedTwin back = io::decode_model(a);
  CHECK(io::encode_model(back) == a);
  CHECK(back.readout.weights == t.readout.weights);
  CHECK(Eigen::MatrixXd(back.matrices.recurrent) == Eigen::MatrixXd(t.matrices.recurrent));
  CHECK(back.config.seed == 42);
  CHECK(back.system_name == "oscillator");
  CHECK(back.system_params == t.system_params);
  CHECK(back.config.input_noise == 1e-4);

  twin::TrainedTwin flagged = t;
  flagged.collapse.absorbing = true;
  flagged.collapse.blow_up_collapses = true;
  const twin::TrainedTwin fb = io::decode_model(io::encode_model(flagged));
  CHECK(fb.collapse.absorbing);
  CHECK(fb.collapse.blow_up_collapses);

  const auto f1 = twin::predict_at_parameter(t, 1.0, t.warm, 50);
  const auto f2 = twin::predict_at_parameter(back, 1.0, back.warm, 50);
  CHECK(f1.trajectory.samples == f2.trajectory.samples);

  const fs::path dir = scratch_dir("model");
  io::save_model(dir / "m.bin", t);
  CHECK(io::read_file(dir / "m.bin") == a);
  CHECK(io::encode_model(io::load_model(dir / "m.bin")) == a);
  CHECK_FALSE(fs::exists(dir / "m.bin.tmp"));

  CHECK_THROWS_AS(io::decode_model(a.substr(0, a.size() - 3)), Error);
  CHECK_THROWS_AS(io::decode_model(a + "x"), Error);
  std::string wrong = a;
  wrong[0] = 'X';
  CHECK_THROWS_AS(io::decode_model(wrong), Error);
  CHECK_THROWS_AS(io::load_model(dir / "missing.bin"), Error);
  fs::remove_all(dir);
}

TEST_CASE("doubles print with round-trip precision") {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 0.0, 1e-4}) {
    CHECK(io::parse_double(io::format_double(v)) == v);
  }
  CHECK(io::format_double(0.1) == "0.10000000000000001");
  CHECK_THROWS_AS(io::parse_double("1.0x"), Error);
  CHECK_THROWS_AS(io::parse_double(""), Error);
}

TEST_CASE("trajectory CSV is idempotent") {
  const auto sys = dynsys::make_system("food_chain");
  const auto traj = dynsys::integrate(sys, sys.initial_state, 0.98, 50.0, 0.01, 7.5);
  const std::string text = io::trajectory_to_csv(traj);
  CHECK(text.rfind("t,x1,x2,x3,p\n", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 52);
  const auto back = io::trajectory_from_csv(text);
  CHECK(back.samples == traj.samples);
  CHECK(back.param == traj.param);
  CHECK(io::trajectory_to_csv(back) == text);
  CHECK(io::sniff_csv(text) == io::CsvKind::trajectory);

  dynsys::Trajectory odd;
  odd.t0 = 0.1;
  odd.dt = 0.3;
  odd.samples = dynsys::Samples::Random(40, 2);
  const std::string t1 = io::trajectory_to_csv(odd);
  const std::string t2 = io::trajectory_to_csv(io::trajectory_from_csv(t1));
  CHECK(io::trajectory_to_csv(io::trajectory_from_csv(t2)) == t2);

  CHECK_THROWS_AS(io::trajectory_from_csv("a,b\n1,2\n"), Error);
  CHECK_THROWS_AS(io::trajectory_from_csv("t,x1,p\n0,1,2\n1,2\n"), Error);
  CHECK_THROWS_AS(io::trajectory_from_csv("t,x1,p\n0,1,2\n1,2,3\n"), Error);
}

TEST_CASE("diagram CSV and report text are idempotent") {
  const auto sys = dynsys::make_system("ikeda");
  dynsys::ScanSettings st;
  st.transient = 500;
  st.window = 300;
  st.threads = 1;
  const auto d = dynsys::oracle_bifurcation_scan(sys, {0.6, 0.7, 0.9, 1.05}, st);
  const std::string text = io::diagram_to_csv(d);
  CHECK(io::sniff_csv(text) == io::CsvKind::diagram);
  CHECK(std::count(text.begin(), text.end(), '\n') == 1 + 4 * 2);
  const auto back = io::diagram_from_csv(text);
  CHECK(io::diagram_to_csv(back) == text);
  REQUIRE(back.entries.size() == 4);
  CHECK(back.variable_names == d.variable_names);
  CHECK(back.entries[2].summary.variables[1].extrema ==
        d.entries[2].summary.variables[1].extrema);
  CHECK(back.entries[3].summary.collapsed == d.entries[3].summary.collapsed);

  const auto rep = twin::detect_transition(back);
  const std::string rt = io::report_to_text(rep);
  CHECK(io::report_to_text(io::report_from_text(rt)) == rt);
  CHECK(rt.rfind("[transition]\n", 0) == 0);

  CHECK_THROWS_AS(io::diagram_from_csv("source,p\n"), Error);
  CHECK(io::sniff_csv("hello\n") == io::CsvKind::unknown);
}

TEST_CASE("config parsing") {
  const std::string text =
      "# food chain\n"
      "[system]\nname = food_chain\nxc = 0.41\ncollapse_absorbing = false\n\n"
      "[reservoir]\nsize = 300\nridge = 1e-7\ninput_noise = 2e-4\n"
      "[twin]\ntrain_params = 0.975, 0.98, 0.99\ngrid = 0.9:1.2:20\n"
      "[io]\nseed = 17\nout = results\n";
  const io::RunConfig cfg = io::parse_run_config(text, io::RunConfig{});
  CHECK(*cfg.system.name == "food_chain");
  CHECK(cfg.system.params.at("xc") == 0.41);
  CHECK(cfg.reservoir.size == 300);
  CHECK(cfg.reservoir.input_noise == 2e-4);
  CHECK_FALSE(cfg.make_system().collapse.absorbing);
  CHECK(cfg.twin.train_params == std::vector<double>{0.975, 0.98, 0.99});
  CHECK(cfg.twin.grid.n == 20);
  CHECK(*cfg.io.seed == 17);
  CHECK(cfg.make_system().fixed_params.at("xc") == 0.41);
  CHECK(cfg.reservoir_for(cfg.make_system()).input_dim == 3);

  const std::string canon = io::run_config_to_text(cfg);
  CHECK(io::run_config_to_text(io::parse_run_config(canon, io::RunConfig{})) == canon);

  io::RunConfig o = cfg;
  io::apply_override(o, "reservoir.spectral_radius=1.1");
  io::apply_override(o, "system.xc=0.5");
  CHECK(o.reservoir.spectral_radius == 1.1);
  CHECK(o.system.params.at("xc") == 0.5);
}

TEST_CASE("config errors") {
  auto kind_of = [](const std::string& text) {
    try {
      io::parse_run_config(text, io::RunConfig{});
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::io;  // marker: no error
  };
  CHECK(kind_of("[reservoir]\nsizee = 3\n") == ErrorKind::config);
  CHECK(kind_of("[bogus]\na = 1\n") == ErrorKind::config);
  CHECK(kind_of("[system]\nname = ikeda\nkapa = 1\n") == ErrorKind::config);
  CHECK(kind_of("[system]\ngamma = 1\n") == ErrorKind::config);
  CHECK(kind_of("[io]\nseed = -3\n") == ErrorKind::config);
  CHECK(kind_of("[io]\nseed = 1\nseed = 2\n") == ErrorKind::config);
  CHECK(kind_of("seed = 1\n") == ErrorKind::config);
  CHECK(kind_of("[twin]\ngrid = 1:0:5\n") == ErrorKind::config);
  CHECK(kind_of("[system]\nname = lorenz\n") == ErrorKind::config);

  const io::RunConfig empty;
  try {
    empty.make_system();
    FAIL("expected usage error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::usage);
  }
  CHECK_THROWS_AS(empty.require_seed(), Error);
  io::RunConfig cfg;
  CHECK_THROWS_AS(io::apply_override(cfg, "seed=3"), Error);
  CHECK_THROWS_AS(io::load_run_config("/nonexistent/x.cfg"), Error);
}

TEST_CASE("grid strings") {
  const io::GridSpec g = io::parse_grid("0.9:1.2:20");
  CHECK(g.values().size() == 20);
  CHECK(io::parse_grid(io::format_grid(g)).values() == g.values());
  CHECK(io::parse_grid("1:1:1").values() == std::vector<double>{1.0});
  for (const char* bad : {"", "1:2", "1:2:0", "2:1:3", "a:2:3", "1:2:3:4", "1:2:x"})
    CHECK_THROWS_AS(io::parse_grid(bad), Error);
}

TEST_CASE("atomic writes replace whole files") {
  const fs::path dir = scratch_dir("atomic");
  io::write_file_atomic(dir / "sub" / "f.txt", "first");
  io::write_file_atomic(dir / "sub" / "f.txt", "second");
  CHECK(io::read_file(dir / "sub" / "f.txt") == "second");
  CHECK_FALSE(fs::exists(dir / "sub" / "f.txt.tmp"));
  fs::remove_all(dir);
}
