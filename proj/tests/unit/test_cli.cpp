#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <sys/wait.h>

#include "dtwin/io/csv.hpp"
#include "dtwin/io/files.hpp"
#include "dtwin/io/model_file.hpp"

using namespace dtwin;
namespace fs = std::filesystem;

namespace {

const fs::path kRoot = fs::temp_directory_path() / "dtwin_cli_test";

int run(const std::string& args) {
  const std::string cmd = std::string(DTWIN_CLI) + " " + args + " > " +
                          (kRoot / "stdout.txt").string() + " 2> " +
                          (kRoot / "stderr.txt").string();
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string out(const std::string& dir, const std::string& file) {
  return io::read_file(kRoot / dir / file);
}

std::string arg(const fs::path& p) { return p.string(); }

const char* kSineConfig =
    "[system]\nname = oscillator\n"
    "[reservoir]\nsize = 120\ndensity = 0.05\nspectral_radius = 0.8\n"
    "ridge = 1e-8\nwarmup = 200\n"
    "[twin]\ntrain_params = 0.8, 1.0, 1.2\nsamples_per_param = 1500\n"
    "transient = 50\ngrid = 0.9:1.1:3\nscan_transient = 100\nscan_window = 200\n"
    "horizon = 300\n"
    "[io]\nthreads = 1\n";

struct Fixture {
  Fixture() {
    fs::remove_all(kRoot);
    fs::create_directories(kRoot);
    io::write_file_atomic(kRoot / "sine.cfg", kSineConfig);
  }
};

}  // namespace

TEST_CASE_FIXTURE(Fixture, "simulate writes a trajectory CSV") {
  CHECK(run("simulate --set system.name=ikeda --set system.param=0.9 "
            "--set system.duration=100 --out " + arg(kRoot / "ik")) == 0);
  const std::string csv = out("ik", "trajectory.csv");
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 102);
  CHECK(fs::exists(kRoot / "ik" / "effective.cfg"));

  CHECK(run("simulate --set system.name=ikeda --set system.param=0.9 "
            "--set system.duration=100 --out " + arg(kRoot / "ik2")) == 0);
  CHECK(out("ik2", "trajectory.csv") == csv);
}

TEST_CASE_FIXTURE(Fixture, "collapsed food chain run ends extinct") {
  CHECK(run("simulate --set system.name=food_chain --set system.param=1.1 "
            "--set system.duration=3000 --out " + arg(kRoot / "fc")) == 0);
  const auto traj = io::trajectory_from_csv(out("fc", "trajectory.csv"));
  CHECK(traj.samples(traj.samples.rows() - 1, 2) < 1e-4);
}

TEST_CASE_FIXTURE(Fixture, "exit codes") {
  CHECK(run("simulate --out " + arg(kRoot / "x")) == 2);  // no system
  CHECK(run("bogus") == 2);
  CHECK(run("simulate --config " + arg(kRoot / "missing.cfg")) == 2);
  CHECK(run("simulate --set system.name=ikeda --set reservoir.sise=3") == 2);
  CHECK(run("scan --config " + arg(kRoot / "sine.cfg") + " --seed 1 --oracle "
            "--grid 1:2") == 2);
  CHECK(run("train --config " + arg(kRoot / "sine.cfg") + " --out " +
            arg(kRoot / "noseed")) == 2);
  // An unstable integration step is a numerical failure, not a usage error.
  CHECK(run("simulate --set system.name=oscillator --set system.step=0.2 "
            "--set system.param=50 --set system.duration=2000") == 3);
  CHECK(run("train --set system.name=food_chain --set twin.train_params=0.98,1.1 "
            "--set twin.samples_per_param=500 --set twin.transient=3000 --seed 1 "
            "--out " + arg(kRoot / "bad")) == 2);
  CHECK(out("", "stderr.txt").find("collapsed regime") != std::string::npos);
}

TEST_CASE_FIXTURE(Fixture, "train, predict, scan and detect") {
  const std::string cfg = " --config " + arg(kRoot / "sine.cfg") + " --seed 5";
  REQUIRE(run("train" + cfg + " --out " + arg(kRoot / "m1")) == 0);
  REQUIRE(run("train" + cfg + " --out " + arg(kRoot / "m2")) == 0);
  const std::string model = out("m1", "model.bin");
  CHECK(model == out("m2", "model.bin"));
  CHECK(io::encode_model(io::decode_model(model)) == model);
  const std::string report = out("m1", "train_report.txt");
  CHECK(report.find("train_params = 0.80000000000000004, 1, 1.2") != std::string::npos);
  CHECK(report.find("residual = ") != std::string::npos);

  const std::string m = " --model " + arg(kRoot / "m1" / "model.bin");
  CHECK(run("predict" + cfg + m + " --dp 0 --out " + arg(kRoot / "p0")) == 0);
  CHECK(out("", "stdout.txt").find("status=sustained") != std::string::npos);
  CHECK(run("predict" + cfg + m + " --horizon 0 --out " + arg(kRoot / "ph")) == 0);
  CHECK(out("", "stdout.txt").find("horizon 0") != std::string::npos);
  const std::string empty = out("ph", "forecast.csv");
  CHECK(std::count(empty.begin(), empty.end(), '\n') == 1);
  CHECK(run("predict --model " + arg(kRoot / "m1" / "model.bin")) == 2);  // no seed

  CHECK(run("scan" + cfg + m + " --grid 1:1:1 --out " + arg(kRoot / "s1")) == 0);
  const std::string one = out("s1", "diagram.csv");
  CHECK(std::count(one.begin(), one.end(), '\n') == 1 + 2);
  CHECK(run("scan" + cfg + m + " --out " + arg(kRoot / "s2")) == 0);
  CHECK(run("scan" + cfg + m + " --out " + arg(kRoot / "s3")) == 0);
  CHECK(out("s2", "diagram.csv") == out("s3", "diagram.csv"));
  CHECK(run("scan" + cfg + m + " --grid 3:1 --out " + arg(kRoot / "s4")) == 2);

  CHECK(run("detect" + cfg + " --input " + arg(kRoot / "s2" / "diagram.csv") +
            " --out " + arg(kRoot / "d1")) == 0);
  CHECK(out("d1", "report.txt").find("kind = none") != std::string::npos);
  CHECK(run("detect" + cfg + " --input " + arg(kRoot / "p0" / "forecast.csv") +
            " --out " + arg(kRoot / "d2")) == 0);
  CHECK(run("detect" + cfg + " --input " + arg(kRoot / "sine.cfg")) == 2);
}
