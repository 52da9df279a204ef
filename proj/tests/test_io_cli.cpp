#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "gait/io.hpp"
#include "oracles.hpp"

using namespace gait;
namespace fs = std::filesystem;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

// Runs the installed CLI binary and captures stdout/stderr.
RunResult run_cli(const std::string& args) {
    static int counter = 0;
    const std::string err_path = "cli_stderr_" + std::to_string(counter++) + ".txt";
    const std::string command = std::string(GAIT_CLI_PATH) + " " + args + " 2>" + err_path;
    RunResult result;
    FILE* pipe = popen(command.c_str(), "r");
    REQUIRE(pipe != nullptr);
    char buf[512];
    while (fgets(buf, sizeof(buf), pipe)) result.out += buf;
    const int status = pclose(pipe);
    result.exit_code = WEXITSTATUS(status);
    std::ifstream err(err_path);
    std::stringstream ss;
    ss << err.rdbuf();
    result.err = ss.str();
    std::remove(err_path.c_str());
    return result;
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("gait_test_" + std::to_string(std::random_device{}()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("points file round trip") {
    TempDir dir;
    std::mt19937_64 eng(1);
    const Eigen::MatrixXd points = oracle::random_points(eng, 5, 3);
    const std::string path = dir.file("points.pts");
    io::write_points(path, points);
    const Eigen::MatrixXd loaded = io::read_points(path);
    CHECK((points - loaded).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("malformed points file reports the line number") {
    TempDir dir;
    const std::string path = dir.file("bad.pts");
    std::ofstream(path) << "2 3\n0 1\n0\n1 1\n";  // second row has one column
    try {
        (void)io::read_points(path);
        FAIL("expected a parse error");
    } catch (const io::parse_error& e) {
        CHECK(e.line == 3);
        CHECK(std::string(e.what()).find(":3:") != std::string::npos);
    }
}

TEST_CASE("gram and vector files round trip") {
    TempDir dir;
    std::mt19937_64 eng(2);
    Eigen::MatrixXd gram(3, 3);
    gram << 1.0, 0.25, 0.5,
            0.25, 1.0, 0.125,
            0.5, 0.125, 1.0;
    io::write_gram(dir.file("g.txt"), gram);
    CHECK((io::read_gram(dir.file("g.txt")) - gram).cwiseAbs().maxCoeff() < 1e-12);

    const Eigen::VectorXd v = oracle::random_simplex(eng, 6);
    io::write_vector(dir.file("v.txt"), v);
    CHECK((io::read_vector(dir.file("v.txt")) - v).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("grid files: decimal and PGM") {
    TempDir dir;
    Eigen::MatrixXd intensity(2, 2);
    intensity << 1.0, 2.0, 3.0, 4.0;

    io::write_grid_text(dir.file("g.grid"), intensity);
    const GridMeasure decimal = io::read_grid(dir.file("g.grid"));
    CHECK(decimal.intensity.sum() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(decimal.intensity(1, 1) == doctest::Approx(0.4).epsilon(1e-12));

    io::write_pgm(dir.file("g.pgm"), intensity / intensity.sum(), 255);
    const GridMeasure pgm = io::read_grid(dir.file("g.pgm"));
    CHECK(pgm.side() == 2);
    CHECK(pgm.intensity(1, 1) == doctest::Approx(0.4).epsilon(1e-2));

    std::ofstream(dir.file("neg.grid")) << "2\n1 -2\n3 4\n";
    CHECK_THROWS((void)io::read_grid(dir.file("neg.grid")));
}

TEST_CASE("weighted points round trip") {
    TempDir dir;
    std::mt19937_64 eng(3);
    const EmpiricalMeasure measure = EmpiricalMeasure::from_parts(
        oracle::random_points(eng, 4, 2), oracle::random_simplex(eng, 4));
    io::write_weighted_points(dir.file("m.pts"), measure);
    const EmpiricalMeasure loaded = io::read_weighted_points(dir.file("m.pts"));
    CHECK((measure.atoms - loaded.atoms).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((measure.weights - loaded.weights).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("trace CSV format") {
    TempDir dir;
    const std::string path = dir.file("trace.csv");

    io::write_trace_csv(path, "step,objective", {});
    CHECK(slurp(path) == "step,objective\n");

    io::write_trace_csv(path, "step,objective",
                        {{0.0, 1.5}, {1.0, 1.25}, {2.0, 1.125}});
    const std::string content = slurp(path);
    CHECK(content == "step,objective\n0,1.5\n1,1.25\n2,1.125\n");
}

TEST_CASE("format_sig uses 12 significant digits") {
    CHECK(io::format_sig(std::log(3.0)) == "1.09861228867");
    CHECK(io::format_sig(1.0) == "1");
    CHECK(io::format_sig(0.1438410362258904) == "0.143841036226");
}

TEST_CASE("cli entropy on the identity space") {
    TempDir dir;
    std::ofstream(dir.file("I3.txt")) << "3\n1 0 0\n0 1 0\n0 0 1\n";
    std::ofstream(dir.file("u3.txt")) << "0.3333333333333333\n0.3333333333333333\n"
                                      << "0.3333333333333334\n";
    const RunResult run =
        run_cli("entropy --gram " + dir.file("I3.txt") + " --dist " + dir.file("u3.txt") +
                " --alpha 1");
    CHECK(run.exit_code == 0);
    CHECK(run.out == "1.09861228867\n3\n");
}

TEST_CASE("cli divergence matches KL on identity-like input") {
    TempDir dir;
    std::ofstream(dir.file("x.pts")) << "1 2\n0\n1000\n";
    std::ofstream(dir.file("p.txt")) << "0.5\n0.5\n";
    std::ofstream(dir.file("q.txt")) << "0.25\n0.75\n";
    // Distant points under a narrow kernel: the Gram is effectively identity.
    const RunResult run = run_cli("divergence --x " + dir.file("x.pts") + " --y " +
                                  dir.file("x.pts") + " --px " + dir.file("p.txt") + " --qy " +
                                  dir.file("q.txt") + " --kernel rbf_sq --sigma 0.01 --both");
    CHECK(run.exit_code == 0);
    CHECK(run.out.find("value 0.143841036226") != std::string::npos);
    CHECK(run.out.find("reverse_value") != std::string::npos);
}

TEST_CASE("cli rejects malformed input with a diagnostic line") {
    TempDir dir;
    std::ofstream(dir.file("bad.pts")) << "2 2\n0 1\n0\n";
    const RunResult run = run_cli("divergence --x " + dir.file("bad.pts") + " --y " +
                                  dir.file("bad.pts"));
    CHECK(run.exit_code == 1);
    CHECK(run.err.find(":3:") != std::string::npos);  // offending line named
    CHECK(run.out.empty());
}

TEST_CASE("cli rejects unknown flags") {
    const RunResult run = run_cli("entropy --gram nowhere.txt --dist nowhere.txt --frobnicate");
    CHECK(run.exit_code == 1);
    CHECK(!run.err.empty());
}

TEST_CASE("cli help lists the subcommands and formats") {
    const RunResult run = run_cli("--help");
    CHECK(run.exit_code == 0);
    for (const char* name :
         {"entropy", "divergence", "maxent", "barycenter", "approx", "modes", "mi", "verify"})
        CHECK(run.out.find(name) != std::string::npos);
    CHECK(run.out.find("File formats") != std::string::npos);
    // A bare invocation demands a subcommand.
    CHECK(run_cli("").exit_code == 1);
}

TEST_CASE("cli maxent run is byte-reproducible and writes a manifest") {
    TempDir dir;
    std::ofstream(dir.file("K.txt")) << "3\n1 0.7 0.1\n0.7 1 0.1\n0.1 0.1 1\n";
    const std::string base = "maxent --gram " + dir.file("K.txt") +
                             " --steps 200 --lr 0.1 --seed 5 --amsgrad --trace ";
    const RunResult first = run_cli(base + dir.file("a.csv"));
    const RunResult second = run_cli(base + dir.file("b.csv"));
    CHECK(first.exit_code == 0);
    CHECK(first.out == second.out);
    CHECK(slurp(dir.file("a.csv")) == slurp(dir.file("b.csv")));
    // Trace has header + one row per step.
    std::istringstream trace(slurp(dir.file("a.csv")));
    std::string line;
    int lines = 0;
    while (std::getline(trace, line)) ++lines;
    CHECK(lines >= 2);
    CHECK(slurp(dir.file("a.csv")).rfind("step,objective\n", 0) == 0);
    // Manifest emitted alongside the trace output.
    CHECK(fs::exists(dir.file("a.csv") + ".manifest.json"));
}

TEST_CASE("cli reports numerical failures with exit code 2") {
    TempDir dir;
    fs::create_directories(dir.file("imgs"));
    std::ofstream(dir.file("imgs/a.grid")) << "2\n1 0\n0 0\n";
    std::ofstream(dir.file("imgs/b.grid")) << "2\n0 0\n0 1\n";
    // An absurd step size drives the logits non-finite within a few steps.
    const RunResult run = run_cli("barycenter --images " + dir.file("imgs") +
                                  " --sigma 0.2 --steps 50 --lr 1e308 --out " +
                                  dir.file("bary.pgm"));
    CHECK(run.exit_code == 2);
    CHECK(run.err.find("step") != std::string::npos);
}

TEST_CASE("cli modes emits the sweep CSV with a selection line") {
    TempDir dir;
    std::mt19937_64 eng(9);
    std::ofstream pts(dir.file("p.pts"));
    pts << "2 60\n";
    std::normal_distribution<double> gauss(0.0, 0.3);
    for (int i = 0; i < 60; ++i) {
        const double cx = (i % 3) * 8.0;
        pts << cx + gauss(eng) << " " << gauss(eng) << "\n";
    }
    pts.close();
    const RunResult run = run_cli("modes --points " + dir.file("p.pts") +
                                  " --method diversity --scale-min 0.1 --scale-max 12 "
                                  "--scale-count 60");
    CHECK(run.exit_code == 0);
    CHECK(run.out.rfind("scale,value,smoothed_d2\n", 0) == 0);
    CHECK(run.out.find("\nselected,") != std::string::npos);
}

TEST_CASE("cli mi prints the five standard quantities") {
    TempDir dir;
    std::ofstream(dir.file("j.txt")) << "2 2\n0.25 0.25\n0.25 0.25\n";
    std::ofstream(dir.file("K.txt")) << "2\n1 0\n0 1\n";
    const RunResult run = run_cli("mi --joint " + dir.file("j.txt") + " --gramx " +
                                  dir.file("K.txt") + " --gramy " + dir.file("K.txt"));
    CHECK(run.exit_code == 0);
    CHECK(run.out.find("H_x 0.69314718056") != std::string::npos);
    CHECK(run.out.find("I_xy ") != std::string::npos);
    // Independent uniform joint: I = 0 (within print precision).
    CHECK(run.out.find("I_xy 0\n") != std::string::npos);
}

TEST_CASE("cli verify lines matches the closed form") {
    const RunResult run = run_cli("verify --check lines --trials 1 --phis 0,1 "
                                  "--discretization 500");
    CHECK(run.exit_code == 0);
    CHECK(run.out.find("1.63212055883") != std::string::npos);
}

TEST_CASE("cli thread count does not change verify results") {
    const std::string args = "verify --check divergence --trials 300 --seed 11";
    const RunResult one = run_cli("--threads 1 " + args);
    const RunResult two = run_cli("--threads 4 " + args);
    CHECK(one.exit_code == 0);
    CHECK(one.out == two.out);
    CHECK(one.out.find("violations 0") != std::string::npos);
}

TEST_CASE("cli barycenter writes a PGM and a trace") {
    TempDir dir;
    fs::create_directories(dir.file("imgs"));
    std::ofstream(dir.file("imgs/a.grid")) << "4\n1 0 0 0\n0 1 0 0\n0 0 1 0\n0 0 0 1\n";
    std::ofstream(dir.file("imgs/b.grid")) << "4\n0 0 0 1\n0 0 1 0\n0 1 0 0\n1 0 0 0\n";
    const RunResult run = run_cli("barycenter --images " + dir.file("imgs") +
                                  " --sigma 0.2 --steps 40 --lr 0.05 --out " +
                                  dir.file("bary.pgm") + " --trace " + dir.file("t.csv"));
    CHECK(run.exit_code == 0);
    CHECK(slurp(dir.file("bary.pgm")).rfind("P2\n4 4\n", 0) == 0);
    CHECK(slurp(dir.file("t.csv")).rfind("step,objective\n", 0) == 0);
    // The barycenter PGM reads back as a grid measure.
    const GridMeasure bary = io::read_grid(dir.file("bary.pgm"));
    CHECK(bary.side() == 4);
}

TEST_CASE("cli approx emits a weighted points file") {
    TempDir dir;
    std::mt19937_64 eng(21);
    const Eigen::MatrixXd target = oracle::random_points(eng, 30, 2);
    io::write_points(dir.file("t.pts"), target);
    const RunResult run = run_cli("approx --target " + dir.file("t.pts") +
                                  " --m 5 --mode locations --kernel rbf_sq --sigma 1 "
                                  "--steps 20 --lr 0.01 --seed 1 --out " +
                                  dir.file("fit.pts"));
    CHECK(run.exit_code == 0);
    const EmpiricalMeasure fit = io::read_weighted_points(dir.file("fit.pts"));
    CHECK(fit.count() == 5);
    CHECK(fit.dim() == 2);
    CHECK(std::abs(fit.weights.sum() - 1.0) < 1e-12);
}
