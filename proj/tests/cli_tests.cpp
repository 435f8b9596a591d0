#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

std::string binary() {
    const char* env = std::getenv("HILLSTAB_BIN");
    REQUIRE_MESSAGE(env != nullptr, "HILLSTAB_BIN must point at the CLI binary");
    return env;
}

struct RunResult {
    int exit_code;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& p) {
    std::ifstream is(p);
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

RunResult run(const std::string& args) {
    static int counter = 0;
    const fs::path dir = fs::temp_directory_path() / "hillstab_cli_tests";
    fs::create_directories(dir);
    const fs::path out = dir / ("out" + std::to_string(counter) + ".txt");
    const fs::path err = dir / ("err" + std::to_string(counter) + ".txt");
    ++counter;
    const std::string cmd =
        binary() + " " + args + " > " + out.string() + " 2> " + err.string();
    const int status = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WEXITSTATUS(status);
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
}

}  // namespace

TEST_CASE("certify exit codes and output") {
    const auto ok = run("certify --b 1 --c 1 --C 0.5");
    CHECK(ok.exit_code == 0);
    CHECK(ok.out.find("main criterion") != std::string::npos);
    CHECK(ok.out.find("PASS") != std::string::npos);
    CHECK(ok.out.find("decay rate delta") != std::string::npos);

    const auto fail_asserted = run("certify --b 1 --c 1 --C 2 --assert-stable");
    CHECK(fail_asserted.exit_code == 2);

    const auto fail_not_asserted = run("certify --b 1 --c 1 --C 2");
    CHECK(fail_not_asserted.exit_code == 0);
    CHECK(fail_not_asserted.out.find("FAIL") != std::string::npos);
}

TEST_CASE("input errors exit 1 with a diagnostic") {
    const auto bad_value = run("certify --b -1 --c 1 --C 0.5");
    CHECK(bad_value.exit_code == 1);
    CHECK(bad_value.err.find("b") != std::string::npos);

    const auto bad_flag = run("certify --b 1 --c 1 --C 0.5 --no-such-flag");
    CHECK(bad_flag.exit_code == 1);
    CHECK(bad_flag.err.find("no-such-flag") != std::string::npos);

    const auto missing = run("certify --b 1");
    CHECK(missing.exit_code == 1);

    const auto no_sub = run("");
    CHECK(no_sub.exit_code == 1);
}

TEST_CASE("config file drives certify and flags override it") {
    const fs::path dir = fs::temp_directory_path() / "hillstab_cli_tests";
    fs::create_directories(dir);
    const fs::path cfg = dir / "certify.cfg";
    {
        std::ofstream os(cfg);
        os << "[certify]\n";
        os << "b=1\n";
        os << "c=1\n";
        os << "C=0.5\n";
    }
    const auto from_cfg = run("--config " + cfg.string() + " certify");
    CHECK(from_cfg.exit_code == 0);
    CHECK(from_cfg.out.find("C=0.5") != std::string::npos);

    const auto overridden = run("--config " + cfg.string() + " certify --C 2.5");
    CHECK(overridden.exit_code == 0);
    CHECK(overridden.out.find("C=2.5") != std::string::npos);
    CHECK(overridden.out.find("FAIL") != std::string::npos);

    const fs::path bad = dir / "bad.cfg";
    {
        std::ofstream os(bad);
        os << "[certify]\n";
        os << "unknown_key=3\n";
    }
    const auto bad_run = run("--config " + bad.string() + " certify --b 1 --c 1 --C 0");
    CHECK(bad_run.exit_code == 1);
    CHECK(bad_run.err.find("unknown_key") != std::string::npos);
}

TEST_CASE("resonance growth report") {
    const auto r = run("resonance --omega 2 --c 0.5 --periods 20");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("1.1097098") != std::string::npos);
    CHECK(r.out.find("(grew)") != std::string::npos);
    CHECK(r.out.find("holds_main: false") != std::string::npos);
}

TEST_CASE("seeded artifacts are byte-identical across runs") {
    const fs::path dir = fs::temp_directory_path() / "hillstab_cli_tests";
    fs::create_directories(dir);
    const fs::path csv1 = dir / "traj1.csv";
    const fs::path csv2 = dir / "traj2.csv";
    const std::string args = "simulate-hill --b 1 --c 2 --C 1 --t-end 20 --seed 42 --csv ";
    CHECK(run(args + csv1.string()).exit_code == 0);
    CHECK(run(args + csv2.string()).exit_code == 0);
    const std::string a = slurp(csv1);
    const std::string b = slurp(csv2);
    CHECK(a == b);
    CHECK(a.substr(0, 10) == "t,u,v,F,G\n");

    const fs::path sw1 = dir / "sweep1.csv";
    const fs::path sw2 = dir / "sweep2.csv";
    CHECK(run("sweep --csv " + sw1.string()).exit_code == 0);
    CHECK(run("sweep --csv " + sw2.string()).exit_code == 0);
    CHECK(slurp(sw1) == slurp(sw2));
    CHECK(slurp(sw1).substr(0, 20) == "h,omega,c0,C,ratio\n0");
}

TEST_CASE("simulate-hill json artifact") {
    const fs::path dir = fs::temp_directory_path() / "hillstab_cli_tests";
    fs::create_directories(dir);
    const fs::path js = dir / "traj.json";
    const auto r = run("simulate-hill --b 1 --c 2 --C 1 --t-end 10 --seed 3 --json " +
                       js.string());
    CHECK(r.exit_code == 0);
    const std::string content = slurp(js);
    CHECK(content.find("\"method\": \"exact\"") != std::string::npos);
    CHECK(content.find("\"breakpoints\"") != std::string::npos);
}

TEST_CASE("duffing pair writes the gap series") {
    const fs::path dir = fs::temp_directory_path() / "hillstab_cli_tests";
    fs::create_directories(dir);
    const fs::path csv = dir / "gap.csv";
    const auto r = run("duffing --mode pair --forcing-amp 0.5 --t-end 20 --csv " +
                       csv.string());
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("convergence threshold") != std::string::npos);
    CHECK(slurp(csv).substr(0, 14) == "t,gap,log_gap\n");

    const auto bad = run("duffing --mode bound --csv " + csv.string());
    CHECK(bad.exit_code == 1);
}

TEST_CASE("wave single run artifact and sync report") {
    const fs::path dir = fs::temp_directory_path() / "hillstab_cli_tests";
    fs::create_directories(dir);
    const fs::path csv = dir / "wave.csv";
    const auto r = run(
        "wave --n-modes 6 --t-end 0.5 --step 5e-4 --forcing-amp 2 --mode single --csv " +
        csv.string());
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("energy start") != std::string::npos);
    CHECK(slurp(csv).substr(0, 13) == "t,energy,gap\n");

    const auto s = run("wave --n-modes 6 --t-end 0.5 --step 5e-4 --forcing-amp 2 --mode sync");
    CHECK(s.exit_code == 0);
    CHECK(s.out.find("fitted gap decay rate") != std::string::npos);
}

TEST_CASE("HILLSTAB_THREADS caps the sweep but not its output") {
    const fs::path dir = fs::temp_directory_path() / "hillstab_cli_tests";
    fs::create_directories(dir);
    const fs::path csv = dir / "sweep_threads.csv";
    const int status = std::system(
        ("HILLSTAB_THREADS=1 " + binary() + " sweep --csv " + csv.string() +
         " > /dev/null 2>&1")
            .c_str());
    CHECK(WEXITSTATUS(status) == 0);
    const fs::path ref = dir / "sweep_ref.csv";
    CHECK(run("sweep --csv " + ref.string()).exit_code == 0);
    CHECK(slurp(csv) == slurp(ref));
}
