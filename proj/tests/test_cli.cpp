#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace {

namespace fs = std::filesystem;

const std::string kCli = ARCLAB_CLI_PATH;

struct RunResult {
    int exit_code;
    std::string out;
};

RunResult run(const std::string& args) {
    fs::path tmp = fs::temp_directory_path() / "arclab_cli_out.txt";
    std::string cmd = kCli + " " + args + " > " + tmp.string() + " 2>&1";
    int status = std::system(cmd.c_str());
    std::ifstream in(tmp);
    std::ostringstream buf;
    buf << in.rdbuf();
    return {WEXITSTATUS(status), buf.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string body_of(const std::string& report) {
    auto pos = report.rfind("walltime-ms: ");
    return pos == std::string::npos ? report : report.substr(0, pos);
}

}  // namespace

TEST_CASE("corpus list exits cleanly") {
    auto r = run("corpus list");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("moment5") != std::string::npos);
    CHECK(r.out.find("corpus version") != std::string::npos);
}

TEST_CASE("determinism: identical config and seed give byte-identical report bodies") {
    fs::path a = fs::temp_directory_path() / "arclab_det_a.txt";
    fs::path b = fs::temp_directory_path() / "arclab_det_b.txt";
    fs::path c = fs::temp_directory_path() / "arclab_det_c.txt";
    auto r1 = run("--seed 7 --out " + a.string() + " verify geometric --curve cusp --samples 3000");
    auto r2 = run("--seed 7 --out " + b.string() + " verify geometric --curve cusp --samples 3000");
    auto r3 = run("--seed 7 --threads 4 --out " + c.string() + " verify geometric --curve cusp --samples 3000");
    CHECK(r1.exit_code == 0);
    CHECK(r2.exit_code == 0);
    CHECK(r3.exit_code == 0);
    std::string b1 = body_of(slurp(a)), b2 = body_of(slurp(b)), b3 = body_of(slurp(c));
    CHECK(!b1.empty());
    CHECK(b1 == b2);
    CHECK(b1 == b3);

    auto r4 = run("--seed 8 --out " + a.string() + " verify geometric --curve cusp --samples 3000");
    CHECK(r4.exit_code == 0);
    CHECK(body_of(slurp(a)) != b1);
}

TEST_CASE("seed is mandatory for sampling runs") {
    auto r = run("verify geometric --curve cusp --samples 100");
    CHECK(r.exit_code == 2);
    CHECK(r.out.find("--seed") != std::string::npos);
}

TEST_CASE("malformed coefficient is a config error") {
    fs::path curve = fs::temp_directory_path() / "arclab_bad_curve.json";
    std::ofstream(curve) << R"({"dim": 2, "coeffs": [["0", "1"], ["0", "1/0"]]})";
    auto r = run("decompose --curve " + curve.string());
    CHECK(r.exit_code == 2);
    CHECK(r.out.find("config error") != std::string::npos);
}

TEST_CASE("curve files with rational strings load and decompose") {
    fs::path curve = fs::temp_directory_path() / "arclab_cusp.json";
    std::ofstream(curve) << R"({"dim": 2, "coeffs": [["0", "0", "1"], ["0", "0", "0", "1"]]})";
    auto r = run("decompose --curve " + curve.string());
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("K: 2") != std::string::npos);
}

TEST_CASE("check failure exits 1") {
    // an impossible golden constant forces a failing check
    auto r = run("--seed 3 verify lbj --curve moment2 --configs 20 --golden 1e18");
    CHECK(r.exit_code == 1);
    CHECK(r.out.find("status: fail") != std::string::npos);
}

TEST_CASE("sweep report round-trips through emit-plot") {
    fs::path rep = fs::temp_directory_path() / "arclab_sweep_report.txt";
    fs::path csv = fs::temp_directory_path() / "arclab_sweep.csv";
    fs::path table = fs::temp_directory_path() / "arclab_sweep_table.csv";
    auto r = run("--seed 5 --out " + rep.string() +
                 " operator sweep-knapp --curve moment2 --dmin 0.03 --dmax 0.25 --samples 500 --table " +
                 table.string());
    CHECK(r.exit_code == 0);
    auto r2 = run("--out " + csv.string() + " report emit-plot --report " + rep.string() + " --sweep knapp");
    CHECK(r2.exit_code == 0);
    std::string table_text = slurp(table);
    CHECK(slurp(csv) == table_text);
    CHECK(table_text.rfind("# columns: delta,ratio,error", 0) == 0);
    int lines = 0;
    for (char ch : table_text)
        if (ch == '\n') ++lines;
    CHECK(lines == 5);  // header + 4 deltas (0.25, 0.125, 0.0625, 0.03125)

    auto r3 = run("--out " + csv.string() + " report emit-plot --report " + rep.string() + " --sweep nope");
    CHECK(r3.exit_code == 2);
}

TEST_CASE("bands subcommands") {
    auto r = run("bands verify --points 0.1,0.1001,0.5 --alpha1 1.0 --delta 0.01 --dim 2");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("quasi-free") != std::string::npos);
    CHECK(r.out.find("status: pass") != std::string::npos);
}

TEST_CASE("decompose golden file: cusp") {
    // stable field order makes the report diffable; pin the leaf table
    auto r = run("decompose --curve cusp");
    CHECK(r.exit_code == 0);
    std::string body = body_of(r.out);
    CHECK(body.find("leaf-count: 2") != std::string::npos);
    CHECK(body.find("K: 2") != std::string::npos);
    CHECK(body.find("case: gap") != std::string::npos);
    auto r2 = run("decompose --curve cusp");
    CHECK(body_of(r2.out) == body);
}
