#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include <sys/wait.h>

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct RunResult {
    int exit_code;
    std::string out;
    std::string err;
    std::vector<std::string> out_lines() const {
        std::vector<std::string> lines;
        std::istringstream ss(out);
        std::string line;
        while (std::getline(ss, line)) lines.push_back(line);
        return lines;
    }
    /// Output lines after the run manifest (which carries a timestamp).
    std::vector<std::string> payload() const {
        auto lines = out_lines();
        if (!lines.empty()) lines.erase(lines.begin());
        return lines;
    }
};

fs::path scratch_dir() {
    static fs::path dir = [] {
        fs::path d = fs::temp_directory_path() / ("cdpoly_cli_test_" + std::to_string(getpid()));
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

RunResult run_cli(const std::string& args) {
    const fs::path out = scratch_dir() / "stdout.txt";
    const fs::path err = scratch_dir() / "stderr.txt";
    const std::string cmd = std::string(CDPOLY_CLI_PATH) + " " + args + " > " + out.string() +
                            " 2> " + err.string();
    const int rc = std::system(cmd.c_str());
    const int code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    return {code, slurp(out), slurp(err)};
}

fs::path write_file(const std::string& name, const std::string& content) {
    const fs::path p = scratch_dir() / name;
    std::ofstream(p) << content;
    return p;
}

fs::path z2_plus_1_file() {
    static fs::path p = write_file("z2p1.json", R"({"level":2,"terms":[
        {"coeffs":[[1,0,0,0]],"exps":[2],"order":"left"},
        {"coeffs":[[1,0,0,0]],"exps":[0],"order":"left"}]})");
    return p;
}

fs::path z3_file() {
    static fs::path p = write_file("z3.json",
                                   R"({"level":2,"terms":[
        {"coeffs":[[1,0,0,0]],"exps":[3],"order":"left"}]})");
    return p;
}

}  // namespace

TEST_CASE("every run prints a manifest first") {
    const auto r = run_cli("zerodiv --level 2");
    REQUIRE(r.exit_code == 0);
    const auto lines = r.out_lines();
    REQUIRE(lines.size() >= 2);
    const json manifest = json::parse(lines[0]);
    CHECK(manifest["command"] == "zerodiv");
    CHECK(manifest.contains("seed"));
    CHECK(manifest.contains("artifact_version"));
    CHECK(manifest.contains("timestamp"));
    CHECK(manifest.contains("config"));
}

TEST_CASE("eval") {
    SECTION("z^2 + 1 vanishes at i1") {
        const auto r = run_cli("eval " + z2_plus_1_file().string() + " [0,1,0,0]");
        REQUIRE(r.exit_code == 0);
        CHECK(json::parse(r.payload().at(0)) == json::parse("[0.0,0.0,0.0,0.0]"));
    }
    SECTION("z^3 at 2 is 8") {
        const auto r = run_cli("eval " + z3_file().string() + " [2,0,0,0]");
        REQUIRE(r.exit_code == 0);
        CHECK(json::parse(r.payload().at(0)) == json::parse("[8.0,0.0,0.0,0.0]"));
    }
    SECTION("wrong-length point exits 2 with a schema message") {
        const auto r = run_cli("eval " + z2_plus_1_file().string() + " [0,1]");
        CHECK(r.exit_code == 2);
        CHECK(r.err.find("schema") != std::string::npos);
    }
    SECTION("malformed polynomial file exits 2") {
        const auto p = write_file("bad.json", R"({"level":2,"terms":[{"coeffs":[[1,0,0]],)");
        const auto r = run_cli("eval " + p.string() + " [0,1,0,0]");
        CHECK(r.exit_code == 2);
    }
}

TEST_CASE("solve") {
    SECTION("single report carries a verified zero") {
        const auto r = run_cli("solve " + z2_plus_1_file().string() + " --seed 0");
        REQUIRE(r.exit_code == 0);
        const json rep = json::parse(r.payload().at(0));
        REQUIRE(!rep["zero"].is_null());
        CHECK(rep["residual"].get<double>() <= 1e-9);
        CHECK(rep["kernel_dim"].get<unsigned>() == 2);
    }
    SECTION("count 20 keeps at least 5 distinct sphere samples") {
        const auto r = run_cli("solve " + z2_plus_1_file().string() + " --count 20 --seed 0");
        REQUIRE(r.exit_code == 0);
        std::vector<json> zeros;
        for (const auto& line : r.payload()) {
            const json rep = json::parse(line);
            if (!rep["zero"].is_null()) zeros.push_back(rep["zero"]);
        }
        unsigned distinct = 0;
        for (std::size_t i = 0; i < zeros.size(); ++i) {
            bool dup = false;
            for (std::size_t j = 0; j < i; ++j) {
                double d2 = 0;
                for (int c = 0; c < 4; ++c) {
                    const double d = zeros[i][c].get<double>() - zeros[j][c].get<double>();
                    d2 += d * d;
                }
                if (d2 < 1e-12) dup = true;
            }
            if (!dup) ++distinct;
        }
        CHECK(distinct >= 5);
    }
    SECTION("replay determinism: identical payload bytes") {
        const std::string args = "solve " + z2_plus_1_file().string() + " --count 5 --seed 42";
        const auto a = run_cli(args);
        const auto b = run_cli(args);
        REQUIRE(a.exit_code == 0);
        CHECK(a.payload() == b.payload());
    }
    SECTION("threads do not change the payload") {
        const std::string base = "solve " + z2_plus_1_file().string() + " --count 3 --seed 9";
        const auto serial = run_cli(base + " --threads 1");
        const auto parallel = run_cli(base + " --threads 4");
        CHECK(serial.payload() == parallel.payload());
    }
    SECTION("a zero-free polynomial exits 4 with a best-effort report") {
        // i1 z - z i1 + 1 keeps real part 1 everywhere
        const auto p = write_file("commutator_shift.json", R"({"level":2,"terms":[
            {"coeffs":[[0,1,0,0]],"exps":[1],"order":"left"},
            {"coeffs":[[-1,0,0,0],[0,1,0,0]],"exps":[1,0],"order":"left"},
            {"coeffs":[[1,0,0,0]],"exps":[0],"order":"left"}]})");
        const auto r = run_cli("solve " + p.string() + " --starts 6 --max-iters 80");
        CHECK(r.exit_code == 4);
        const json rep = json::parse(r.payload().at(0));
        CHECK(rep["zero"].is_null());
        CHECK(rep["residual"].get<double>() >= 0.9);
    }
}

TEST_CASE("roots") {
    const auto r = run_cli("roots [16,0,0,0] 4 --samples 3 --seed 0");
    REQUIRE(r.exit_code == 0);
    const auto lines = r.payload();
    REQUIRE(lines.size() == 5);  // 2, -2, and 3 spherical samples
    for (const auto& line : lines) {
        const json root = json::parse(line);
        CHECK(root["residual"].get<double>() <= 1e-9 * 17.0);
    }
}

TEST_CASE("dim") {
    SECTION("sphere zero of z^2+1 has kernel dimension 2") {
        const auto r = run_cli("dim " + z2_plus_1_file().string() + " [0,1,0,0]");
        REQUIRE(r.exit_code == 0);
        const json rep = json::parse(r.payload().at(0));
        CHECK(rep["kernel_dim"].get<unsigned>() == 2);
        CHECK(rep["singular_values"].size() == 4);
    }
    SECTION("non-zero points exit 3") {
        const auto r = run_cli("dim " + z2_plus_1_file().string() + " [1,0,0,0]");
        CHECK(r.exit_code == 3);
        CHECK(r.err.find("precondition") != std::string::npos);
    }
}

TEST_CASE("identity-check") {
    const auto r = run_cli("identity-check --lemma 9 --level 3 --trials 1000 --seed 0");
    REQUIRE(r.exit_code == 0);
    const json rep = json::parse(r.payload().at(0));
    CHECK(rep["pass"] == true);
    CHECK(rep["max_error"].get<double>() <= 1e-9);
    CHECK(r.err.find("pass") != std::string::npos);

    const auto r14 = run_cli("identity-check --lemma 14 --level 2 --trials 200 --seed 0");
    REQUIRE(r14.exit_code == 0);
    const json rep14 = json::parse(r14.payload().at(0));
    CHECK(rep14.contains("measured_rank"));
    CHECK(rep14.contains("measured_kernel_dim"));
}

TEST_CASE("symmetry") {
    const auto sym = run_cli("symmetry " + z2_plus_1_file().string() + " [-1,0,0,0]");
    REQUIRE(sym.exit_code == 0);
    CHECK(json::parse(sym.payload().at(0))["symmetric"] == true);

    const auto asym = run_cli("symmetry " + z2_plus_1_file().string() + " [0,1,0,0]");
    REQUIRE(asym.exit_code == 0);
    CHECK(json::parse(asym.payload().at(0))["symmetric"] == false);
}

TEST_CASE("average") {
    SECTION("circle average of z^2 + 1 at 1") {
        const auto r = run_cli("average " + z2_plus_1_file().string() +
                               " --circle-direction [0,1,0,0] --nodes 16 [1,0,0,0]");
        REQUIRE(r.exit_code == 0);
        const json rep = json::parse(r.payload().at(0));
        // average of z^2 over the circle at z=1 is 0, plus the constant 1
        CHECK(std::abs(rep["value"][0].get<double>() - 1.0) <= 1e-12);
    }
    SECTION("finite group file") {
        const auto gf = write_file("q8.json",
                                   R"([[1,0,0,0],[-1,0,0,0],[0,1,0,0],[0,-1,0,0],
                                       [0,0,1,0],[0,0,-1,0],[0,0,0,1],[0,0,0,-1]])");
        const auto r = run_cli("average " + z3_file().string() + " --finite-group-file " +
                               gf.string() + " [1,0,0,0] [0,1,0,0]");
        REQUIRE(r.exit_code == 0);
        REQUIRE(r.payload().size() == 2);
    }
    SECTION("too few nodes exits 3") {
        const auto r = run_cli("average " + z3_file().string() +
                               " --circle-direction [0,1,0,0] --nodes 4 [1,0,0,0]");
        CHECK(r.exit_code == 3);
    }
}

TEST_CASE("zerodiv") {
    const auto none = run_cli("zerodiv --level 3");
    REQUIRE(none.exit_code == 0);
    CHECK(json::parse(none.payload().at(0))["found"] == false);

    const auto found = run_cli("zerodiv --level 4");
    REQUIRE(found.exit_code == 0);
    const json rep = json::parse(found.payload().at(0));
    CHECK(rep["found"] == true);
    CHECK(rep["product_norm"].get<double>() == 0.0);
}
