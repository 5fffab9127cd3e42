#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "bsa/error.hpp"
#include "commands.hpp"
#include "function_spec.hpp"
#include "report.hpp"

using namespace bsa;
using namespace bsa::app;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::filesystem::path temp_file(const std::string& name, const std::string& contents) {
    const auto path = std::filesystem::temp_directory_path() / ("bsa_test_" + name);
    std::ofstream(path, std::ios::binary) << contents;
    return path;
}

std::vector<std::vector<std::string>> read_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream ls(line);
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        rows.push_back(cells);
    }
    return rows;
}

} // namespace

TEST_CASE("function spec parsing") {
    SUBCASE("generators") {
        const auto maj = parse_function_spec("maj:5");
        CHECK(maj.n() == 5);
        CHECK(std::get<GeneratorSpec>(maj.source).kind == GeneratorKind::majority);

        const auto par = parse_function_spec("par:5:1,2");
        CHECK(std::get<GeneratorSpec>(par.source).subset == std::vector<int>{0, 1});
        CHECK(par.table() == TruthTable::parity(5, 0b11));
        CHECK(parse_function_spec("par:3").table() == TruthTable::parity(3, 0b111));

        const auto rnd = std::get<GeneratorSpec>(parse_function_spec("rand:d=2,n=12,seed=7").source);
        CHECK(rnd.kind == GeneratorKind::random_dense);
        CHECK(rnd.n == 12);
        CHECK(rnd.degree == 2);
        CHECK(rnd.seed == 7);
        const auto sparse = std::get<GeneratorSpec>(parse_function_spec("sparse:d=3,n=20,terms=9,seed=1").source);
        CHECK(sparse.terms == 9);
        CHECK(parse_function_spec("harm:6").polynomial().coefficient(0b100) == doctest::Approx(1.0 / std::sqrt(3.0)));
    }
    SUBCASE("inline JSON") {
        const auto chi = parse_function_spec(R"({"n":2,"terms":[{"vars":[1,2],"coef":1.0}]})");
        CHECK(chi.polynomial() == SparsePolynomial(2, {{0b11, 1.0}}));
        const auto summed = parse_function_spec(R"({"n":3,"terms":[{"vars":[3],"coef":1},{"vars":[3],"coef":0.5}]})");
        CHECK(summed.polynomial().coefficient(0b100) == 1.5);
    }
    SUBCASE("errors carry positions") {
        try {
            parse_function_spec(R"({"n":2,"terms":[{"vars":[1,1],"coef":1.0}]})");
            FAIL("duplicate variable accepted");
        } catch (const ParseError& e) {
            CHECK(std::string(e.what()).find("duplicate") != std::string::npos);
        }
        try {
            parse_function_spec("par:5:1,x");
            FAIL("bad variable accepted");
        } catch (const ParseError& e) {
            CHECK(e.position() == 8);
        }
        try {
            parse_function_spec(R"({"n":2,"terms":[)");
            FAIL("truncated JSON accepted");
        } catch (const ParseError& e) {
            CHECK(e.position() >= 15);
        }
        CHECK_THROWS_AS(parse_function_spec("maj:"), ParseError);
        CHECK_THROWS_AS(parse_function_spec("maj:0"), ParseError);
        CHECK_THROWS_AS(parse_function_spec("bogus:3"), ParseError);
        CHECK_THROWS_AS(parse_function_spec("rand:n=5"), ParseError);
        CHECK_THROWS_AS(parse_function_spec("rand:d=6,n=5"), ParseError);
        CHECK_THROWS_AS(parse_function_spec("par:4:5"), ParseError);
        CHECK_THROWS_AS(parse_function_spec("par:4:2,2"), ParseError);
        CHECK_THROWS_AS(parse_function_spec(R"({"n":2,"terms":[{"vars":[3],"coef":1}]})"), ParseError);
        CHECK_THROWS_AS(parse_function_spec(R"({"n":2,"terms":[{"vars":[1]}]})"), ParseError);
    }
    SUBCASE("caps") {
        CHECK_THROWS_AS(parse_function_spec("maj:65"), CapacityError);
        CHECK_THROWS_AS(parse_function_spec(R"({"n":100,"terms":[]})"), CapacityError);
        CHECK_THROWS_AS(parse_function_spec("maj:30").table(), CapacityError);
        CHECK_NOTHROW(parse_function_spec("maj:30").polynomial());
    }
    SUBCASE("truth-table files") {
        const auto f = TruthTable::majority(3);
        const auto path = temp_file("maj3.tt", "n=3\n" + f.to_sign_string() + "\n");
        const auto spec = parse_function_spec("tt:" + path.string());
        CHECK(spec.table() == f);
        CHECK_FALSE(spec.has_polynomial());
        CHECK_THROWS_AS(spec.polynomial(), InputError);

        CHECK_THROWS_AS(parse_truth_table("n=2\n+++"), ParseError);
        try {
            parse_truth_table("n=2\n++x+");
            FAIL("bad sign accepted");
        } catch (const ParseError& e) {
            CHECK(e.position() == 6);
        }
        CHECK_THROWS_AS(parse_truth_table("m=2\n++++"), ParseError);
        CHECK_THROWS_AS(parse_truth_table("n=25\n"), CapacityError);
        CHECK(parse_truth_table("n=0\n-").value(0) == -1);
        CHECK_THROWS_AS(parse_function_spec("tt:/nonexistent/file"), InputError);
    }
}

TEST_CASE("report helpers") {
    CHECK(format_double(0.1) == "0.10000000000000001");
    CHECK(format_double(1.875) == "1.875");
    CHECK(format_double(2.0) == "2");
    CHECK(parse_int_list("1..4,7") == std::vector<int>{1, 2, 3, 4, 7});
    CHECK(parse_int_list("5") == std::vector<int>{5});
    CHECK_THROWS_AS(parse_int_list("3..1"), InputError);
    CHECK_THROWS_AS(parse_int_list("a"), InputError);
    const auto reals = parse_real_list("1/16,0.25");
    CHECK(reals == std::vector<double>{0.0625, 0.25});
    CHECK_THROWS_AS(parse_real_list("1/0"), InputError);

    Table t({"a", "b"});
    t.add_row({1, "x,y"});
    t.add_row({0.5, nullptr});
    std::ostringstream out;
    t.write_csv(out);
    CHECK(out.str() == "a,b\n1,\"x,y\"\n0.5,\n");
    CHECK(t.to_json()[1]["b"].is_null());
}

TEST_CASE("analyze") {
    const auto maj = run({"analyze", "maj:5"});
    REQUIRE(maj.code == 0);
    const auto doc = nlohmann::json::parse(maj.out);
    CHECK(doc["influence"].get<double>() == 1.875);
    CHECK(std::abs(doc["bsa"].get<double>() - 5.0 * std::sqrt(3.0) / 8.0) <= 1e-12);
    CHECK(doc["profile"] == nlohmann::json({12, 0, 0, 20, 0, 0}));
    CHECK(doc["noise_sensitivity"].size() == 3);
    CHECK(doc["polynomial"]["alpha"]["exact"] == false);

    const auto chi = nlohmann::json::parse(run({"analyze", R"({"n":2,"terms":[{"vars":[1,2],"coef":1.0}]})"}).out);
    CHECK(chi["influence"].get<double>() == 2.0);
    CHECK(std::abs(chi["bsa"].get<double>() - std::sqrt(2.0)) <= 1e-12);

    // chi_{1,2}: D_B p / p = 2 - 2|S & B| is +-2 with probability 1/2 and 0 otherwise.
    const auto exact = nlohmann::json::parse(run({"analyze", "par:2", "--exact"}).out);
    CHECK(exact["polynomial"]["alpha"]["value"].get<double>() == 0.5);

    const auto csv = run({"analyze", "par:5:1,2", "--format", "csv"});
    CHECK(csv.code == 0);
    CHECK(csv.out.rfind("quantity,value\n", 0) == 0);
    CHECK(csv.out.find("\ninfluence,2\n") != std::string::npos);
    CHECK(csv.out.find("\nprofile[5],0\n") != std::string::npos);
}

TEST_CASE("exit codes") {
    CHECK(run({"analyze", R"({"n":2,"terms":[{"vars":[1,1],"coef":1.0}]})"}).code == kExitInput);
    const auto malformed = run({"analyze", R"({"n":2,)"});
    CHECK(malformed.code == kExitInput);
    CHECK(malformed.err.find("position") != std::string::npos);
    CHECK(malformed.out.empty());
    CHECK(run({"analyze", "maj:30"}).code == kExitCapacity);
    CHECK(run({"analyze", "maj:99"}).code == kExitCapacity);
    CHECK(run({"analyze", R"({"n":3,"terms":[]})"}).code == kExitDegenerate);
    CHECK(run({"nonsense"}).code == kExitInput);
    CHECK(run({}).code == kExitInput);
    CHECK(run({"analyze"}).code == kExitInput);
    CHECK(run({"analyze", "maj:5", "--precision", "60"}).code == kExitInput);
    CHECK(run({"analyze", "maj:5", "--trials", "0"}).code == kExitInput);
    CHECK(run({"tail", "maj:5", "--m", "9"}).code == kExitInput);
    CHECK(run({"restrict", "maj:5", "--r", "0"}).code == kExitInput);
    CHECK(run({"verify", "--criterion", "15"}).code == kExitInput);
    const auto help = run({"--help"});
    CHECK(help.code == 0);
    CHECK(help.out.find("analyze") != std::string::npos);
}

TEST_CASE("tail") {
    const auto r = run({"tail", "maj:9", "--m", "1..9", "--format", "csv"});
    REQUIRE(r.code == 0);
    const auto rows = read_csv(r.out);
    REQUIRE(rows.size() == 10);
    CHECK(rows[0][1] == "p_E");
    double prev = 2.0;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const double p = std::stod(rows[i][1]);
        CHECK(p <= prev);
        prev = p;
        CHECK(rows[i][5] == "true");
        CHECK(rows[i][6] == "true");
    }
    const auto doc = nlohmann::json::parse(run({"tail", "maj:5", "--m", "3"}).out);
    CHECK(doc["rows"][0]["coupling_lb"].get<double>() == doctest::Approx(95.0 / 216.0).epsilon(1e-15));
}

TEST_CASE("partition") {
    const auto r = run({"partition", "--n", "4", "--k", "2", "--b", "2"});
    REQUIRE(r.code == 0);
    const auto rows = read_csv(r.out);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0] == std::vector<std::string>{"n", "k", "b", "sizes", "A", "B", "gap", "gap_bound", "pass_lower",
                                              "pass_upper", "pass_gap_bound", "tight"});
    CHECK(rows[1][3] == "2-2");
    CHECK(std::stod(rows[1][5]) == doctest::Approx(1.2761423749153968).epsilon(1e-15));
    CHECK(std::stod(rows[1][7]) == doctest::Approx(0.23570226039551584).epsilon(1e-15));
    CHECK(rows[1][8] == "true");

    const auto sized = read_csv(run({"partition", "--sizes", "3,2,2"}).out);
    CHECK(sized.size() == 9);
    CHECK(sized[8][7].empty());  // k = n has no gap bound

    const auto full = read_csv(run({"partition", "--n", "1..6"}).out);
    CHECK(full.size() == 1 + (2 * 1 + 3 * 2 + 4 * 3 + 5 * 4 + 6 * 5 + 7 * 6));
    CHECK(run({"partition", "--sizes", "3,2", "--n", "6"}).code == kExitInput);
}

TEST_CASE("restrict") {
    const std::vector<std::string> args{"restrict", "maj:16", "--r", "1/64,1/4", "--delta", "1/16", "--trials", "3000"};
    const auto a = run(args);
    REQUIRE(a.code == 0);
    const auto rows = read_csv(a.out);
    REQUIRE(rows.size() == 3);
    CHECK(rows[1][7] == "false");
    CHECK(rows[2][7] == "true");
    CHECK(a.err.find("warning") != std::string::npos);
    CHECK(std::stod(rows[1][2]) <= std::stod(rows[2][2]));

    auto with_workers = args;
    with_workers.insert(with_workers.end(), {"--workers", "3"});
    CHECK(run(with_workers).out == a.out);
    CHECK(run(args).out == a.out);

    auto other_seed = args;
    other_seed.insert(other_seed.end(), {"--seed", "2"});
    CHECK(run(other_seed).out != a.out);

    const auto tt = temp_file("const.tt", "n=2\n++++\n");
    CHECK(run({"restrict", "tt:" + tt.string()}).code == kExitInput);
}

TEST_CASE("boundary") {
    const auto doc = nlohmann::json::parse(run({"boundary", "maj:5"}).out);
    CHECK(doc["threshold"].get<double>() == doctest::Approx(0.75));
    CHECK(doc["vertex_boundary_check"]["pass"] == true);
    CHECK(doc["vertex_boundary_check"]["margin"].get<double>() == doctest::Approx(0.5));

    const auto levels = run({"boundary", "maj:3", "--levels"});
    CHECK(levels.out == "level,plus,minus,boundary\n0,1,0,0\n1,3,0,3\n2,0,3,3\n3,0,1,0\n");

    const auto tt = temp_file("const2.tt", "n=2\n----\n");
    const auto c = run({"boundary", "tt:" + tt.string()});
    REQUIRE(c.code == 0);
    const auto cdoc = nlohmann::json::parse(c.out);
    CHECK(cdoc["constant_input"] == true);
    CHECK(cdoc["threshold"].is_null());
    CHECK(cdoc["vertex_boundary_check"].is_null());
}

TEST_CASE("sweep") {
    const std::vector<std::string> args{"sweep", "maj", "--n", "1..5", "--delta", "0.05,0.1"};
    const auto a = run(args);
    REQUIRE(a.code == 0);
    const auto rows = read_csv(a.out);
    REQUIRE(rows.size() == 11);
    CHECK(rows[1][0] == "maj");
    CHECK(rows[9][1] == "5");
    CHECK(rows[9][4] == "1.0825317547305482");
    CHECK(run(args).out == a.out);

    const auto rnd = read_csv(run({"sweep", "rand:d=2,seed=3", "--n", "4..6"}).out);
    CHECK(rnd.size() == 4);
    CHECK(run({"sweep", "rand:d=2", "--n", "1"}).code == kExitInput);
}

TEST_CASE("verify and output files") {
    const auto v = run({"verify", "--criterion", "1,4"});
    CHECK(v.code == 0);
    CHECK(v.out.find("criterion  1  PASS") != std::string::npos);
    CHECK(v.out.find("criterion  4  PASS") != std::string::npos);

    const auto path = std::filesystem::temp_directory_path() / "bsa_test_out.json";
    std::filesystem::remove(path);
    const auto r = run({"analyze", "maj:5", "--output", path.string()});
    CHECK(r.code == 0);
    CHECK(r.out.empty());
    std::ifstream in(path);
    const auto doc = nlohmann::json::parse(in);
    CHECK(doc["influence"].get<double>() == 1.875);
}

TEST_CASE("worker count from the environment") {
    ::setenv(kWorkersEnv, "zero", 1);
    CHECK(run({"analyze", "maj:3"}).code == kExitInput);
    ::setenv(kWorkersEnv, "2", 1);
    const auto two = run({"analyze", "maj:7"});
    ::unsetenv(kWorkersEnv);
    CHECK(two.code == 0);
    CHECK(two.out == run({"analyze", "maj:7", "--workers", "1"}).out);
}
