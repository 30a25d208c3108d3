#include <catch2/catch_amalgamated.hpp>

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "censorgame/cli.hpp"
#include "test_helpers.hpp"

namespace fs = std::filesystem;

namespace {

struct CliResult {
    int status = 0;
    std::string out;
    std::string err;
};

CliResult run_cli(const std::vector<std::string>& args) {
    std::vector<const char*> argv;
    argv.push_back("censorgame");
    for (const std::string& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int status =
        censorgame::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {status, out.str(), err.str()};
}

struct TempDir {
    fs::path path;
    TempDir() {
        static int counter = 0;
        path = fs::temp_directory_path() /
               ("censorgame_cli_test_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter++));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string write_survey_mix(const TempDir& dir) {
    const std::string path = dir.file("mix.csv");
    std::ofstream out(path, std::ios::binary);
    out << testutil::kSurveyMixCsv;
    return path;
}

}  // namespace

TEST_CASE("seed-mix prints the bundled mix") {
    const CliResult r = run_cli({"--seed-mix", "paper"});
    CHECK(r.status == 0);
    CHECK(r.out == testutil::kSurveyMixCsv);
    CHECK(r.err.empty());
}

TEST_CASE("seed-mix rejects unknown names and subcommand combinations") {
    CHECK(run_cli({"--seed-mix", "bogus"}).status == 2);
    TempDir dir;
    const std::string mix = write_survey_mix(dir);
    CHECK(run_cli({"--seed-mix", "paper", "enumerate", "--mix", mix}).status == 2);
}

TEST_CASE("enumerate count matches the strategy listing") {
    TempDir dir;
    const std::string mix = write_survey_mix(dir);
    const CliResult count = run_cli({"enumerate", "--mix", mix, "--count-only"});
    CHECK(count.status == 0);
    CHECK(count.out == "282\n");

    const CliResult listing = run_cli({"enumerate", "--mix", mix});
    CHECK(listing.status == 0);
    const auto nl = static_cast<std::size_t>(
        std::count(listing.out.begin(), listing.out.end(), '\n'));
    CHECK(nl == 282);
    CHECK(listing.out.starts_with("100/0/0/0/0/0\n"));
    CHECK(listing.out.ends_with("20/20/15/15/15/15\n"));
}

TEST_CASE("solve reproduces both equilibria end to end") {
    TempDir dir;
    const std::string mix = write_survey_mix(dir);

    const CliResult tolerant =
        run_cli({"solve", "--mix", mix, "--c", "-0.015", "--d", "1.75", "--quantum", "5"});
    REQUIRE(tolerant.status == 0);
    const auto doc1 = nlohmann::json::parse(tolerant.out);
    CHECK(doc1["leak_percent"] == 20);
    CHECK(doc1["censor_blocked"] ==
          nlohmann::json::array({"HTTP", "BitTorrent", "SSL", "MPEG"}));

    const CliResult strict = run_cli({"solve", "--mix", mix, "--c", "-0.015", "--d", "0.75"});
    REQUIRE(strict.status == 0);
    const auto doc2 = nlohmann::json::parse(strict.out);
    CHECK(doc2["leak_percent"] == 5);
    CHECK(doc2["censor_blocked"] == nlohmann::json::array({"YouTube"}));
    CHECK(doc2["params"]["quantum"] == 5);  // default applies
}

TEST_CASE("solve writes to --out without polluting stdout") {
    TempDir dir;
    const std::string mix = write_survey_mix(dir);
    const std::string out_path = dir.file("eq.json");
    const CliResult r =
        run_cli({"solve", "--mix", mix, "--c", "-0.015", "--d", "1.75", "--out", out_path});
    CHECK(r.status == 0);
    CHECK(r.out.empty());
    CHECK(nlohmann::json::parse(slurp(out_path))["leak_percent"] == 20);
}

TEST_CASE("curve defaults sweep f over 0..35 for three t values") {
    const CliResult r = run_cli({"curve", "--c", "-0.015", "--d", "1.75"});
    CHECK(r.status == 0);
    const auto nl = static_cast<std::size_t>(std::count(r.out.begin(), r.out.end(), '\n'));
    CHECK(nl == 1 + 3 * 141);
    CHECK(r.out.starts_with("t,f,utility\n100,0,100.000000\n"));
}

TEST_CASE("curve honors a custom spec") {
    const CliResult r = run_cli({"curve", "--c", "-0.015", "--d", "1.75", "--t-values", "100",
                                 "--f-min", "0", "--f-max", "0", "--f-step", "1"});
    CHECK(r.status == 0);
    CHECK(r.out == "t,f,utility\n100,0,100.000000\n");
}

TEST_CASE("critical prints nothing for the survey mix and names heavy protocols") {
    TempDir dir;
    const std::string mix = write_survey_mix(dir);
    const CliResult none = run_cli({"critical", "--mix", mix, "--c", "-0.015", "--d", "1.75"});
    CHECK(none.status == 0);
    CHECK(none.out.empty());

    const std::string heavy_path = dir.file("heavy.csv");
    {
        std::ofstream out(heavy_path, std::ios::binary);
        out << "protocol,cover_share_percent\nbackbone,70\nminor,1\n";
    }
    const CliResult heavy =
        run_cli({"critical", "--mix", heavy_path, "--c", "-0.015", "--d", "1.75"});
    CHECK(heavy.status == 0);
    CHECK(heavy.out == "backbone\n");
}

TEST_CASE("grid emits byte-identical artifacts across runs and thread counts") {
    TempDir dir;
    const std::string mix = write_survey_mix(dir);
    auto run_grid = [&](const std::string& tag, const std::string& threads) {
        const std::string csv = dir.file("grid_" + tag + ".csv");
        const std::string svg = dir.file("grid_" + tag + ".svg");
        const CliResult r = run_cli({"grid", "--mix", mix, "--c", "-0.015", "--d", "1.75",
                                     "--csv", csv, "--svg", svg, "--threads", threads});
        REQUIRE(r.status == 0);
        return std::pair{slurp(csv), slurp(svg)};
    };
    const auto [csv1, svg1] = run_grid("a", "1");
    const auto [csv2, svg2] = run_grid("b", "1");
    const auto [csv4, svg4] = run_grid("c", "4");
    CHECK(csv1 == csv2);
    CHECK(svg1 == svg2);
    CHECK(csv1 == csv4);
    CHECK(svg1 == svg4);
    CHECK(static_cast<std::size_t>(std::count(csv1.begin(), csv1.end(), '\n')) == 283);
}

TEST_CASE("grid requires an output flag") {
    TempDir dir;
    const std::string mix = write_survey_mix(dir);
    const CliResult r = run_cli({"grid", "--mix", mix, "--c", "-0.015", "--d", "1.75"});
    CHECK(r.status == 2);
    CHECK_THAT(r.err, Catch::Matchers::ContainsSubstring("--csv"));
}

TEST_CASE("validation failures exit 2 and name the offending field") {
    TempDir dir;
    const std::string mix = write_survey_mix(dir);
    const CliResult bad_c = run_cli({"solve", "--mix", mix, "--c", "0.5", "--d", "1.75"});
    CHECK(bad_c.status == 2);
    CHECK_THAT(bad_c.err, Catch::Matchers::ContainsSubstring("c must be strictly negative"));

    const CliResult bad_q =
        run_cli({"solve", "--mix", mix, "--c", "-0.015", "--d", "1.75", "--quantum", "3"});
    CHECK(bad_q.status == 2);
    CHECK_THAT(bad_q.err, Catch::Matchers::ContainsSubstring("quantum"));
}

TEST_CASE("a failed validation leaves no partial output file") {
    TempDir dir;
    const std::string mix = write_survey_mix(dir);
    const std::string out_path = dir.file("never.json");
    const CliResult r =
        run_cli({"solve", "--mix", mix, "--c", "0.5", "--d", "1.75", "--out", out_path});
    CHECK(r.status == 2);
    CHECK_FALSE(fs::exists(out_path));
}

TEST_CASE("malformed mixes are reported with their line number") {
    TempDir dir;
    const std::string path = dir.file("broken.csv");
    {
        std::ofstream out(path, std::ios::binary);
        out << "protocol,cover_share_percent\nok,5\nbroken\n";
    }
    const CliResult r = run_cli({"enumerate", "--mix", path});
    CHECK(r.status == 2);
    CHECK_THAT(r.err, Catch::Matchers::ContainsSubstring("line 3"));
}

TEST_CASE("missing input files are I/O failures") {
    const CliResult r =
        run_cli({"solve", "--mix", "/nonexistent/mix.csv", "--c", "-0.015", "--d", "1.75"});
    CHECK(r.status == 1);
    CHECK_THAT(r.err, Catch::Matchers::ContainsSubstring("cannot open"));
}

TEST_CASE("unwritable output paths are I/O failures") {
    TempDir dir;
    const std::string mix = write_survey_mix(dir);
    const CliResult r = run_cli({"solve", "--mix", mix, "--c", "-0.015", "--d", "1.75", "--out",
                                 dir.file("no/such/dir/x.json")});
    CHECK(r.status == 1);
}

TEST_CASE("usage errors exit 2 with help text") {
    const CliResult none = run_cli({});
    CHECK(none.status == 2);
    CHECK_THAT(none.err, Catch::Matchers::ContainsSubstring("Usage"));

    const CliResult unknown_sub = run_cli({"frobnicate"});
    CHECK(unknown_sub.status == 2);

    const CliResult unknown_flag = run_cli({"curve", "--c", "-0.015", "--d", "1.75", "--what"});
    CHECK(unknown_flag.status == 2);
    CHECK_THAT(unknown_flag.err, Catch::Matchers::ContainsSubstring("Usage"));

    const CliResult missing_required = run_cli({"solve", "--c", "-0.015", "--d", "1.75"});
    CHECK(missing_required.status == 2);
}

TEST_CASE("help exits 0") {
    CHECK(run_cli({"--help"}).status == 0);
    CHECK(run_cli({"solve", "--help"}).status == 0);
}

TEST_CASE("identical invocations produce byte-identical output") {
    TempDir dir;
    const std::string mix = write_survey_mix(dir);
    const std::vector<std::string> args{"solve", "--mix", mix, "--c", "-0.015", "--d", "0.75"};
    const CliResult a = run_cli(args);
    const CliResult b = run_cli(args);
    CHECK(a.status == 0);
    CHECK(a.out == b.out);
}

TEST_CASE("oversized mixes trigger a warning but still work") {
    TempDir dir;
    const std::string path = dir.file("many.csv");
    {
        std::ofstream out(path, std::ios::binary);
        out << "protocol,cover_share_percent\n";
        for (int i = 0; i < 22; ++i) out << "p" << i << ",0.5\n";
    }
    const CliResult r = run_cli({"enumerate", "--mix", path, "--count-only"});
    CHECK(r.status == 0);
    CHECK_THAT(r.err, Catch::Matchers::ContainsSubstring("warning"));
}
