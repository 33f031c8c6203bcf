#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "mdich/experiment.hpp"
#include "mdich/io.hpp"

using namespace mdich;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path & p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch()
{
    static const fs::path dir = [] {
        auto d = fs::temp_directory_path() / ("mdich_cli_" + std::to_string(::getpid()));
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

Run run(const std::string & args)
{
    const auto out = scratch() / "stdout.txt";
    const auto err = scratch() / "stderr.txt";
    const std::string cmd = std::string(MDICH_CLI) + " " + args + " >" + out.string() + " 2>" + err.string();
    const int status = std::system(cmd.c_str());
    Run r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
}

std::string data(const std::string & name)
{
    return std::string(MDICH_TEST_DATA) + "/" + name;
}

std::string tmp(const std::string & name)
{
    return (scratch() / name).string();
}

Json without_ms(Json j)
{
    j.erase("ms");
    return j;
}

std::vector<std::string> split_lines(const std::string & s)
{
    std::vector<std::string> lines;
    std::istringstream in(s);
    for (std::string line; std::getline(in, line);)
        lines.push_back(line);
    return lines;
}

std::vector<std::string> split_csv(const std::string & line)
{
    std::vector<std::string> cells;
    std::istringstream in(line);
    for (std::string c; std::getline(in, c, ',');)
        cells.push_back(c);
    if (!line.empty() && line.back() == ',')
        cells.emplace_back();
    return cells;
}

// CSV text with the ms column blanked.
std::string drop_ms(const std::string & csv)
{
    std::string out;
    for (const auto & line : split_lines(csv)) {
        auto cells = split_csv(line);
        if (cells.size() > 11)
            cells[11] = "";
        for (std::size_t i = 0; i < cells.size(); ++i)
            out += (i ? "," : "") + cells[i];
        out += "\n";
    }
    return out;
}

}  // namespace

TEST_CASE("gen writes instances with provenance")
{
    auto r = run("gen --family equilateral --n 8 --out " + tmp("eq8.json"));
    CHECK(r.code == 0);
    auto m = metric_from_json(read_json_file(tmp("eq8.json")));
    CHECK(m.space.size() == 8);
    CHECK(m.space.diameter() == 1.0);
    CHECK(m.provenance->generator == "equilateral");

    const std::string args = "gen --family composition-power --base-n 5 --beta 2 --t 3 --seed 7 --out ";
    CHECK(run(args + tmp("cp1.json")).code == 0);
    CHECK(run(args + tmp("cp2.json")).code == 0);
    const auto text = slurp(tmp("cp1.json"));
    CHECK(text == slurp(tmp("cp2.json")));
    auto cp = metric_from_json(Json::parse(text));
    CHECK(cp.space.size() == 125);
    REQUIRE(cp.provenance);
    CHECK(cp.provenance->seed == 7u);
    CHECK(cp.provenance->prng == "mt19937_64");
    CHECK(cp.provenance->params.at("base") == "copy");

    for (const char * fam : {"random --n 12", "graph --s 9 --p 0.6", "ramsey-graph --s 8", "path --n 5",
                             "lacunary --values 8,4,2 --k 2", "hst --n 10 --k 3 --binary"})
        CHECK(run(std::string("gen --family ") + fam + " --seed 3").code == 0);
    CHECK(Json::parse(run("gen --family hst --n 6 --k 2 --seed 1").out)["format"] == "hst-v1");
}

TEST_CASE("gen rejects bad parameters")
{
    CHECK(run("gen --family nope --n 4").code == 2);
    CHECK(run("gen --family random --n 0").code == 2);
    CHECK(run("gen --family lacunary --values 1,4 --k 2").code != 0);
    CHECK(run("gen --family composition-power --base-n 5 --t 9").code == 3);
    CHECK(run("gen").code == 2);
}

TEST_CASE("extract summaries and self-verification")
{
    run("gen --family equilateral --n 8 --out " + tmp("eq8.json"));
    auto g = run("extract --algorithm greedy-lacunary --alpha 3 --k 2 --in " + tmp("eq8.json") + " --out " +
                 tmp("g.json"));
    CHECK(g.code == 0);
    CHECK(g.out.find("branch=equilateral") != std::string::npos);
    CHECK(read_json_file(tmp("g.json"))["kind"] == "equilateral");

    run("gen --family random --n 256 --seed 5 --out " + tmp("r256.json"));
    auto b = run("extract --algorithm bfm-increasing --eps 1 --k 2 --in " + tmp("r256.json"));
    CHECK(b.code == 0);
    auto j = Json::parse(b.out);
    CHECK(j["kind"] == "k_increasing");
    CHECK(j["distortion"].get<double>() <= 2.0 * (1 + 1e-9));
    CHECK(j["size"].get<double>() >= j["guarantee"]["size_bound"].get<double>());
    CHECK(b.err.find("size=") != std::string::npos);

    for (const char * alg : {"eq-or-lacunary --eps 0.5 --k 2", "greedy-lacunary --alpha 2.5 --k 1.2"})
        CHECK(run(std::string("extract --algorithm ") + alg + " --in " + tmp("r256.json")).code == 0);

    run("gen --family equilateral --n 3 --out " + tmp("eq3.json"));
    auto t = run("extract --algorithm triangle-hst --k 4 --in " + tmp("eq3.json"));
    CHECK(t.code == 5);
    CHECK(t.err.find("TripleTooFlat") != std::string::npos);

    CHECK(run("extract --algorithm greedy-lacunary --alpha 2 --in " + tmp("eq8.json")).code == 5);
    CHECK(run("extract --algorithm nope --in " + tmp("eq8.json")).code == 2);
}

TEST_CASE("extract runs the HST dichotomy on a supplied tree")
{
    CHECK(run("gen --family hst --n 40 --k 4 --seed 2 --out " + tmp("t.json")).code == 0);
    auto tree = hst_from_json(read_json_file(tmp("t.json")));
    write_text_file(tmp("tm.json"), dump_json(metric_to_json(hst_metric(tree))));
    auto r = run("extract --algorithm hst-dichotomy --mode coarse --k 4 --degree 3 --in " + tmp("tm.json") +
                 " --tree " + tmp("t.json"));
    CHECK(r.code == 0);
    auto j = Json::parse(r.out);
    CHECK(j["distortion"].get<double>() <= 1 + 1e-9);
}

TEST_CASE("oracle golden reports")
{
    auto eq = run("oracle --query equilateral --alpha 1.5 --in " + data("comp4.json"));
    CHECK(eq.code == 0);
    CHECK(without_ms(Json::parse(eq.out)) == read_json_file(data("golden_equilateral.json")));

    auto lac = run("oracle --query lacunary --alpha 2 --k 2 --in " + data("eq5.json"));
    CHECK(lac.code == 0);
    CHECK(without_ms(Json::parse(lac.out)) == read_json_file(data("golden_lacunary.json")));

    auto hst = run("oracle --query binary-hst --alpha 1 --k 2 --decide --in " + data("eq4.json"));
    CHECK(hst.code == 0);
    CHECK(without_ms(Json::parse(hst.out)) == read_json_file(data("golden_binary_hst.json")));

    auto fp = run("oracle --query four-point --alpha 1.5 --k 2 --in " + data("eq4.json"));
    CHECK(fp.code == 0);
    CHECK(Json::parse(fp.out)["embeddable"] == false);

    auto exact = run("oracle --query lacunary --alpha 2 --k 2 --exact-rational --in " + data("eq5.json"));
    CHECK(Json::parse(exact.out)["arithmetic"] == "exact-rational");
}

TEST_CASE("oracle error exits")
{
    run("gen --family equilateral --n 41 --out " + tmp("eq41.json"));
    auto cap = run("oracle --query equilateral --alpha 1 --in " + tmp("eq41.json"));
    CHECK(cap.code == 3);
    CHECK(cap.err.find("CapExceeded") != std::string::npos);

    write_text_file(tmp("caps.txt"), "equilateral_n = 50\n");
    CHECK(run("oracle --query equilateral --alpha 1 --caps " + tmp("caps.txt") + " --in " + tmp("eq41.json")).code ==
          0);
    write_text_file(tmp("badcaps.txt"), "what = 1\n");
    CHECK(run("oracle --query equilateral --alpha 1 --caps " + tmp("badcaps.txt") + " --in " + tmp("eq41.json"))
              .code == 2);

    write_text_file(tmp("bad.json"), "{\"format\": \"metric-v1\", ");
    CHECK(run("oracle --query equilateral --alpha 1 --in " + tmp("bad.json")).code == 2);
    CHECK(run("oracle --query equilateral --alpha 1 --in " + tmp("missing.json")).code == 2);
}

TEST_CASE("experiment CSV contract")
{
    auto empty = run("experiment --suite d-k-above-2 --n \"\"");
    CHECK(empty.code == 2);
    CHECK(run("experiment --suite nope --n 64").code == 2);

    const std::string args = "experiment --suite d-k-above-2 --n 64,256 --alpha 3 --k 2 --seeds 3 --csv ";
    CHECK(run(args + tmp("a.csv")).code == 0);
    CHECK(run(args + tmp("b.csv") + " --threads 2").code == 0);
    const auto a = slurp(tmp("a.csv"));
    const auto lines = split_lines(a);
    REQUIRE(lines.size() == 7);
    CHECK(lines[0] == "n,alpha,k,eps,algorithm,branch,size,distortion,guarantee,oracle_opt,seed,ms");
    CHECK(drop_ms(a) == drop_ms(slurp(tmp("b.csv"))));
    for (std::size_t i = 1; i < lines.size(); ++i) {
        auto c = split_csv(lines[i]);
        REQUIRE(c.size() == 12);
        CHECK(std::stod(c[6]) >= std::stod(c[8]));
        CHECK(std::stod(c[7]) <= 3.0 * (1 + 1e-9));
    }

    auto small = run("experiment --suite d-k-below-2 --n 8,16 --alpha 1.5 --k 2 --seeds 2");
    CHECK(small.code == 0);
    // The lacunary oracle covers n=8 and leaves n=16 blank.
    for (const auto & line : split_lines(small.out)) {
        auto c = split_csv(line);
        if (c[0] == "n")
            continue;
        CHECK(c[9].empty() == (c[0] == "16"));
        if (!c[9].empty())
            CHECK(std::stoul(c[6]) <= std::stoul(c[9]));
    }

    CHECK(run("experiment --suite d-k-above-2 --n 64 --alpha 3 --require-oracle").code == 3);
    CHECK(run("experiment --suite d-k-above-2 --n 64 --alpha 1.5").code == 2);
}

TEST_CASE("verbose experiment rows match their result files")
{
    const auto dir = tmp("results");
    auto r = run("experiment --suite e-k-above-2 --n 64 --alpha 3 --k 2 --seeds 2 --results-dir " + dir);
    REQUIRE(r.code == 0);
    const auto lines = split_lines(r.out);
    REQUIRE(lines.size() == 3);
    CHECK(lines[0].ends_with(",result_hash"));
    std::size_t matched = 0;
    for (const auto & entry : fs::directory_iterator(dir)) {
        const auto text = slurp(entry.path());
        const auto hash = fnv1a_hex(text);
        for (std::size_t i = 1; i < lines.size(); ++i) {
            auto c = split_csv(lines[i]);
            if (c.back() != hash)
                continue;
            ++matched;
            auto j = Json::parse(text);
            CHECK(j["size"].get<std::size_t>() == std::stoul(c[6]));
            CHECK(j["kind"].get<std::string>() == c[5]);
        }
    }
    CHECK(matched == 2);
}
