#include <cmath>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mdich/errors.hpp"
#include "mdich/experiment.hpp"
#include "mdich/extraction.hpp"
#include "mdich/instances.hpp"
#include "mdich/io.hpp"
#include "mdich/oracle.hpp"

using namespace mdich;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitCap = 3;
constexpr int kExitVerification = 4;
constexpr int kExitDomain = 5;

int exit_code(ErrorCategory c)
{
    switch (c) {
    case ErrorCategory::Usage: return kExitUsage;
    case ErrorCategory::Cap: return kExitCap;
    case ErrorCategory::Verification: return kExitVerification;
    case ErrorCategory::Domain: return kExitDomain;
    }
    return kExitDomain;
}

void emit(const std::optional<std::string> & out, const std::string & text)
{
    if (out)
        write_text_file(*out, text);
    else
        std::cout << text;
}

Caps caps_from(const std::optional<std::string> & path)
{
    return path ? load_caps(*path) : Caps{};
}

std::vector<double> parse_values(const std::string & csv)
{
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t pos = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &pos);
        } catch (const std::exception &) {
            pos = 0;
        }
        if (pos == 0 || pos != item.size())
            throw UsageError("BadParameters", "'" + item + "' is not a number");
        out.push_back(v);
    }
    if (out.empty())
        throw UsageError("BadParameters", "--values needs at least one number");
    return out;
}

struct GenArgs {
    std::string family;
    std::size_t n = 8;
    std::uint64_t seed = 1;
    double p = 0.5;
    std::size_t s = 8;
    std::size_t base_n = 4;
    double beta = 2.0;
    std::size_t t = 2;
    std::string base = "copy";
    std::string values;
    double k = 2.0;
    bool binary = false;
    std::optional<std::string> out;
    std::optional<std::string> caps;
};

int cmd_gen(const GenArgs & a)
{
    const Caps caps = caps_from(a.caps);
    Provenance prov;
    prov.generator = a.family;
    auto param = [&](const std::string & key, const std::string & value) { prov.params[key] = value; };

    if (a.family == "hst") {
        Rng rng(a.seed);
        HstTree tree = random_hst(a.n, a.k, rng, 4, a.binary);
        Json j = hst_to_json(tree);
        param("n", std::to_string(a.n));
        param("sep", format_double(a.k));
        param("binary", a.binary ? "true" : "false");
        prov.seed = a.seed;
        Json p;
        p["generator"] = prov.generator;
        p["params"] = prov.params;
        p["seed"] = a.seed;
        p["prng"] = prov.prng;
        j["provenance"] = p;
        emit(a.out, dump_json(j));
        return kExitOk;
    }

    MetricSpace m;
    if (a.family == "random") {
        m = uniform_random_metric(a.n, a.seed);
        param("n", std::to_string(a.n));
        param("lo", "1");
        param("hi", "2");
        prov.seed = a.seed;
    } else if (a.family == "graph") {
        m = random_graph_metric(a.n, a.p, a.seed);
        param("n", std::to_string(a.n));
        param("p", format_double(a.p));
        prov.seed = a.seed;
    } else if (a.family == "ramsey-graph") {
        auto g = certified_ramsey_graph(a.s, a.seed, 1000, caps.ramsey_exact);
        m = g.metric;
        param("s", std::to_string(a.s));
        param("tries", std::to_string(g.tries));
        param("diameter", std::to_string(g.certificate.diameter));
        param("clique", std::to_string(g.certificate.clique));
        param("independent", std::to_string(g.certificate.independent));
        param("method", g.certificate.exact ? "exact" : "uncertified");
        prov.seed = a.seed;
    } else if (a.family == "composition-power") {
        const MetricSpace factor = a.base_n == 2 ? equilateral(2) : certified_ramsey_graph(a.base_n, a.seed).metric;
        PowerBase base;
        if (a.base == "copy")
            base = PowerBase::Copy;
        else if (a.base == "singleton")
            base = PowerBase::Singleton;
        else
            throw UsageError("BadParameters", "--base must be copy or singleton");
        m = composition_power(factor, a.beta, a.t, base, caps.composition_size);
        param("base_n", std::to_string(a.base_n));
        param("beta", format_double(a.beta));
        param("t", std::to_string(a.t));
        param("base", a.base);
        prov.seed = a.seed;
    } else if (a.family == "path") {
        m = graph_metric(path_graph(a.n));
        param("n", std::to_string(a.n));
    } else if (a.family == "equilateral") {
        m = equilateral(a.n);
        param("n", std::to_string(a.n));
    } else if (a.family == "lacunary") {
        m = lacunary_metric(LacunarySequence::make(parse_values(a.values), a.k));
        param("values", a.values);
        param("k", format_double(a.k));
    } else {
        throw UsageError("BadParameters", "unknown family '" + a.family + "'");
    }
    emit(a.out, dump_json(metric_to_json(m, prov)));
    return kExitOk;
}

struct ExtractArgs {
    std::string algorithm;
    std::string in;
    std::optional<std::string> tree;
    std::optional<std::string> out;
    double eps = 0.5;
    double k = 2.0;
    double alpha = 3.0;
    std::size_t threshold = 0;
    std::string mode = "coarse";
    double c = 1.0;
    std::size_t h = 2;
};

DichotomyResult triangle_result(const MetricSpace & m, double k)
{
    auto emb = triangle_to_binary_hst(m, k);
    DichotomyResult r;
    r.kind = ResultKind::BinaryHst;
    r.witness = restrict(m, identity_map(m.size()));
    r.cert = emb.cert;
    r.separation = k / 2.0;
    r.tree = std::move(emb.tree);
    r.guarantee.size_bound = static_cast<double>(m.size());
    r.guarantee.distortion_bound = k / (k - 2.0);
    r.guarantee.params = {{"k", k}};
    return r;
}

int cmd_extract(const ExtractArgs & a)
{
    const MetricSpace m = metric_from_json(read_json_file(a.in)).space;
    DichotomyResult r;
    if (a.algorithm == "bfm-increasing") {
        r = extract_k_increasing(m, a.eps, a.k).result;
    } else if (a.algorithm == "eq-or-lacunary") {
        r = equilateral_or_lacunary(m, a.eps, a.k);
    } else if (a.algorithm == "greedy-lacunary") {
        r = greedy_equilateral_or_lacunary(m, a.alpha, a.k, a.threshold).result;
    } else if (a.algorithm == "triangle-hst") {
        r = triangle_result(m, a.k);
    } else if (a.algorithm == "hst-dichotomy") {
        if (!a.tree)
            throw UsageError("BadParameters", "hst-dichotomy needs --tree");
        HstDichotomyOptions o;
        if (a.mode == "coarse")
            o.mode = HstMode::Coarse;
        else if (a.mode == "fine")
            o.mode = HstMode::Fine;
        else
            throw UsageError("BadParameters", "--mode must be coarse or fine");
        o.c = a.c;
        o.eps = a.eps;
        o.h = a.h;
        o.k = a.k;
        r = hst_dichotomy(m, hst_from_json(read_json_file(*a.tree)), o).result;
    } else {
        throw UsageError("BadParameters", "unknown algorithm '" + a.algorithm + "'");
    }

    const auto problems = r.check();
    if (!problems.empty()) {
        for (const auto & p : problems)
            std::cerr << "self-verification: " << p << '\n';
        return kExitVerification;
    }
    emit(a.out, dump_json(result_to_json(r)));
    std::ostream & summary = a.out ? std::cout : std::cerr;
    summary << "branch=" << to_string(r.kind) << " size=" << r.size()
            << " distortion=" << format_double(r.cert.distortion)
            << " guarantee=" << format_double(r.guarantee.size_bound) << '\n';
    return kExitOk;
}

struct OracleArgs {
    std::string query;
    std::string in;
    double alpha = 1.0;
    double k = 2.0;
    bool exact = false;
    bool decide = false;
    std::optional<std::string> caps;
    std::optional<std::string> out;
};

int cmd_oracle(const OracleArgs & a)
{
    const Caps caps = caps_from(a.caps);
    const MetricSpace m = metric_from_json(read_json_file(a.in)).space;
    const Arithmetic arith = a.exact ? Arithmetic::ExactRational : Arithmetic::Float;
    OracleReport r;
    if (a.query == "equilateral")
        r = max_equilateral_subset(m, a.alpha, caps, arith);
    else if (a.query == "lacunary")
        r = a.decide ? is_lacunary_embeddable(m, a.alpha, a.k, caps, arith)
                     : max_lacunary_subset(m, a.alpha, a.k, caps, arith);
    else if (a.query == "binary-hst")
        r = a.decide ? is_binary_hst_embeddable(m, a.alpha, a.k, caps, arith)
                     : max_binary_hst_subset(m, a.alpha, a.k, caps, arith);
    else if (a.query == "four-point")
        r = four_point_check(m, a.alpha, a.k, arith);
    else
        throw UsageError("BadParameters", "unknown query '" + a.query + "'");
    const auto problems = r.check(m);
    if (!problems.empty()) {
        for (const auto & p : problems)
            std::cerr << "self-verification: " << p << '\n';
        return kExitVerification;
    }
    emit(a.out, dump_json(report_to_json(r)));
    return kExitOk;
}

struct ExperimentArgs {
    std::string suite;
    std::vector<std::size_t> ns;
    double alpha = 3.0;
    double k = 2.0;
    std::uint64_t seed = 1;
    std::size_t seeds = 1;
    std::optional<std::string> family;
    bool require_oracle = false;
    std::optional<std::string> caps;
    std::size_t threads = 1;
    std::optional<std::string> csv;
    std::optional<std::string> results_dir;
};

int cmd_experiment(const ExperimentArgs & a)
{
    ExperimentConfig c;
    c.suite = parse_suite(a.suite);
    c.ns = a.ns;
    c.alpha = a.alpha;
    c.k = a.k;
    c.seed = a.seed;
    c.seeds = a.seeds;
    if (a.family)
        c.family = parse_family(*a.family);
    c.require_oracle = a.require_oracle;
    c.caps = caps_from(a.caps);
    c.threads = a.threads;
    c.results_dir = a.results_dir;
    emit(a.csv, rows_to_csv(run_experiment(c)));
    return kExitOk;
}

}  // namespace

int main(int argc, char ** argv)
{
    CLI::App app{"Metric Ramsey dichotomies: instance generation, extraction, exact oracles and experiments"};
    app.require_subcommand(1);

    GenArgs gen;
    auto * g = app.add_subcommand("gen", "Generate an instance");
    g->add_option("--family", gen.family,
                  "random | graph | ramsey-graph | composition-power | path | equilateral | lacunary | hst")
        ->required();
    g->add_option("--n", gen.n, "Number of points (leaves for hst)")->check(CLI::PositiveNumber);
    g->add_option("--seed", gen.seed, "Seed");
    g->add_option("--p", gen.p, "Edge probability for graph");
    g->add_option("--s", gen.s, "Vertices of the ramsey graph");
    g->add_option("--base-n", gen.base_n, "Vertices of the composition factor");
    g->add_option("--beta", gen.beta, "Composition scale");
    g->add_option("--t", gen.t, "Composition power");
    g->add_option("--base", gen.base, "copy | singleton");
    g->add_option("--values", gen.values, "Comma separated lacunary values");
    g->add_option("--k", gen.k, "Lacunarity or HST separation");
    g->add_flag("--binary", gen.binary, "Binary HST");
    g->add_option("--out", gen.out, "Output file (default stdout)");
    g->add_option("--caps", gen.caps, "Caps file (key = value)");

    ExtractArgs ex;
    auto * e = app.add_subcommand("extract", "Run an extraction algorithm");
    e->add_option("--algorithm", ex.algorithm,
                  "bfm-increasing | eq-or-lacunary | greedy-lacunary | triangle-hst | hst-dichotomy")
        ->required();
    e->add_option("--in", ex.in, "metric-v1 input")->required();
    e->add_option("--tree", ex.tree, "hst-v1 input for hst-dichotomy");
    e->add_option("--out", ex.out, "Result file (default stdout)");
    e->add_option("--eps", ex.eps, "Epsilon");
    e->add_option("--k", ex.k, "k");
    e->add_option("--alpha", ex.alpha, "Alpha for greedy-lacunary");
    e->add_option("--threshold", ex.threshold, "Net size threshold T (0: ceil(log2 n))");
    e->add_option("--mode", ex.mode, "coarse | fine");
    e->add_option("--c", ex.c, "Equivalence constant of the input tree");
    e->add_option("--degree", ex.h, "Out-degree threshold h");

    OracleArgs orc;
    auto * o = app.add_subcommand("oracle", "Exact oracle query");
    o->add_option("--query", orc.query, "equilateral | lacunary | binary-hst | four-point")->required();
    o->add_option("--in", orc.in, "metric-v1 input")->required();
    o->add_option("--alpha", orc.alpha, "Distortion");
    o->add_option("--k", orc.k, "k");
    o->add_flag("--exact-rational", orc.exact, "Exact rational arithmetic");
    o->add_flag("--decide", orc.decide, "Decide the whole input instead of maximising");
    o->add_option("--caps", orc.caps, "Caps file (key = value)");
    o->add_option("--out", orc.out, "Report file (default stdout)");

    ExperimentArgs xp;
    auto * x = app.add_subcommand("experiment", "Run an experiment suite");
    x->add_option("--suite", xp.suite, "d-k-above-2 | d-k-below-2 | e-k-above-2 | e-k-below-2 | d-1")->required();
    x->add_option("--n", xp.ns, "Instance sizes")->delimiter(',')->required();
    x->add_option("--alpha", xp.alpha, "Distortion");
    x->add_option("--k", xp.k, "k");
    x->add_option("--seed", xp.seed, "First seed");
    x->add_option("--seeds", xp.seeds, "Number of seeds");
    x->add_option("--family", xp.family, "random | adversary");
    x->add_flag("--require-oracle", xp.require_oracle, "Fail when a cell is beyond the oracle caps");
    x->add_option("--caps", xp.caps, "Caps file (key = value)");
    x->add_option("--threads", xp.threads, "Worker threads");
    x->add_option("--csv", xp.csv, "CSV output (default stdout)");
    x->add_option("--results-dir", xp.results_dir, "Write every result and add a hash column");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError & err) {
        const int rc = app.exit(err);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*g)
            return cmd_gen(gen);
        if (*e)
            return cmd_extract(ex);
        if (*o)
            return cmd_oracle(orc);
        if (*x)
            return cmd_experiment(xp);
    } catch (const Error & err) {
        std::cerr << "error: " << err.what() << '\n';
        return exit_code(err.category());
    } catch (const nlohmann::json::exception & err) {
        std::cerr << "error: MalformedInput: " << err.what() << '\n';
        return kExitUsage;
    } catch (const std::exception & err) {
        std::cerr << "error: " << err.what() << '\n';
        return kExitDomain;
    }
    return kExitUsage;
}
