#include "mdich/experiment.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <filesystem>
#include <sstream>
#include <thread>

#include "mdich/errors.hpp"
#include "mdich/extraction.hpp"
#include "mdich/instances.hpp"
#include "mdich/io.hpp"
#include "mdich/numeric.hpp"

namespace mdich {

Suite parse_suite(const std::string & name)
{
    if (name == "d-k-above-2")
        return Suite::DkAbove2;
    if (name == "d-k-below-2")
        return Suite::DkBelow2;
    if (name == "e-k-above-2")
        return Suite::EkAbove2;
    if (name == "e-k-below-2")
        return Suite::EkBelow2;
    if (name == "d-1")
        return Suite::D1;
    throw UsageError("BadParameters", "unknown suite '" + name + "'");
}

const char * to_string(Suite s)
{
    switch (s) {
    case Suite::DkAbove2: return "d-k-above-2";
    case Suite::DkBelow2: return "d-k-below-2";
    case Suite::EkAbove2: return "e-k-above-2";
    case Suite::EkBelow2: return "e-k-below-2";
    case Suite::D1: return "d-1";
    }
    return "unknown";
}

Family parse_family(const std::string & name)
{
    if (name == "random")
        return Family::Random;
    if (name == "adversary")
        return Family::Adversary;
    throw UsageError("BadParameters", "unknown family '" + name + "'");
}

const char * to_string(Family f)
{
    return f == Family::Random ? "random" : "adversary";
}

std::string fnv1a_hex(const std::string & data)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    static const char * digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i, h >>= 4)
        out[static_cast<std::size_t>(i)] = digits[h & 0xf];
    return out;
}

namespace {

void check_config(const ExperimentConfig & c)
{
    if (c.ns.empty())
        throw UsageError("BadParameters", "no instance sizes given");
    if (c.seeds == 0)
        throw UsageError("BadParameters", "need at least one seed");
    for (std::size_t n : c.ns)
        if (n < 2)
            throw UsageError("BadParameters", "instance sizes must be >= 2");
    if (!(c.k >= 1.0) || !std::isfinite(c.k))
        throw UsageError("BadParameters", "k must be >= 1");
    switch (c.suite) {
    case Suite::DkAbove2:
        if (!(c.alpha > 2.0))
            throw UsageError("BadParameters", "d-k-above-2 needs alpha > 2");
        break;
    default:
        if (!(c.alpha > 1.0) || !std::isfinite(c.alpha))
            throw UsageError("BadParameters", "this suite needs alpha > 1");
        break;
    }
}

std::size_t coarse_h(std::size_t n)
{
    const double v = std::ceil(std::pow(2.0, std::sqrt(std::log2(static_cast<double>(n)))) - 1e-9);
    return std::max<std::size_t>(2, static_cast<std::size_t>(v));
}

std::size_t fine_h(std::size_t n)
{
    const double ll = std::log2(std::log2(static_cast<double>(n)));
    if (!(ll > 0.0))
        return 2;
    const double v = std::ceil(std::pow(static_cast<double>(n), 1.0 / ll) - 1e-9);
    return std::max<std::size_t>(2, static_cast<std::size_t>(v));
}

struct Cell {
    ExperimentRow row;
    std::exception_ptr error;
};

ExperimentRow run_cell(const ExperimentConfig & c, Family family, std::size_t n, std::uint64_t seed)
{
    const std::uint64_t instance_seed = derive_seed(seed, n);
    const MetricSpace m =
        family == Family::Random ? uniform_random_metric(n, instance_seed) : composition_adversary(n, instance_seed);

    ExperimentRow row;
    row.n = n;
    row.alpha = c.alpha;
    row.k = c.suite == Suite::D1 ? 1.0 : c.k;
    row.seed = seed;

    const auto t0 = std::chrono::steady_clock::now();
    DichotomyResult res;
    bool hst_class = false;
    switch (c.suite) {
    case Suite::DkAbove2:
        row.algorithm = "greedy-lacunary";
        res = greedy_equilateral_or_lacunary(m, c.alpha, row.k).result;
        break;
    case Suite::DkBelow2:
    case Suite::D1:
        row.algorithm = "eq-or-lacunary";
        row.eps = c.alpha - 1.0;
        res = equilateral_or_lacunary(m, *row.eps, row.k);
        break;
    case Suite::EkAbove2: {
        row.algorithm = "hst-dichotomy-coarse";
        hst_class = true;
        const double eps_p = std::min(1.0, c.alpha - 1.0);
        row.eps = eps_p;
        auto ext = extract_k_increasing(m, eps_p, c.k);
        HstDichotomyOptions o;
        o.mode = HstMode::Coarse;
        o.c = 1.0 + eps_p;
        o.k = c.k;
        o.h = coarse_h(n);
        res = hst_dichotomy(m, *ext.result.tree, o).result;
        break;
    }
    case Suite::EkBelow2: {
        row.algorithm = "hst-dichotomy-fine";
        hst_class = true;
        const double eps = c.alpha - 1.0;
        row.eps = eps;
        const double k_prime = std::max(c.k, 2.0 + 2.0 / eps);
        auto ext = extract_k_increasing(m, 1.0, 3.0 * k_prime);
        HstDichotomyOptions o;
        o.mode = HstMode::Fine;
        o.c = 2.0;
        o.eps = eps;
        o.k = c.k;
        o.h = fine_h(n);
        res = hst_dichotomy(m, *ext.result.tree, o).result;
        break;
    }
    }
    row.ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    row.branch = to_string(res.kind);
    row.size = res.size();
    row.distortion = res.cert.distortion;
    row.guarantee = res.guarantee.size_bound;

    const auto problems = res.check();
    if (!problems.empty())
        throw VerificationFailure("n=" + std::to_string(n) + " seed=" + std::to_string(seed) + ": " + problems.front());

    const bool fits = hst_class ? (n <= c.caps.hst_subset_n && n <= c.caps.equilateral_n && c.k > 1.0)
                                : (n <= c.caps.lacunary_subset_n && n <= c.caps.equilateral_n);
    if (fits) {
        std::size_t opt = max_equilateral_subset(m, c.alpha, c.caps).optimum;
        if (hst_class)
            opt = std::max(opt, max_binary_hst_subset(m, c.alpha, c.k, c.caps).optimum);
        else
            opt = std::max(opt, max_lacunary_subset(m, c.alpha, row.k, c.caps).optimum);
        row.oracle_opt = opt;
    } else if (c.require_oracle) {
        throw CapExceeded("CapExceeded", "n=" + std::to_string(n) + " is beyond the oracle caps");
    }

    if (static_cast<double>(row.size) + 1e-9 < row.guarantee)
        throw VerificationFailure("row size below its guarantee");
    if (!leq(row.distortion, c.alpha))
        throw VerificationFailure("row distortion above alpha");
    if (row.oracle_opt && row.size > *row.oracle_opt)
        throw VerificationFailure("row size above the oracle optimum");

    if (c.results_dir) {
        const std::string text = dump_json(result_to_json(res));
        std::ostringstream name;
        name << to_string(c.suite) << "_n" << n << "_a" << format_double(c.alpha) << "_k" << format_double(row.k)
             << "_s" << seed << ".json";
        write_text_file((std::filesystem::path(*c.results_dir) / name.str()).string(), text);
        row.result_hash = fnv1a_hex(text);
    }
    return row;
}

}  // namespace

std::vector<ExperimentRow> run_experiment(const ExperimentConfig & config)
{
    check_config(config);
    const Family family =
        config.family.value_or(config.suite == Suite::DkBelow2 ? Family::Adversary : Family::Random);
    if (config.results_dir)
        std::filesystem::create_directories(*config.results_dir);

    std::vector<std::pair<std::size_t, std::uint64_t>> tasks;
    for (std::size_t n : config.ns)
        for (std::size_t s = 0; s < config.seeds; ++s)
            tasks.push_back({n, config.seed + s});

    std::vector<Cell> cells(tasks.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < tasks.size(); i = next++) {
            try {
                cells[i].row = run_cell(config, family, tasks[i].first, tasks[i].second);
            } catch (...) {
                cells[i].error = std::current_exception();
            }
        }
    };
    const std::size_t threads = std::max<std::size_t>(1, std::min(config.threads, tasks.size()));
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < threads; ++t)
            pool.emplace_back(worker);
        for (auto & th : pool)
            th.join();
    }

    std::vector<ExperimentRow> rows;
    rows.reserve(cells.size());
    for (auto & c : cells) {
        if (c.error)
            std::rethrow_exception(c.error);
        rows.push_back(std::move(c.row));
    }
    return rows;
}

std::string rows_to_csv(const std::vector<ExperimentRow> & rows)
{
    bool hashes = false;
    for (const auto & r : rows)
        hashes = hashes || r.result_hash.has_value();
    std::ostringstream out;
    out << "n,alpha,k,eps,algorithm,branch,size,distortion,guarantee,oracle_opt,seed,ms";
    if (hashes)
        out << ",result_hash";
    out << '\n';
    for (const auto & r : rows) {
        out << r.n << ',' << format_double(r.alpha) << ',' << format_double(r.k) << ','
            << (r.eps ? format_double(*r.eps) : "") << ',' << r.algorithm << ',' << r.branch << ',' << r.size << ','
            << format_double(r.distortion) << ',' << format_double(r.guarantee) << ','
            << (r.oracle_opt ? std::to_string(*r.oracle_opt) : "") << ',' << r.seed << ','
            << format_double(std::round(r.ms * 1000.0) / 1000.0);
        if (hashes)
            out << ',' << r.result_hash.value_or("");
        out << '\n';
    }
    return out.str();
}

}  // namespace mdich
