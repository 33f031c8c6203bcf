#include "doctest.h"

#include <cmath>

#include "mdich/errors.hpp"
#include "mdich/hst.hpp"
#include "mdich/instances.hpp"
#include "mdich/metric.hpp"
#include "mdich/oracle.hpp"
#include "mdich/oracle_reference.hpp"
#include "support.hpp"

using namespace mdich;
using testing_support::error_name;

namespace {

std::vector<std::size_t> all_of(const MetricSpace & m)
{
    return identity_map(m.size());
}

MetricSpace sample(Rng & rng, std::size_t n, std::uint64_t seed)
{
    return testing_support::sample_small_metric(rng, n, seed);
}

}  // namespace

TEST_CASE("max_equilateral_subset examples")
{
    auto comp = metric_composition(equilateral(2), equilateral(2), 2.0).product;
    CHECK(max_equilateral_subset(comp, 1.5).optimum == 2);
    CHECK(reference::max_equilateral(comp, 1.5) == 2);

    auto eq = equilateral(7);
    auto r = max_equilateral_subset(eq, 1.0);
    CHECK(r.optimum == 7);
    CHECK(r.check(eq).empty());

    auto line = line_metric({0, 1, 3});
    CHECK(max_equilateral_subset(line, 2.0).optimum == 2);
    CHECK(max_equilateral_subset(line, 3.0).optimum == 3);

    CHECK(error_name([] { max_equilateral_subset(equilateral(41), 1.0); }) == "CapExceeded");
    Caps wide;
    wide.equilateral_n = 50;
    CHECK(max_equilateral_subset(equilateral(41), 1.0, wide).optimum == 41);
}

TEST_CASE("is_lacunary_embeddable examples")
{
    auto tri = equilateral(3);
    auto yes = is_lacunary_embeddable(tri, 2.0, 2.0);
    CHECK(yes.embeddable);
    REQUIRE(yes.sequence);
    CHECK(yes.sequence->values == std::vector<double>{2.0, 1.0});
    CHECK(yes.check(tri).empty());
    CHECK_FALSE(is_lacunary_embeddable(tri, 1.9, 2.0).embeddable);

    auto lac = lacunary_metric(LacunarySequence::make({4, 1}, 4));
    CHECK(is_lacunary_embeddable(lac, 1.0, 4.0).embeddable);

    CHECK(error_name([] { is_lacunary_embeddable(equilateral(10), 2.0, 2.0); }) == "CapExceeded");
}

TEST_CASE("max_lacunary_subset examples")
{
    auto five = equilateral(5);
    auto r = max_lacunary_subset(five, 2.0, 2.0);
    CHECK(r.optimum == 3);
    CHECK(r.check(five).empty());
    CHECK(bound_lacunary_size(2.0, 2.0, 1.0) == 3.0);

    auto two = uniform_random_metric(2, 3);
    CHECK(max_lacunary_subset(two, 1.0, 5.0).optimum == 2);

    // Composition powers of a diameter-2 graph: the optimum stays within the
    // per-level count t (2 + log_k(2 alpha)).
    auto g = certified_ramsey_graph(3, 4).metric;
    for (std::size_t t : {1, 2}) {
        auto p = composition_power(g, 2.0, t);
        for (double alpha : {1.2, 1.5}) {
            const double k = 2.0;
            auto rep = max_lacunary_subset(p, alpha, k);
            CHECK(static_cast<double>(rep.optimum) <= static_cast<double>(t) * (2 + std::log(2 * alpha) / std::log(k)));
            CHECK(rep.check(p).empty());
        }
    }
    CHECK(error_name([] { max_lacunary_subset(uniform_random_metric(13, 1), 2.0, 2.0); }) == "CapExceeded");
}

TEST_CASE("is_binary_hst_embeddable examples")
{
    CHECK_FALSE(is_binary_hst_embeddable(equilateral(4), 1.0, 2.0).embeddable);
    CHECK(is_binary_hst_embeddable(uniform_random_metric(2, 8), 1.0, 3.0).embeddable);

    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        Rng rng(seed);
        const double k = 1.5 + 3 * rng.uniform();
        auto m = hst_metric(random_hst(2 + static_cast<std::size_t>(rng.below(7)), k, rng, 2, true));
        auto r = is_binary_hst_embeddable(m, 1.0, k);
        CHECK(r.embeddable);
        CHECK(r.check(m).empty());
    }
    CHECK(error_name([] { is_binary_hst_embeddable(equilateral(3), 1.0, 1.0); }) == "BadParameters");
    CHECK(error_name([] { is_binary_hst_embeddable(equilateral(9), 1.0, 2.0); }) == "CapExceeded");
}

TEST_CASE("max_binary_hst_subset examples")
{
    CHECK(max_binary_hst_subset(equilateral(6), 1.0, 2.0).optimum == 2);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        Rng rng(seed);
        const double k = 2 + rng.uniform();
        auto m = hst_metric(random_hst(3 + static_cast<std::size_t>(rng.below(8)), k, rng, 2, true));
        auto r = max_binary_hst_subset(m, 1.0, k);
        CHECK(r.optimum == m.size());
        CHECK(r.check(m).empty());
        CHECK(static_cast<double>(r.optimum) <= bound_binary_hst_size(1.0, k, aspect_ratio(m)) * (1 + 1e-9));
    }
    CHECK(error_name([] { max_binary_hst_subset(uniform_random_metric(11, 2), 1.0, 2.0); }) == "CapExceeded");
}

TEST_CASE("size bound formulas")
{
    CHECK(bound_lacunary_size(2, 2, 1) == 3.0);
    CHECK(bound_lacunary_size(1, 2, 1) == 2.0);
    CHECK(bound_binary_hst_size(2, 2, 1) == 4.0);
    CHECK(bound_lacunary_size(1, 2, 8) == doctest::Approx(5.0));
    CHECK(error_name([] { bound_lacunary_size(2, 1, 1); }) == "BadParameters");
    CHECK(error_name([] { bound_binary_hst_size(0.5, 2, 1); }) == "BadParameters");
    CHECK(error_name([] { bound_binary_hst_size(1, 2, 0.5); }) == "BadParameters");
}

TEST_CASE("four_point_check examples")
{
    auto lac = lacunary_metric(LacunarySequence::make({8, 4, 2}, 2));
    CHECK(four_point_check(lac, 1.0, 2.0).embeddable);
    CHECK(four_point_check(equilateral(4), 2.0, 2.0).embeddable);
    auto bad = four_point_check(equilateral(4), 1.5, 2.0);
    CHECK_FALSE(bad.embeddable);
    REQUIRE(bad.quadruple);
    CHECK(*bad.quadruple == std::array<std::size_t, 4>{0, 1, 2, 3});
    CHECK(four_point_check(equilateral(3), 1.0, 5.0).embeddable);
}

TEST_CASE("exact rational arithmetic removes float slack")
{
    auto tri = equilateral(3);
    const double alpha = 2.0 * (1 - 1e-12);
    CHECK(is_lacunary_embeddable(tri, alpha, 2.0).embeddable);
    CHECK_FALSE(is_lacunary_embeddable(tri, alpha, 2.0, {}, Arithmetic::ExactRational).embeddable);
    CHECK(is_lacunary_embeddable(tri, 2.0, 2.0, {}, Arithmetic::ExactRational).embeddable);

    auto line = line_metric({0, 1, 2 * (1 + 1e-12)});
    CHECK(max_equilateral_subset(line, 2.0).optimum == 3);
    CHECK(max_equilateral_subset(line, 2.0, {}, Arithmetic::ExactRational).optimum == 2);

    auto four = equilateral(4);
    CHECK(max_binary_hst_subset(four, 2.0, 2.0, {}, Arithmetic::ExactRational).optimum ==
          max_binary_hst_subset(four, 2.0, 2.0).optimum);
    auto r = max_lacunary_subset(four, 2.0, 2.0, {}, Arithmetic::ExactRational);
    CHECK(r.optimum == 3);
    CHECK(r.arithmetic == Arithmetic::ExactRational);
}

TEST_CASE("caps configuration")
{
    auto c = parse_caps("# limits\nequilateral_n = 12\n\nlacunary_perm=7\n");
    CHECK(c.equilateral_n == 12);
    CHECK(c.lacunary_perm == 7);
    CHECK(c.hst_topology == Caps{}.hst_topology);
    CHECK(error_name([] { parse_caps("nonsense = 3"); }) == "BadConfig");
    CHECK(error_name([] { parse_caps("equilateral_n = x"); }) == "BadConfig");
    CHECK(error_name([] { parse_caps("equilateral_n"); }) == "BadConfig");
    CHECK(error_name([&] { max_equilateral_subset(equilateral(13), 1.0, c); }) == "CapExceeded");
}

TEST_CASE("fast deciders agree with the full-enumeration reference")
{
    for (std::uint64_t seed = 0; seed < 120; ++seed) {
        Rng rng(seed);
        const std::size_t n = 2 + static_cast<std::size_t>(rng.below(5));
        auto m = sample(rng, n, seed);
        const double alpha = 1 + 2 * rng.uniform();
        const double k = 1.1 + 2.5 * rng.uniform();
        const auto pts = all_of(m);

        auto lac = is_lacunary_embeddable(m, alpha, k);
        CHECK(lac.embeddable == reference::lacunary_embeddable(m, pts, alpha, k));
        if (lac.embeddable)
            CHECK(lac.check(m).empty());

        auto hst = is_binary_hst_embeddable(m, alpha, k);
        CHECK(hst.embeddable == reference::binary_hst_embeddable(m, pts, alpha, k));
        if (hst.embeddable)
            CHECK(hst.check(m).empty());

        CHECK(max_equilateral_subset(m, alpha).optimum == reference::max_equilateral(m, alpha));
        CHECK(max_lacunary_subset(m, alpha, k).optimum == reference::max_lacunary(m, alpha, k));
        CHECK(max_binary_hst_subset(m, alpha, k).optimum == reference::max_binary_hst(m, alpha, k));
    }
}

TEST_CASE("reference topology count")
{
    CHECK(reference::topology_count(2) == 1);
    CHECK(reference::topology_count(3) == 3);
    CHECK(reference::topology_count(4) == 15);
    CHECK(reference::topology_count(5) == 105);
}

TEST_CASE("oracle properties")
{
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
        Rng rng(seed);
        const std::size_t n = 3 + static_cast<std::size_t>(rng.below(6));
        auto m = sample(rng, n, seed + 1000);
        const double alpha = 1 + rng.uniform();
        const double k = 1.2 + 2 * rng.uniform();
        const double phi = aspect_ratio(m);

        auto eq = max_equilateral_subset(m, alpha);
        auto lac = max_lacunary_subset(m, alpha, k);
        auto hst = max_binary_hst_subset(m, alpha, k);
        CHECK(eq.check(m).empty());
        CHECK(lac.check(m).empty());
        CHECK(hst.check(m).empty());
        CHECK(static_cast<double>(lac.optimum) <= bound_lacunary_size(alpha, k, phi) * (1 + 1e-9));
        CHECK(static_cast<double>(hst.optimum) <= bound_binary_hst_size(alpha, k, phi) * (1 + 1e-9));

        // Monotone in alpha (up) and k (down).
        CHECK(max_lacunary_subset(m, alpha * 1.3, k).optimum >= lac.optimum);
        CHECK(max_lacunary_subset(m, alpha, k * 1.3).optimum <= lac.optimum);
        CHECK(max_binary_hst_subset(m, alpha * 1.3, k).optimum >= hst.optimum);
        CHECK(max_binary_hst_subset(m, alpha, k * 1.3).optimum <= hst.optimum);
        CHECK(max_equilateral_subset(m, alpha * 1.3).optimum >= eq.optimum);

        // Lacunary embeddability implies the four-point condition when k > alpha.
        if (k > alpha && lac.optimum >= 4) {
            auto w = restrict(m, lac.witness);
            CHECK(four_point_check(w.induced, alpha, k).embeddable);
        }
    }
}

TEST_CASE("report check catches tampering")
{
    auto tri = equilateral(3);
    auto r = is_lacunary_embeddable(tri, 2.0, 2.0);
    REQUIRE(r.check(tri).empty());
    r.sequence->values = {1.5, 1.0};
    CHECK_FALSE(r.check(tri).empty());

    auto e = max_equilateral_subset(line_metric({0, 1, 3}), 2.0);
    e.witness = {0, 1, 2};
    e.optimum = 3;
    CHECK_FALSE(e.check(line_metric({0, 1, 3})).empty());
}
