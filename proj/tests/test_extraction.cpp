#include "doctest.h"

#include <cmath>
#include <set>

#include "mdich/errors.hpp"
#include "mdich/extraction.hpp"
#include "mdich/hst.hpp"
#include "mdich/instances.hpp"
#include "mdich/metric.hpp"
#include "support.hpp"

using namespace mdich;
using testing_support::error_name;
using testing_support::within;

namespace {

void check_annulus(const MetricSpace & m, const AnnulusResult & a, double eps)
{
    const double n = static_cast<double>(m.size());
    CHECK(a.lambda >= 1.0);
    CHECK(a.lambda <= 2.0);
    CHECK(static_cast<double>(a.members.size()) >= eps * n / 4.0);
    CHECK(2 * a.far_set_size >= m.size());
    CHECK(a.members.size() * a.layers >= a.far_set_size);
    const double top = a.lambda * a.diameter / 2.0;
    for (std::size_t z : a.members) {
        CHECK(within(m(a.center, z), top));
        CHECK(within(top / (1.0 + eps), m(a.center, z)));
    }
}

bool triples_far(const MetricSpace & m, double k)
{
    for (std::size_t x = 0; x < m.size(); ++x)
        for (std::size_t y = x + 1; y < m.size(); ++y)
            for (std::size_t z = y + 1; z < m.size(); ++z)
                if (testing_support::naive_aspect(m, {x, y, z}) < k)
                    return false;
    return true;
}

double min_triple_aspect(const MetricSpace & m)
{
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t x = 0; x < m.size(); ++x)
        for (std::size_t y = x + 1; y < m.size(); ++y)
            for (std::size_t z = y + 1; z < m.size(); ++z)
                worst = std::min(worst, testing_support::naive_aspect(m, {x, y, z}));
    return worst;
}

// Largest monochromatic vertex set by trying every subset.
std::size_t exhaustive_monochromatic(const Coloring & c)
{
    const std::size_t n = c.vertices();
    std::size_t best = std::min<std::size_t>(n, 1);
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
        std::vector<std::size_t> s;
        for (std::size_t i = 0; i < n; ++i)
            if (mask >> i & 1u)
                s.push_back(i);
        if (s.size() < 2)
            continue;
        const int col = c(s[0], s[1]);
        bool ok = true;
        for (std::size_t i = 0; i < s.size() && ok; ++i)
            for (std::size_t j = i + 1; j < s.size() && ok; ++j)
                ok = c(s[i], s[j]) == col;
        if (ok)
            best = std::max(best, s.size());
    }
    return best;
}

bool monochromatic(const Coloring & c, const std::vector<std::size_t> & s)
{
    for (std::size_t i = 0; i < s.size(); ++i)
        for (std::size_t j = i + 1; j < s.size(); ++j)
            if (c(s[i], s[j]) != c(s[0], s[1]))
                return false;
    return true;
}

}  // namespace

TEST_CASE("dense annulus examples")
{
    auto two = equilateral(2);
    auto a = find_dense_annulus(two, 0.5);
    CHECK(a.center == 0);
    CHECK(a.members == std::vector<std::size_t>{1});
    check_annulus(two, a, 0.5);

    auto four = equilateral(4);
    auto b = find_dense_annulus(four, 1.0);
    CHECK(b.center == 0);
    CHECK(b.members == std::vector<std::size_t>{1, 2, 3});
    CHECK(b.lambda == 2.0);
    CHECK(b.layers == 1);

    CHECK(error_name([] { find_dense_annulus(equilateral(1), 0.5); }) == "TooSmall");
    CHECK(error_name([] { find_dense_annulus(equilateral(3), 0.0); }) == "BadParameters");
}

TEST_CASE("dense annulus postconditions on random metrics")
{
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        auto m = uniform_random_metric(64, seed);
        check_annulus(m, find_dense_annulus(m, 0.5), 0.5);
    }
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        Rng rng(seed);
        auto m = perturbed_tree_metric(random_hst(40, 2.0, rng), 1.5, rng);
        const double eps = 0.1 + 0.9 * rng.uniform();
        check_annulus(m, find_dense_annulus(m, eps), eps);
    }
}

TEST_CASE("sparsify_sequence examples")
{
    auto flat = sparsify_sequence({1, 1, 1}, 1.0, 2.0);
    CHECK(flat.kept == std::vector<std::size_t>{0, 1, 2});
    CHECK(flat.values == std::vector<double>{1, 1, 1});

    auto pair = sparsify_sequence({4, 1}, 1.0, 2.0);
    CHECK(pair.classes == 3);
    CHECK(!pair.kept.empty());
    if (pair.kept.size() == 2)
        CHECK(pair.values[1] <= pair.values[0] / 2.0);

    CHECK(error_name([] { sparsify_sequence({1, 3}, 1.0, 2.0); }) == "PrefixDominanceViolated");
    CHECK(power_exponent(4.0, 1.0) == 2);
    CHECK(power_exponent(5.0, 1.0) == 3);
    CHECK(power_exponent(0.5, 1.0) == -1);
}

TEST_CASE("sparsify_sequence postcondition on random prefix-dominated sequences")
{
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        Rng rng(seed);
        const double eps = 0.05 + rng.uniform();
        const double k = 1 + 4 * rng.uniform();
        const std::size_t len = 1 + static_cast<std::size_t>(rng.below(40));
        std::vector<double> a{1.0};
        double low = 1.0;
        for (std::size_t i = 1; i < len; ++i) {
            // Either a geometric drop or a wiggle below twice the running minimum.
            const double v = rng.bernoulli(0.5) ? a.back() / (2 * k) : low * (0.3 + 1.7 * rng.uniform());
            a.push_back(v);
            low = std::min(low, v);
        }
        auto s = sparsify_sequence(a, eps, k);
        const double r = std::ceil(std::log(2 * k) / std::log1p(eps) - 1e-9) + 1;
        CHECK(static_cast<double>(s.classes) == r);
        CHECK(static_cast<double>(s.kept.size()) * r >= static_cast<double>(len));
        for (std::size_t i = 0; i < s.kept.size(); ++i) {
            CHECK(within(a[s.kept[i]], s.values[i]));
            CHECK(within(s.values[i], (1 + eps) * a[s.kept[i]]));
            for (std::size_t j = i + 1; j < s.kept.size(); ++j) {
                CHECK(s.kept[i] < s.kept[j]);
                CHECK((s.values[j] == s.values[i] || within(s.values[j], s.values[i] / k)));
            }
        }
    }
}

TEST_CASE("extract_k_increasing examples")
{
    auto eq = extract_k_increasing(equilateral(10, 3.0), 1.0, 2.0);
    CHECK(eq.result.cert.distortion == doctest::Approx(1.0));
    CHECK(eq.result.verify());

    auto two = extract_k_increasing(equilateral(2), 0.5, 2.0);
    CHECK(two.chain.size() == 2);
    CHECK(two.result.size() == 2);
    CHECK(two.result.tree->leaf_count() == 2);
    CHECK(two.result.guarantee.params.at("m") == 2.0);
    CHECK(two.result.verify());

    CHECK(error_name([] { extract_k_increasing(equilateral(1), 0.5, 2.0); }) == "TooSmall");
    CHECK(error_name([] { extract_k_increasing(equilateral(3), 0.5, 0.5); }) == "BadParameters");
}

TEST_CASE("extract_k_increasing postconditions")
{
    for (std::size_t n : {64, 256})
        for (double eps : {0.5, 1.0})
            for (double k : {1.0, 2.0, 4.0})
                for (std::uint64_t seed = 0; seed < 12; ++seed) {
                    auto m = uniform_random_metric(n, seed * 31 + n);
                    auto ext = extract_k_increasing(m, eps, k);
                    const auto & r = ext.result;
                    CHECK(r.check().empty());
                    CHECK(is_k_increasing(*r.tree));
                    CHECK(hst_separation(*r.tree) >= k * (1 - 1e-9));
                    CHECK(within(r.cert.distortion, 1 + eps));

                    const double ei = std::sqrt(1 + eps) - 1;
                    CHECK(ext.eps_inner == doctest::Approx(ei));
                    const double chain = static_cast<double>(ext.chain.size());
                    CHECK(chain >= std::log(static_cast<double>(n)) / std::log(4 / ei));
                    const double rr = std::ceil(std::log(2 * k) / std::log1p(ei) - 1e-9) + 1;
                    CHECK(static_cast<double>(r.size()) >= std::ceil(chain / rr));

                    // Non-contractive, with every pair inside [1, (1+eps')^2].
                    const auto target = hst_metric(*r.tree);
                    for (std::size_t i = 0; i < r.size(); ++i)
                        for (std::size_t j = i + 1; j < r.size(); ++j) {
                            const double q = target(r.cert.map[i], r.cert.map[j]) / r.witness.induced(i, j);
                            CHECK(q >= 1 - 1e-9);
                            CHECK(within(q, (1 + ei) * (1 + ei)));
                        }
                }
}

TEST_CASE("increasing_dichotomy examples")
{
    HstBuilder b;
    std::vector<std::uint32_t> kids;
    for (PointId p = 0; p < 7; ++p)
        kids.push_back(b.leaf(p));
    auto star = increasing_dichotomy(b.build(b.node(2.0, kids)));
    CHECK(star.kind == ResultKind::Equilateral);
    CHECK(star.size() == 7);
    CHECK(star.verify());

    auto cat = increasing_dichotomy(caterpillar(LacunarySequence::make({32, 16, 8, 4, 2}, 2)));
    CHECK(cat.kind == ResultKind::Lacunary);
    CHECK(cat.size() == 6);
    CHECK(cat.cert.distortion == 1.0);
    CHECK(cat.verify());

    // Bunches of two leaves on a five-vertex spine: 9 leaves.
    HstBuilder c;
    auto v5 = c.node(1.0, {c.leaf(7), c.leaf(8)});
    auto v4 = c.node(2.0, {c.leaf(6), v5});
    auto v3 = c.node(4.0, {c.leaf(4), c.leaf(5), v4});
    auto v2 = c.node(8.0, {c.leaf(2), c.leaf(3), v3});
    auto mixed = c.build(c.node(16.0, {c.leaf(0), c.leaf(1), v2}));
    CHECK(mixed.leaf_count() == 9);
    auto split = increasing_dichotomy(mixed);
    CHECK(split.kind == ResultKind::Lacunary);
    CHECK(split.size() >= 3);
    CHECK(split.size() == 6);
    CHECK(split.verify());

    CHECK(error_name([] { increasing_dichotomy(testing_support::complete_tree(2, 2)); }) == "NotIncreasing");
}

TEST_CASE("increasing_dichotomy always reaches floor(sqrt m)")
{
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        Rng rng(seed);
        HstBuilder b;
        PointId next = 0;
        const std::size_t depth = 1 + static_cast<std::size_t>(rng.below(8));
        std::uint32_t below = 0;
        bool have = false;
        double label = 1.0;
        for (std::size_t d = 0; d < depth; ++d) {
            std::vector<std::uint32_t> kids;
            const std::size_t leaves = (have ? 1 : 2) + static_cast<std::size_t>(rng.below(6));
            for (std::size_t i = 0; i < leaves; ++i)
                kids.push_back(b.leaf(next++));
            if (have)
                kids.push_back(below);
            below = b.node(label, kids);
            have = true;
            label *= 2.0 + rng.uniform();
        }
        auto t = b.build(below);
        auto r = increasing_dichotomy(t);
        CHECK(r.verify());
        const auto m = static_cast<double>(t.leaf_count());
        CHECK(static_cast<double>(r.size()) >= std::floor(std::sqrt(m)));
    }
}

TEST_CASE("equilateral_or_lacunary examples")
{
    auto eq = equilateral_or_lacunary(equilateral(16), 0.5, 2.0);
    CHECK(eq.kind == ResultKind::Equilateral);
    CHECK(eq.size() == 16);
    CHECK(eq.verify());

    auto lac = equilateral_or_lacunary(lacunary_metric(LacunarySequence::make({16, 4, 1}, 2)), 0.5, 2.0);
    CHECK(lac.kind == ResultKind::Lacunary);
    CHECK(within(lac.cert.distortion, 1.5));
    CHECK(lac.verify());

    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        auto r = equilateral_or_lacunary(uniform_random_metric(256, seed), 1.0, 2.0);
        CHECK(r.check().empty());
        CHECK(within(r.cert.distortion, 2.0));
    }
}

TEST_CASE("greedy dichotomy examples")
{
    auto eq = greedy_equilateral_or_lacunary(equilateral(4), 3.0, 2.0, 2);
    CHECK(eq.result.kind == ResultKind::Equilateral);
    CHECK(eq.result.size() == 4);
    CHECK(aspect_ratio(eq.result.witness.induced) == 1.0);

    auto line = greedy_equilateral_or_lacunary(line_metric({0, 10, 11}), 3.0, 2.0, 2);
    CHECK(line.result.kind == ResultKind::Equilateral);
    CHECK(line.result.witness.indices == std::vector<std::size_t>{0, 1});
    CHECK(line.result.verify());

    CHECK(error_name([] { greedy_equilateral_or_lacunary(equilateral(4), 2.0, 2.0); }) == "AlphaTooSmall");
    CHECK(greedy_equilateral_or_lacunary(equilateral(8), 3.0, 2.0).threshold == 3);
}

TEST_CASE("greedy dichotomy chain properties")
{
    std::size_t lacunary = 0;
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        Rng rng(seed);
        const double alpha = 2.1 + 3 * rng.uniform();
        const double k = 1 + 3 * rng.uniform();
        // Ultrametrics with a large separation force long chains.
        MetricSpace m = rng.bernoulli(0.5) ? hst_metric(random_hst(200, alpha, rng, 3))
                                           : uniform_random_metric(300, seed);
        auto g = greedy_equilateral_or_lacunary(m, alpha, k);
        const auto & r = g.result;
        CHECK(r.check().empty());
        if (r.kind == ResultKind::Equilateral) {
            CHECK(r.size() >= g.threshold);
            CHECK(within(aspect_ratio(r.witness.induced), alpha));
            continue;
        }
        ++lacunary;
        const std::size_t steps = g.diameters.size();
        CHECK(g.chain.size() == steps + 1);
        CHECK(static_cast<double>(steps) >= std::log(static_cast<double>(m.size())) /
                                                std::log(static_cast<double>(g.threshold)) - 1e-9);
        for (std::size_t i = 1; i < steps; ++i)
            CHECK(within(g.diameters[i], 2.0 / alpha * g.diameters[i - 1]));
        for (std::size_t i = 0; i < steps; ++i)
            for (std::size_t j = i + 1; j < g.chain.size(); ++j) {
                const double d = m(g.chain[i], g.chain[j]);
                CHECK(within(g.diameters[i] / alpha, d));
                CHECK(within(d, g.diameters[i]));
            }
        if (k > alpha / 2) {
            const auto s = static_cast<std::size_t>(std::ceil(1 + std::log(k) / std::log(alpha / 2) - 1e-12));
            CHECK(g.stride == s);
        }
        CHECK(within(r.cert.distortion, alpha));
    }
    CHECK(lacunary > 0);
}

TEST_CASE("triangle_to_binary_hst examples")
{
    auto line = line_metric({0, 1, 20});
    auto e = triangle_to_binary_hst(line, 4.0);
    CHECK(e.tree.root().label == 20.0);
    CHECK(e.tree.distance(0, 1) == 1.0);
    CHECK(e.tree.distance(0, 2) == 20.0);
    CHECK(e.cert.distortion == doctest::Approx(20.0 / 19.0));
    CHECK(e.cert.distortion <= 2.0);
    CHECK(is_binary(e.tree));

    auto two = triangle_to_binary_hst(equilateral(2, 5.0), 3.0);
    CHECK(two.tree.leaf_count() == 2);
    CHECK(two.cert.distortion == 1.0);

    try {
        triangle_to_binary_hst(equilateral(3), 3.0);
        FAIL("expected TripleTooFlat");
    } catch (const TripleTooFlat & err) {
        CHECK(err.name() == "TripleTooFlat");
        CHECK(err.points() == std::array<std::size_t, 3>{0, 1, 2});
    }
    CHECK(error_name([] { triangle_to_binary_hst(equilateral(2), 2.0); }) == "KTooSmall");
}

TEST_CASE("triangle_to_binary_hst on random far-triple spaces")
{
    std::size_t tested = 0;
    for (std::uint64_t seed = 0; tested < 60 && seed < 1000; ++seed) {
        Rng rng(seed);
        const double k = 2.2 + 4 * rng.uniform();
        auto tree = random_hst(3 + static_cast<std::size_t>(rng.below(20)), 3 * k, rng, 2, true);
        auto m = rng.bernoulli(0.3) ? hst_metric(tree) : perturbed_tree_metric(tree, 1.3, rng);
        if (!triples_far(m, k))
            continue;
        ++tested;
        auto e = triangle_to_binary_hst(m, k);
        CHECK(e.cert.verify());
        CHECK(is_binary(e.tree));
        CHECK(hst_separation(e.tree) >= k / 2 * (1 - 1e-9));
        CHECK(within(e.cert.distortion, k / (k - 2)));
        CHECK(e.cert.contraction <= 1 + 1e-9);
        CHECK(e.tree.root().label == doctest::Approx(m.diameter()));
        CHECK(min_triple_aspect(hst_metric(e.tree)) >= k / 2 * (1 - 1e-9));
    }
    CHECK(tested == 60);
}

TEST_CASE("hst_relabel")
{
    // c = 1: the tree is exactly the space's ultrametric.
    auto t = testing_support::complete_tree(2, 3, 8.0);
    auto exact = hst_relabel(hst_metric(t), t, 1.0, 4.0);
    CHECK(exact.tree == t);
    CHECK(exact.cert.distortion == 1.0);

    HstBuilder b;
    auto pair = b.build(b.node(7.0, {b.leaf(0), b.leaf(1)}));
    auto l = equilateral(2, 5.0);
    auto two = hst_relabel(l, pair, 2.0, 3.0);
    CHECK(two.tree.root().label == 5.0);
    CHECK(two.cert.distortion == 1.0);

    CHECK(error_name([&] { hst_relabel(hst_metric(t), t, 1.0, 9.0); }) == "SeparationTooSmall");
    CHECK(error_name([&] { hst_relabel(l, pair, 1.0, 3.0); }) == "CertMismatch");
    auto ter = testing_support::complete_tree(3, 2, 10.0);
    CHECK(error_name([&] { hst_relabel(hst_metric(ter), ter, 1.0, 3.0); }) == "NotBinary");

    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        Rng rng(seed);
        const double k = 2.1 + 4 * rng.uniform();
        auto tree = random_hst(2 + static_cast<std::size_t>(rng.below(30)), 3 * k, rng, 2, true);
        auto m = perturbed_tree_metric(tree, 3.0, rng);
        auto r = hst_relabel(m, tree, 3.0, k);
        CHECK(r.cert.verify());
        CHECK(hst_separation(r.tree) >= k * (1 - 1e-9));
        CHECK(within(r.cert.distortion, k / (k - 2)));
        CHECK(is_binary(r.tree));
    }
}

TEST_CASE("monochromatic_subset")
{
    Coloring one(5, 1);
    for (std::size_t a = 0; a < 5; ++a)
        for (std::size_t b = a + 1; b < 5; ++b)
            one.set(a, b, 1);
    CHECK(monochromatic_subset(one).size() == 5);

    // K4 with the matching {01, 23} red: the blue pairs form a 4-cycle.
    Coloring k4(4, 2);
    for (std::size_t a = 0; a < 4; ++a)
        for (std::size_t b = a + 1; b < 4; ++b)
            k4.set(a, b, (a == 0 && b == 1) || (a == 2 && b == 3) ? 1 : 2);
    auto s = monochromatic_subset(k4);
    CHECK(monochromatic(k4, s));
    CHECK(exhaustive_monochromatic(k4) == 2);
    CHECK(s.size() == 2);

    CHECK(monochromatic_bound(3, 5) == 1);
    CHECK(monochromatic_bound(4, 1) == 5);
    CHECK(monochromatic_bound(81, 3) == 1);
    CHECK(monochromatic_bound(4096, 2) == 6);

    Coloring gap(3, 2);
    gap.set(0, 1, 1);
    gap.set(0, 2, 2);
    CHECK(error_name([&] { monochromatic_subset(gap); }) == "IncompleteColoring");

    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        Rng rng(seed);
        const std::size_t n = 2 + static_cast<std::size_t>(rng.below(11));
        const int d = 1 + static_cast<int>(rng.below(3));
        Coloring c(n, d);
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = a + 1; b < n; ++b)
                c.set(a, b, 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(d))));
        auto out = monochromatic_subset(c);
        CHECK(monochromatic(c, out));
        CHECK(out.size() >= monochromatic_bound(n - 1, d));
        CHECK(out.size() <= exhaustive_monochromatic(c));
    }
}

TEST_CASE("hst_dichotomy examples")
{
    HstBuilder b;
    std::vector<std::uint32_t> kids;
    for (PointId p = 0; p < 9; ++p)
        kids.push_back(b.leaf(p));
    auto star = b.build(b.node(1.0, kids));
    HstDichotomyOptions coarse;
    coarse.h = 4;
    auto s = hst_dichotomy(hst_metric(star), star, coarse);
    CHECK(s.case_taken == 1);
    CHECK(s.result.kind == ResultKind::Equilateral);
    CHECK(s.result.size() == 9);
    CHECK(s.result.verify());

    auto bin = testing_support::complete_tree(2, 4, 2.0);
    for (std::size_t h : {2, 3, 5}) {
        coarse.h = h;
        auto r = hst_dichotomy(hst_metric(bin), bin, coarse);
        CHECK(r.case_taken == 2);
        CHECK(r.result.size() == 16);
        CHECK(r.result.verify());
    }

    auto m = hst_metric(bin);
    HstDichotomyOptions fine;
    fine.mode = HstMode::Fine;
    fine.c = 3.0;
    fine.eps = 0.5;
    fine.k = 2.0;
    CHECK(error_name([&] { hst_dichotomy(m, bin, fine); }) == "SeparationTooSmall");
    HstDichotomyOptions loose = coarse;
    loose.c = 1.0;
    CHECK(error_name([&] { hst_dichotomy(m.scaled(2.0), bin, loose); }) == "CertMismatch");
}

TEST_CASE("hst_dichotomy fine mode on perturbed inputs")
{
    std::size_t case1 = 0, case2 = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        Rng rng(seed);
        HstDichotomyOptions o;
        o.mode = HstMode::Fine;
        o.c = 3.0;
        o.eps = 0.2 + rng.uniform();
        o.k = 2.0 + 2 * rng.uniform();
        o.h = 2 + static_cast<std::size_t>(rng.below(6));
        const double kp = std::max(o.k, 2 + 2 / o.eps);
        auto tree = random_hst(4 + static_cast<std::size_t>(rng.below(60)), o.c * kp * (1 + 1e-6), rng,
                               2 + static_cast<std::size_t>(rng.below(12)));
        auto m = perturbed_tree_metric(tree, o.c, rng);
        auto r = hst_dichotomy(m, tree, o);
        CHECK(r.k_prime == doctest::Approx(kp));
        CHECK(r.result.check().empty());
        CHECK(within(r.result.cert.distortion, std::max(1 + o.eps, kp / (kp - 2))));
        if (r.case_taken == 1) {
            ++case1;
            CHECK(r.result.kind == ResultKind::Equilateral);
            CHECK(within(r.result.cert.distortion, 1 + o.eps));
        } else {
            ++case2;
            CHECK(r.result.kind == ResultKind::BinaryHst);
            CHECK(hst_separation(*r.result.tree) >= kp * (1 - 1e-9));
            const double bound = std::pow(static_cast<double>(tree.leaf_count()),
                                          1.0 / std::log2(static_cast<double>(o.h)));
            CHECK(static_cast<double>(r.result.size()) >= bound * (1 - 1e-9));
        }
    }
    CHECK(case1 > 0);
    CHECK(case2 > 0);
}

TEST_CASE("hst_dichotomy coarse mode passes the input constant through")
{
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
        Rng rng(seed);
        HstDichotomyOptions o;
        o.c = 1 + 2 * rng.uniform();
        o.k = 1.5 + rng.uniform();
        o.h = 2 + static_cast<std::size_t>(rng.below(4));
        auto tree = random_hst(3 + static_cast<std::size_t>(rng.below(50)), o.k * 1.01, rng, 6);
        auto m = perturbed_tree_metric(tree, o.c, rng);
        auto r = hst_dichotomy(m, tree, o);
        CHECK(r.result.check().empty());
        CHECK(within(r.result.cert.distortion, o.c));
        if (r.case_taken == 1)
            CHECK(r.result.size() >= o.h + 1);
    }
}
