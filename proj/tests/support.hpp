#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "mdich/hst.hpp"
#include "mdich/instances.hpp"
#include "mdich/metric.hpp"

namespace testing_support {

using mdich::MetricSpace;

inline MetricSpace rows(const std::vector<std::vector<double>> & r)
{
    return mdich::validate_metric(r);
}

/// Sup-ratio distortion computed straight from the definition.
inline double naive_distortion(const MetricSpace & a, const MetricSpace & b, const std::vector<std::size_t> & map)
{
    double expand = 0.0, contract = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = i + 1; j < a.size(); ++j) {
            const double r = b(map[i], map[j]) / a(i, j);
            expand = std::max(expand, r);
            contract = std::max(contract, 1.0 / r);
        }
    return expand * contract;
}

inline double naive_aspect(const MetricSpace & m, const std::vector<std::size_t> & pts)
{
    double hi = 0.0, lo = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j) {
            hi = std::max(hi, m(pts[i], pts[j]));
            lo = std::min(lo, m(pts[i], pts[j]));
        }
    return hi / lo;
}

inline bool within(double value, double bound)
{
    return value <= bound * (1.0 + 1e-9);
}

/// Largest leaf subset whose induced subtree branches at most twice at
/// every vertex, by trying every subset.
inline std::size_t exhaustive_binary_subtree(const mdich::HstTree & tree)
{
    const auto & nodes = tree.nodes();
    std::vector<std::size_t> leaf_nodes;
    for (std::size_t u = 0; u < nodes.size(); ++u)
        if (nodes[u].is_leaf())
            leaf_nodes.push_back(u);
    const auto parent = tree.parents();
    const std::size_t n = leaf_nodes.size();
    std::size_t best = 0;
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
        std::vector<char> marked(nodes.size(), 0);
        for (std::size_t i = 0; i < n; ++i)
            if (mask >> i & 1u)
                for (std::size_t v = leaf_nodes[i];; v = parent[v]) {
                    marked[v] = 1;
                    if (v == 0)
                        break;
                }
        bool ok = true;
        for (std::size_t u = 0; u < nodes.size() && ok; ++u) {
            std::size_t used = 0;
            for (auto c : nodes[u].children)
                used += marked[c] ? 1 : 0;
            ok = used <= 2;
        }
        const auto size = static_cast<std::size_t>(std::popcount(mask));
        if (ok)
            best = std::max(best, size);
    }
    return best;
}

/// Small random instance from one of four families: uniform, ultrametric,
/// perturbed binary tree, or near-integer points on a line.
inline MetricSpace sample_small_metric(mdich::Rng & rng, std::size_t n, std::uint64_t seed)
{
    switch (rng.below(4)) {
    case 0: return mdich::uniform_random_metric(n, seed);
    case 1: return mdich::hst_metric(mdich::random_hst(n, 1.5 + 2 * rng.uniform(), rng, 3));
    case 2: {
        auto t = mdich::random_hst(n, 2 + 3 * rng.uniform(), rng, 2, true);
        return mdich::perturbed_tree_metric(t, 1.5, rng);
    }
    default: {
        std::vector<double> xs;
        for (std::size_t i = 0; i < n; ++i)
            xs.push_back(std::round(rng.uniform(0, 20)) + static_cast<double>(i) * 1e-3);
        return mdich::line_metric(xs);
    }
    }
}

/// Complete h-ary tree of the given depth over points 0..h^depth-1 with
/// labels sep^(depth - level).
inline mdich::HstTree complete_tree(std::size_t h, std::size_t depth, double sep = 2.0)
{
    mdich::HstBuilder b;
    std::vector<std::uint32_t> level;
    std::size_t count = 1;
    for (std::size_t i = 0; i < depth; ++i)
        count *= h;
    for (std::size_t p = 0; p < count; ++p)
        level.push_back(b.leaf(static_cast<mdich::PointId>(p)));
    double label = 1.0;
    while (level.size() > 1) {
        std::vector<std::uint32_t> up;
        for (std::size_t i = 0; i < level.size(); i += h)
            up.push_back(b.node(label, std::vector<std::uint32_t>(level.begin() + static_cast<std::ptrdiff_t>(i),
                                                                  level.begin() + static_cast<std::ptrdiff_t>(i + h))));
        level = std::move(up);
        label *= sep;
    }
    return b.build(level[0]);
}

}  // namespace testing_support

#include <functional>
#include <string>

#include "mdich/errors.hpp"

namespace testing_support {

/// Name of the mdich::Error thrown by f, or "" when nothing is thrown.
inline std::string error_name(const std::function<void()> & f)
{
    try {
        f();
    } catch (const mdich::Error & e) {
        return e.name();
    }
    return "";
}

}  // namespace testing_support
