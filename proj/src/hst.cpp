#include "mdich/hst.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "mdich/errors.hpp"
#include "mdich/numeric.hpp"

namespace mdich {

namespace {

constexpr std::int64_t kEmpty = -1;

struct Fragment {
    double label = 0.0;
    PointId point = 0;
    PointId min_point = 0;
    std::vector<std::uint32_t> children;
};

[[noreturn]] void invalid(const std::string & why) { throw Error("InvalidTree", why); }

// Leaf-order ranges [first, last) of every node, leaves numbered in preorder.
struct LeafRanges {
    std::vector<std::uint32_t> first, last;
    std::vector<PointId> leaf_points;
};

LeafRanges leaf_ranges(const HstTree & tree)
{
    const auto & nodes = tree.nodes();
    LeafRanges r;
    r.first.resize(nodes.size());
    r.last.resize(nodes.size());
    std::vector<std::uint32_t> leaf_pos(nodes.size(), 0);
    for (std::size_t i = 0; i < nodes.size(); ++i)
        if (nodes[i].is_leaf()) {
            leaf_pos[i] = static_cast<std::uint32_t>(r.leaf_points.size());
            r.leaf_points.push_back(nodes[i].point);
        }
    for (std::size_t i = nodes.size(); i-- > 0;) {
        if (nodes[i].is_leaf()) {
            r.first[i] = leaf_pos[i];
            r.last[i] = leaf_pos[i] + 1;
        } else {
            r.first[i] = r.first[nodes[i].children.front()];
            r.last[i] = r.last[nodes[i].children.back()];
        }
    }
    return r;
}

}  // namespace

std::uint32_t HstBuilder::leaf(PointId point)
{
    nodes_.push_back(HstTree::Node{0.0, point, {}});
    return static_cast<std::uint32_t>(nodes_.size() - 1);
}

std::uint32_t HstBuilder::node(double label, std::vector<std::uint32_t> children)
{
    if (children.empty())
        invalid("internal vertex without children");
    nodes_.push_back(HstTree::Node{label, 0, std::move(children)});
    return static_cast<std::uint32_t>(nodes_.size() - 1);
}

HstTree HstBuilder::build(std::uint32_t root) const
{
    if (root >= nodes_.size())
        invalid("root handle out of range");

    // Post-order over the builder graph with an explicit stack. Each builder
    // node maps to a canonical fragment index or kEmpty.
    std::vector<std::int64_t> result(nodes_.size(), kEmpty);
    std::vector<char> state(nodes_.size(), 0);  // 0 new, 1 open, 2 done
    std::vector<Fragment> frags;
    std::vector<std::uint32_t> stack{root};
    while (!stack.empty()) {
        const std::uint32_t u = stack.back();
        const auto & bn = nodes_[u];
        if (state[u] == 0) {
            state[u] = 1;
            for (auto it = bn.children.rbegin(); it != bn.children.rend(); ++it) {
                if (*it >= nodes_.size())
                    invalid("child handle out of range");
                if (state[*it] != 0)
                    invalid("vertex reachable twice (shared subtree or cycle)");
                stack.push_back(*it);
            }
            continue;
        }
        stack.pop_back();
        state[u] = 2;
        if (bn.children.empty()) {
            frags.push_back(Fragment{0.0, bn.point, bn.point, {}});
            result[u] = static_cast<std::int64_t>(frags.size() - 1);
            continue;
        }
        const double label = bn.label;
        if (!(label > 0.0) || !std::isfinite(label))
            invalid("internal vertex with non-positive label");
        std::vector<std::uint32_t> kids;
        for (std::uint32_t c : bn.children) {
            const std::int64_t f = result[c];
            if (f == kEmpty)
                continue;
            const Fragment & cf = frags[static_cast<std::size_t>(f)];
            if (!cf.children.empty()) {
                if (cf.label > label)
                    invalid("child label " + std::to_string(cf.label) + " exceeds parent label " +
                            std::to_string(label));
                if (cf.label == label) {
                    kids.insert(kids.end(), cf.children.begin(), cf.children.end());
                    continue;
                }
            }
            kids.push_back(static_cast<std::uint32_t>(f));
        }
        if (kids.empty())
            continue;
        if (kids.size() == 1) {
            // A unary vertex is never an lca; its only child takes its place.
            result[u] = kids.front();
            continue;
        }
        std::sort(kids.begin(), kids.end(),
                  [&](std::uint32_t a, std::uint32_t b) { return frags[a].min_point < frags[b].min_point; });
        const PointId min_point = frags[kids.front()].min_point;
        frags.push_back(Fragment{label, 0, min_point, std::move(kids)});
        result[u] = static_cast<std::int64_t>(frags.size() - 1);
    }
    if (result[root] == kEmpty)
        invalid("tree has no leaves");

    // Preorder flattening; children are pushed in reverse so they pop in order.
    HstTree tree;
    std::vector<std::pair<std::uint32_t, std::int64_t>> todo{{static_cast<std::uint32_t>(result[root]), -1}};
    std::vector<PointId> points;
    while (!todo.empty()) {
        auto [fi, parent] = todo.back();
        todo.pop_back();
        const Fragment & f = frags[fi];
        const auto slot = static_cast<std::uint32_t>(tree.nodes_.size());
        tree.nodes_.push_back(HstTree::Node{f.label, f.point, {}});
        if (parent >= 0)
            tree.nodes_[static_cast<std::size_t>(parent)].children.push_back(slot);
        if (f.children.empty())
            points.push_back(f.point);
        for (std::size_t i = f.children.size(); i-- > 0;)
            todo.emplace_back(f.children[i], slot);
    }
    std::sort(points.begin(), points.end());
    if (std::adjacent_find(points.begin(), points.end()) != points.end())
        invalid("point id appears on two leaves");
    tree.leaf_count_ = points.size();
    return tree;
}

std::vector<PointId> HstTree::leaves() const
{
    std::vector<PointId> out;
    out.reserve(leaf_count_);
    for (const auto & n : nodes_)
        if (n.is_leaf())
            out.push_back(n.point);
    return out;
}

std::vector<PointId> HstTree::sorted_points() const
{
    auto out = leaves();
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::uint32_t> HstTree::parents() const
{
    std::vector<std::uint32_t> parent(nodes_.size(), 0);
    for (std::size_t i = 0; i < nodes_.size(); ++i)
        for (std::uint32_t c : nodes_[i].children)
            parent[c] = static_cast<std::uint32_t>(i);
    return parent;
}

double HstTree::distance(PointId a, PointId b) const
{
    if (a == b)
        return 0.0;
    const auto parent = parents();
    std::int64_t na = -1, nb = -1;
    for (std::size_t i = 0; i < nodes_.size(); ++i)
        if (nodes_[i].is_leaf()) {
            if (nodes_[i].point == a)
                na = static_cast<std::int64_t>(i);
            if (nodes_[i].point == b)
                nb = static_cast<std::int64_t>(i);
        }
    if (na < 0 || nb < 0)
        throw UsageError("UnknownPoint", "point id not in tree");
    std::vector<char> on_path(nodes_.size(), 0);
    for (auto u = static_cast<std::uint32_t>(na);; u = parent[u]) {
        on_path[u] = 1;
        if (u == 0)
            break;
    }
    auto u = static_cast<std::uint32_t>(nb);
    while (!on_path[u])
        u = parent[u];
    return nodes_[u].label;
}

MetricSpace hst_metric(const HstTree & tree)
{
    const std::size_t n = tree.leaf_count();
    if (n < 2)
        throw Error("TooFewLeaves", "an HST metric needs at least two leaves");
    const LeafRanges r = leaf_ranges(tree);
    // Position of each preorder leaf in ascending point order.
    std::vector<std::uint32_t> by_point(n);
    for (std::uint32_t i = 0; i < n; ++i)
        by_point[i] = i;
    std::sort(by_point.begin(), by_point.end(),
              [&](std::uint32_t a, std::uint32_t b) { return r.leaf_points[a] < r.leaf_points[b]; });
    std::vector<std::uint32_t> pos(n);
    std::vector<std::string> labels(n);
    for (std::uint32_t i = 0; i < n; ++i) {
        pos[by_point[i]] = i;
        labels[i] = std::to_string(r.leaf_points[by_point[i]]);
    }
    std::vector<double> dist(n * n, 0.0);
    const auto & nodes = tree.nodes();
    for (std::size_t u = 0; u < nodes.size(); ++u) {
        const auto & kids = nodes[u].children;
        for (std::size_t a = 0; a < kids.size(); ++a)
            for (std::size_t b = a + 1; b < kids.size(); ++b)
                for (std::uint32_t x = r.first[kids[a]]; x < r.last[kids[a]]; ++x)
                    for (std::uint32_t y = r.first[kids[b]]; y < r.last[kids[b]]; ++y) {
                        dist[pos[x] * n + pos[y]] = nodes[u].label;
                        dist[pos[y] * n + pos[x]] = nodes[u].label;
                    }
    }
    return MetricSpace::trusted(std::move(labels), std::move(dist));
}

double hst_separation(const HstTree & tree)
{
    double sep = std::numeric_limits<double>::infinity();
    for (const auto & n : tree.nodes())
        for (std::uint32_t c : n.children)
            if (!tree.node(c).is_leaf())
                sep = std::min(sep, n.label / tree.node(c).label);
    return sep;
}

std::size_t max_outdegree(const HstTree & tree)
{
    std::size_t best = 0;
    for (const auto & n : tree.nodes())
        best = std::max(best, n.children.size());
    return best;
}

bool is_binary(const HstTree & tree) { return max_outdegree(tree) <= 2; }

bool is_k_increasing(const HstTree & tree)
{
    for (const auto & n : tree.nodes()) {
        std::size_t internal = 0;
        for (std::uint32_t c : n.children)
            internal += tree.node(c).is_leaf() ? 0 : 1;
        if (internal > 1)
            return false;
    }
    return true;
}

LacunarySequence LacunarySequence::make(std::vector<double> values, double k)
{
    LacunarySequence seq{std::move(values), k};
    if (!(k >= 1.0))
        throw UsageError("BadParameters", "lacunary separation must be >= 1");
    if (!seq.valid())
        throw Error("NotLacunary", "sequence is not positive and " + std::to_string(k) + "-lacunary");
    return seq;
}

bool LacunarySequence::valid() const
{
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!(values[i] > 0.0) || !std::isfinite(values[i]))
            return false;
        if (i + 1 < values.size() && !leq(values[i + 1], values[i] / k))
            return false;
    }
    return true;
}

MetricSpace lacunary_metric(const LacunarySequence & seq, LacunaryConvention convention)
{
    if (!seq.valid())
        throw Error("NotLacunary", "sequence violates its lacunarity invariant");
    const std::size_t n =
        convention == LacunaryConvention::ExtraPoint ? seq.values.size() + 1 : seq.values.size();
    std::vector<double> dist(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            dist[i * n + j] = seq.values[i];
            dist[j * n + i] = seq.values[i];
        }
    return MetricSpace::trusted(MetricSpace::default_labels(n), std::move(dist));
}

HstTree caterpillar(const LacunarySequence & seq)
{
    HstBuilder b;
    const std::size_t m = seq.values.size();
    if (m == 0)
        return b.build(b.leaf(0));
    std::uint32_t below = b.leaf(static_cast<PointId>(m));
    for (std::size_t i = m; i-- > 0;)
        below = b.node(seq.values[i], {b.leaf(static_cast<PointId>(i)), below});
    return b.build(below);
}

namespace {

struct BinaryChoice {
    std::vector<std::size_t> best;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> pick;  // child positions
};

BinaryChoice binary_dp(const HstTree & tree)
{
    const auto & nodes = tree.nodes();
    BinaryChoice dp{std::vector<std::size_t>(nodes.size(), 0),
                    std::vector<std::pair<std::uint32_t, std::uint32_t>>(nodes.size(), {0, 0})};
    // Preorder storage: every descendant has a larger index.
    for (std::size_t u = nodes.size(); u-- > 0;) {
        const auto & kids = nodes[u].children;
        if (kids.empty()) {
            dp.best[u] = 1;
            continue;
        }
        std::size_t top = 0;
        std::pair<std::uint32_t, std::uint32_t> choice{0, 1};
        for (std::uint32_t a = 0; a < kids.size(); ++a)
            for (std::uint32_t b = a + 1; b < kids.size(); ++b) {
                const std::size_t s = dp.best[kids[a]] + dp.best[kids[b]];
                if (s > top) {
                    top = s;
                    choice = {a, b};
                }
            }
        dp.best[u] = top;
        dp.pick[u] = choice;
    }
    return dp;
}

}  // namespace

std::size_t binary_subtree_size(const HstTree & tree) { return binary_dp(tree).best[0]; }

HstTree binary_subtree(const HstTree & tree)
{
    if (tree.leaf_count() < 2)
        throw Error("TooFewLeaves", "binary subtree needs at least two leaves");
    const BinaryChoice dp = binary_dp(tree);
    const auto & nodes = tree.nodes();
    HstBuilder b;
    // Build bottom-up: handles for chosen nodes, resolved in reverse preorder.
    std::vector<char> chosen(nodes.size(), 0);
    chosen[0] = 1;
    for (std::size_t u = 0; u < nodes.size(); ++u)
        if (chosen[u] && !nodes[u].is_leaf()) {
            chosen[nodes[u].children[dp.pick[u].first]] = 1;
            chosen[nodes[u].children[dp.pick[u].second]] = 1;
        }
    std::vector<std::uint32_t> handle(nodes.size(), 0);
    for (std::size_t u = nodes.size(); u-- > 0;) {
        if (!chosen[u])
            continue;
        if (nodes[u].is_leaf()) {
            handle[u] = b.leaf(nodes[u].point);
        } else {
            const auto & kids = nodes[u].children;
            handle[u] = b.node(nodes[u].label,
                               {handle[kids[dp.pick[u].first]], handle[kids[dp.pick[u].second]]});
        }
    }
    return b.build(handle[0]);
}

std::size_t lacunary_stride(double a, double b)
{
    if (!(a > 1.0) || !(b > a))
        throw UsageError("BadParameters", "lacunary thinning needs b > a > 1");
    return static_cast<std::size_t>(ceil_tol(1.0 + log_base(b, a)));
}

std::vector<std::size_t> lacunary_stride_indices(std::size_t m, double a, double b)
{
    const std::size_t s = lacunary_stride(a, b);
    std::vector<std::size_t> kept;
    for (std::size_t i = 0; i < m; i += s)
        kept.push_back(i);
    return kept;
}

LacunarySequence lacunary_subsequence(const LacunarySequence & seq, double a, double b)
{
    const auto kept = lacunary_stride_indices(seq.values.size(), a, b);
    LacunarySequence in{seq.values, a};
    if (!in.valid())
        throw Error("NotLacunary", "input is not " + std::to_string(a) + "-lacunary");
    std::vector<double> values;
    values.reserve(kept.size());
    for (std::size_t i : kept)
        values.push_back(seq.values[i]);
    return LacunarySequence::make(std::move(values), b);
}

}  // namespace mdich

namespace mdich {

namespace {

template <typename LabelOf, typename PointOf>
HstTree rebuild(const HstTree & tree, LabelOf label_of, PointOf point_of)
{
    const auto & nodes = tree.nodes();
    HstBuilder b;
    std::vector<std::uint32_t> handle(nodes.size(), 0);
    for (std::size_t u = nodes.size(); u-- > 0;) {
        if (nodes[u].is_leaf()) {
            handle[u] = b.leaf(point_of(nodes[u].point));
            continue;
        }
        std::vector<std::uint32_t> kids;
        kids.reserve(nodes[u].children.size());
        for (std::uint32_t c : nodes[u].children)
            kids.push_back(handle[c]);
        handle[u] = b.node(label_of(u), std::move(kids));
    }
    return b.build(handle[0]);
}

}  // namespace

HstTree map_points(const HstTree & tree, const std::vector<PointId> & mapping)
{
    return rebuild(
        tree, [&](std::size_t u) { return tree.node(u).label; },
        [&](PointId p) {
            if (p >= mapping.size())
                throw UsageError("UnknownPoint", "no mapping for point " + std::to_string(p));
            return mapping[p];
        });
}

HstTree with_labels(const HstTree & tree, const std::vector<double> & labels)
{
    if (labels.size() != tree.node_count())
        throw UsageError("ShapeError", "one label per node expected");
    return rebuild(
        tree, [&](std::size_t u) { return labels[u]; }, [](PointId p) { return p; });
}

}  // namespace mdich
