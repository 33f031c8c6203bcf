#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "mdich/metric.hpp"

namespace mdich {

using PointId = std::uint32_t;

/// A rooted, labelled tree defining a hierarchically separated metric on its
/// leaves: d(x, y) is the label of lca(x, y). Leaves carry label 0 and a point
/// id; internal vertices carry positive labels.
///
/// Trees are always held in canonical form:
///  - a unary internal vertex is replaced by its only child,
///  - internal vertices without leaves below them are dropped,
///  - an internal child whose label equals its parent's is merged into it,
///  - children are ordered by the smallest point id below them,
///  - nodes are stored in preorder, root first.
/// Build them with HstBuilder.
class HstTree {
public:
    struct Node {
        double label = 0.0;
        PointId point = 0;  ///< meaningful for leaves only
        std::vector<std::uint32_t> children;

        bool is_leaf() const noexcept { return children.empty(); }
        friend bool operator==(const Node &, const Node &) = default;
    };

    std::size_t node_count() const noexcept { return nodes_.size(); }
    const Node & node(std::size_t i) const { return nodes_.at(i); }
    const Node & root() const { return nodes_.front(); }
    const std::vector<Node> & nodes() const noexcept { return nodes_; }

    std::size_t leaf_count() const noexcept { return leaf_count_; }
    /// Point ids in preorder (left to right).
    std::vector<PointId> leaves() const;
    /// Point ids sorted ascending; the point order used by hst_metric().
    std::vector<PointId> sorted_points() const;
    /// Parent of every node (root maps to itself).
    std::vector<std::uint32_t> parents() const;
    /// Label of the least common ancestor of two point ids.
    double distance(PointId a, PointId b) const;

    friend bool operator==(const HstTree &, const HstTree &) = default;

private:
    friend class HstBuilder;
    std::vector<Node> nodes_;
    std::size_t leaf_count_ = 0;
};

/// Incremental construction of an HstTree. Handles are indices into the
/// builder; build() canonicalises and validates.
class HstBuilder {
public:
    std::uint32_t leaf(PointId point);
    std::uint32_t node(double label, std::vector<std::uint32_t> children);

    /// Throws InvalidTree (cycles, shared subtrees, non-positive internal
    /// labels, a child labelled above its parent, repeated point ids, or an
    /// empty tree).
    HstTree build(std::uint32_t root) const;

private:
    std::vector<HstTree::Node> nodes_;
};

/// Ultrametric on the leaves, points ordered by ascending id and labelled by
/// the decimal id. Throws TooFewLeaves below two leaves.
MetricSpace hst_metric(const HstTree & tree);

/// Largest k for which the tree is a k-HST: the minimum of
/// label(parent) / label(child) over internal parent-child pairs, +inf if
/// there are none.
double hst_separation(const HstTree & tree);

std::size_t max_outdegree(const HstTree & tree);
bool is_binary(const HstTree & tree);
/// Every vertex has at most one internal child.
bool is_k_increasing(const HstTree & tree);

/// a_1 >= a_2 >= ... > 0 with a_{i+1} <= a_i / k.
struct LacunarySequence {
    std::vector<double> values;
    double k = 1.0;

    /// Throws NotLacunary if values are not positive and k-lacunary
    /// (relative slack 1e-9), BadParameters if k < 1.
    static LacunarySequence make(std::vector<double> values, double k);
    bool valid() const;
};

enum class LacunaryConvention {
    ExtraPoint,    ///< m values define m + 1 points; every value is a distance
    PointPerValue,  ///< m values define m points; the last value is unused
};

/// d(i, j) = a_min(i, j) on points 0, 1, ...
MetricSpace lacunary_metric(const LacunarySequence & seq,
                            LacunaryConvention convention = LacunaryConvention::ExtraPoint);

/// The caterpillar tree realising lacunary_metric(seq) (ExtraPoint
/// convention): point i hangs off the vertex labelled a_i, the last vertex
/// holds the final two points.
HstTree caterpillar(const LacunarySequence & seq);

/// Leaf count of the largest binary subtree (bottom-up DP).
std::size_t binary_subtree_size(const HstTree & tree);

/// The leaf-maximum binary subtree. Each vertex keeps the pair of children
/// with the largest DP sum, ties going to the lexicographically smallest
/// pair of child positions. Labels are inherited. Throws TooFewLeaves below
/// two leaves.
HstTree binary_subtree(const HstTree & tree);

/// Indices 0, s, 2s, ... (< m) with s = ceil(1 + log_a b). Throws
/// BadParameters unless b > a > 1.
std::vector<std::size_t> lacunary_stride_indices(std::size_t m, double a, double b);
std::size_t lacunary_stride(double a, double b);

/// b-lacunary subsequence of an a-lacunary sequence, keeping the first term.
LacunarySequence lacunary_subsequence(const LacunarySequence & seq, double a, double b);

}  // namespace mdich

namespace mdich {

/// Same shape and labels with every point id replaced by mapping[id].
HstTree map_points(const HstTree & tree, const std::vector<PointId> & mapping);

/// Same shape and points with internal node i relabelled to labels[i]
/// (indices as in tree.nodes()).
HstTree with_labels(const HstTree & tree, const std::vector<double> & labels);

}  // namespace mdich
