#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "mdich/hst.hpp"
#include "mdich/metric.hpp"

namespace mdich {

/// Identifier written into provenance blocks.
inline constexpr const char * kPrngId = "mt19937_64";

/// Seeded generator with conversions that do not depend on the standard
/// library's distribution implementations, so sequences match everywhere.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }
    /// Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    /// Uniform integer in [0, n) by rejection; n > 0.
    std::uint64_t below(std::uint64_t n);
    bool bernoulli(double p) { return uniform() < p; }

    template <typename T>
    void shuffle(std::vector<T> & v)
    {
        for (std::size_t i = v.size(); i > 1; --i)
            std::swap(v[i - 1], v[static_cast<std::size_t>(below(i))]);
    }

private:
    std::mt19937_64 engine_;
};

/// Per-task seed: splitmix64 of the base seed mixed with the task index.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index);

/// Where an instance came from; serialised next to the data.
struct Provenance {
    std::string generator;
    std::map<std::string, std::string> params;
    std::optional<std::uint64_t> seed;
    std::string prng = kPrngId;
};

MetricSpace equilateral(std::size_t n, double w = 1.0);

/// Points on the real line.
MetricSpace line_metric(const std::vector<double> & xs);

/// Off-diagonal distances i.i.d. uniform in [lo, hi]; a metric whenever
/// hi <= 2 lo. Throws BadParameters otherwise.
MetricSpace uniform_random_metric(std::size_t n, std::uint64_t seed, double lo = 1.0, double hi = 2.0);

struct Graph {
    std::size_t s = 0;
    std::vector<std::pair<std::size_t, std::size_t>> edges;  ///< i < j, sorted
};

Graph cycle_graph(std::size_t s);
Graph path_graph(std::size_t s);
/// G(s, p): each pair (i < j) in lexicographic order is an edge with prob. p.
Graph random_graph(std::size_t s, double p, std::uint64_t seed);
int graph_diameter(const Graph & g);

/// Shortest-path metric. Throws DisconnectedGraph, BadParameters.
MetricSpace graph_metric(const Graph & g);
MetricSpace random_graph_metric(std::size_t s, double p, std::uint64_t seed);

struct GraphCertificate {
    std::size_t s = 0;
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    int diameter = 0;  ///< -1 when disconnected
    std::size_t clique = 0;
    std::size_t independent = 0;
    bool exact = false;  ///< false: greedy lower bounds only
    std::vector<std::size_t> clique_witness;
    std::vector<std::size_t> independent_witness;
};

/// Diameter plus clique and independence numbers, exact by branch and bound
/// when s <= exact_cap.
GraphCertificate certify_graph(const Graph & g, std::size_t exact_cap = 24);

struct RamseyGraph {
    Graph graph;
    MetricSpace metric;
    GraphCertificate certificate;
    std::size_t tries = 0;
};

/// Samples G(s, 1/2) until the diameter is exactly 2 and certifies it.
/// Throws TriesExhausted, BadParameters (s < 3).
RamseyGraph certified_ramsey_graph(std::size_t s, std::uint64_t seed, std::size_t max_tries = 1000,
                                   std::size_t exact_cap = 24);

/// M_beta[N]: |M| copies of N, copy x and copy y at distance
/// beta * gamma * d_M(x, y) with gamma = diam(N) / min d_M (gamma = 1 when
/// N is a single point). Point (x, y) has index x * |N| + y and label
/// "<M label>:<N label>".
struct CompositionRecord {
    MetricSpace outer;  ///< M
    MetricSpace inner;  ///< N
    double beta = 1.0;
    double gamma = 1.0;
    MetricSpace product;

    std::size_t copy_of(std::size_t p) const { return p / inner.size(); }
    std::size_t inner_of(std::size_t p) const { return p % inner.size(); }
};

/// Throws DegenerateFactor (|M| < 2 or |N| < 1), BadParameters (beta < 1).
CompositionRecord metric_composition(const MetricSpace & outer, const MetricSpace & inner, double beta);

enum class PowerBase { Copy, Singleton };

/// Iterated composition: copy base M_1 = M, singleton base M_0 = {a}; then
/// M_i = M_beta[M_{i-1}]. Both give |M|^t points. Throws SizeCapExceeded.
MetricSpace composition_power(const MetricSpace & m, double beta, std::size_t t, PowerBase base = PowerBase::Copy,
                              std::size_t cap = 4096);

/// Upper-bound instance with n = 2^e points: nested beta = 2 compositions of
/// certified diameter-2 random graphs on 8 (and 4) vertices; n = 2 is a
/// single pair. Throws BadParameters unless n is a power of two >= 2.
MetricSpace composition_adversary(std::size_t n, std::uint64_t seed);

/// Random HST on points 0..leaves-1. Every internal vertex splits its points
/// into 2..max_children random groups (2 when binary) and its children carry
/// label parent / (sep * u) with u uniform in [1, 2]; the root has label 1.
HstTree random_hst(std::size_t leaves, double sep, Rng & rng, std::size_t max_children = 4, bool binary = false);

/// Path metric of the tree with edge weights (label(u) - label(v)) / 2 each
/// scaled by an independent factor in [1/c, 1]. The tree metric dominates it
/// and is within factor c of it.
MetricSpace perturbed_tree_metric(const HstTree & tree, double c, Rng & rng);

enum class FlatSide { InM, InN };

struct FlatDecomposition {
    FlatSide side = FlatSide::InN;
    std::vector<std::size_t> factor_indices;  ///< images in M or N, subset order
    double scale = 1.0;                        ///< beta*gamma for InM, 1 for InN
};

/// Split of a subset with aspect ratio <= alpha < beta: it lies
/// inside one copy (isometric to part of N) or meets every copy at most once
/// (isometric to a dilate of part of M). Throws HypothesisViolated,
/// BadParameters.
FlatDecomposition decompose_flat(const CompositionRecord & rec, const std::vector<std::size_t> & subset, double alpha);

struct LacunaryDecomposition {
    std::vector<std::size_t> transversal;  ///< T: one point in each light copy
    std::vector<std::size_t> rest;         ///< S \ T: inside the heavy copy
    std::optional<std::size_t> heavy_copy;
};

/// At most one copy may hold two points of S; T takes the points of all other
/// copies. Throws FourPointViolation with two pairs from two heavy copies,
/// BadParameters unless beta >= max{1, alpha/k}.
LacunaryDecomposition decompose_lacunary(const CompositionRecord & rec, const std::vector<std::size_t> & subset,
                                         double alpha, double k);

}  // namespace mdich
