#include "mdich/instances.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <set>

#include "mdich/clique.hpp"
#include "mdich/errors.hpp"
#include "mdich/numeric.hpp"

namespace mdich {

std::uint64_t Rng::below(std::uint64_t n)
{
    if (n == 0)
        throw UsageError("BadParameters", "below(0)");
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
    for (;;) {
        const std::uint64_t x = next();
        if (x < limit)
            return x % n;
    }
}

namespace {

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::vector<std::vector<int>> bfs_all(const Graph & g)
{
    std::vector<std::vector<std::size_t>> nbr(g.s);
    for (auto [a, b] : g.edges) {
        nbr[a].push_back(b);
        nbr[b].push_back(a);
    }
    std::vector<std::vector<int>> dist(g.s, std::vector<int>(g.s, -1));
    for (std::size_t src = 0; src < g.s; ++src) {
        auto & d = dist[src];
        std::deque<std::size_t> q{src};
        d[src] = 0;
        while (!q.empty()) {
            const std::size_t u = q.front();
            q.pop_front();
            for (std::size_t v : nbr[u])
                if (d[v] < 0) {
                    d[v] = d[u] + 1;
                    q.push_back(v);
                }
        }
    }
    return dist;
}

void check_graph(const Graph & g)
{
    for (auto [a, b] : g.edges)
        if (a >= g.s || b >= g.s || a == b)
            throw UsageError("BadParameters", "edge (" + std::to_string(a) + ", " + std::to_string(b) +
                                                  ") is not a pair of distinct vertices");
}

Graph normalised(Graph g)
{
    for (auto & e : g.edges)
        if (e.first > e.second)
            std::swap(e.first, e.second);
    std::sort(g.edges.begin(), g.edges.end());
    g.edges.erase(std::unique(g.edges.begin(), g.edges.end()), g.edges.end());
    return g;
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index)
{
    return splitmix64(base ^ splitmix64(index));
}

MetricSpace equilateral(std::size_t n, double w)
{
    if (!(w > 0.0) || !std::isfinite(w))
        throw UsageError("BadParameters", "distance must be positive and finite");
    std::vector<double> dist(n * n, w);
    for (std::size_t i = 0; i < n; ++i)
        dist[i * n + i] = 0.0;
    return MetricSpace::trusted(MetricSpace::default_labels(n), std::move(dist));
}

MetricSpace line_metric(const std::vector<double> & xs)
{
    std::vector<std::vector<double>> rows(xs.size(), std::vector<double>(xs.size(), 0.0));
    for (std::size_t i = 0; i < xs.size(); ++i)
        for (std::size_t j = 0; j < xs.size(); ++j)
            rows[i][j] = std::abs(xs[i] - xs[j]);
    return validate_metric(rows);
}

MetricSpace uniform_random_metric(std::size_t n, std::uint64_t seed, double lo, double hi)
{
    if (!(lo > 0.0) || !(hi >= lo) || !(hi <= 2.0 * lo))
        throw UsageError("BadParameters", "need 0 < lo <= hi <= 2 lo");
    Rng rng(seed);
    std::vector<double> dist(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double d = rng.uniform(lo, hi);
            dist[i * n + j] = d;
            dist[j * n + i] = d;
        }
    return MetricSpace::trusted(MetricSpace::default_labels(n), std::move(dist));
}

Graph cycle_graph(std::size_t s)
{
    if (s < 3)
        throw UsageError("BadParameters", "a cycle needs at least three vertices");
    Graph g{s, {}};
    for (std::size_t i = 0; i + 1 < s; ++i)
        g.edges.push_back({i, i + 1});
    g.edges.push_back({0, s - 1});
    return normalised(std::move(g));
}

Graph path_graph(std::size_t s)
{
    Graph g{s, {}};
    for (std::size_t i = 0; i + 1 < s; ++i)
        g.edges.push_back({i, i + 1});
    return g;
}

Graph random_graph(std::size_t s, double p, std::uint64_t seed)
{
    if (!(p >= 0.0 && p <= 1.0))
        throw UsageError("BadParameters", "edge probability must lie in [0, 1]");
    Rng rng(seed);
    Graph g{s, {}};
    for (std::size_t i = 0; i < s; ++i)
        for (std::size_t j = i + 1; j < s; ++j)
            if (rng.bernoulli(p))
                g.edges.push_back({i, j});
    return g;
}

int graph_diameter(const Graph & g)
{
    check_graph(g);
    int diam = 0;
    for (const auto & row : bfs_all(g))
        for (int d : row) {
            if (d < 0)
                return -1;
            diam = std::max(diam, d);
        }
    return diam;
}

MetricSpace graph_metric(const Graph & g)
{
    check_graph(g);
    if (g.s == 0)
        throw UsageError("BadParameters", "graph has no vertices");
    const auto dist = bfs_all(g);
    std::vector<double> flat(g.s * g.s);
    for (std::size_t i = 0; i < g.s; ++i)
        for (std::size_t j = 0; j < g.s; ++j) {
            if (dist[i][j] < 0)
                throw Error("DisconnectedGraph",
                            "vertices " + std::to_string(i) + " and " + std::to_string(j) + " are not connected");
            flat[i * g.s + j] = dist[i][j];
        }
    return MetricSpace::trusted(MetricSpace::default_labels(g.s), std::move(flat));
}

MetricSpace random_graph_metric(std::size_t s, double p, std::uint64_t seed)
{
    return graph_metric(random_graph(s, p, seed));
}

GraphCertificate certify_graph(const Graph & g, std::size_t exact_cap)
{
    check_graph(g);
    GraphCertificate c;
    const Graph ng = normalised(g);
    c.s = ng.s;
    c.edges = ng.edges;
    c.diameter = graph_diameter(ng);
    AdjacencyGraph adj(ng.s);
    for (auto [a, b] : ng.edges)
        adj.add_edge(a, b);
    const AdjacencyGraph co = adj.complement();
    c.exact = ng.s <= exact_cap;
    if (c.exact) {
        c.clique_witness = max_clique(adj).clique;
        c.independent_witness = max_clique(co).clique;
    } else {
        c.clique_witness = greedy_clique(adj);
        c.independent_witness = greedy_clique(co);
    }
    c.clique = c.clique_witness.size();
    c.independent = c.independent_witness.size();
    return c;
}

RamseyGraph certified_ramsey_graph(std::size_t s, std::uint64_t seed, std::size_t max_tries, std::size_t exact_cap)
{
    if (s < 3)
        throw UsageError("BadParameters", "a diameter-2 graph needs at least three vertices");
    for (std::size_t t = 0; t < max_tries; ++t) {
        Graph g = random_graph(s, 0.5, derive_seed(seed, t));
        if (graph_diameter(g) != 2)
            continue;
        RamseyGraph out;
        out.certificate = certify_graph(g, exact_cap);
        out.metric = graph_metric(g);
        out.graph = std::move(g);
        out.tries = t + 1;
        return out;
    }
    throw Error("TriesExhausted", "no diameter-2 sample in " + std::to_string(max_tries) + " tries");
}

CompositionRecord metric_composition(const MetricSpace & outer, const MetricSpace & inner, double beta)
{
    if (outer.size() < 2 || inner.size() < 1)
        throw Error("DegenerateFactor", "composition needs |M| >= 2 and |N| >= 1");
    if (!(beta >= 1.0) || !std::isfinite(beta))
        throw UsageError("BadParameters", "beta must be >= 1");
    CompositionRecord r;
    r.outer = outer;
    r.inner = inner;
    r.beta = beta;
    r.gamma = inner.size() >= 2 ? inner.diameter() / outer.min_distance() : 1.0;

    const std::size_t a = outer.size(), b = inner.size(), n = a * b;
    const double scale = beta * r.gamma;
    std::vector<double> dist(n * n);
    std::vector<std::string> labels;
    labels.reserve(n);
    for (std::size_t x = 0; x < a; ++x)
        for (std::size_t y = 0; y < b; ++y)
            labels.push_back(outer.label(x) + ":" + inner.label(y));
    for (std::size_t p = 0; p < n; ++p) {
        const std::size_t px = p / b, py = p % b;
        for (std::size_t q = 0; q < n; ++q) {
            const std::size_t qx = q / b, qy = q % b;
            dist[p * n + q] = px == qx ? inner(py, qy) : scale * outer(px, qx);
        }
    }
    r.product = MetricSpace::trusted(std::move(labels), std::move(dist));
    return r;
}

MetricSpace composition_power(const MetricSpace & m, double beta, std::size_t t, PowerBase base, std::size_t cap)
{
    if (t < 1)
        throw UsageError("BadParameters", "t must be >= 1");
    if (m.size() < 2)
        throw Error("DegenerateFactor", "composition powers need |M| >= 2");
    double size = 1.0;
    for (std::size_t i = 0; i < t; ++i)
        size *= static_cast<double>(m.size());
    if (size > static_cast<double>(cap))
        throw CapExceeded("SizeCapExceeded", "composition power would have " + std::to_string(size) +
                                                 " points, cap is " + std::to_string(cap));
    MetricSpace cur;
    std::size_t i = 0;
    if (base == PowerBase::Copy) {
        cur = m;
        i = 1;
    } else {
        cur = MetricSpace::trusted({"a"}, {0.0});
    }
    for (; i < t; ++i)
        cur = metric_composition(m, cur, beta).product;
    return cur;
}

MetricSpace composition_adversary(std::size_t n, std::uint64_t seed)
{
    if (n < 2 || (n & (n - 1)) != 0)
        throw UsageError("BadParameters", "adversary size must be a power of two >= 2");
    std::size_t e = 0;
    while ((std::size_t{1} << e) < n)
        ++e;
    std::vector<std::size_t> sizes;
    if (e == 1) {
        sizes = {2};
    } else if (e % 3 == 1) {
        sizes = {4, 4};
        for (std::size_t i = 0; i < (e - 4) / 3; ++i)
            sizes.push_back(8);
    } else if (e % 3 == 2) {
        sizes = {4};
        for (std::size_t i = 0; i < (e - 2) / 3; ++i)
            sizes.push_back(8);
    } else {
        for (std::size_t i = 0; i < e / 3; ++i)
            sizes.push_back(8);
    }

    std::vector<MetricSpace> factors;
    for (std::size_t i = 0; i < sizes.size(); ++i)
        factors.push_back(sizes[i] == 2 ? equilateral(2) : certified_ramsey_graph(sizes[i], derive_seed(seed, i)).metric);
    MetricSpace cur = factors[0];
    for (std::size_t i = 1; i < factors.size(); ++i)
        cur = metric_composition(factors[i], cur, 2.0).product;
    return cur;
}

HstTree random_hst(std::size_t leaves, double sep, Rng & rng, std::size_t max_children, bool binary)
{
    if (leaves < 1)
        throw UsageError("BadParameters", "need at least one leaf");
    if (!(sep >= 1.0))
        throw UsageError("BadParameters", "separation must be >= 1");
    if (max_children < 2)
        throw UsageError("BadParameters", "max_children must be >= 2");

    struct Rec {
        double label = 0.0;
        std::vector<PointId> pts;
        std::vector<std::size_t> kids;
    };
    std::vector<PointId> all(leaves);
    for (std::size_t i = 0; i < leaves; ++i)
        all[i] = static_cast<PointId>(i);
    rng.shuffle(all);
    std::vector<Rec> recs;
    recs.push_back({1.0, std::move(all), {}});
    for (std::size_t r = 0; r < recs.size(); ++r) {
        if (recs[r].pts.size() < 2)
            continue;
        const auto pts = recs[r].pts;
        const std::size_t cap = binary ? 2 : std::min(max_children, pts.size());
        const std::size_t groups = binary ? 2 : 2 + static_cast<std::size_t>(rng.below(cap - 1));
        std::vector<std::size_t> cuts(pts.size() - 1);
        for (std::size_t i = 0; i < cuts.size(); ++i)
            cuts[i] = i + 1;
        rng.shuffle(cuts);
        cuts.resize(groups - 1);
        std::sort(cuts.begin(), cuts.end());
        cuts.push_back(pts.size());
        std::size_t from = 0;
        for (std::size_t cut : cuts) {
            Rec child;
            child.label = recs[r].label / (sep * rng.uniform(1.0, 2.0));
            child.pts.assign(pts.begin() + static_cast<std::ptrdiff_t>(from),
                             pts.begin() + static_cast<std::ptrdiff_t>(cut));
            from = cut;
            recs[r].kids.push_back(recs.size());
            recs.push_back(std::move(child));
        }
    }

    HstBuilder b;
    std::vector<std::uint32_t> handle(recs.size());
    for (std::size_t r = recs.size(); r-- > 0;) {
        if (recs[r].kids.empty()) {
            handle[r] = b.leaf(recs[r].pts.at(0));
            continue;
        }
        std::vector<std::uint32_t> kids;
        for (std::size_t c : recs[r].kids)
            kids.push_back(handle[c]);
        handle[r] = b.node(recs[r].label, std::move(kids));
    }
    return b.build(handle[0]);
}

MetricSpace perturbed_tree_metric(const HstTree & tree, double c, Rng & rng)
{
    if (!(c >= 1.0))
        throw UsageError("BadParameters", "c must be >= 1");
    if (tree.leaf_count() < 2)
        throw Error("TooFewLeaves", "a tree metric needs at least two leaves");
    const auto & nodes = tree.nodes();
    const auto parent = tree.parents();
    std::vector<double> weight(nodes.size(), 0.0);
    std::vector<std::size_t> depth(nodes.size(), 0);
    for (std::size_t v = 1; v < nodes.size(); ++v) {
        const std::size_t p = parent[v];
        weight[v] = (nodes[p].label - nodes[v].label) / 2.0 * rng.uniform(1.0 / c, 1.0);
        depth[v] = depth[p] + 1;
    }

    std::vector<std::size_t> leaf_node;
    std::vector<PointId> ids;
    for (std::size_t v = 0; v < nodes.size(); ++v)
        if (nodes[v].is_leaf()) {
            leaf_node.push_back(v);
            ids.push_back(nodes[v].point);
        }
    std::vector<std::size_t> order(ids.size());
    for (std::size_t i = 0; i < order.size(); ++i)
        order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return ids[a] < ids[b]; });

    const std::size_t n = order.size();
    std::vector<double> dist(n * n, 0.0);
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < n; ++i)
        labels.push_back(std::to_string(ids[order[i]]));
    // Summing edge weights upward from the leaves avoids cancellation when
    // deep labels are tiny next to the root's.
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            std::size_t a = leaf_node[order[i]], b = leaf_node[order[j]];
            double d = 0.0;
            while (depth[a] > depth[b]) {
                d += weight[a];
                a = parent[a];
            }
            while (depth[b] > depth[a]) {
                d += weight[b];
                b = parent[b];
            }
            while (a != b) {
                d += weight[a] + weight[b];
                a = parent[a];
                b = parent[b];
            }
            dist[i * n + j] = d;
            dist[j * n + i] = d;
        }
    return MetricSpace::trusted(std::move(labels), std::move(dist));
}

namespace {

void check_subset(const CompositionRecord & rec, const std::vector<std::size_t> & subset)
{
    std::set<std::size_t> seen;
    for (std::size_t p : subset) {
        if (p >= rec.product.size())
            throw UsageError("IndexOutOfRange", "point " + std::to_string(p) + " is not in the product");
        if (!seen.insert(p).second)
            throw UsageError("DuplicateIndex", "point " + std::to_string(p) + " repeated");
    }
}

}  // namespace

FlatDecomposition decompose_flat(const CompositionRecord & rec, const std::vector<std::size_t> & subset, double alpha)
{
    check_subset(rec, subset);
    if (!(alpha >= 1.0) || !(alpha < rec.beta))
        throw UsageError("BadParameters", "need 1 <= alpha < beta");
    const auto & d = rec.product;
    if (subset.size() >= 2) {
        double hi = 0.0, lo = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < subset.size(); ++i)
            for (std::size_t j = i + 1; j < subset.size(); ++j) {
                hi = std::max(hi, d(subset[i], subset[j]));
                lo = std::min(lo, d(subset[i], subset[j]));
            }
        if (!leq(hi, alpha * lo))
            throw UsageError("BadParameters", "subset aspect ratio exceeds alpha");
    }

    FlatDecomposition out;
    std::set<std::size_t> copies;
    for (std::size_t p : subset)
        copies.insert(rec.copy_of(p));
    if (copies.size() <= 1) {
        out.side = FlatSide::InN;
        out.scale = 1.0;
        for (std::size_t p : subset)
            out.factor_indices.push_back(rec.inner_of(p));
    } else if (copies.size() == subset.size()) {
        out.side = FlatSide::InM;
        out.scale = rec.beta * rec.gamma;
        for (std::size_t p : subset)
            out.factor_indices.push_back(rec.copy_of(p));
    } else {
        throw Error("HypothesisViolated", "subset meets one copy twice and leaves it");
    }

    const MetricSpace & f = out.side == FlatSide::InN ? rec.inner : rec.outer;
    for (std::size_t i = 0; i < subset.size(); ++i)
        for (std::size_t j = i + 1; j < subset.size(); ++j)
            if (d(subset[i], subset[j]) != out.scale * f(out.factor_indices[i], out.factor_indices[j]))
                throw Error("HypothesisViolated", "decomposition map is not an isometry");
    return out;
}

LacunaryDecomposition decompose_lacunary(const CompositionRecord & rec, const std::vector<std::size_t> & subset,
                                         double alpha, double k)
{
    check_subset(rec, subset);
    if (!(alpha >= 1.0) || !(k >= 1.0) || !geq(rec.beta, std::max(1.0, alpha / k)))
        throw UsageError("BadParameters", "need alpha, k >= 1 and beta >= max{1, alpha/k}");

    std::map<std::size_t, std::vector<std::size_t>> by_copy;
    for (std::size_t p : subset)
        by_copy[rec.copy_of(p)].push_back(p);
    std::vector<std::size_t> heavy;
    for (const auto & [copy, pts] : by_copy)
        if (pts.size() >= 2)
            heavy.push_back(copy);
    if (heavy.size() >= 2) {
        const auto & a = by_copy[heavy[0]];
        const auto & b = by_copy[heavy[1]];
        throw FourPointViolation("FourPointViolation", {a[0], a[1], b[0], b[1]},
                                 "two copies each hold two points of the subset");
    }

    LacunaryDecomposition out;
    if (!heavy.empty())
        out.heavy_copy = heavy[0];
    for (std::size_t p : subset) {
        if (out.heavy_copy && rec.copy_of(p) == *out.heavy_copy)
            out.rest.push_back(p);
        else
            out.transversal.push_back(p);
    }
    return out;
}

}  // namespace mdich
