#include "mdich/extraction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "mdich/errors.hpp"
#include "mdich/numeric.hpp"

namespace mdich {

namespace {

struct Diametrical {
    std::size_t a = 0;
    std::size_t b = 0;
    double diameter = 0.0;
};

// Lexicographically first pair (in subset order) realising the diameter.
Diametrical diametrical_pair(const MetricSpace & m, const std::vector<std::size_t> & subset)
{
    Diametrical best{subset[0], subset[0], -1.0};
    for (std::size_t i = 0; i < subset.size(); ++i) {
        const auto row = m.row(subset[i]);
        for (std::size_t j = i + 1; j < subset.size(); ++j) {
            if (row[subset[j]] > best.diameter)
                best = {subset[i], subset[j], row[subset[j]]};
        }
    }
    return best;
}

std::vector<std::size_t> all_points(std::size_t n)
{
    std::vector<std::size_t> v(n);
    std::iota(v.begin(), v.end(), std::size_t{0});
    return v;
}

void require_eps(double eps)
{
    if (!(eps > 0.0) || !std::isfinite(eps))
        throw UsageError("BadParameters", "eps must be positive and finite");
}

// Position of every witness point inside tree.sorted_points().
std::vector<std::size_t> tree_map(const std::vector<std::size_t> & indices, const HstTree & tree)
{
    const auto pts = tree.sorted_points();
    std::vector<std::size_t> map;
    map.reserve(indices.size());
    for (std::size_t idx : indices) {
        auto it = std::lower_bound(pts.begin(), pts.end(), static_cast<PointId>(idx));
        if (it == pts.end() || *it != idx)
            throw VerificationFailure("witness point " + std::to_string(idx) + " is not a tree leaf");
        map.push_back(static_cast<std::size_t>(it - pts.begin()));
    }
    return map;
}

std::size_t floor_sqrt(std::size_t m)
{
    auto s = static_cast<std::size_t>(std::sqrt(static_cast<double>(m)));
    while (s * s > m)
        --s;
    while ((s + 1) * (s + 1) <= m)
        ++s;
    return s;
}

// Bunch or chain of a k-increasing tree, in tree point ids.
struct IncreasingSplit {
    ResultKind kind = ResultKind::Equilateral;
    std::vector<PointId> points;
    std::vector<double> values;  // lacunary values, one fewer than points
    double common = 0.0;         // equilateral distance
};

IncreasingSplit split_increasing(const HstTree & tree)
{
    if (!is_k_increasing(tree))
        throw Error("NotIncreasing", "some vertex has more than one internal child");
    const auto & nodes = tree.nodes();
    const std::size_t m = tree.leaf_count();
    IncreasingSplit out;
    if (m == 1) {
        out.points.push_back(nodes[0].point);
        return out;
    }

    std::size_t best = 0;
    std::size_t best_node = 0;
    std::size_t internal = 0;
    for (std::size_t u = 0; u < nodes.size(); ++u) {
        if (nodes[u].is_leaf())
            continue;
        ++internal;
        std::size_t leaves = 0;
        for (std::uint32_t c : nodes[u].children)
            leaves += nodes[c].is_leaf() ? 1 : 0;
        if (leaves > best) {
            best = leaves;
            best_node = u;
        }
    }

    // The bunch rule alone guarantees floor(sqrt m); taking the larger of
    // the widest bunch and the chain keeps that and never does worse.
    if (best >= internal + 1) {
        out.kind = ResultKind::Equilateral;
        out.common = nodes[best_node].label;
        for (std::uint32_t c : nodes[best_node].children)
            if (nodes[c].is_leaf())
                out.points.push_back(nodes[c].point);
        return out;
    }

    out.kind = ResultKind::Lacunary;
    std::size_t u = 0;
    for (;;) {
        std::optional<std::size_t> next;
        std::vector<PointId> leaf_kids;
        for (std::uint32_t c : nodes[u].children) {
            if (nodes[c].is_leaf())
                leaf_kids.push_back(nodes[c].point);
            else
                next = c;
        }
        std::sort(leaf_kids.begin(), leaf_kids.end());
        out.values.push_back(nodes[u].label);
        out.points.push_back(leaf_kids.at(0));
        if (!next) {
            out.points.push_back(leaf_kids.at(1));
            break;
        }
        u = *next;
    }
    return out;
}

}  // namespace

AnnulusResult find_dense_annulus(const MetricSpace & m, double eps)
{
    return find_dense_annulus(m, all_points(m.size()), eps);
}

AnnulusResult find_dense_annulus(const MetricSpace & m, const std::vector<std::size_t> & subset, double eps)
{
    require_eps(eps);
    if (subset.size() < 2)
        throw Error("TooSmall", "dense annulus needs at least two points");
    for (std::size_t p : subset)
        if (p >= m.size())
            throw UsageError("IndexOutOfRange", "subset index " + std::to_string(p) + " out of range");

    const auto pair = diametrical_pair(m, subset);
    const double delta = pair.diameter;
    const double half = delta / 2.0;

    auto far_set = [&](std::size_t x) {
        std::vector<std::size_t> w;
        for (std::size_t y : subset)
            if (m(x, y) >= half)
                w.push_back(y);
        return w;
    };
    auto wa = far_set(pair.a);
    auto wb = far_set(pair.b);
    const bool use_b = wb.size() > wa.size();
    const std::size_t center = use_b ? pair.b : pair.a;
    const auto & w = use_b ? wb : wa;

    const auto layers = static_cast<std::size_t>(std::max<std::int64_t>(1, ceil_tol(log_base(2.0, 1.0 + eps))));
    std::vector<double> lambda(layers + 1, 2.0);
    std::vector<double> top(layers + 1, delta);
    for (std::size_t i = 1; i < layers; ++i) {
        lambda[i] = std::min(2.0, std::pow(1.0 + eps, static_cast<double>(i)));
        top[i] = lambda[i] * delta / 2.0;
    }

    std::vector<std::vector<std::size_t>> layer(layers + 1);
    for (std::size_t y : w) {
        const double d = m(center, y);
        std::size_t i = 1;
        while (i < layers && !(d < top[i]))
            ++i;
        layer[i].push_back(y);
    }

    std::size_t pick = 1;
    for (std::size_t i = 2; i <= layers; ++i)
        if (layer[i].size() > layer[pick].size())
            pick = i;

    AnnulusResult r;
    r.center = center;
    r.members = std::move(layer[pick]);
    std::sort(r.members.begin(), r.members.end());
    r.lambda = lambda[pick];
    r.diameter = delta;
    r.eps = eps;
    r.far_set_size = w.size();
    r.layers = layers;
    return r;
}

std::int64_t power_exponent(double a, double eps)
{
    if (!(a > 0.0) || !std::isfinite(a))
        throw UsageError("BadParameters", "power_exponent needs a positive finite value");
    if (!(eps > 0.0))
        throw UsageError("BadParameters", "eps must be positive");
    auto t = static_cast<std::int64_t>(std::ceil(std::log(a) / std::log1p(eps)));
    while (std::pow(1.0 + eps, static_cast<double>(t)) < a)
        ++t;
    while (std::pow(1.0 + eps, static_cast<double>(t - 1)) >= a)
        --t;
    return t;
}

SparsifiedSequence sparsify_sequence(const std::vector<double> & a, double eps, double k)
{
    if (!(eps > 0.0))
        throw UsageError("BadParameters", "eps must be positive");
    if (!(k >= 1.0))
        throw UsageError("BadParameters", "k must be >= 1");
    SparsifiedSequence out;
    out.classes = static_cast<std::size_t>(ceil_tol(log_base(2.0 * k, 1.0 + eps))) + 1;
    if (a.empty())
        return out;

    double low = a[0];
    for (std::size_t j = 0; j < a.size(); ++j) {
        if (!(a[j] > 0.0))
            throw UsageError("BadParameters", "sequence values must be positive");
        if (j > 0 && !leq(a[j], 2.0 * low))
            throw Error("PrefixDominanceViolated",
                        "value at position " + std::to_string(j) + " exceeds twice an earlier value");
        low = std::min(low, a[j]);
    }

    const auto r = static_cast<std::int64_t>(out.classes);
    std::vector<std::int64_t> t(a.size());
    std::vector<std::size_t> count(out.classes, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        t[i] = power_exponent(a[i], eps);
        ++count[static_cast<std::size_t>(((t[i] % r) + r) % r)];
    }
    const auto best = static_cast<std::int64_t>(std::max_element(count.begin(), count.end()) - count.begin());
    std::vector<std::size_t> residue;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (((t[i] % r) + r) % r == best)
            residue.push_back(i);

    // A left-to-right scan keeping equal exponents or drops of at least
    // log_{1+eps} k satisfies the same postcondition; keep whichever is larger.
    const std::int64_t drop = std::max<std::int64_t>(0, ceil_tol(log_base(k, 1.0 + eps)));
    std::vector<std::size_t> scan{0};
    for (std::size_t i = 1; i < a.size(); ++i) {
        const std::int64_t last = t[scan.back()];
        if (t[i] == last || (t[i] < last && last - t[i] >= drop))
            scan.push_back(i);
    }

    out.kept = scan.size() > residue.size() ? std::move(scan) : std::move(residue);
    for (std::size_t i : out.kept)
        out.values.push_back(std::pow(1.0 + eps, static_cast<double>(t[i])));
    return out;
}

const char * to_string(ResultKind kind)
{
    switch (kind) {
    case ResultKind::Equilateral: return "equilateral";
    case ResultKind::Lacunary: return "lacunary";
    case ResultKind::BinaryHst: return "binary_hst";
    case ResultKind::Increasing: return "k_increasing";
    }
    return "unknown";
}

std::vector<std::string> DichotomyResult::check() const
{
    std::vector<std::string> errs;
    if (witness.indices.size() != witness.induced.size())
        errs.push_back("witness size does not match its induced space");
    if (!(cert.source == witness.induced))
        errs.push_back("certificate source is not the witness subspace");
    if (!cert.verify())
        errs.push_back("certificate constants do not match the map");
    if (static_cast<double>(size()) + 1e-9 < guarantee.size_bound)
        errs.push_back("witness size " + std::to_string(size()) + " below guaranteed " +
                       std::to_string(guarantee.size_bound));
    if (!leq(cert.distortion, guarantee.distortion_bound))
        errs.push_back("distortion " + std::to_string(cert.distortion) + " above guaranteed " +
                       std::to_string(guarantee.distortion_bound));

    const auto & t = cert.target;
    switch (kind) {
    case ResultKind::Equilateral:
        if (t.size() >= 2) {
            const double w = t(0, 1);
            for (std::size_t i = 0; i < t.size(); ++i)
                for (std::size_t j = i + 1; j < t.size(); ++j)
                    if (!approx_equal(t(i, j), w)) {
                        errs.push_back("target is not equilateral");
                        i = t.size();
                        break;
                    }
        }
        break;
    case ResultKind::Lacunary:
        if (!sequence) {
            errs.push_back("lacunary result without a sequence");
            break;
        }
        if (!sequence->valid()) {
            errs.push_back("sequence is not lacunary");
            break;
        }
        if (!geq(sequence->k, separation))
            errs.push_back("sequence separation below the required k");
        if (!(lacunary_metric(*sequence) == t))
            errs.push_back("target is not the sequence's lacunary space");
        break;
    case ResultKind::BinaryHst:
    case ResultKind::Increasing:
        if (!tree) {
            errs.push_back("tree result without a tree");
            break;
        }
        if (kind == ResultKind::BinaryHst && !is_binary(*tree))
            errs.push_back("tree is not binary");
        if (kind == ResultKind::Increasing && !is_k_increasing(*tree))
            errs.push_back("tree is not k-increasing");
        if (!geq(hst_separation(*tree), separation))
            errs.push_back("tree separation below the required k");
        if (tree->leaf_count() >= 2 && !(hst_metric(*tree) == t))
            errs.push_back("target is not the tree's HST space");
        break;
    }
    return errs;
}

MetricSpace equilateral_target(std::size_t n, double w)
{
    std::vector<double> dist(n * n, w);
    for (std::size_t i = 0; i < n; ++i)
        dist[i * n + i] = 0.0;
    return MetricSpace::trusted(MetricSpace::default_labels(n), std::move(dist));
}

IncreasingExtraction extract_k_increasing(const MetricSpace & m, double eps, double k)
{
    require_eps(eps);
    if (!(k >= 1.0))
        throw UsageError("BadParameters", "k must be >= 1");
    const std::size_t n = m.size();
    if (n < 2)
        throw Error("TooSmall", "extraction needs at least two points");

    IncreasingExtraction out;
    out.eps_inner = std::sqrt(1.0 + eps) - 1.0;
    std::vector<std::size_t> a = all_points(n);
    while (a.size() >= 2) {
        auto ann = find_dense_annulus(m, a, out.eps_inner);
        out.chain.push_back(ann.center);
        out.scales.push_back(ann.lambda * ann.diameter / 2.0);
        a = std::move(ann.members);
    }
    out.chain.push_back(a.at(0));
    const std::size_t chain_len = out.chain.size();

    auto sp = sparsify_sequence(out.scales, out.eps_inner, k);
    out.classes = sp.classes;

    // Consecutive kept positions with equal rounded value share one vertex.
    std::vector<std::pair<double, std::vector<std::size_t>>> groups;
    for (std::size_t i = 0; i < sp.kept.size(); ++i) {
        if (groups.empty() || groups.back().first != sp.values[i])
            groups.push_back({sp.values[i], {}});
        groups.back().second.push_back(out.chain[sp.kept[i]]);
    }

    HstBuilder b;
    std::uint32_t below = b.leaf(static_cast<PointId>(out.chain.back()));
    for (std::size_t g = groups.size(); g-- > 0;) {
        std::vector<std::uint32_t> kids;
        for (std::size_t p : groups[g].second)
            kids.push_back(b.leaf(static_cast<PointId>(p)));
        kids.push_back(below);
        below = b.node(groups[g].first, std::move(kids));
    }
    HstTree tree = b.build(below);

    std::vector<std::size_t> indices;
    for (std::size_t p : sp.kept)
        indices.push_back(out.chain[p]);
    indices.push_back(out.chain.back());

    auto& res = out.result;
    res.kind = ResultKind::Increasing;
    res.witness = restrict(m, indices);
    res.cert = certify(tree_map(indices, tree), res.witness.induced, hst_metric(tree));
    res.tree = std::move(tree);
    res.separation = k;
    const double r = static_cast<double>(sp.classes);
    res.guarantee.size_bound = std::ceil(static_cast<double>(chain_len) / r);
    res.guarantee.distortion_bound = 1.0 + eps;
    res.guarantee.params = {{"eps", eps},
                            {"eps_inner", out.eps_inner},
                            {"k", k},
                            {"n", static_cast<double>(n)},
                            {"m", static_cast<double>(chain_len)},
                            {"r", r},
                            {"chain_bound", std::log(static_cast<double>(n)) / std::log(4.0 / out.eps_inner)}};
    return out;
}

DichotomyResult increasing_dichotomy(const HstTree & tree)
{
    auto split = split_increasing(tree);
    const auto pts = tree.sorted_points();
    std::vector<std::size_t> indices;
    for (PointId p : split.points)
        indices.push_back(static_cast<std::size_t>(std::lower_bound(pts.begin(), pts.end(), p) - pts.begin()));

    DichotomyResult res;
    res.kind = split.kind;
    const MetricSpace parent = tree.leaf_count() >= 2
                                   ? hst_metric(tree)
                                   : MetricSpace::trusted({std::to_string(pts[0])}, {0.0});
    res.witness = restrict(parent, indices);
    const double sep = hst_separation(tree);
    if (split.kind == ResultKind::Lacunary) {
        res.separation = sep;
        res.sequence = LacunarySequence{split.values, sep};
        res.cert = certify(identity_map(indices.size()), res.witness.induced, lacunary_metric(*res.sequence));
    } else {
        res.separation = std::isfinite(sep) ? sep : 1.0;
        res.cert = certify(identity_map(indices.size()), res.witness.induced,
                           equilateral_target(indices.size(), split.common));
    }
    res.guarantee.size_bound = static_cast<double>(floor_sqrt(tree.leaf_count()));
    res.guarantee.distortion_bound = 1.0;
    res.guarantee.params = {{"m", static_cast<double>(tree.leaf_count())}};
    return res;
}

DichotomyResult equilateral_or_lacunary(const MetricSpace & m, double eps, double k)
{
    auto ext = extract_k_increasing(m, eps, k);
    auto split = split_increasing(*ext.result.tree);
    std::vector<std::size_t> indices(split.points.begin(), split.points.end());

    DichotomyResult res;
    res.kind = split.kind;
    res.witness = restrict(m, indices);
    res.separation = k;
    if (split.kind == ResultKind::Lacunary) {
        res.sequence = LacunarySequence{split.values, k};
        res.cert = certify(identity_map(indices.size()), res.witness.induced, lacunary_metric(*res.sequence));
    } else {
        res.cert = certify(identity_map(indices.size()), res.witness.induced,
                           equilateral_target(indices.size(), split.common));
    }
    const auto ext_bound = static_cast<std::size_t>(ext.result.guarantee.size_bound);
    res.guarantee.size_bound = static_cast<double>(floor_sqrt(ext_bound));
    res.guarantee.distortion_bound = 1.0 + eps;
    res.guarantee.params = ext.result.guarantee.params;
    res.guarantee.params["increasing_size"] = static_cast<double>(ext.result.size());
    return res;
}

GreedyExtraction greedy_equilateral_or_lacunary(const MetricSpace & m, double alpha, double k,
                                                std::size_t threshold)
{
    if (!(alpha > 2.0))
        throw Error("AlphaTooSmall", "the net dichotomy needs alpha > 2");
    if (!(k >= 1.0))
        throw UsageError("BadParameters", "k must be >= 1");
    const std::size_t n = m.size();
    if (n < 2)
        throw Error("TooSmall", "extraction needs at least two points");

    GreedyExtraction out;
    out.threshold = threshold != 0
                        ? threshold
                        : static_cast<std::size_t>(std::max<std::int64_t>(1, ceil_tol(std::log2(static_cast<double>(n)))));
    const double t = static_cast<double>(out.threshold);
    auto & res = out.result;

    std::vector<std::size_t> f = all_points(n);
    while (f.size() >= 2) {
        const auto pair = diametrical_pair(m, f);
        const double delta = pair.diameter;
        const double radius = delta / alpha;

        std::vector<std::size_t> net{pair.a};
        for (std::size_t y : f) {
            if (y == pair.a)
                continue;
            bool far = true;
            for (std::size_t z : net)
                if (!(m(y, z) >= radius)) {
                    far = false;
                    break;
                }
            if (far)
                net.push_back(y);
        }

        if (net.size() >= out.threshold) {
            res.kind = ResultKind::Equilateral;
            res.witness = restrict(m, net);
            res.cert = certify(identity_map(net.size()), res.witness.induced, equilateral_target(net.size(), delta));
            res.separation = k;
            res.guarantee.size_bound = t;
            res.guarantee.distortion_bound = alpha;
            res.guarantee.params = {{"alpha", alpha}, {"k", k}, {"T", t}, {"n", static_cast<double>(n)}};
            return out;
        }

        std::vector<std::vector<std::size_t>> cell(net.size());
        for (std::size_t y : f) {
            for (std::size_t i = 0; i < net.size(); ++i)
                if (m(y, net[i]) < radius) {
                    cell[i].push_back(y);
                    break;
                }
        }
        std::size_t pick = 0;
        for (std::size_t i = 1; i < cell.size(); ++i)
            if (cell[i].size() > cell[pick].size())
                pick = i;

        out.chain.push_back(pick == 0 ? pair.b : pair.a);
        out.diameters.push_back(delta);
        f = std::move(cell[pick]);
        out.cells.push_back(f);
    }
    out.chain.push_back(f.at(0));

    std::vector<std::size_t> points;
    std::vector<double> values;
    if (k > alpha / 2.0) {
        out.stride = lacunary_stride(alpha / 2.0, k);
        for (std::size_t i : lacunary_stride_indices(out.diameters.size(), alpha / 2.0, k)) {
            points.push_back(out.chain[i]);
            values.push_back(out.diameters[i]);
        }
        points.push_back(out.chain.back());
    } else {
        points = out.chain;
        values = out.diameters;
    }

    res.kind = ResultKind::Lacunary;
    res.witness = restrict(m, points);
    res.sequence = LacunarySequence{std::move(values), k};
    res.cert = certify(identity_map(points.size()), res.witness.induced, lacunary_metric(*res.sequence));
    res.separation = k;
    const double levels = std::log(static_cast<double>(n)) / std::log(t);
    res.guarantee.size_bound = levels / static_cast<double>(out.stride);
    res.guarantee.distortion_bound = alpha;
    res.guarantee.params = {{"alpha", alpha},
                            {"k", k},
                            {"T", t},
                            {"n", static_cast<double>(n)},
                            {"stride", static_cast<double>(out.stride)}};
    return out;
}

HstEmbedding triangle_to_binary_hst(const MetricSpace & m, double k)
{
    if (!(k > 2.0))
        throw Error("KTooSmall", "triangle condition needs k > 2");
    const std::size_t n = m.size();
    if (n < 2)
        throw Error("TooSmall", "an HST embedding needs at least two points");

    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            for (std::size_t l = j + 1; l < n; ++l) {
                const double a = m(i, j), b = m(i, l), c = m(j, l);
                const double hi = std::max({a, b, c});
                const double lo = std::min({a, b, c});
                if (!geq(hi, k * lo))
                    throw TripleTooFlat("TripleTooFlat", {i, j, l},
                                        "triple (" + std::to_string(i) + ", " + std::to_string(j) + ", " +
                                            std::to_string(l) + ") has aspect ratio below k");
            }

    struct Rec {
        double label = 0.0;
        std::vector<std::size_t> pts;
        std::int64_t left = -1;
        std::int64_t right = -1;
    };
    std::vector<Rec> recs;
    recs.push_back({0.0, all_points(n)});
    for (std::size_t r = 0; r < recs.size(); ++r) {
        if (recs[r].pts.size() < 2)
            continue;
        const auto pts = recs[r].pts;
        const auto pair = diametrical_pair(m, pts);
        const double radius = pair.diameter / k;
        std::vector<std::size_t> left, right;
        for (std::size_t y : pts) {
            const bool to_a = m(pair.a, y) <= m(pair.b, y);
            const std::size_t c = to_a ? pair.a : pair.b;
            if (!leq(m(c, y), radius))
                throw TripleTooFlat("TripleTooFlat", {pair.a, pair.b, y},
                                    "point " + std::to_string(y) + " lies in neither ball");
            (to_a ? left : right).push_back(y);
        }
        recs[r].label = pair.diameter;
        recs[r].left = static_cast<std::int64_t>(recs.size());
        recs.push_back({0.0, std::move(left)});
        recs[r].right = static_cast<std::int64_t>(recs.size());
        recs.push_back({0.0, std::move(right)});
    }

    HstBuilder b;
    std::vector<std::uint32_t> handle(recs.size());
    for (std::size_t r = recs.size(); r-- > 0;) {
        if (recs[r].left < 0)
            handle[r] = b.leaf(static_cast<PointId>(recs[r].pts[0]));
        else
            handle[r] = b.node(recs[r].label, {handle[static_cast<std::size_t>(recs[r].left)],
                                               handle[static_cast<std::size_t>(recs[r].right)]});
    }
    HstEmbedding out{b.build(handle[0]), {}};
    out.cert = certify(identity_map(n), m, hst_metric(out.tree));
    return out;
}

HstEmbedding hst_relabel(const MetricSpace & l, const HstTree & tree, double c, double k)
{
    if (!(k > 2.0))
        throw Error("KTooSmall", "relabelling needs k > 2");
    if (!(c >= 1.0))
        throw UsageError("BadParameters", "c must be >= 1");
    const std::size_t n = l.size();
    const auto pts = tree.sorted_points();
    bool same = pts.size() == n;
    for (std::size_t i = 0; same && i < n; ++i)
        same = pts[i] == i;
    if (!same)
        throw UsageError("PointMismatch", "tree leaves must be exactly the points 0..n-1 of the space");
    if (n < 2)
        throw Error("TooFewLeaves", "relabelling needs at least two leaves");
    if (!is_binary(tree))
        throw Error("NotBinary", "relabelling needs a binary tree");
    if (!geq(hst_separation(tree), c * k))
        throw Error("SeparationTooSmall", "tree separation is below c*k");

    const MetricSpace dt = hst_metric(tree);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (!leq(l(i, j), dt(i, j)) || !leq(dt(i, j), c * l(i, j)))
                throw Error("CertMismatch", "tree is not a non-contractive c-embedding of the space at (" +
                                                std::to_string(i) + ", " + std::to_string(j) + ")");

    // Leaf ranges in preorder let each vertex scan its two child blocks.
    const auto & nodes = tree.nodes();
    std::vector<std::size_t> first(nodes.size()), last(nodes.size());
    std::vector<PointId> order;
    {
        std::vector<std::pair<std::uint32_t, bool>> stack{{0, false}};
        while (!stack.empty()) {
            auto [u, done] = stack.back();
            stack.pop_back();
            if (done) {
                first[u] = first[nodes[u].children.front()];
                last[u] = last[nodes[u].children.back()];
                continue;
            }
            if (nodes[u].is_leaf()) {
                first[u] = order.size();
                order.push_back(nodes[u].point);
                last[u] = order.size();
                continue;
            }
            stack.push_back({u, true});
            for (auto it = nodes[u].children.rbegin(); it != nodes[u].children.rend(); ++it)
                stack.push_back({*it, false});
        }
    }

    std::vector<double> labels(nodes.size(), 0.0);
    for (std::size_t u = 0; u < nodes.size(); ++u) {
        if (nodes[u].is_leaf())
            continue;
        const auto a = nodes[u].children[0];
        const auto b = nodes[u].children[1];
        double best = 0.0;
        for (std::size_t i = first[a]; i < last[a]; ++i)
            for (std::size_t j = first[b]; j < last[b]; ++j)
                best = std::max(best, l(order[i], order[j]));
        labels[u] = best;
    }

    HstEmbedding out{with_labels(tree, labels), {}};
    out.cert = certify(identity_map(n), l, hst_metric(out.tree));
    return out;
}

std::vector<std::size_t> monochromatic_subset(const Coloring & colouring)
{
    const std::size_t n = colouring.vertices();
    const int d = colouring.colours();
    if (d < 1)
        throw UsageError("BadParameters", "need at least one colour");
    if (n == 0)
        throw UsageError("BadParameters", "colouring has no vertices");
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b) {
            const int c = colouring(a, b);
            if (c < 1 || c > d)
                throw Error("IncompleteColoring", "pair (" + std::to_string(a) + ", " + std::to_string(b) +
                                                      ") has no valid colour");
        }

    std::vector<std::size_t> rest(n);
    std::iota(rest.begin(), rest.end(), std::size_t{0});
    std::vector<std::pair<std::size_t, int>> picks;
    while (rest.size() >= 2) {
        const std::size_t v = rest.front();
        std::vector<std::size_t> count(static_cast<std::size_t>(d) + 1, 0);
        for (std::size_t i = 1; i < rest.size(); ++i)
            ++count[static_cast<std::size_t>(colouring(v, rest[i]))];
        int best = 1;
        for (int c = 2; c <= d; ++c)
            if (count[static_cast<std::size_t>(c)] > count[static_cast<std::size_t>(best)])
                best = c;
        picks.push_back({v, best});
        std::vector<std::size_t> next;
        for (std::size_t i = 1; i < rest.size(); ++i)
            if (colouring(v, rest[i]) == best)
                next.push_back(rest[i]);
        rest = std::move(next);
    }

    std::vector<std::size_t> count(static_cast<std::size_t>(d) + 1, 0);
    for (const auto & p : picks)
        ++count[static_cast<std::size_t>(p.second)];
    int best = 1;
    for (int c = 2; c <= d; ++c)
        if (count[static_cast<std::size_t>(c)] > count[static_cast<std::size_t>(best)])
            best = c;
    std::vector<std::size_t> out;
    for (const auto & p : picks)
        if (p.second == best)
            out.push_back(p.first);
    out.push_back(rest.at(0));
    return out;
}

std::size_t monochromatic_bound(std::size_t h, int colours)
{
    if (colours <= 1)
        return h + 1;
    const auto d = static_cast<std::size_t>(colours);
    std::size_t j = 0;
    for (std::size_t power = d; power <= h; power *= d) {
        ++j;
        if (power > h / d)
            break;
    }
    return std::max<std::size_t>(1, j / d);
}

HstDichotomy hst_dichotomy(const MetricSpace & m, const HstTree & tree, const HstDichotomyOptions & opts)
{
    if (!(opts.c >= 1.0) || opts.h < 2 || !(opts.k >= 1.0) || !(opts.eps > 0.0))
        throw UsageError("BadParameters", "need c >= 1, h >= 2, k >= 1, eps > 0");
    const auto pts = tree.sorted_points();
    if (pts.size() < 2)
        throw Error("TooFewLeaves", "the dichotomy needs at least two leaves");
    if (pts.back() >= m.size())
        throw UsageError("PointMismatch", "tree leaf " + std::to_string(pts.back()) + " is not a point of the space");

    const MetricSpace dt = hst_metric(tree);
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j) {
            const double dm = m(pts[i], pts[j]);
            if (!leq(dm, dt(i, j)) || !leq(dt(i, j), opts.c * dm))
                throw Error("CertMismatch", "tree is not a non-contractive c-embedding at points (" +
                                                std::to_string(pts[i]) + ", " + std::to_string(pts[j]) + ")");
        }

    HstDichotomy out;
    const bool fine = opts.mode == HstMode::Fine;
    out.k_prime = fine ? std::max(opts.k, 2.0 + 2.0 / opts.eps) : opts.k;
    const double required = fine ? opts.c * out.k_prime : opts.k;
    if (!geq(hst_separation(tree), required))
        throw Error("SeparationTooSmall", "tree separation is below the required " + std::to_string(required));

    const auto & nodes = tree.nodes();
    const double n = static_cast<double>(pts.size());
    std::size_t wide = 0;
    for (std::size_t u = 0; u < nodes.size(); ++u)
        if (nodes[u].children.size() > nodes[wide].children.size())
            wide = u;

    auto & res = out.result;
    res.separation = out.k_prime;
    res.guarantee.params = {{"c", opts.c},
                            {"eps", opts.eps},
                            {"h", static_cast<double>(opts.h)},
                            {"k", opts.k},
                            {"k_prime", out.k_prime},
                            {"n", n}};

    if (nodes[wide].children.size() > opts.h) {
        out.case_taken = 1;
        const double delta = nodes[wide].label;
        std::vector<std::size_t> reps;
        for (std::uint32_t ch : nodes[wide].children) {
            std::uint32_t v = ch;
            while (!nodes[v].is_leaf())
                v = nodes[v].children.front();
            reps.push_back(nodes[v].point);
        }
        res.kind = ResultKind::Equilateral;
        if (!fine) {
            res.guarantee.size_bound = static_cast<double>(opts.h + 1);
            res.guarantee.distortion_bound = opts.c;
        } else {
            reps.resize(opts.h + 1);
            const auto bands = std::max<std::int64_t>(0, floor_tol(log_base(opts.c, 1.0 + opts.eps)));
            const int colours = static_cast<int>(bands) + 1;
            Coloring col(reps.size(), colours);
            for (std::size_t a = 0; a < reps.size(); ++a)
                for (std::size_t b = a + 1; b < reps.size(); ++b) {
                    const double d = m(reps[a], reps[b]);
                    auto band = static_cast<std::int64_t>(std::floor(std::log(delta / d) / std::log1p(opts.eps)));
                    while (band > 0 && delta / std::pow(1.0 + opts.eps, static_cast<double>(band)) < d)
                        --band;
                    while (delta / std::pow(1.0 + opts.eps, static_cast<double>(band + 1)) >= d)
                        ++band;
                    band = std::clamp<std::int64_t>(band, 0, bands);
                    col.set(a, b, static_cast<int>(band) + 1);
                }
            std::vector<std::size_t> mono;
            for (std::size_t i : monochromatic_subset(col))
                mono.push_back(reps[i]);
            reps = std::move(mono);
            res.guarantee.size_bound = static_cast<double>(monochromatic_bound(opts.h, colours));
            res.guarantee.distortion_bound = 1.0 + opts.eps;
            res.guarantee.params["colours"] = colours;
        }
        res.witness = restrict(m, reps);
        res.cert = certify(identity_map(reps.size()), res.witness.induced, equilateral_target(reps.size(), delta));
        return out;
    }

    out.case_taken = 2;
    HstTree sub = binary_subtree(tree);
    res.kind = ResultKind::BinaryHst;
    res.guarantee.size_bound = std::pow(n, 1.0 / std::log2(static_cast<double>(opts.h)));
    if (fine) {
        const auto sub_pts = sub.sorted_points();
        std::vector<PointId> down(m.size(), 0);
        std::vector<std::size_t> idx(sub_pts.begin(), sub_pts.end());
        for (std::size_t i = 0; i < sub_pts.size(); ++i)
            down[sub_pts[i]] = static_cast<PointId>(i);
        const auto local = restrict(m, idx);
        auto relabelled = hst_relabel(local.induced, map_points(sub, down), opts.c, out.k_prime);
        std::vector<PointId> up(sub_pts.begin(), sub_pts.end());
        sub = map_points(relabelled.tree, up);
        res.guarantee.distortion_bound = std::max(1.0 + opts.eps, out.k_prime / (out.k_prime - 2.0));
    } else {
        res.guarantee.distortion_bound = opts.c;
    }
    const auto sub_pts = sub.sorted_points();
    std::vector<std::size_t> idx(sub_pts.begin(), sub_pts.end());
    res.witness = restrict(m, idx);
    res.cert = certify(identity_map(idx.size()), res.witness.induced, hst_metric(sub));
    res.tree = std::move(sub);
    return out;
}

}  // namespace mdich
