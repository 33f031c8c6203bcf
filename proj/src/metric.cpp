#include "mdich/metric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <unordered_set>

#include "mdich/errors.hpp"
#include "mdich/numeric.hpp"

namespace mdich {

namespace {

std::string pair_text(std::size_t i, std::size_t j)
{
    return "(" + std::to_string(i) + "," + std::to_string(j) + ")";
}

}  // namespace

MetricSpace::MetricSpace() : data_(std::make_shared<const Storage>()), n_(0) {}

MetricSpace MetricSpace::trusted(std::vector<std::string> labels, std::vector<double> dist)
{
    const std::size_t n = labels.size();
    if (dist.size() != n * n)
        throw UsageError("ShapeError", "distance matrix has " + std::to_string(dist.size()) +
                                           " entries, expected " + std::to_string(n * n));
    auto storage = std::make_shared<Storage>(Storage{std::move(labels), std::move(dist)});
    return MetricSpace(std::move(storage), n);
}

std::vector<std::string> MetricSpace::default_labels(std::size_t n)
{
    std::vector<std::string> labels(n);
    for (std::size_t i = 0; i < n; ++i)
        labels[i] = std::to_string(i);
    return labels;
}

double MetricSpace::diameter() const
{
    double best = 0.0;
    for (double d : data_->dist)
        best = std::max(best, d);
    return best;
}

double MetricSpace::min_distance() const
{
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = i + 1; j < n_; ++j)
            best = std::min(best, (*this)(i, j));
    return best;
}

MetricSpace MetricSpace::scaled(double factor) const
{
    std::vector<double> dist(data_->dist);
    for (double & d : dist)
        d *= factor;
    return trusted(data_->labels, std::move(dist));
}

bool operator==(const MetricSpace & a, const MetricSpace & b)
{
    return a.n_ == b.n_ && a.data_->labels == b.data_->labels && a.data_->dist == b.data_->dist;
}

MetricSpace validate_metric(std::vector<std::string> labels, const std::vector<std::vector<double>> & rows)
{
    const std::size_t n = rows.size();
    if (labels.size() != n)
        throw UsageError("ShapeError", "expected " + std::to_string(n) + " labels, got " +
                                           std::to_string(labels.size()));
    {
        std::unordered_set<std::string> seen;
        for (const auto & l : labels)
            if (!seen.insert(l).second)
                throw UsageError("DuplicateLabel", "label '" + l + "' appears twice");
    }
    std::vector<double> dist(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        if (rows[i].size() != n)
            throw UsageError("ShapeError", "row " + std::to_string(i) + " has " +
                                               std::to_string(rows[i].size()) + " entries, expected " +
                                               std::to_string(n));
        for (std::size_t j = 0; j < n; ++j) {
            const double d = rows[i][j];
            if (!std::isfinite(d))
                throw Error("NonFinite", "entry " + pair_text(i, j) + " is not finite");
            if (d < 0)
                throw Error("NegativeDistance", "entry " + pair_text(i, j) + " is negative");
            dist[i * n + j] = d;
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (dist[i * n + i] != 0.0)
            throw Error("NonZeroDiagonal", "diagonal entry " + std::to_string(i) + " is not zero");
        for (std::size_t j = i + 1; j < n; ++j) {
            if (dist[i * n + j] != dist[j * n + i])
                throw Error("SymmetryError", "d" + pair_text(i, j) + " != d" + pair_text(j, i));
            if (dist[i * n + j] == 0.0)
                throw Error("ZeroOffDiagonal", "points " + pair_text(i, j) + " coincide");
        }
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i)
                continue;
            const double dij = dist[i * n + j];
            for (std::size_t k = i + 1; k < n; ++k) {
                if (k == j)
                    continue;
                if (!leq(dist[i * n + k], dij + dist[j * n + k]))
                    throw TriangleViolation("TriangleViolation", {i, j, k},
                                            "d" + pair_text(i, k) + " exceeds d" + pair_text(i, j) + " + d" +
                                                pair_text(j, k));
            }
        }
    return MetricSpace::trusted(std::move(labels), std::move(dist));
}

MetricSpace validate_metric(const std::vector<std::vector<double>> & rows)
{
    return validate_metric(MetricSpace::default_labels(rows.size()), rows);
}

SubspaceWitness restrict(const MetricSpace & space, std::vector<std::size_t> subset)
{
    if (subset.empty())
        throw UsageError("EmptySubset", "cannot restrict to an empty subset");
    std::vector<char> seen(space.size(), 0);
    for (std::size_t idx : subset) {
        if (idx >= space.size())
            throw UsageError("IndexOutOfRange", "index " + std::to_string(idx) + " outside a " +
                                                    std::to_string(space.size()) + "-point space");
        if (seen[idx])
            throw UsageError("DuplicateIndex", "index " + std::to_string(idx) + " listed twice");
        seen[idx] = 1;
    }
    const std::size_t m = subset.size();
    std::vector<std::string> labels(m);
    std::vector<double> dist(m * m);
    for (std::size_t a = 0; a < m; ++a) {
        labels[a] = space.label(subset[a]);
        for (std::size_t b = 0; b < m; ++b)
            dist[a * m + b] = space(subset[a], subset[b]);
    }
    auto induced = MetricSpace::trusted(std::move(labels), std::move(dist));
    return SubspaceWitness{space, std::move(subset), std::move(induced)};
}

namespace {

struct Ratios {
    double expansion = 0.0;
    double contraction = 0.0;
};

Ratios sup_ratios(const std::vector<std::size_t> & map, const MetricSpace & a, const MetricSpace & b)
{
    Ratios r;
    const std::size_t n = a.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double da = a(i, j);
            const double db = b(map[i], map[j]);
            r.expansion = std::max(r.expansion, db / da);
            r.contraction = std::max(r.contraction, da / db);
        }
    return r;
}

void check_bijection(const std::vector<std::size_t> & map, std::size_t n)
{
    std::vector<char> hit(n, 0);
    for (std::size_t v : map) {
        if (v >= n || hit[v])
            throw UsageError("NotBijective", "map is not a bijection onto the target");
        hit[v] = 1;
    }
}

}  // namespace

std::vector<std::size_t> identity_map(std::size_t n)
{
    std::vector<std::size_t> map(n);
    std::iota(map.begin(), map.end(), std::size_t{0});
    return map;
}

EmbeddingCert certify(std::vector<std::size_t> map, const MetricSpace & a, const MetricSpace & b)
{
    if (a.size() != b.size() || map.size() != a.size())
        throw UsageError("SizeMismatch", "spaces of size " + std::to_string(a.size()) + " and " +
                                             std::to_string(b.size()) + " with a map of size " +
                                             std::to_string(map.size()));
    check_bijection(map, b.size());
    EmbeddingCert cert{a, b, std::move(map)};
    if (a.size() >= 2) {
        const Ratios r = sup_ratios(cert.map, a, b);
        cert.expansion = r.expansion;
        cert.contraction = r.contraction;
        // The product is at least 1 exactly; rounding can land one ulp below.
        cert.distortion = std::max(1.0, r.expansion * r.contraction);
    }
    return cert;
}

EmbeddingCert distortion_of(std::vector<std::size_t> map, const MetricSpace & a, const MetricSpace & b)
{
    if (a.size() < 2 || b.size() < 2)
        throw UsageError("SizeMismatch", "distortion needs at least two points on each side");
    return certify(std::move(map), a, b);
}

bool EmbeddingCert::verify() const
{
    if (source.size() != target.size() || map.size() != source.size())
        return false;
    std::vector<char> hit(target.size(), 0);
    for (std::size_t v : map) {
        if (v >= target.size() || hit[v])
            return false;
        hit[v] = 1;
    }
    if (source.size() < 2)
        return expansion == 1.0 && contraction == 1.0 && distortion == 1.0;
    const Ratios r = sup_ratios(map, source, target);
    return approx_equal(r.expansion, expansion) && approx_equal(r.contraction, contraction) &&
           approx_equal(std::max(1.0, r.expansion * r.contraction), distortion) && geq(distortion, 1.0);
}

bool EmbeddingCert::non_contractive() const
{
    const std::size_t n = source.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (!geq(target(map[i], map[j]), source(i, j)))
                return false;
    return true;
}

double aspect_ratio(const MetricSpace & space)
{
    if (space.size() < 2)
        throw Error("TooSmall", "aspect ratio needs at least two points");
    return space.diameter() / space.min_distance();
}

double equilateral_distortion(const MetricSpace & space)
{
    if (space.size() < 2)
        throw Error("TooSmall", "equilateral distortion needs at least two points");
    return aspect_ratio(space);
}

}  // namespace mdich
