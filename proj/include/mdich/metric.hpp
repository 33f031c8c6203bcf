#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace mdich {

/// A finite metric space: labelled points and a dense symmetric distance
/// matrix. Instances are immutable and share their storage, so copies are
/// cheap and safe to hand across threads.
///
/// Construct through validate_metric() for untrusted data. MetricSpace::trusted
/// skips the O(n^3) triangle check and is meant for generators whose output is
/// a metric by construction (ultrametrics, compositions, shortest paths).
class MetricSpace {
public:
    MetricSpace();

    static MetricSpace trusted(std::vector<std::string> labels, std::vector<double> dist);
    static std::vector<std::string> default_labels(std::size_t n);

    std::size_t size() const noexcept { return n_; }
    bool empty() const noexcept { return n_ == 0; }

    double operator()(std::size_t i, std::size_t j) const noexcept { return data_->dist[i * n_ + j]; }
    std::span<const double> row(std::size_t i) const noexcept
    {
        return {data_->dist.data() + i * n_, n_};
    }
    std::span<const double> matrix() const noexcept { return data_->dist; }
    const std::vector<std::string> & labels() const noexcept { return data_->labels; }
    const std::string & label(std::size_t i) const { return data_->labels.at(i); }

    double diameter() const;
    double min_distance() const;

    /// Same points, every distance multiplied by `factor` (> 0).
    MetricSpace scaled(double factor) const;

    friend bool operator==(const MetricSpace & a, const MetricSpace & b);

private:
    struct Storage {
        std::vector<std::string> labels;
        std::vector<double> dist;
    };
    MetricSpace(std::shared_ptr<const Storage> data, std::size_t n) : data_(std::move(data)), n_(n) {}

    std::shared_ptr<const Storage> data_;
    std::size_t n_ = 0;
};

/// Checks every metric axiom and returns the space. Throws ShapeError,
/// NonFinite, NegativeDistance, NonZeroDiagonal, SymmetryError,
/// ZeroOffDiagonal, TriangleViolation (with the offending triple) or
/// DuplicateLabel.
MetricSpace validate_metric(std::vector<std::string> labels, const std::vector<std::vector<double>> & rows);
MetricSpace validate_metric(const std::vector<std::vector<double>> & rows);

/// A subspace together with the parent it was cut from.
struct SubspaceWitness {
    MetricSpace parent;
    std::vector<std::size_t> indices;  ///< distinct parent indices, caller order
    MetricSpace induced;

    std::size_t size() const noexcept { return indices.size(); }
};

SubspaceWitness restrict(const MetricSpace & space, std::vector<std::size_t> subset);

/// A bijection source -> target with its Lipschitz constants.
///
/// `expansion` is max d_target(f x, f y) / d_source(x, y), `contraction` the
/// max of the reciprocal ratios, and `distortion` their product.
struct EmbeddingCert {
    MetricSpace source;
    MetricSpace target;
    std::vector<std::size_t> map;
    double expansion = 1.0;
    double contraction = 1.0;
    double distortion = 1.0;

    /// Recomputes the three constants from the map and compares them with the
    /// stored values within relative 1e-9.
    bool verify() const;
    /// True when d_target >= d_source on every pair (up to slack).
    bool non_contractive() const;
};

/// Exact sup-ratio certificate for `map` between two spaces of equal size >= 2.
EmbeddingCert distortion_of(std::vector<std::size_t> map, const MetricSpace & a, const MetricSpace & b);

/// Like distortion_of but also accepts spaces with fewer than two points, in
/// which case every constant is 1 (there are no pairs to compare).
EmbeddingCert certify(std::vector<std::size_t> map, const MetricSpace & a, const MetricSpace & b);

/// Identity permutation 0..n-1.
std::vector<std::size_t> identity_map(std::size_t n);

/// diam / min distance. Throws TooSmall below two points.
double aspect_ratio(const MetricSpace & space);

/// Least distortion of any bijection onto an equilateral space.
///
/// A bijection onto the equilateral space with common distance w has
/// expansion w / min-d and contraction max-d / w, so the product is the
/// aspect ratio for every w. Hence this is exactly aspect_ratio().
double equilateral_distortion(const MetricSpace & space);

}  // namespace mdich
