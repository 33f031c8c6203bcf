#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mdich/hst.hpp"
#include "mdich/metric.hpp"

namespace mdich {

/// A point x and a large set A whose distances to x lie in one (1+eps)-band
/// [lambda*diam/(2(1+eps)), lambda*diam/2] (top end closed).
struct AnnulusResult {
    std::size_t center = 0;
    std::vector<std::size_t> members;  ///< ascending
    double lambda = 1.0;
    double diameter = 0.0;
    double eps = 0.0;
    std::size_t far_set_size = 0;  ///< |W|, the larger far half-set
    std::size_t layers = 0;        ///< ceil(log_{1+eps} 2)
};

/// Dense annulus. The diametrical pair is the lexicographically first pair at
/// distance diam; the center is the endpoint whose far half-set
/// {y : d(x, y) >= diam/2} is larger (first endpoint on ties). The far
/// half-set is cut into ceil(log_{1+eps} 2) layers and the most populous one
/// (lowest layer on ties) is returned. Throws TooSmall, BadParameters.
AnnulusResult find_dense_annulus(const MetricSpace & m, double eps);

/// Same, restricted to the points `subset` of m (indices stay m-indices).
AnnulusResult find_dense_annulus(const MetricSpace & m, const std::vector<std::size_t> & subset, double eps);

struct SparsifiedSequence {
    std::vector<std::size_t> kept;  ///< ascending positions into the input
    std::vector<double> values;     ///< b_i on kept positions
    std::size_t classes = 0;        ///< r = ceil(log_{1+eps}(2k)) + 1
};

/// Rounds a_i up to a power of (1+eps) and keeps the most populous residue
/// class of the exponents modulo r, or a left-to-right scan keeping equal
/// exponents and drops by a factor >= k when that is larger. Requires
/// a_j <= 2 a_i for all i < j (PrefixDominanceViolated otherwise).
SparsifiedSequence sparsify_sequence(const std::vector<double> & a, double eps, double k);

/// Smallest integer t with a <= (1+eps)^t.
std::int64_t power_exponent(double a, double eps);

enum class ResultKind { Equilateral, Lacunary, BinaryHst, Increasing };
const char * to_string(ResultKind kind);

/// What an algorithm promised: |witness| >= size_bound and certified
/// distortion <= distortion_bound, with the parameters that produced them.
struct Guarantee {
    double size_bound = 0.0;
    double distortion_bound = 1.0;
    std::map<std::string, double> params;
};

/// Outcome of an extraction: a subspace of the input, the structured space it
/// embeds into, and the certificate of that embedding.
///
/// The certificate maps witness.induced (witness order) onto `cert.target`,
/// which is hst_metric(*tree), lacunary_metric(*sequence), or an equilateral
/// space for the Equilateral kind.
struct DichotomyResult {
    ResultKind kind = ResultKind::Equilateral;
    SubspaceWitness witness;
    std::optional<HstTree> tree;
    std::optional<LacunarySequence> sequence;
    double separation = 1.0;  ///< k the structure must satisfy
    EmbeddingCert cert;
    Guarantee guarantee;

    std::size_t size() const noexcept { return witness.size(); }
    /// Empty when every self-check passes; otherwise one message per failure.
    std::vector<std::string> check() const;
    bool verify() const { return check().empty(); }
};

/// k-increasing extraction: a subset of M that is non-contractively
/// (1+eps)-equivalent to a k-increasing space.
struct IncreasingExtraction {
    DichotomyResult result;           ///< kind Increasing, tree over M-indices
    std::vector<std::size_t> chain;   ///< x_1 ... x_m (M-indices)
    std::vector<double> scales;       ///< l_1 ... l_{m-1}
    double eps_inner = 0.0;           ///< sqrt(1+eps) - 1
    std::size_t classes = 0;          ///< r
};

/// Runs the annulus recursion with eps' = sqrt(1+eps) - 1 so that the final
/// distortion is (1+eps')^2 = 1+eps. Guarantees: m >= log n / log(4/eps') and
/// output size >= ceil(m / r). Throws TooSmall, BadParameters.
IncreasingExtraction extract_k_increasing(const MetricSpace & m, double eps, double k);

/// Splits a k-increasing tree into an equilateral bunch (the leaf children
/// of one vertex) or a lacunary chain (one leaf per internal vertex plus a
/// second leaf at the bottom), whichever is larger, the bunch on ties. One of
/// them has >= floor(sqrt m) points. The result lives on hst_metric(tree).
/// Throws NotIncreasing.
DichotomyResult increasing_dichotomy(const HstTree & tree);

/// extract_k_increasing followed by increasing_dichotomy, mapped back onto M.
DichotomyResult equilateral_or_lacunary(const MetricSpace & m, double eps, double k);

struct GreedyExtraction {
    DichotomyResult result;
    std::size_t threshold = 0;            ///< T
    std::vector<std::size_t> chain;       ///< z_1 ... z_m before thinning
    std::vector<double> diameters;        ///< diam F_0 ... diam F_{m-1}
    std::vector<std::vector<std::size_t>> cells;  ///< F_1 ... F_m
    std::size_t stride = 1;               ///< thinning stride (1 when none)
};

/// Net-based dichotomy for alpha > 2. Each round takes a maximal
/// (diam/alpha)-separated net grown from the first diametrical endpoint;
/// a net of size >= T is returned as an equilateral witness, otherwise the
/// recursion continues into the most populous net cell. `threshold` 0 means
/// ceil(log2 |M|). Throws AlphaTooSmall, TooSmall.
GreedyExtraction greedy_equilateral_or_lacunary(const MetricSpace & m, double alpha, double k,
                                                std::size_t threshold = 0);

struct HstEmbedding {
    HstTree tree;  ///< point ids are indices of the embedded space
    EmbeddingCert cert;
};

/// For a space whose every triple has aspect ratio >= k > 2: recursive
/// bipartition into the closed balls of radius diam/k around a diametrical
/// pair. The result is a binary (k/2)-HST, non-contractive, distortion
/// <= k/(k-2), same diameter. Throws KTooSmall, TripleTooFlat.
HstEmbedding triangle_to_binary_hst(const MetricSpace & m, double k);

/// Relabels a binary tree over L's points: each internal vertex gets the
/// largest L-distance across its two child blocks. Requires separation
/// >= c*k and d_L <= d_tree <= c*d_L; yields separation >= k and distortion
/// <= k/(k-2). Throws NotBinary, SeparationTooSmall, CertMismatch, KTooSmall.
HstEmbedding hst_relabel(const MetricSpace & l, const HstTree & tree, double c, double k);

/// Symmetric pair colouring with colours 1..colours; 0 marks a missing pair.
class Coloring {
public:
    Coloring(std::size_t vertices, int colours) : n_(vertices), colours_(colours), c_(vertices * vertices, 0) {}

    std::size_t vertices() const noexcept { return n_; }
    int colours() const noexcept { return colours_; }
    int operator()(std::size_t a, std::size_t b) const { return c_[a * n_ + b]; }
    void set(std::size_t a, std::size_t b, int colour)
    {
        c_[a * n_ + b] = colour;
        c_[b * n_ + a] = colour;
    }

private:
    std::size_t n_;
    int colours_;
    std::vector<int> c_;
};

/// Greedy monochromatic set: repeatedly pick the lowest remaining vertex and
/// keep its most popular colour class; finish with the largest colour among
/// the picks plus the last pick. Size >= max(1, floor(floor(log_D h) / D))
/// for h+1 vertices and D colours. Throws IncompleteColoring.
std::vector<std::size_t> monochromatic_subset(const Coloring & colouring);

/// The size promised by monochromatic_subset for h+1 vertices, D colours.
std::size_t monochromatic_bound(std::size_t h, int colours);

enum class HstMode { Coarse, Fine };

struct HstDichotomyOptions {
    HstMode mode = HstMode::Coarse;
    double c = 1.0;     ///< certified equivalence constant of the input tree
    double eps = 0.5;   ///< fine mode target 1+eps
    std::size_t h = 2;  ///< out-degree threshold
    double k = 2.0;
};

struct HstDichotomy {
    DichotomyResult result;
    int case_taken = 0;     ///< 1: high out-degree vertex, 2: binary subtree
    double k_prime = 0.0;   ///< fine mode max{k, 2 + 2/eps}
};

/// Equilateral-or-binary-HST dichotomy from an HST over a subset of M's
/// points (leaf ids are M-indices) that is non-contractively c-equivalent to
/// M there. Coarse mode passes distortion c through; fine mode needs
/// separation >= c*k' and reaches 1+eps. Throws CertMismatch,
/// SeparationTooSmall, BadParameters.
HstDichotomy hst_dichotomy(const MetricSpace & m, const HstTree & tree, const HstDichotomyOptions & opts);

/// Equilateral space of the given size and common distance.
MetricSpace equilateral_target(std::size_t n, double w);

}  // namespace mdich
