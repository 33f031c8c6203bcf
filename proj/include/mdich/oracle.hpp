#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mdich/hst.hpp"
#include "mdich/metric.hpp"

namespace mdich {

/// Float compares with relative slack 1e-9; ExactRational converts every
/// input double to its exact rational value and compares exactly.
enum class Arithmetic { Float, ExactRational };

/// Size limits for the exhaustive searches. Exceeding one is an error.
struct Caps {
    std::size_t equilateral_n = 40;
    std::size_t lacunary_perm = 9;
    std::size_t lacunary_subset_n = 12;
    std::size_t hst_topology = 8;
    std::size_t hst_subset_n = 10;
    std::size_t composition_size = 4096;
    std::size_t ramsey_exact = 24;
};

/// Reads `key = value` lines (# comments, blank lines allowed) over the
/// defaults. Throws UsageError on unknown keys or malformed values.
Caps load_caps(const std::string & path);
Caps parse_caps(const std::string & text);

enum class OracleQuery { Equilateral, Lacunary, BinaryHst, FourPoint };
const char * to_string(OracleQuery q);

struct OracleReport {
    OracleQuery query = OracleQuery::Equilateral;
    double alpha = 1.0;
    double k = 1.0;
    Arithmetic arithmetic = Arithmetic::Float;
    bool embeddable = false;            ///< deciders: the whole input embeds
    std::size_t optimum = 0;            ///< maximisers: largest subset size
    std::vector<std::size_t> witness;   ///< input indices, structure order
    std::optional<LacunarySequence> sequence;
    std::optional<HstTree> tree;        ///< point ids are input indices
    std::optional<std::array<std::size_t, 4>> quadruple;  ///< four-point violation
    std::uint64_t nodes = 0;
    double ms = 0.0;

    /// Re-verifies the witness: its certificate against the structure has
    /// distortion <= alpha and the structure passes its class predicate.
    /// Empty when everything holds.
    std::vector<std::string> check(const MetricSpace & m) const;
};

/// Largest S with aspect ratio <= alpha via max clique in threshold graphs.
/// Throws CapExceeded, TooSmall.
OracleReport max_equilateral_subset(const MetricSpace & m, double alpha, const Caps & caps = {},
                                    Arithmetic arith = Arithmetic::Float);

/// Whether some ordering admits a k-lacunary sequence a with
/// d(x, y) <= a_min <= alpha d(x, y). Scaling is free, so the lower constant
/// is fixed to 1. Per ordering the greedy a_1 = alpha m_1,
/// a_{i+1} = min(alpha m_{i+1}, a_i / k) gives every a_i its largest
/// admissible value, and larger values only relax later steps, so the
/// ordering is feasible iff a_i >= M_i throughout (m_i, M_i: min and max
/// distance from the i-th point to later points). Throws CapExceeded.
OracleReport is_lacunary_embeddable(const MetricSpace & s, double alpha, double k, const Caps & caps = {},
                                    Arithmetic arith = Arithmetic::Float);

/// Largest subset passing is_lacunary_embeddable. Throws CapExceeded.
OracleReport max_lacunary_subset(const MetricSpace & m, double alpha, double k, const Caps & caps = {},
                                 Arithmetic arith = Arithmetic::Float);

/// Whether some binary tree over the points carries labels with
/// d(x, y) <= label(lca) <= alpha d(x, y) and child <= parent / k. Decided
/// top-down: each vertex takes the largest label its bipartition allows,
/// min(alpha * min cross distance, parent / k), which only relaxes the
/// children. Requires k > 1. Throws CapExceeded, BadParameters.
OracleReport is_binary_hst_embeddable(const MetricSpace & s, double alpha, double k, const Caps & caps = {},
                                      Arithmetic arith = Arithmetic::Float);

/// Largest subset embeddable in a binary k-HST. Subset DP over the least
/// feasible root label: req(R) = min over bipartitions (A, B) of
/// max(max cross, k req(A), k req(B)), kept when <= alpha * min cross.
/// Throws CapExceeded, BadParameters.
OracleReport max_binary_hst_subset(const MetricSpace & m, double alpha, double k, const Caps & caps = {},
                                   Arithmetic arith = Arithmetic::Float);

/// 2 + log_k(alpha * phi). Throws BadParameters unless k > 1, alpha >= 1,
/// phi >= 1.
double bound_lacunary_size(double alpha, double k, double phi);
/// 2^(1 + log_k(alpha * phi)). Same preconditions.
double bound_binary_hst_size(double alpha, double k, double phi);

/// Every split of every 4-subset into two pairs {x1 x2 | x3 x4} satisfies
/// max{d12, d34} >= (k / alpha) min{d13, d14, d23, d24}. The report's
/// `embeddable` is the verdict and `quadruple` the first violation.
OracleReport four_point_check(const MetricSpace & s, double alpha, double k, Arithmetic arith = Arithmetic::Float);

}  // namespace mdich
