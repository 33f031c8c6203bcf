#pragma once

#include <cstddef>
#include <vector>

#include "mdich/metric.hpp"

namespace mdich::reference {

// Slow full-enumeration counterparts of the oracle searches. They use no
// pruning, caching or greedy label propagation: every subset, ordering and
// tree shape is tried and checked with bottom-up minimal labels. Intended
// for small inputs (n <= 8).

/// Aspect ratio of the points `pts` of m is <= alpha.
bool flat_subset(const MetricSpace & m, const std::vector<std::size_t> & pts, double alpha);

/// Tries all orderings; per ordering the least labels a_i =
/// max(M_i, k a_{i+1}) are computed from the back and must stay <= alpha m_i.
bool lacunary_embeddable(const MetricSpace & m, const std::vector<std::size_t> & pts, double alpha, double k);

/// Tries every rooted binary shape over the points; least labels bottom-up,
/// label(u) = max(max cross, k label(children)) <= alpha min cross.
bool binary_hst_embeddable(const MetricSpace & m, const std::vector<std::size_t> & pts, double alpha, double k);

/// Number of rooted binary shapes with `leaves` labelled leaves: (2m-3)!!.
std::size_t topology_count(std::size_t leaves);

std::size_t max_equilateral(const MetricSpace & m, double alpha);
std::size_t max_lacunary(const MetricSpace & m, double alpha, double k);
std::size_t max_binary_hst(const MetricSpace & m, double alpha, double k);

}  // namespace mdich::reference
