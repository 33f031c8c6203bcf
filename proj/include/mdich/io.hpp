#pragma once

#include <optional>
#include <string>

#include "json.hpp"

#include "mdich/extraction.hpp"
#include "mdich/hst.hpp"
#include "mdich/instances.hpp"
#include "mdich/metric.hpp"
#include "mdich/oracle.hpp"

namespace mdich {

using Json = nlohmann::ordered_json;

/// metric-v1: {"format","labels","dist"} plus an optional "provenance"
/// block {"generator","params","seed","prng"}.
Json metric_to_json(const MetricSpace & space, const std::optional<Provenance> & provenance = std::nullopt);

struct LoadedMetric {
    MetricSpace space;
    std::optional<Provenance> provenance;
};

/// Validates every metric axiom. Throws MalformedInput for structural
/// problems and the validate_metric errors for bad distances.
LoadedMetric metric_from_json(const Json & j);

/// hst-v1: internal {"label","children"}, leaves {"point":"<id>"}; the root
/// also carries "format".
Json hst_to_json(const HstTree & tree);
HstTree hst_from_json(const Json & j);

/// graph-v1: {"format","s","edges"}.
Json graph_to_json(const Graph & g, const std::optional<Provenance> & provenance = std::nullopt);
Graph graph_from_json(const Json & j);

Json result_to_json(const DichotomyResult & r);
Json report_to_json(const OracleReport & r);

/// Throws MalformedInput when the file is unreadable or not JSON.
Json read_json_file(const std::string & path);
/// Two-space indented dump with a trailing newline.
std::string dump_json(const Json & j);
void write_text_file(const std::string & path, const std::string & text);

/// Shortest decimal that round-trips.
std::string format_double(double x);

}  // namespace mdich
