#include "mdich/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "mdich/errors.hpp"

namespace mdich {

namespace {

[[noreturn]] void malformed(const std::string & what)
{
    throw UsageError("MalformedInput", what);
}

const Json & field(const Json & j, const char * key)
{
    if (!j.is_object() || !j.contains(key))
        malformed(std::string("missing field '") + key + "'");
    return j.at(key);
}

void expect_format(const Json & j, const char * format)
{
    const Json & f = field(j, "format");
    if (!f.is_string() || f.get<std::string>() != format)
        malformed(std::string("expected format ") + format);
}

Json provenance_json(const Provenance & p)
{
    Json j;
    j["generator"] = p.generator;
    Json params = Json::object();
    for (const auto & [k, v] : p.params)
        params[k] = v;
    j["params"] = params;
    j["seed"] = p.seed ? Json(*p.seed) : Json(nullptr);
    j["prng"] = p.prng;
    return j;
}

Provenance provenance_from(const Json & j)
{
    Provenance p;
    if (!j.is_object())
        malformed("provenance must be an object");
    if (j.contains("generator") && j["generator"].is_string())
        p.generator = j["generator"].get<std::string>();
    if (j.contains("params") && j["params"].is_object())
        for (const auto & [k, v] : j["params"].items())
            p.params[k] = v.is_string() ? v.get<std::string>() : v.dump();
    if (j.contains("seed") && j["seed"].is_number_unsigned())
        p.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("prng") && j["prng"].is_string())
        p.prng = j["prng"].get<std::string>();
    return p;
}

PointId parse_point(const Json & j)
{
    std::uint64_t v = 0;
    if (j.is_number_unsigned()) {
        v = j.get<std::uint64_t>();
    } else if (j.is_string()) {
        const auto s = j.get<std::string>();
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
            malformed("point id '" + s + "' is not a decimal integer");
    } else {
        malformed("point id must be a decimal string");
    }
    if (v > std::numeric_limits<PointId>::max())
        malformed("point id too large");
    return static_cast<PointId>(v);
}

Json number(double x)
{
    return std::isfinite(x) ? Json(x) : Json(nullptr);
}

}  // namespace

std::string format_double(double x)
{
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
    (void)ec;
    return std::string(buf, ptr);
}

Json metric_to_json(const MetricSpace & space, const std::optional<Provenance> & provenance)
{
    Json j;
    j["format"] = "metric-v1";
    j["labels"] = space.labels();
    Json rows = Json::array();
    for (std::size_t i = 0; i < space.size(); ++i) {
        const auto r = space.row(i);
        rows.push_back(std::vector<double>(r.begin(), r.end()));
    }
    j["dist"] = rows;
    if (provenance)
        j["provenance"] = provenance_json(*provenance);
    return j;
}

LoadedMetric metric_from_json(const Json & j)
{
    expect_format(j, "metric-v1");
    const Json & labels = field(j, "labels");
    const Json & dist = field(j, "dist");
    if (!labels.is_array() || !dist.is_array())
        malformed("labels and dist must be arrays");
    std::vector<std::string> names;
    for (const auto & l : labels) {
        if (!l.is_string())
            malformed("labels must be strings");
        names.push_back(l.get<std::string>());
    }
    std::vector<std::vector<double>> rows;
    for (const auto & row : dist) {
        if (!row.is_array())
            malformed("dist rows must be arrays");
        std::vector<double> r;
        for (const auto & x : row) {
            if (!x.is_number())
                malformed("distances must be numbers");
            r.push_back(x.get<double>());
        }
        rows.push_back(std::move(r));
    }
    LoadedMetric out{validate_metric(std::move(names), rows), std::nullopt};
    if (j.contains("provenance") && !j["provenance"].is_null())
        out.provenance = provenance_from(j["provenance"]);
    return out;
}

Json hst_to_json(const HstTree & tree)
{
    const auto & nodes = tree.nodes();
    std::vector<Json> built(nodes.size());
    for (std::size_t u = nodes.size(); u-- > 0;) {
        Json j;
        if (nodes[u].is_leaf()) {
            j["point"] = std::to_string(nodes[u].point);
        } else {
            j["label"] = nodes[u].label;
            Json kids = Json::array();
            for (std::uint32_t c : nodes[u].children)
                kids.push_back(std::move(built[c]));
            j["children"] = std::move(kids);
        }
        built[u] = std::move(j);
    }
    Json root;
    root["format"] = "hst-v1";
    for (auto & [k, v] : built[0].items())
        root[k] = v;
    return root;
}

HstTree hst_from_json(const Json & j)
{
    expect_format(j, "hst-v1");
    HstBuilder b;
    // Post-order with an explicit stack: (json node, visited).
    struct Item {
        const Json * node;
        bool expanded;
    };
    std::vector<Item> stack{{&j, false}};
    std::vector<std::uint32_t> done;
    std::vector<std::size_t> marks;
    while (!stack.empty()) {
        Item it = stack.back();
        stack.pop_back();
        const Json & n = *it.node;
        if (!n.is_object())
            malformed("tree nodes must be objects");
        if (n.contains("point")) {
            done.push_back(b.leaf(parse_point(n["point"])));
            continue;
        }
        const Json & kids = field(n, "children");
        const Json & label = field(n, "label");
        if (!kids.is_array() || !label.is_number())
            malformed("internal nodes need a numeric label and a children array");
        if (!it.expanded) {
            stack.push_back({it.node, true});
            marks.push_back(done.size());
            for (auto c = kids.rbegin(); c != kids.rend(); ++c)
                stack.push_back({&*c, false});
            continue;
        }
        const std::size_t from = marks.back();
        marks.pop_back();
        std::vector<std::uint32_t> children(done.begin() + static_cast<std::ptrdiff_t>(from), done.end());
        done.resize(from);
        if (children.empty())
            malformed("internal node without children");
        done.push_back(b.node(label.get<double>(), std::move(children)));
    }
    return b.build(done.at(0));
}

Json graph_to_json(const Graph & g, const std::optional<Provenance> & provenance)
{
    Json j;
    j["format"] = "graph-v1";
    j["s"] = g.s;
    Json edges = Json::array();
    for (auto [a, b] : g.edges)
        edges.push_back({a, b});
    j["edges"] = edges;
    if (provenance)
        j["provenance"] = provenance_json(*provenance);
    return j;
}

Graph graph_from_json(const Json & j)
{
    expect_format(j, "graph-v1");
    const Json & s = field(j, "s");
    const Json & edges = field(j, "edges");
    if (!s.is_number_unsigned() || !edges.is_array())
        malformed("graph needs an unsigned s and an edges array");
    Graph g{s.get<std::size_t>(), {}};
    for (const auto & e : edges) {
        if (!e.is_array() || e.size() != 2 || !e[0].is_number_unsigned() || !e[1].is_number_unsigned())
            malformed("edges must be pairs of vertex indices");
        auto a = e[0].get<std::size_t>(), b = e[1].get<std::size_t>();
        if (a >= g.s || b >= g.s || a == b)
            malformed("edge (" + std::to_string(a) + ", " + std::to_string(b) + ") is not a pair of distinct vertices");
        g.edges.push_back({std::min(a, b), std::max(a, b)});
    }
    std::sort(g.edges.begin(), g.edges.end());
    g.edges.erase(std::unique(g.edges.begin(), g.edges.end()), g.edges.end());
    return g;
}

Json result_to_json(const DichotomyResult & r)
{
    Json j;
    j["kind"] = to_string(r.kind);
    j["indices"] = r.witness.indices;
    if (r.tree)
        j["structure"] = hst_to_json(*r.tree);
    else if (r.sequence)
        j["structure"] = r.sequence->values;
    else if (r.kind == ResultKind::Equilateral && r.cert.target.size() >= 2)
        j["structure"] = Json{{"equilateral", r.cert.target(0, 1)}};
    else
        j["structure"] = nullptr;
    j["size"] = r.size();
    j["distortion"] = number(r.cert.distortion);
    j["expansion"] = number(r.cert.expansion);
    j["contraction"] = number(r.cert.contraction);
    j["separation"] = number(r.separation);
    Json g;
    g["size_bound"] = number(r.guarantee.size_bound);
    g["distortion_bound"] = number(r.guarantee.distortion_bound);
    Json params = Json::object();
    for (const auto & [k, v] : r.guarantee.params)
        params[k] = number(v);
    g["params"] = params;
    j["guarantee"] = g;
    return j;
}

Json report_to_json(const OracleReport & r)
{
    Json j;
    j["query"] = to_string(r.query);
    j["alpha"] = r.alpha;
    j["k"] = r.k;
    j["arithmetic"] = r.arithmetic == Arithmetic::ExactRational ? "exact-rational" : "float";
    j["embeddable"] = r.embeddable;
    j["optimum"] = r.optimum;
    j["witness"] = r.witness;
    if (r.tree)
        j["structure"] = hst_to_json(*r.tree);
    else if (r.sequence)
        j["structure"] = r.sequence->values;
    else
        j["structure"] = nullptr;
    j["quadruple"] = r.quadruple ? Json(std::vector<std::size_t>(r.quadruple->begin(), r.quadruple->end()))
                                 : Json(nullptr);
    j["nodes"] = r.nodes;
    j["ms"] = r.ms;
    return j;
}

Json read_json_file(const std::string & path)
{
    std::ifstream in(path);
    if (!in)
        malformed("cannot read " + path);
    try {
        return Json::parse(in);
    } catch (const Json::parse_error & e) {
        malformed(path + ": " + e.what());
    }
}

std::string dump_json(const Json & j)
{
    return j.dump(2) + "\n";
}

void write_text_file(const std::string & path, const std::string & text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw UsageError("IoError", "cannot write " + path);
    out << text;
    if (!out)
        throw UsageError("IoError", "failed writing " + path);
}

}  // namespace mdich
