#include "mdich/oracle.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "mdich/clique.hpp"
#include "mdich/errors.hpp"
#include "mdich/numeric.hpp"

namespace mdich {

namespace {

struct FloatOps {
    using T = double;
    static T from(double x) { return x; }
    static bool le(const T & a, const T & b) { return leq(a, b); }
    static double to_double(const T & x) { return x; }
};

struct ExactOps {
    using T = mpq_class;
    static T from(double x) { return mpq_class(x); }
    static bool le(const T & a, const T & b) { return a <= b; }
    static double to_double(const T & x) { return x.get_d(); }
};

template <typename T>
const T & tmin(const T & a, const T & b)
{
    return b < a ? b : a;
}

template <typename T>
const T & tmax(const T & a, const T & b)
{
    return a < b ? b : a;
}

using Mask = std::uint64_t;

int popcount(Mask m) { return std::popcount(m); }
int lowest(Mask m) { return std::countr_zero(m); }

/// Distances of the chosen points in the working number type.
template <typename Ops>
struct Local {
    using T = typename Ops::T;
    std::size_t n = 0;
    std::vector<T> d;
    std::vector<T> diam;  // per mask, filled on demand by fill_diam()

    Local(const MetricSpace & m, const std::vector<std::size_t> & pts) : n(pts.size()), d(n * n)
    {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                d[i * n + j] = Ops::from(m(pts[i], pts[j]));
    }
    const T & at(std::size_t i, std::size_t j) const { return d[i * n + j]; }

    void fill_diam()
    {
        diam.assign(Mask{1} << n, T(0));
        for (Mask mask = 1; mask < (Mask{1} << n); ++mask) {
            const int lo = lowest(mask);
            const Mask rest = mask & (mask - 1);
            T best = diam[rest];
            for (Mask r = rest; r; r &= r - 1)
                best = tmax(best, at(static_cast<std::size_t>(lo), static_cast<std::size_t>(lowest(r))));
            diam[mask] = best;
        }
    }
};

class Timer {
public:
    double ms() const
    {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

void require_cap(std::size_t n, std::size_t cap, const char * what)
{
    if (n > cap)
        throw CapExceeded("CapExceeded", std::string(what) + ": " + std::to_string(n) + " points exceed cap " +
                                             std::to_string(cap));
}

void require_alpha(double alpha)
{
    if (!(alpha >= 1.0) || !std::isfinite(alpha))
        throw UsageError("BadParameters", "alpha must be a finite value >= 1");
}

void require_k(double k, bool strict)
{
    if (!std::isfinite(k) || (strict ? !(k > 1.0) : !(k >= 1.0)))
        throw UsageError("BadParameters", strict ? "k must be > 1" : "k must be >= 1");
}

// ---------------------------------------------------------------- equilateral

template <typename Ops>
OracleReport equilateral_impl(const MetricSpace & m, double alpha_d)
{
    using T = typename Ops::T;
    const std::size_t n = m.size();
    std::vector<std::size_t> all(n);
    for (std::size_t i = 0; i < n; ++i)
        all[i] = i;
    Local<Ops> L(m, all);
    const T alpha = Ops::from(alpha_d);

    std::vector<double> cand;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            cand.push_back(m(i, j));
    std::sort(cand.begin(), cand.end());
    cand.erase(std::unique(cand.begin(), cand.end()), cand.end());

    OracleReport r;
    r.witness = {0, 1};
    for (double dd : cand) {
        const T low = Ops::from(dd);
        const T high = alpha * low;
        AdjacencyGraph g(n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                if (Ops::le(low, L.at(i, j)) && Ops::le(L.at(i, j), high))
                    g.add_edge(i, j);
        auto found = max_clique(g, r.witness.size());
        r.nodes += found.nodes;
        if (found.clique.size() > r.witness.size())
            r.witness = std::move(found.clique);
    }
    r.optimum = r.witness.size();
    r.embeddable = r.optimum == n;
    return r;
}

// ------------------------------------------------------------------ lacunary

template <typename Ops>
struct LacunarySearch {
    using T = typename Ops::T;
    Local<Ops> & L;
    T alpha;
    T k;
    std::vector<std::optional<T>> failed;  // largest previous value known to fail
    std::vector<char> failed_unbounded;
    std::vector<std::size_t> order;
    std::vector<T> values;
    std::uint64_t nodes = 0;

    LacunarySearch(Local<Ops> & l, T a, T kk)
        : L(l), alpha(std::move(a)), k(std::move(kk)), failed(Mask{1} << l.n), failed_unbounded(Mask{1} << l.n, 0)
    {
    }

    bool run(Mask rest, const std::optional<T> & prev)
    {
        ++nodes;
        if (popcount(rest) == 1) {
            order.push_back(static_cast<std::size_t>(lowest(rest)));
            return true;
        }
        if (failed_unbounded[rest])
            return false;
        if (prev && failed[rest] && *prev <= *failed[rest])
            return false;
        for (Mask r = rest; r; r &= r - 1) {
            const auto p = static_cast<std::size_t>(lowest(r));
            const Mask later = rest & ~(Mask{1} << p);
            T lo = L.at(p, static_cast<std::size_t>(lowest(later)));
            T hi = lo;
            for (Mask q = later; q; q &= q - 1) {
                const T & d = L.at(p, static_cast<std::size_t>(lowest(q)));
                lo = tmin(lo, d);
                hi = tmax(hi, d);
            }
            T a = alpha * lo;
            if (prev) {
                T cap = *prev / k;
                if (cap < a)
                    a = cap;
            }
            if (!Ops::le(hi, a) || !Ops::le(L.diam[rest], a))
                continue;
            order.push_back(p);
            values.push_back(a);
            if (run(later, a))
                return true;
            order.pop_back();
            values.pop_back();
        }
        if (!prev)
            failed_unbounded[rest] = 1;
        else if (!failed[rest] || *failed[rest] < *prev)
            failed[rest] = *prev;
        return false;
    }
};

template <typename Ops>
bool lacunary_decide(const MetricSpace & m, const std::vector<std::size_t> & pts, double alpha, double k,
                     OracleReport & r)
{
    if (pts.size() <= 1) {
        r.witness = pts;
        return true;
    }
    Local<Ops> L(m, pts);
    L.fill_diam();
    LacunarySearch<Ops> s(L, Ops::from(alpha), Ops::from(k));
    const bool ok = s.run((Mask{1} << pts.size()) - 1, std::nullopt);
    r.nodes += s.nodes;
    if (ok) {
        r.witness.clear();
        for (std::size_t i : s.order)
            r.witness.push_back(pts[i]);
        std::vector<double> vals;
        for (const auto & v : s.values)
            vals.push_back(Ops::to_double(v));
        r.sequence = LacunarySequence{std::move(vals), k};
    }
    return ok;
}

template <typename Ops>
void max_lacunary_impl(const MetricSpace & m, double alpha, double k, OracleReport & r)
{
    const std::size_t n = m.size();
    r.witness = {0};
    r.sequence = LacunarySequence{{}, k};
    for (std::size_t size = 2; size <= n; ++size) {
        std::vector<char> pick(n, 0);
        std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(size), 1);
        bool found = false;
        do {
            std::vector<std::size_t> pts;
            for (std::size_t i = 0; i < n; ++i)
                if (pick[i])
                    pts.push_back(i);
            OracleReport tmp;
            if (lacunary_decide<Ops>(m, pts, alpha, k, tmp)) {
                r.witness = std::move(tmp.witness);
                r.sequence = std::move(tmp.sequence);
                found = true;
            }
            r.nodes += tmp.nodes;
        } while (!found && std::prev_permutation(pick.begin(), pick.end()));
        if (!found)
            break;
    }
    r.optimum = r.witness.size();
    r.embeddable = r.optimum == n;
}

// ---------------------------------------------------------------- binary HST

template <typename T>
struct TreePool {
    struct Node {
        T label;
        int left = -1;
        int right = -1;
        std::size_t point = 0;
    };
    std::vector<Node> nodes;

    int leaf(std::size_t p)
    {
        nodes.push_back({T(0), -1, -1, p});
        return static_cast<int>(nodes.size() - 1);
    }
    int join(T label, int a, int b)
    {
        nodes.push_back({std::move(label), a, b, 0});
        return static_cast<int>(nodes.size() - 1);
    }

    template <typename ToDouble>
    HstTree build(int root, const std::vector<std::size_t> & pts, ToDouble to_double) const
    {
        HstBuilder b;
        std::vector<std::uint32_t> handle(nodes.size());
        std::vector<std::pair<int, bool>> stack{{root, false}};
        while (!stack.empty()) {
            auto [u, done] = stack.back();
            stack.pop_back();
            const auto & nd = nodes[static_cast<std::size_t>(u)];
            if (nd.left < 0) {
                handle[static_cast<std::size_t>(u)] = b.leaf(static_cast<PointId>(pts[nd.point]));
            } else if (done) {
                handle[static_cast<std::size_t>(u)] =
                    b.node(to_double(nd.label), {handle[static_cast<std::size_t>(nd.left)],
                                                 handle[static_cast<std::size_t>(nd.right)]});
            } else {
                stack.push_back({u, true});
                stack.push_back({nd.left, false});
                stack.push_back({nd.right, false});
            }
        }
        return b.build(handle[static_cast<std::size_t>(root)]);
    }
};

template <typename Ops>
struct Cross {
    typename Ops::T lo;
    typename Ops::T hi;
};

template <typename Ops>
Cross<Ops> cross(const Local<Ops> & L, Mask a, Mask b)
{
    Cross<Ops> c{L.at(static_cast<std::size_t>(lowest(a)), static_cast<std::size_t>(lowest(b))),
                 L.at(static_cast<std::size_t>(lowest(a)), static_cast<std::size_t>(lowest(b)))};
    for (Mask x = a; x; x &= x - 1)
        for (Mask y = b; y; y &= y - 1) {
            const auto & d = L.at(static_cast<std::size_t>(lowest(x)), static_cast<std::size_t>(lowest(y)));
            if (d < c.lo)
                c.lo = d;
            if (c.hi < d)
                c.hi = d;
        }
    return c;
}

template <typename Ops>
struct HstSearch {
    using T = typename Ops::T;
    Local<Ops> & L;
    T alpha;
    T k;
    std::vector<std::optional<T>> failed;
    std::vector<char> failed_unbounded;
    TreePool<T> pool;
    std::uint64_t nodes = 0;

    HstSearch(Local<Ops> & l, T a, T kk)
        : L(l), alpha(std::move(a)), k(std::move(kk)), failed(Mask{1} << l.n), failed_unbounded(Mask{1} << l.n, 0)
    {
    }

    // Handle of the subtree on success, -1 on failure.
    int run(Mask set, const std::optional<T> & cap)
    {
        ++nodes;
        if (popcount(set) == 1)
            return pool.leaf(static_cast<std::size_t>(lowest(set)));
        if (failed_unbounded[set])
            return -1;
        if (cap && failed[set] && *cap <= *failed[set])
            return -1;
        const Mask low = set & (~set + 1);
        const Mask others = set & ~low;
        // Submasks of `others` give every bipartition once with `low` in A.
        for (Mask sub = others;; sub = (sub - 1) & others) {
            const Mask a = low | sub;
            if (a != set) {
                const Mask b = set & ~a;
                const auto c = cross(L, a, b);
                T label = alpha * c.lo;
                if (cap && *cap < label)
                    label = *cap;
                if (Ops::le(c.hi, label) && Ops::le(L.diam[set], label)) {
                    const T next = label / k;
                    const int left = run(a, next);
                    if (left >= 0) {
                        const int right = run(b, next);
                        if (right >= 0)
                            return pool.join(label, left, right);
                    }
                }
            }
            if (sub == 0)
                break;
        }
        if (!cap)
            failed_unbounded[set] = 1;
        else if (!failed[set] || *failed[set] < *cap)
            failed[set] = *cap;
        return -1;
    }
};

template <typename Ops>
void hst_decide(const MetricSpace & m, double alpha, double k, OracleReport & r)
{
    const std::size_t n = m.size();
    std::vector<std::size_t> pts(n);
    for (std::size_t i = 0; i < n; ++i)
        pts[i] = i;
    r.witness = pts;
    if (n <= 1) {
        r.embeddable = true;
        return;
    }
    Local<Ops> L(m, pts);
    L.fill_diam();
    HstSearch<Ops> s(L, Ops::from(alpha), Ops::from(k));
    const int root = s.run((Mask{1} << n) - 1, std::nullopt);
    r.nodes = s.nodes;
    r.embeddable = root >= 0;
    if (r.embeddable) {
        r.tree = s.pool.build(root, pts, [](const typename Ops::T & x) { return Ops::to_double(x); });
        const auto sorted = r.tree->sorted_points();
        r.witness.assign(sorted.begin(), sorted.end());
    } else {
        r.witness.clear();
    }
}


template <typename Ops>
void max_hst_impl(const MetricSpace & m, double alpha_d, double k_d, OracleReport & r)
{
    using T = typename Ops::T;
    const std::size_t n = m.size();
    std::vector<std::size_t> pts(n);
    for (std::size_t i = 0; i < n; ++i)
        pts[i] = i;
    Local<Ops> L(m, pts);
    const T alpha = Ops::from(alpha_d);
    const T k = Ops::from(k_d);
    const Mask full = (Mask{1} << n) - 1;

    std::vector<std::optional<T>> req(full + 1);
    std::vector<Mask> choice(full + 1, 0);
    Mask best = n > 0 ? 1 : 0;
    for (Mask set = 1; set <= full; ++set) {
        ++r.nodes;
        if (popcount(set) == 1) {
            req[set] = T(0);
            continue;
        }
        const Mask low = set & (~set + 1);
        const Mask others = set & ~low;
        for (Mask sub = others;; sub = (sub - 1) & others) {
            const Mask a = low | sub;
            const Mask b = set & ~a;
            if (a != set && req[a] && req[b]) {
                const auto c = cross(L, a, b);
                T need = c.hi;
                T ka = k * *req[a];
                T kb = k * *req[b];
                if (need < ka)
                    need = ka;
                if (need < kb)
                    need = kb;
                T top = alpha * c.lo;
                if (Ops::le(need, top) && (!req[set] || need < *req[set])) {
                    req[set] = need;
                    choice[set] = a;
                }
            }
            if (sub == 0)
                break;
        }
        if (req[set] && popcount(set) > popcount(best))
            best = set;
    }

    r.optimum = static_cast<std::size_t>(popcount(best));
    r.embeddable = best == full;
    if (r.optimum < 2) {
        r.witness = {0};
        return;
    }
    TreePool<T> pool;
    // Build bottom-up from the recorded bipartitions.
    std::vector<std::pair<Mask, bool>> stack{{best, false}};
    std::vector<int> handle(full + 1, -1);
    while (!stack.empty()) {
        auto [set, done] = stack.back();
        stack.pop_back();
        if (popcount(set) == 1) {
            handle[set] = pool.leaf(static_cast<std::size_t>(lowest(set)));
            continue;
        }
        const Mask a = choice[set], b = set & ~choice[set];
        if (done) {
            handle[set] = pool.join(*req[set], handle[a], handle[b]);
            continue;
        }
        stack.push_back({set, true});
        stack.push_back({a, false});
        stack.push_back({b, false});
    }
    r.tree = pool.build(handle[best], pts, [](const T & x) { return Ops::to_double(x); });
    const auto sorted = r.tree->sorted_points();
    r.witness.assign(sorted.begin(), sorted.end());
}

template <typename Ops>
void four_point_impl(const MetricSpace & s, double alpha, double k, OracleReport & r)
{
    using T = typename Ops::T;
    const std::size_t n = s.size();
    std::vector<std::size_t> pts(n);
    for (std::size_t i = 0; i < n; ++i)
        pts[i] = i;
    Local<Ops> L(s, pts);
    const T ratio = Ops::from(k) / Ops::from(alpha);
    r.embeddable = true;
    auto holds = [&](std::size_t x1, std::size_t x2, std::size_t x3, std::size_t x4) {
        const T & big = tmax(L.at(x1, x2), L.at(x3, x4));
        const T & small = tmin(tmin(L.at(x1, x3), L.at(x1, x4)), tmin(L.at(x2, x3), L.at(x2, x4)));
        return Ops::le(ratio * small, big);
    };
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b)
            for (std::size_t c = b + 1; c < n; ++c)
                for (std::size_t d = c + 1; d < n; ++d) {
                    ++r.nodes;
                    const std::array<std::array<std::size_t, 4>, 3> splits{
                        {{a, b, c, d}, {a, c, b, d}, {a, d, b, c}}};
                    for (const auto & q : splits)
                        if (!holds(q[0], q[1], q[2], q[3])) {
                            r.embeddable = false;
                            r.quadruple = q;
                            r.witness.assign(q.begin(), q.end());
                            return;
                        }
                }
}

template <template <typename> class Fn, typename... Args>
void dispatch(Arithmetic arith, Args &&... args)
{
    if (arith == Arithmetic::ExactRational)
        Fn<ExactOps>::run(std::forward<Args>(args)...);
    else
        Fn<FloatOps>::run(std::forward<Args>(args)...);
}

template <typename Ops>
struct EquilateralFn {
    static void run(const MetricSpace & m, double alpha, OracleReport & r) { r = equilateral_impl<Ops>(m, alpha); }
};
template <typename Ops>
struct LacunaryDecideFn {
    static void run(const MetricSpace & m, double alpha, double k, OracleReport & r)
    {
        std::vector<std::size_t> pts(m.size());
        for (std::size_t i = 0; i < pts.size(); ++i)
            pts[i] = i;
        r.embeddable = lacunary_decide<Ops>(m, pts, alpha, k, r);
        if (!r.embeddable)
            r.witness.clear();
        r.optimum = r.embeddable ? m.size() : 0;
    }
};
template <typename Ops>
struct LacunaryMaxFn {
    static void run(const MetricSpace & m, double alpha, double k, OracleReport & r)
    {
        max_lacunary_impl<Ops>(m, alpha, k, r);
    }
};
template <typename Ops>
struct HstDecideFn {
    static void run(const MetricSpace & m, double alpha, double k, OracleReport & r)
    {
        hst_decide<Ops>(m, alpha, k, r);
        r.optimum = r.embeddable ? m.size() : 0;
    }
};
template <typename Ops>
struct HstMaxFn {
    static void run(const MetricSpace & m, double alpha, double k, OracleReport & r)
    {
        max_hst_impl<Ops>(m, alpha, k, r);
    }
};
template <typename Ops>
struct FourPointFn {
    static void run(const MetricSpace & m, double alpha, double k, OracleReport & r)
    {
        four_point_impl<Ops>(m, alpha, k, r);
    }
};

OracleReport start(OracleQuery q, double alpha, double k, Arithmetic arith)
{
    OracleReport r;
    r.query = q;
    r.alpha = alpha;
    r.k = k;
    r.arithmetic = arith;
    return r;
}

void finish(OracleReport & r, OracleQuery q, double alpha, double k, Arithmetic arith, const Timer & t)
{
    r.query = q;
    r.alpha = alpha;
    r.k = k;
    r.arithmetic = arith;
    r.ms = t.ms();
}

void require_points(const MetricSpace & m)
{
    if (m.size() < 2)
        throw Error("TooSmall", "the oracle needs at least two points");
    if (m.size() > 63)
        throw CapExceeded("CapExceeded", "more than 63 points");
}

}  // namespace

Caps parse_caps(const std::string & text)
{
    Caps caps;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw UsageError("BadConfig", "line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        std::size_t parsed = 0;
        std::size_t pos = 0;
        try {
            parsed = std::stoul(value, &pos);
        } catch (const std::exception &) {
            pos = 0;
        }
        if (pos == 0 || pos != value.size() || value.front() == '-')
            throw UsageError("BadConfig", "line " + std::to_string(lineno) + ": '" + value + "' is not a count");
        if (key == "equilateral_n")
            caps.equilateral_n = parsed;
        else if (key == "lacunary_perm")
            caps.lacunary_perm = parsed;
        else if (key == "lacunary_subset_n")
            caps.lacunary_subset_n = parsed;
        else if (key == "hst_topology")
            caps.hst_topology = parsed;
        else if (key == "hst_subset_n")
            caps.hst_subset_n = parsed;
        else if (key == "composition_size")
            caps.composition_size = parsed;
        else if (key == "ramsey_exact")
            caps.ramsey_exact = parsed;
        else
            throw UsageError("BadConfig", "line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
    return caps;
}

Caps load_caps(const std::string & path)
{
    std::ifstream in(path);
    if (!in)
        throw UsageError("BadConfig", "cannot read caps file " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_caps(buf.str());
}

const char * to_string(OracleQuery q)
{
    switch (q) {
    case OracleQuery::Equilateral: return "equilateral";
    case OracleQuery::Lacunary: return "lacunary";
    case OracleQuery::BinaryHst: return "binary_hst";
    case OracleQuery::FourPoint: return "four_point";
    }
    return "unknown";
}

OracleReport max_equilateral_subset(const MetricSpace & m, double alpha, const Caps & caps, Arithmetic arith)
{
    Timer t;
    require_alpha(alpha);
    require_points(m);
    require_cap(m.size(), caps.equilateral_n, "max_equilateral_subset");
    OracleReport r;
    dispatch<EquilateralFn>(arith, m, alpha, r);
    finish(r, OracleQuery::Equilateral, alpha, 1.0, arith, t);
    return r;
}

OracleReport is_lacunary_embeddable(const MetricSpace & s, double alpha, double k, const Caps & caps,
                                    Arithmetic arith)
{
    Timer t;
    require_alpha(alpha);
    require_k(k, false);
    require_cap(s.size(), caps.lacunary_perm, "is_lacunary_embeddable");
    OracleReport r = start(OracleQuery::Lacunary, alpha, k, arith);
    dispatch<LacunaryDecideFn>(arith, s, alpha, k, r);
    finish(r, OracleQuery::Lacunary, alpha, k, arith, t);
    return r;
}

OracleReport max_lacunary_subset(const MetricSpace & m, double alpha, double k, const Caps & caps, Arithmetic arith)
{
    Timer t;
    require_alpha(alpha);
    require_k(k, false);
    require_points(m);
    require_cap(m.size(), caps.lacunary_subset_n, "max_lacunary_subset");
    OracleReport r = start(OracleQuery::Lacunary, alpha, k, arith);
    dispatch<LacunaryMaxFn>(arith, m, alpha, k, r);
    finish(r, OracleQuery::Lacunary, alpha, k, arith, t);
    return r;
}

OracleReport is_binary_hst_embeddable(const MetricSpace & s, double alpha, double k, const Caps & caps,
                                      Arithmetic arith)
{
    Timer t;
    require_alpha(alpha);
    require_k(k, true);
    require_cap(s.size(), caps.hst_topology, "is_binary_hst_embeddable");
    OracleReport r = start(OracleQuery::BinaryHst, alpha, k, arith);
    dispatch<HstDecideFn>(arith, s, alpha, k, r);
    finish(r, OracleQuery::BinaryHst, alpha, k, arith, t);
    return r;
}

OracleReport max_binary_hst_subset(const MetricSpace & m, double alpha, double k, const Caps & caps,
                                   Arithmetic arith)
{
    Timer t;
    require_alpha(alpha);
    require_k(k, true);
    require_points(m);
    require_cap(m.size(), caps.hst_subset_n, "max_binary_hst_subset");
    OracleReport r = start(OracleQuery::BinaryHst, alpha, k, arith);
    dispatch<HstMaxFn>(arith, m, alpha, k, r);
    finish(r, OracleQuery::BinaryHst, alpha, k, arith, t);
    return r;
}

namespace {

void require_bound_params(double alpha, double k, double phi)
{
    if (!(k > 1.0) || !(alpha >= 1.0) || !(phi >= 1.0) || !std::isfinite(alpha) || !std::isfinite(k) ||
        !std::isfinite(phi))
        throw UsageError("BadParameters", "bounds need k > 1, alpha >= 1, phi >= 1");
}

}  // namespace

double bound_lacunary_size(double alpha, double k, double phi)
{
    require_bound_params(alpha, k, phi);
    return 2.0 + std::log(alpha * phi) / std::log(k);
}

double bound_binary_hst_size(double alpha, double k, double phi)
{
    require_bound_params(alpha, k, phi);
    return std::pow(2.0, 1.0 + std::log(alpha * phi) / std::log(k));
}

OracleReport four_point_check(const MetricSpace & s, double alpha, double k, Arithmetic arith)
{
    Timer t;
    require_alpha(alpha);
    require_k(k, false);
    OracleReport r = start(OracleQuery::FourPoint, alpha, k, arith);
    dispatch<FourPointFn>(arith, s, alpha, k, r);
    finish(r, OracleQuery::FourPoint, alpha, k, arith, t);
    return r;
}

std::vector<std::string> OracleReport::check(const MetricSpace & m) const
{
    std::vector<std::string> errs;
    std::set<std::size_t> seen;
    for (std::size_t i : witness) {
        if (i >= m.size())
            errs.push_back("witness index " + std::to_string(i) + " out of range");
        else if (!seen.insert(i).second)
            errs.push_back("witness index " + std::to_string(i) + " repeated");
    }
    if (!errs.empty())
        return errs;

    if (query == OracleQuery::FourPoint) {
        if (quadruple) {
            const auto & q = *quadruple;
            const double big = std::max(m(q[0], q[1]), m(q[2], q[3]));
            const double small = std::min({m(q[0], q[2]), m(q[0], q[3]), m(q[1], q[2]), m(q[1], q[3])});
            if (geq(big, (k / alpha) * small))
                errs.push_back("reported quadruple satisfies the four-point inequality");
        }
        return errs;
    }

    if (optimum > 0 && optimum != witness.size())
        errs.push_back("optimum " + std::to_string(optimum) + " differs from witness size " +
                       std::to_string(witness.size()));
    if (witness.size() < 2)
        return errs;
    const auto sub = restrict(m, witness);

    switch (query) {
    case OracleQuery::Equilateral:
        if (!leq(sub.induced.diameter(), alpha * sub.induced.min_distance()))
            errs.push_back("witness aspect ratio exceeds alpha");
        break;
    case OracleQuery::Lacunary: {
        if (!sequence) {
            errs.push_back("lacunary witness without a sequence");
            break;
        }
        if (!sequence->valid()) {
            errs.push_back("witness sequence is not k-lacunary");
            break;
        }
        if (sequence->values.size() + 1 != witness.size()) {
            errs.push_back("sequence length does not match the witness");
            break;
        }
        const auto cert = certify(identity_map(witness.size()), sub.induced, lacunary_metric(*sequence));
        if (!leq(cert.distortion, alpha))
            errs.push_back("witness distortion " + std::to_string(cert.distortion) + " exceeds alpha");
        break;
    }
    case OracleQuery::BinaryHst: {
        if (!tree) {
            errs.push_back("binary HST witness without a tree");
            break;
        }
        if (!is_binary(*tree))
            errs.push_back("witness tree is not binary");
        if (!geq(hst_separation(*tree), k))
            errs.push_back("witness tree separation below k");
        const auto pts = tree->sorted_points();
        std::vector<std::size_t> sorted(witness);
        std::sort(sorted.begin(), sorted.end());
        if (!std::equal(pts.begin(), pts.end(), sorted.begin(), sorted.end())) {
            errs.push_back("tree leaves differ from the witness");
            break;
        }
        const auto sorted_sub = restrict(m, sorted);
        const auto cert = certify(identity_map(sorted.size()), sorted_sub.induced, hst_metric(*tree));
        if (!leq(cert.distortion, alpha))
            errs.push_back("witness distortion " + std::to_string(cert.distortion) + " exceeds alpha");
        break;
    }
    case OracleQuery::FourPoint:
        break;
    }
    return errs;
}

}  // namespace mdich
