#include "mdich/oracle_reference.hpp"

#include <algorithm>
#include <functional>

#include "mdich/numeric.hpp"

namespace mdich::reference {

namespace {

struct Shape {
    std::vector<int> left, right, parent;
    int root = 0;
};

// Calls visit(shape) for every rooted binary shape on leaves 0..m-1 (leaf i
// is node i; internal nodes follow). Built by inserting each new leaf above
// every existing node.
void each_shape(std::size_t m, const std::function<void(const Shape &)> & visit)
{
    if (m == 1) {
        Shape s{{-1}, {-1}, {-1}, 0};
        visit(s);
        return;
    }
    std::function<void(Shape &, std::size_t)> grow = [&](Shape & s, std::size_t next) {
        if (next == m) {
            visit(s);
            return;
        }
        const std::size_t existing = s.left.size();
        for (std::size_t v = 0; v < existing; ++v) {
            if (v < m && v >= next)
                continue;  // leaf not placed yet
            Shape t = s;
            const int w = static_cast<int>(t.left.size());
            t.left.push_back(static_cast<int>(v));
            t.right.push_back(static_cast<int>(next));
            const int p = t.parent[v];
            t.parent.push_back(p);
            if (p < 0)
                t.root = w;
            else if (t.left[static_cast<std::size_t>(p)] == static_cast<int>(v))
                t.left[static_cast<std::size_t>(p)] = w;
            else
                t.right[static_cast<std::size_t>(p)] = w;
            t.parent[v] = w;
            t.parent[next] = w;
            grow(t, next + 1);
        }
    };
    // Nodes 0..m-1 are leaves; start with leaves 0 and 1 under node m.
    Shape s;
    s.left.assign(m, -1);
    s.right.assign(m, -1);
    s.parent.assign(m, -1);
    s.left.push_back(0);
    s.right.push_back(1);
    s.parent.push_back(-1);
    s.parent[0] = s.parent[1] = static_cast<int>(m);
    s.root = static_cast<int>(m);
    grow(s, 2);
}

double dist(const MetricSpace & m, const std::vector<std::size_t> & pts, int a, int b)
{
    return m(pts[static_cast<std::size_t>(a)], pts[static_cast<std::size_t>(b)]);
}

}  // namespace

std::size_t topology_count(std::size_t leaves)
{
    std::size_t count = 0;
    each_shape(leaves, [&](const Shape &) { ++count; });
    return count;
}

bool flat_subset(const MetricSpace & m, const std::vector<std::size_t> & pts, double alpha)
{
    if (pts.size() < 2)
        return true;
    double hi = 0.0, lo = m(pts[0], pts[1]);
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j) {
            hi = std::max(hi, m(pts[i], pts[j]));
            lo = std::min(lo, m(pts[i], pts[j]));
        }
    return leq(hi, alpha * lo);
}

bool lacunary_embeddable(const MetricSpace & m, const std::vector<std::size_t> & pts, double alpha, double k)
{
    const std::size_t n = pts.size();
    if (n < 2)
        return true;
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i)
        order[i] = i;
    do {
        bool ok = true;
        double next = 0.0;
        for (std::size_t i = n - 1; i-- > 0 && ok;) {
            double hi = 0.0, lo = -1.0;
            for (std::size_t j = i + 1; j < n; ++j) {
                const double d = m(pts[order[i]], pts[order[j]]);
                hi = std::max(hi, d);
                lo = lo < 0.0 ? d : std::min(lo, d);
            }
            const double a = std::max(hi, k * next);
            ok = leq(a, alpha * lo);
            next = a;
        }
        if (ok)
            return true;
    } while (std::next_permutation(order.begin(), order.end()));
    return false;
}

bool binary_hst_embeddable(const MetricSpace & m, const std::vector<std::size_t> & pts, double alpha, double k)
{
    const std::size_t n = pts.size();
    if (n < 2)
        return true;
    bool found = false;
    each_shape(n, [&](const Shape & s) {
        if (found)
            return;
        const std::size_t total = s.left.size();
        std::vector<std::vector<int>> leaves(total);
        std::vector<double> label(total, 0.0);
        bool ok = true;
        // Post-order by explicit stack.
        std::vector<std::pair<int, bool>> stack{{s.root, false}};
        while (!stack.empty() && ok) {
            auto [u, done] = stack.back();
            stack.pop_back();
            const auto uu = static_cast<std::size_t>(u);
            if (s.left[uu] < 0) {
                leaves[uu] = {u};
                continue;
            }
            if (!done) {
                stack.push_back({u, true});
                stack.push_back({s.left[uu], false});
                stack.push_back({s.right[uu], false});
                continue;
            }
            const auto & a = leaves[static_cast<std::size_t>(s.left[uu])];
            const auto & b = leaves[static_cast<std::size_t>(s.right[uu])];
            double hi = 0.0, lo = -1.0;
            for (int x : a)
                for (int y : b) {
                    const double d = dist(m, pts, x, y);
                    hi = std::max(hi, d);
                    lo = lo < 0.0 ? d : std::min(lo, d);
                }
            const double need = std::max({hi, k * label[static_cast<std::size_t>(s.left[uu])],
                                          k * label[static_cast<std::size_t>(s.right[uu])]});
            ok = leq(need, alpha * lo);
            label[uu] = need;
            leaves[uu] = a;
            leaves[uu].insert(leaves[uu].end(), b.begin(), b.end());
        }
        found = ok;
    });
    return found;
}

namespace {

std::size_t max_over_subsets(std::size_t n, const std::function<bool(const std::vector<std::size_t> &)> & ok)
{
    std::size_t best = std::min<std::size_t>(n, 1);
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
        std::vector<std::size_t> pts;
        for (std::size_t i = 0; i < n; ++i)
            if (mask >> i & 1u)
                pts.push_back(i);
        if (pts.size() > best && ok(pts))
            best = pts.size();
    }
    return best;
}

}  // namespace

std::size_t max_equilateral(const MetricSpace & m, double alpha)
{
    return max_over_subsets(m.size(), [&](const auto & pts) { return flat_subset(m, pts, alpha); });
}

std::size_t max_lacunary(const MetricSpace & m, double alpha, double k)
{
    return max_over_subsets(m.size(), [&](const auto & pts) { return lacunary_embeddable(m, pts, alpha, k); });
}

std::size_t max_binary_hst(const MetricSpace & m, double alpha, double k)
{
    return max_over_subsets(m.size(), [&](const auto & pts) { return binary_hst_embeddable(m, pts, alpha, k); });
}

}  // namespace mdich::reference
