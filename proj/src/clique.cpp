#include "mdich/clique.hpp"

#include <algorithm>
#include <bit>

namespace mdich {

bool Bitset::any() const
{
    return std::any_of(words_.begin(), words_.end(), [](std::uint64_t w) { return w != 0; });
}

std::size_t Bitset::count() const
{
    std::size_t c = 0;
    for (auto w : words_)
        c += static_cast<std::size_t>(std::popcount(w));
    return c;
}

std::size_t Bitset::first() const
{
    for (std::size_t i = 0; i < words_.size(); ++i)
        if (words_[i])
            return i * 64 + static_cast<std::size_t>(std::countr_zero(words_[i]));
    return n_;
}

Bitset & Bitset::operator&=(const Bitset & o)
{
    for (std::size_t i = 0; i < words_.size(); ++i)
        words_[i] &= o.words_[i];
    return *this;
}

Bitset & Bitset::subtract(const Bitset & o)
{
    for (std::size_t i = 0; i < words_.size(); ++i)
        words_[i] &= ~o.words_[i];
    return *this;
}

AdjacencyGraph AdjacencyGraph::complement() const
{
    AdjacencyGraph c(size());
    for (std::size_t a = 0; a < size(); ++a)
        for (std::size_t b = a + 1; b < size(); ++b)
            if (!adj[a].test(b))
                c.add_edge(a, b);
    return c;
}

namespace {

// Tomita-style search: candidates are greedily coloured, vertices are tried
// in reverse colour order and the colour number bounds the clique that can
// still be reached.
class CliqueSearcher {
public:
    CliqueSearcher(const AdjacencyGraph & g, std::size_t at_least) : g_(g), best_size_(at_least) {}

    CliqueSearch run()
    {
        Bitset all(g_.size());
        for (std::size_t v = 0; v < g_.size(); ++v)
            all.set(v);
        expand(all);
        std::sort(best_.begin(), best_.end());
        return {best_, nodes_};
    }

private:
    void colour(const Bitset & cand, std::vector<std::size_t> & order, std::vector<std::size_t> & bounds) const
    {
        Bitset uncoloured = cand;
        std::size_t c = 0;
        while (uncoloured.any()) {
            ++c;
            Bitset q = uncoloured;
            while (q.any()) {
                const std::size_t v = q.first();
                q.reset(v);
                q.subtract(g_.adj[v]);
                uncoloured.reset(v);
                order.push_back(v);
                bounds.push_back(c);
            }
        }
    }

    void expand(Bitset cand)
    {
        ++nodes_;
        std::vector<std::size_t> order, bounds;
        colour(cand, order, bounds);
        for (std::size_t i = order.size(); i-- > 0;) {
            if (current_.size() + bounds[i] <= best_size_)
                return;
            const std::size_t v = order[i];
            current_.push_back(v);
            Bitset next = cand;
            next &= g_.adj[v];
            if (next.any()) {
                expand(next);
            } else if (current_.size() > best_size_) {
                best_size_ = current_.size();
                best_ = current_;
            }
            current_.pop_back();
            cand.reset(v);
        }
    }

    const AdjacencyGraph & g_;
    std::size_t best_size_;
    std::vector<std::size_t> best_, current_;
    std::uint64_t nodes_ = 0;
};

}  // namespace

CliqueSearch max_clique(const AdjacencyGraph & g, std::size_t at_least)
{
    if (g.size() == 0)
        return {};
    return CliqueSearcher(g, at_least).run();
}

std::vector<std::size_t> greedy_clique(const AdjacencyGraph & g)
{
    std::vector<std::size_t> clique;
    if (g.size() == 0)
        return clique;
    Bitset cand(g.size());
    for (std::size_t v = 0; v < g.size(); ++v)
        cand.set(v);
    while (cand.any()) {
        const std::size_t v = cand.first();
        clique.push_back(v);
        cand.reset(v);
        cand &= g.adj[v];
    }
    return clique;
}

}  // namespace mdich
