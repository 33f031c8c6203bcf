#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace mdich {

/// Fixed-size dynamic bitset, just enough for clique search.
class Bitset {
public:
    Bitset() = default;
    explicit Bitset(std::size_t n) : n_(n), words_((n + 63) / 64, 0) {}

    std::size_t size() const noexcept { return n_; }
    void set(std::size_t i) { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }
    void reset(std::size_t i) { words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }
    bool test(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }
    bool any() const;
    std::size_t count() const;
    /// Index of the lowest set bit, or size() when empty.
    std::size_t first() const;

    Bitset & operator&=(const Bitset & o);
    Bitset & subtract(const Bitset & o);

private:
    std::size_t n_ = 0;
    std::vector<std::uint64_t> words_;
};

/// Undirected simple graph as adjacency bitsets.
struct AdjacencyGraph {
    std::vector<Bitset> adj;

    explicit AdjacencyGraph(std::size_t n = 0) : adj(n, Bitset(n)) {}
    std::size_t size() const noexcept { return adj.size(); }
    void add_edge(std::size_t a, std::size_t b)
    {
        adj[a].set(b);
        adj[b].set(a);
    }
    AdjacencyGraph complement() const;
};

struct CliqueSearch {
    std::vector<std::size_t> clique;  ///< ascending vertex indices
    std::uint64_t nodes = 0;          ///< branch-and-bound nodes expanded
};

/// Exact maximum clique by branch and bound with a greedy-colouring bound.
/// Only cliques strictly larger than `at_least` are searched for; when none
/// exists the returned clique is empty.
CliqueSearch max_clique(const AdjacencyGraph & g, std::size_t at_least = 0);

/// Lowest-index-first greedy clique: a lower bound on the clique number.
std::vector<std::size_t> greedy_clique(const AdjacencyGraph & g);

}  // namespace mdich
