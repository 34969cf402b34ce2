#pragma once

#include "vc2reg/core/hypergraph.hpp"
#include "vc2reg/core/rational.hpp"

#include <boost/dynamic_bitset.hpp>

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <unordered_map>
#include <utility>
#include <vector>

namespace vc2reg {

using Bitset = boost::dynamic_bitset<std::uint64_t>;
using LocalEdge = std::pair<std::uint32_t, std::uint32_t>;

template <class F>
inline void for_each_bit(const Bitset& b, F&& f) {
    for (auto i = b.find_first(); i != Bitset::npos; i = b.find_next(i)) f(i);
}

inline void require_disjoint_sides(const std::vector<Vertex>& left, const std::vector<Vertex>& right) {
    std::vector<Vertex> all(left);
    all.insert(all.end(), right.begin(), right.end());
    std::sort(all.begin(), all.end());
    if (std::adjacent_find(all.begin(), all.end()) != all.end())
        throw std::invalid_argument("bipartite sides must be disjoint lists of distinct vertices");
}

// Bipartite graph between two ordered vertex lists. Adjacency is held as bitset rows
// (left -> right) and columns (right -> left); indices are positions in the lists.
class BipartiteGraph {
public:
    BipartiteGraph() = default;

    BipartiteGraph(std::vector<Vertex> left, std::vector<Vertex> right, const std::vector<LocalEdge>& edges)
        : left_(std::move(left)), right_(std::move(right)) {
        require_disjoint_sides(left_, right_);
        init_empty();
        for (auto [i, j] : edges) {
            if (i >= left_.size() || j >= right_.size()) throw std::out_of_range("edge index out of range");
            if (!rows_[i].test(j)) ++edge_count_;
            rows_[i].set(j);
            cols_[j].set(i);
        }
    }

    // Rows given directly (each of size |right|).
    static BipartiteGraph from_rows(std::vector<Vertex> left, std::vector<Vertex> right, std::vector<Bitset> rows) {
        BipartiteGraph g;
        g.left_ = std::move(left);
        g.right_ = std::move(right);
        require_disjoint_sides(g.left_, g.right_);
        if (rows.size() != g.left_.size()) throw std::invalid_argument("row count mismatch");
        g.init_empty();
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != g.right_.size()) throw std::invalid_argument("row width mismatch");
            g.edge_count_ += rows[i].count();
            for_each_bit(rows[i], [&](std::size_t j) { g.cols_[j].set(i); });
        }
        g.rows_ = std::move(rows);
        return g;
    }

    static BipartiteGraph from_labels(std::vector<Vertex> left, std::vector<Vertex> right,
                                      const std::vector<std::pair<Vertex, Vertex>>& edges) {
        std::unordered_map<Vertex, std::uint32_t> li, ri;
        for (std::uint32_t i = 0; i < left.size(); ++i) li[left[i]] = i;
        for (std::uint32_t j = 0; j < right.size(); ++j) ri[right[j]] = j;
        std::vector<LocalEdge> local;
        local.reserve(edges.size());
        for (auto [u, w] : edges) {
            auto a = li.find(u);
            auto b = ri.find(w);
            if (a == li.end() || b == ri.end()) throw std::invalid_argument("edge endpoint not on its side");
            local.emplace_back(a->second, b->second);
        }
        return BipartiteGraph(std::move(left), std::move(right), local);
    }

    const std::vector<Vertex>& left() const { return left_; }
    const std::vector<Vertex>& right() const { return right_; }
    std::size_t nl() const { return left_.size(); }
    std::size_t nr() const { return right_.size(); }
    std::size_t edge_count() const { return edge_count_; }
    bool has(std::size_t i, std::size_t j) const { return rows_[i].test(j); }
    const std::vector<Bitset>& rows() const { return rows_; }
    const std::vector<Bitset>& cols() const { return cols_; }
    const Bitset& row(std::size_t i) const { return rows_[i]; }
    const Bitset& col(std::size_t j) const { return cols_[j]; }

    Rational density() const {
        if (left_.empty() || right_.empty()) return 0;
        return make_rational(edge_count_, BigInt(left_.size()) * right_.size());
    }

    std::vector<LocalEdge> local_edges() const {
        std::vector<LocalEdge> out;
        out.reserve(edge_count_);
        for (std::uint32_t i = 0; i < rows_.size(); ++i)
            for_each_bit(rows_[i], [&](std::size_t j) { out.emplace_back(i, static_cast<std::uint32_t>(j)); });
        return out;
    }

    std::vector<std::pair<Vertex, Vertex>> edges() const {
        std::vector<std::pair<Vertex, Vertex>> out;
        out.reserve(edge_count_);
        for (auto [i, j] : local_edges()) out.emplace_back(left_[i], right_[j]);
        return out;
    }

    BipartiteGraph complement() const {
        std::vector<Bitset> rows = rows_;
        for (auto& r : rows) r.flip();
        return from_rows(left_, right_, std::move(rows));
    }

    bool same_sides(const BipartiteGraph& o) const { return left_ == o.left_ && right_ == o.right_; }
    bool operator==(const BipartiteGraph& o) const { return same_sides(o) && rows_ == o.rows_; }

private:
    void init_empty() {
        rows_.assign(left_.size(), Bitset(right_.size()));
        cols_.assign(right_.size(), Bitset(left_.size()));
        edge_count_ = 0;
    }

    std::vector<Vertex> left_, right_;
    std::vector<Bitset> rows_, cols_;
    std::size_t edge_count_ = 0;
};

// Every cross pair carries a color in {0,1,2}. Labels are opaque integers.
class EdgeColoredBipartiteGraph {
public:
    EdgeColoredBipartiteGraph() = default;
    EdgeColoredBipartiteGraph(std::vector<std::int64_t> left, std::vector<std::int64_t> right,
                              std::vector<std::uint8_t> colors)
        : left_(std::move(left)), right_(std::move(right)), colors_(std::move(colors)) {
        if (colors_.size() != left_.size() * right_.size())
            throw std::invalid_argument("color table must cover every cross pair exactly once");
        for (int c = 0; c < 3; ++c) by_color_[c].assign(left_.size(), Bitset(right_.size()));
        for (std::size_t a = 0; a < left_.size(); ++a)
            for (std::size_t b = 0; b < right_.size(); ++b) {
                auto c = colors_[a * right_.size() + b];
                if (c > 2) throw std::invalid_argument("color outside {0,1,2}");
                by_color_[c][a].set(b);
            }
    }

    std::size_t na() const { return left_.size(); }
    std::size_t nb() const { return right_.size(); }
    const std::vector<std::int64_t>& left() const { return left_; }
    const std::vector<std::int64_t>& right() const { return right_; }
    std::uint8_t color(std::size_t a, std::size_t b) const { return colors_[a * right_.size() + b]; }
    const Bitset& neighbors(int c, std::size_t a) const { return by_color_[c][a]; }
    const std::vector<std::uint8_t>& colors() const { return colors_; }

    std::size_t color_count(int c) const {
        std::size_t s = 0;
        for (const auto& r : by_color_[c]) s += r.count();
        return s;
    }

private:
    std::vector<std::int64_t> left_, right_;
    std::vector<std::uint8_t> colors_;
    std::vector<Bitset> by_color_[3];
};

// Colored cross triples of three index sets (colors stored densely, a-major).
class EdgeColoredTripartite3Graph {
public:
    EdgeColoredTripartite3Graph() = default;
    EdgeColoredTripartite3Graph(std::size_t na, std::size_t nb, std::size_t nc, std::vector<std::uint8_t> colors)
        : na_(na), nb_(nb), nc_(nc), colors_(std::move(colors)) {
        if (colors_.size() != na * nb * nc) throw std::invalid_argument("color table must cover every cross triple");
        for (auto c : colors_)
            if (c > 2) throw std::invalid_argument("color outside {0,1,2}");
    }
    std::size_t na() const { return na_; }
    std::size_t nb() const { return nb_; }
    std::size_t nc() const { return nc_; }
    std::uint8_t color(std::size_t a, std::size_t b, std::size_t c) const { return colors_[(a * nb_ + b) * nc_ + c]; }

private:
    std::size_t na_ = 0, nb_ = 0, nc_ = 0;
    std::vector<std::uint8_t> colors_;
};

}  // namespace vc2reg
