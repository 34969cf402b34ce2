#pragma once

#include "vc2reg/core/bipartite.hpp"
#include "vc2reg/core/hypergraph.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <unordered_set>
#include <vector>

namespace vc2reg {

struct SetSystem {
    std::size_t ground = 0;
    std::vector<Bitset> sets;  // each of size `ground`

    static SetSystem from_lists(std::size_t ground, const std::vector<std::vector<std::size_t>>& lists) {
        SetSystem s{ground, {}};
        for (const auto& l : lists) {
            Bitset b(ground);
            for (auto x : l) {
                if (x >= ground) throw std::out_of_range("set element outside the ground set");
                b.set(x);
            }
            s.sets.push_back(std::move(b));
        }
        return s;
    }
};

// Exhaustive VC-dimension; shattered sets are closed downward, so sizes are tried upward
// and the search stops at the first size with no shattered set.
inline int vc_dim(const SetSystem& s, std::size_t max_ground = 24) {
    if (s.ground > max_ground) throw std::invalid_argument("vc_dim: ground set too large for exhaustive mode");
    std::vector<std::uint32_t> masks;
    for (const auto& b : s.sets) {
        if (b.size() != s.ground) throw std::invalid_argument("vc_dim: set size differs from ground");
        std::uint32_t m = 0;
        for_each_bit(b, [&](std::size_t i) { m |= 1u << i; });
        masks.push_back(m);
    }
    std::sort(masks.begin(), masks.end());
    masks.erase(std::unique(masks.begin(), masks.end()), masks.end());
    if (masks.empty()) return 0;
    const int n = static_cast<int>(s.ground);
    int best = 0;
    std::vector<std::uint8_t> seen;
    for (int d = 1; d <= n && (std::size_t{1} << d) <= masks.size(); ++d) {
        bool found = false;
        std::vector<int> idx(d);
        for (int i = 0; i < d; ++i) idx[i] = i;
        seen.assign(std::size_t{1} << d, 0);
        while (!found) {
            std::fill(seen.begin(), seen.end(), 0);
            std::size_t distinct = 0;
            for (auto m : masks) {
                std::uint32_t trace = 0;
                for (int i = 0; i < d; ++i) trace |= ((m >> idx[i]) & 1u) << i;
                if (!seen[trace]) {
                    seen[trace] = 1;
                    if (++distinct == seen.size()) break;
                }
            }
            if (distinct == seen.size()) {
                found = true;
                break;
            }
            int i = d - 1;
            while (i >= 0 && idx[i] == n - d + i) --i;
            if (i < 0) break;
            ++idx[i];
            for (int k = i + 1; k < d; ++k) idx[k] = idx[k - 1] + 1;
        }
        if (!found) break;
        best = d;
    }
    return best;
}

// ---------------------------------------------------------------------------------------
// VC2

struct Vc2Witness {
    std::vector<Vertex> a, b;
    std::vector<Vertex> c;  // indexed by the bitmask of S, cell (i,j) -> bit i*k+j
};

struct Vc2Result {
    int dimension = 0;        // largest k verified (a lower bound when incomplete)
    bool incomplete = false;  // evaluation budget ran out before the search finished
    std::uint64_t evaluations = 0;
    std::optional<Vc2Witness> witness;  // for `dimension` when >= 1
};

namespace detail {

template <class F>
bool for_each_combination(std::size_t n, std::size_t k, F&& f) {
    if (k > n) return true;
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = i;
    for (;;) {
        if (!f(idx)) return false;
        if (k == 0) return true;
        std::size_t i = k;
        while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
        if (i == 0) return true;
        ++idx[i - 1];
        for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
}

// Searches a k x k grid witness; returns true on success, false if none exists.
// Sets `exhausted` when the budget ran out first.
inline bool vc2_search(const Hypergraph3& h, int k, std::uint64_t budget, std::uint64_t& evals, bool& exhausted,
                       Vc2Witness& out) {
    const std::size_t n = h.n();
    const std::size_t cells = static_cast<std::size_t>(k) * k;
    const std::size_t patterns = std::size_t{1} << cells;
    if (n < 2 * static_cast<std::size_t>(k) + patterns) return false;
    // Permuting a's or b's permutes the patterns, so unordered choices suffice.
    std::vector<std::uint8_t> hit(patterns);
    std::vector<Vertex> cover(patterns);
    std::vector<std::uint8_t> used(n);
    bool success = false;
    for_each_combination(n, k, [&](const std::vector<std::size_t>& ai) {
        for (auto x : ai) used[x] = 1;
        std::vector<std::size_t> rest;
        for (std::size_t v = 0; v < n; ++v)
            if (!used[v]) rest.push_back(v);
        for_each_combination(rest.size(), k, [&](const std::vector<std::size_t>& bi) {
            for (auto y : bi) used[rest[y]] = 1;
            std::fill(hit.begin(), hit.end(), 0);
            std::size_t distinct = 0;
            for (std::size_t c = 0; c < n && distinct < patterns; ++c) {
                if (used[c]) continue;
                std::size_t pat = 0;
                for (int i = 0; i < k; ++i)
                    for (int j = 0; j < k; ++j)
                        if (h.contains(static_cast<Vertex>(ai[i]), static_cast<Vertex>(rest[bi[j]]),
                                       static_cast<Vertex>(c)))
                            pat |= std::size_t{1} << (i * k + j);
                evals += cells;
                if (!hit[pat]) {
                    hit[pat] = 1;
                    cover[pat] = static_cast<Vertex>(c);
                    ++distinct;
                }
            }
            for (auto y : bi) used[rest[y]] = 0;
            if (distinct == patterns) {
                out.a.assign(ai.begin(), ai.end());
                out.b.clear();
                for (auto y : bi) out.b.push_back(static_cast<Vertex>(rest[y]));
                out.c = cover;
                success = true;
                return false;
            }
            if (evals > budget) {
                exhausted = true;
                return false;
            }
            return true;
        });
        for (auto x : ai) used[x] = 0;
        return !success && !exhausted;
    });
    return success;
}

}  // namespace detail

// Largest k <= k_max with a distinct-vertex VC2 witness. A witness for k restricts to one
// for k-1, so k is raised until the first failure.
inline Vc2Result vc2_dim(const Hypergraph3& h, int k_max, std::uint64_t budget = 2'000'000'000ULL) {
    if (k_max < 0 || k_max > 4) throw std::invalid_argument("vc2_dim: k_max must lie in [0,4]");
    Vc2Result r;
    for (int k = 1; k <= k_max; ++k) {
        Vc2Witness w;
        bool exhausted = false;
        bool ok = detail::vc2_search(h, k, budget, r.evaluations, exhausted, w);
        if (ok) {
            r.dimension = k;
            r.witness = std::move(w);
            continue;
        }
        r.incomplete = exhausted;
        break;
    }
    return r;
}

// ---------------------------------------------------------------------------------------
// U(k)

struct UkGraph {
    int k = 0;
    std::vector<Vertex> a_vertices;  // a_1..a_k -> labels 0..k-1
    std::vector<Vertex> c_vertices;  // c_S, S as bitmask over [k] -> labels k + S
    std::vector<std::pair<Vertex, Vertex>> edges;
};

inline UkGraph build_uk(int k) {
    if (k < 1 || k > 16) throw std::invalid_argument("build_uk: k must lie in [1,16]");
    UkGraph g;
    g.k = k;
    for (int i = 0; i < k; ++i) g.a_vertices.push_back(static_cast<Vertex>(i));
    const std::size_t subsets = std::size_t{1} << k;
    for (std::size_t s = 0; s < subsets; ++s) g.c_vertices.push_back(static_cast<Vertex>(k + s));
    for (std::size_t s = 0; s < subsets; ++s)
        for (int i = 0; i < k; ++i)
            if (s >> i & 1u) g.edges.emplace_back(g.a_vertices[i], g.c_vertices[s]);
    return g;
}

// Bipartite graph of U(k) (left = A_k, right = C).
inline BipartiteGraph uk_bipartite(const UkGraph& u) {
    return BipartiteGraph::from_labels(u.a_vertices, u.c_vertices, u.edges);
}

struct UkCopy {
    std::vector<std::size_t> left;   // v_1..v_k (indices into A)
    std::vector<std::size_t> right;  // w_S indexed by bitmask S
};

// DFS over increasing k-subsets of A, keeping the 2^i cells of B realising each 0/1 pattern
// on the chosen prefix; a branch dies as soon as a cell is empty.
inline std::optional<UkCopy> find_e0e1_uk_copy(const EdgeColoredBipartiteGraph& g, int k, int k_limit = 6) {
    if (k < 0 || k > k_limit) throw std::invalid_argument("find_e0e1_uk_copy: k outside exhaustive range");
    const std::size_t na = g.na(), nb = g.nb();
    if (k == 0) {
        if (nb == 0) return std::nullopt;
        return UkCopy{{}, {0}};
    }
    if (na < static_cast<std::size_t>(k) || nb < (std::size_t{1} << k)) return std::nullopt;
    std::vector<std::size_t> chosen;
    std::optional<UkCopy> found;
    std::vector<std::vector<Bitset>> levels(k + 1);
    levels[0] = {Bitset(nb)};
    levels[0][0].set();

    auto dfs = [&](auto&& self, std::size_t start, int depth) -> bool {
        if (depth == k) {
            UkCopy c;
            c.left = chosen;
            for (const auto& cell : levels[k]) c.right.push_back(cell.find_first());
            found = std::move(c);
            return true;
        }
        const int remaining = k - depth;
        for (std::size_t v = start; v + remaining <= na; ++v) {
            const auto& prev = levels[depth];
            auto& next = levels[depth + 1];
            next.assign(prev.size() * 2, Bitset());
            bool alive = true;
            // bit `depth` of S set <=> color 1 on (v, w_S)
            for (std::size_t s = 0; s < prev.size() && alive; ++s) {
                next[s] = prev[s] & g.neighbors(0, v);
                next[s | prev.size()] = prev[s] & g.neighbors(1, v);
                alive = next[s].any() && next[s | prev.size()].any();
            }
            if (!alive) continue;
            chosen.push_back(v);
            if (self(self, v + 1, depth + 1)) return true;
            chosen.pop_back();
        }
        return false;
    };
    dfs(dfs, 0, 0);
    return found;
}

}  // namespace vc2reg
