#pragma once

#include "vc2reg/core/bipartite.hpp"
#include "vc2reg/core/parallel.hpp"
#include "vc2reg/core/rational.hpp"
#include "vc2reg/vc.hpp"

#include <optional>
#include <stdexcept>
#include <vector>

namespace vc2reg {

// Greedy scan in input order; a set is kept when it is farther than delta_abs from every kept set.
inline std::vector<std::size_t> delta_separated_greedy(const SetSystem& f, std::size_t delta_abs) {
    std::vector<std::size_t> chosen;
    for (std::size_t i = 0; i < f.sets.size(); ++i) {
        bool far = true;
        for (auto c : chosen)
            if ((f.sets[i] ^ f.sets[c]).count() <= delta_abs) {
                far = false;
                break;
            }
        if (far) chosen.push_back(i);
    }
    return chosen;
}

struct SimilarityViolation {
    std::size_t vertex = 0;  // index in A
    int representative = 0;  // cluster index
    int color = 0;
    std::size_t distance = 0;
};

struct PackingResult {
    std::vector<std::size_t> exceptions;       // U: high color-2 degree
    std::vector<std::size_t> representatives;  // x_1..x_m as indices into A
    std::vector<int> clusters;                 // per a in A: representative index, -1 for exceptions
    std::size_t m = 0;
    Rational delta, eps;
    std::vector<SimilarityViolation> violations;  // a !~_delta x_cluster(a)
    bool color2_over_budget = false;              // |E2| > eps |A||B|
    std::size_t color2_edges = 0;
};

// |X ^ Y| <= q * n, exactly.
inline bool within(std::size_t dist, const Rational& q, std::size_t n) { return Rational(dist) <= q * n; }

inline PackingResult packing_cluster(const EdgeColoredBipartiteGraph& g, const Rational& delta, const Rational& eps) {
    if (delta <= 0 || delta >= 1 || eps <= 0 || eps >= 1)
        throw std::invalid_argument("packing_cluster: delta and eps must lie in (0,1)");
    const std::size_t na = g.na(), nb = g.nb();
    PackingResult r;
    r.delta = delta;
    r.eps = eps;
    r.clusters.assign(na, -1);
    const Rational eps_b2 = eps * nb * nb;
    std::vector<std::size_t> candidates;
    for (std::size_t a = 0; a < na; ++a) {
        const std::size_t d2 = g.neighbors(2, a).count();
        if (Rational(d2 * d2) >= eps_b2)
            r.exceptions.push_back(a);
        else
            candidates.push_back(a);
    }
    const Rational radius = delta / 2;
    for (auto a : candidates) {
        bool far = true;
        for (auto x : r.representatives)
            if (within((g.neighbors(1, a) ^ g.neighbors(1, x)).count(), radius, nb)) {
                far = false;
                break;
            }
        if (far) r.representatives.push_back(a);
    }
    r.m = r.representatives.size();
    for (auto a : candidates)
        for (std::size_t i = 0; i < r.m; ++i)
            if (within((g.neighbors(1, a) ^ g.neighbors(1, r.representatives[i])).count(), radius, nb)) {
                r.clusters[a] = static_cast<int>(i);
                break;
            }
    // Full ~_delta check over all three colors.
    std::vector<std::vector<SimilarityViolation>> per(candidates.size());
    parallel_for(candidates.size(), [&](std::size_t k) {
        const std::size_t a = candidates[k];
        const int c = r.clusters[a];
        for (int col = 0; col < 3; ++col) {
            const std::size_t d = (g.neighbors(col, a) ^ g.neighbors(col, r.representatives[c])).count();
            if (!within(d, delta, nb)) per[k].push_back({a, c, col, d});
        }
    });
    for (auto& v : per) r.violations.insert(r.violations.end(), v.begin(), v.end());
    r.color2_edges = g.color_count(2);
    r.color2_over_budget = Rational(r.color2_edges) > eps * na * nb;
    return r;
}

struct PackingBoundReport {
    bool exceptions_ok = false;  // |U| <= sqrt(eps) |A|
    bool separation_ok = false;  // representatives pairwise > delta|B|/2 apart in E1
    bool coverage_ok = false;    // every clustered a within delta|B|/2 of its representative
    bool similarity_ok = false;  // full ~_delta on all colors
    bool color2_budget_ok = false;
    bool uk_checked = false;
    std::optional<bool> uk_copy_found;
    std::size_t m = 0;
    Rational m_over_a;  // m / |A|, expected to stay bounded as |A| grows
    bool ok() const { return exceptions_ok && separation_ok && coverage_ok && similarity_ok; }
};

inline PackingBoundReport verify_packing_bound(const EdgeColoredBipartiteGraph& g, const PackingResult& r, int k,
                                               int uk_limit = 4) {
    PackingBoundReport rep;
    const std::size_t na = g.na(), nb = g.nb();
    const std::size_t u = r.exceptions.size();
    rep.exceptions_ok = Rational(u * u) <= r.eps * na * na;
    rep.separation_ok = true;
    for (std::size_t x = 0; x < r.m; ++x)
        for (std::size_t y = x + 1; y < r.m; ++y)
            if (within((g.neighbors(1, r.representatives[x]) ^ g.neighbors(1, r.representatives[y])).count(),
                       r.delta / 2, nb))
                rep.separation_ok = false;
    rep.coverage_ok = true;
    std::vector<std::uint8_t> is_exc(na, 0);
    for (auto a : r.exceptions) is_exc[a] = 1;
    for (std::size_t a = 0; a < na; ++a) {
        if (is_exc[a]) {
            if (r.clusters[a] != -1) rep.coverage_ok = false;
            continue;
        }
        const int c = r.clusters[a];
        if (c < 0 || static_cast<std::size_t>(c) >= r.m ||
            !within((g.neighbors(1, a) ^ g.neighbors(1, r.representatives[c])).count(), r.delta / 2, nb))
            rep.coverage_ok = false;
    }
    rep.similarity_ok = r.violations.empty();
    rep.color2_budget_ok = Rational(g.color_count(2)) <= r.eps * na * nb;
    if (k >= 1 && k <= uk_limit) {
        rep.uk_checked = true;
        rep.uk_copy_found = find_e0e1_uk_copy(g, k).has_value();
    }
    rep.m = r.m;
    rep.m_over_a = na == 0 ? Rational(0) : make_rational(r.m, na);
    return rep;
}

}  // namespace vc2reg
