#pragma once

#include "vc2reg/core/bipartite.hpp"
#include "vc2reg/core/parallel.hpp"
#include "vc2reg/core/random.hpp"
#include "vc2reg/quasirandomness.hpp"

#include <optional>
#include <stdexcept>
#include <vector>

namespace vc2reg {

struct SplitResult {
    std::vector<BipartiteGraph> parts;  // E_1..E_l
    BipartiteGraph remainder;           // E_0
    Rational input_density;             // rho
    Rational probability;               // p
    Rational target_density;            // rho * p
    Dev2Result input_dev2;
    std::vector<Dev2Result> achieved;
    std::vector<bool> part_ok;
    bool remainder_ok = true;    // |E_0| <= rho p (1+delta) m^2, m = min side
    bool feasibility_ok = true;  // eps >= 10 (1/(l m))^(1/5), reported only
    bool met = false;
    bool degenerate = false;     // input has no edges
    std::size_t attempts = 0;  // resampling rounds used
};

namespace detail {

// Part check: density within rho p (1 +- delta), normalized dev2 <= eps_in^(1/4)
// (or <= delta when the input is exactly quasirandom, eps_in = 0).
inline bool split_part_ok(const Dev2Result& part, const Rational& target, const Rational& delta,
                          const Rational& eps_in) {
    if (abs(part.density - target) > delta * target) return false;
    if (eps_in == 0) return part.normalized <= delta;
    return le_fourth_root(part.normalized, eps_in);
}

// thresholds[k] = floor((k+1) p 2^64); a draw r lands in part k for the first k with r < thresholds[k].
// When l p = 1 the last part takes every remaining draw.
inline SplitResult split_with(const BipartiteGraph& b, std::size_t l, const Rational& p, const Rational& delta,
                              std::uint64_t seed, std::size_t max_attempts, std::string_view tag) {
    if (b.nl() == 0 || b.nr() == 0) throw std::invalid_argument("split: empty side");
    if (l < 1) throw std::invalid_argument("split: need at least one part");
    if (max_attempts < 1) max_attempts = 1;
    const bool integral = p * l == 1;
    std::vector<std::uint64_t> thresholds(l);
    for (std::size_t k = 0; k < l; ++k) {
        Rational q = p * (k + 1);
        thresholds[k] = q >= 1 ? ~std::uint64_t{0} : floor_of(q * Rational(BigInt(1) << 64)).convert_to<std::uint64_t>();
    }
    const auto edges = b.local_edges();
    const Dev2Result in = dev2(b);
    const Rational eps_in = in.normalized;
    const Rational target = in.density * p;
    const std::size_t m = std::min(b.nl(), b.nr());

    std::optional<SplitResult> best;
    std::size_t best_failures = ~std::size_t{0};
    std::size_t used = 0;
    for (std::size_t attempt = 0; attempt < max_attempts; ++attempt) {
        used = attempt + 1;
        Rng rng = Rng::stream(seed, tag, {l, attempt});
        std::vector<std::vector<LocalEdge>> buckets(l);
        std::vector<LocalEdge> rest;
        for (const auto& e : edges) {
            const std::uint64_t r = rng.next();
            std::size_t k = 0;
            while (k < l && r >= thresholds[k] && !(integral && k + 1 == l)) ++k;
            (k < l ? buckets[k] : rest).push_back(e);
        }
        SplitResult out;
        out.input_density = in.density;
        out.probability = p;
        out.target_density = target;
        out.input_dev2 = in;
        out.degenerate = edges.empty();
        out.parts.resize(l);
        out.achieved.resize(l);
        out.part_ok.assign(l, false);
        for (std::size_t k = 0; k < l; ++k) out.parts[k] = BipartiteGraph(b.left(), b.right(), buckets[k]);
        out.remainder = BipartiteGraph(b.left(), b.right(), rest);
        std::vector<std::uint8_t> ok(l, 0);
        parallel_for(l, [&](std::size_t k) {
            out.achieved[k] = dev2(out.parts[k]);
            ok[k] = split_part_ok(out.achieved[k], target, delta, eps_in);
        });
        std::size_t failures = 0;
        for (std::size_t k = 0; k < l; ++k) {
            out.part_ok[k] = ok[k];
            failures += !ok[k];
        }
        out.remainder_ok = Rational(rest.size()) <= target * (1 + delta) * m * m;
        failures += !out.remainder_ok;
        {
            // (eps/10)^5 >= 1/(l m)
            Rational q = eps_in / 10;
            out.feasibility_ok = rpow(q, 5) * l * m >= 1;
        }
        out.met = failures == 0;
        if (failures < best_failures) {
            best_failures = failures;
            best = std::move(out);
        }
        if (best_failures == 0) break;
    }
    best->attempts = used;
    return std::move(*best);
}

}  // namespace detail

// Each edge goes to one of num_parts parts uniformly (p = 1/num_parts, so E_0 is empty).
inline SplitResult split_quasirandom(const BipartiteGraph& b, std::size_t num_parts, const Rational& delta,
                                     std::uint64_t seed, std::size_t max_attempts = 20) {
    if (num_parts < 1) throw std::invalid_argument("split_quasirandom: num_parts must be >= 1");
    return detail::split_with(b, num_parts, Rational(1, num_parts), delta, seed, max_attempts, "split/uniform");
}

// l = floor(1/p) parts, each edge hit with probability p; leftover mass goes to E_0.
inline SplitResult split_by_probability(const BipartiteGraph& b, const Rational& p, const Rational& delta,
                                        std::uint64_t seed, std::size_t max_attempts = 20) {
    if (p <= 0 || p >= 1) throw std::invalid_argument("split_by_probability: p must lie in (0,1)");
    const std::size_t l = floor_of(1 / p).convert_to<std::size_t>();
    return detail::split_with(b, l, p, delta, seed, max_attempts, "split/probability");
}

struct MergeResult {
    BipartiteGraph graph;
    Dev2Result dev2;
    std::vector<Rational> part_eps;  // each part's certified dev2 parameter at its own density
    bool bound_ok = true;            // union normalized <= sum of part_eps^(1/4)
    bool bound_is_theorem = true;    // false for more than two parts (iterated bound, reported only)
};

inline MergeResult merge_parts(const std::vector<BipartiteGraph>& parts) {
    if (parts.empty()) throw std::invalid_argument("merge_parts: nothing to merge");
    const auto& first = parts.front();
    std::vector<Bitset> rows(first.nl(), Bitset(first.nr()));
    MergeResult r;
    for (const auto& g : parts) {
        if (!g.same_sides(first)) throw std::invalid_argument("merge_parts: parts have different sides");
        for (std::size_t i = 0; i < g.nl(); ++i) {
            if ((rows[i] & g.row(i)).any()) throw std::invalid_argument("merge_parts: parts share an edge");
            rows[i] |= g.row(i);
        }
        r.part_eps.push_back(dev2(g).normalized);
    }
    r.graph = BipartiteGraph::from_rows(first.left(), first.right(), std::move(rows));
    r.dev2 = dev2(r.graph);
    r.bound_is_theorem = parts.size() <= 2;
    r.bound_ok = le_sum_fourth_roots(r.dev2.normalized, r.part_eps);
    return r;
}

}  // namespace vc2reg
