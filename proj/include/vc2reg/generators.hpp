#pragma once

#include "vc2reg/core/bipartite.hpp"
#include "vc2reg/core/decomposition.hpp"
#include "vc2reg/core/hypergraph.hpp"
#include "vc2reg/core/random.hpp"
#include "vc2reg/core/triad.hpp"

#include <array>
#include <map>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace vc2reg {

// Stream tags: every generator draws from Rng::stream(seed, "<generator>/<purpose>", {...}).

inline BipartiteGraph gen_random_bipartite(std::size_t nu, std::size_t nw, const Rational& p, std::uint64_t seed,
                                           Vertex first_label = 0) {
    Bernoulli coin(p);
    Rng rng = Rng::stream(seed, "random_bipartite", {nu, nw});
    std::vector<Vertex> left(nu), right(nw);
    std::iota(left.begin(), left.end(), first_label);
    std::iota(right.begin(), right.end(), static_cast<Vertex>(first_label + nu));
    std::vector<Bitset> rows(nu, Bitset(nw));
    for (std::size_t i = 0; i < nu; ++i)
        for (std::size_t j = 0; j < nw; ++j)
            if (coin(rng)) rows[i].set(j);
    return BipartiteGraph::from_rows(std::move(left), std::move(right), std::move(rows));
}

// Three random pair graphs on parts [0,na), [na,na+nb), [na+nb, na+nb+nc).
inline Triad gen_random_triad(std::size_t na, std::size_t nb, std::size_t nc, const Rational& p, std::uint64_t seed) {
    Bernoulli coin(p);
    Rng rng = Rng::stream(seed, "random_triad", {na, nb, nc});
    std::vector<Vertex> A(na), B(nb), C(nc);
    std::iota(A.begin(), A.end(), 0);
    std::iota(B.begin(), B.end(), static_cast<Vertex>(na));
    std::iota(C.begin(), C.end(), static_cast<Vertex>(na + nb));
    auto make = [&](const std::vector<Vertex>& X, const std::vector<Vertex>& Y) {
        std::vector<Bitset> rows(X.size(), Bitset(Y.size()));
        for (auto& r : rows)
            for (std::size_t j = 0; j < Y.size(); ++j)
                if (coin(rng)) r.set(j);
        return BipartiteGraph::from_rows(X, Y, std::move(rows));
    };
    auto ab = make(A, B);
    auto ac = make(A, C);
    auto bc = make(B, C);
    return Triad(std::move(ab), std::move(ac), std::move(bc));
}

// Random 3-graph over the cross triples of a triad's parts, each included with probability p.
inline Hypergraph3 gen_random_hypergraph_on(const Triad& g, const Rational& p, std::uint64_t seed) {
    Bernoulli coin(p);
    Rng rng = Rng::stream(seed, "random_hypergraph");
    std::vector<Triple> edges;
    for (Vertex a : g.part_a())
        for (Vertex b : g.part_b())
            for (Vertex c : g.part_c())
                if (coin(rng)) edges.push_back({a, b, c});
    return Hypergraph3(g.part_a().size() + g.part_b().size() + g.part_c().size(), std::move(edges));
}

// ---------------------------------------------------------------------------------------
// Planted decompositions

enum class Level { lo, hi, mid };

inline const char* to_string(Level l) { return l == Level::lo ? "lo" : l == Level::hi ? "hi" : "mid"; }

struct DensityProfile {
    enum class Kind { parity, all_hi, all_lo, table };
    Kind kind = Kind::parity;
    std::map<std::array<int, 3>, Level> table;  // used when kind == table
    Level fallback = Level::lo;

    // Group triple (g_ij, g_is, g_js) for classes i<j<s.
    Level at(int g_ij, int g_is, int g_js) const {
        switch (kind) {
            case Kind::parity: return ((g_ij + g_is + g_js) & 1) ? Level::hi : Level::lo;
            case Kind::all_hi: return Level::hi;
            case Kind::all_lo: return Level::lo;
            case Kind::table: {
                auto it = table.find({g_ij, g_is, g_js});
                return it == table.end() ? fallback : it->second;
            }
        }
        return fallback;
    }
};

struct PlantedParams {
    std::size_t n = 0, t = 1, ell = 1, groups_per_pair = 1;
    DensityProfile profile;
    Rational hi = Rational(19, 20), lo = Rational(1, 20), mid = Rational(1, 2);
    Rational noise = 0;  // independent flip probability applied after the level draw
    std::uint64_t seed = 0;
};

struct PlantedTriad {
    TriadAddress address;
    Level level = Level::lo;
    Rational planted_density;
    std::size_t triangles = 0;
};

struct GroundTruth {
    std::map<ClassPair, std::vector<int>> part_group;  // behaviour group of each pair-part
    std::vector<PlantedTriad> triads;
    Rational homogeneity_fraction;  // triple mass of lo/hi triads over cross triples
};

struct PlantedInstance {
    Hypergraph3 hypergraph;
    Decomposition decomposition;
    GroundTruth ground_truth;
    std::uint64_t seed = 0;
};

// Contiguous equipartition: the first n mod t parts get one extra vertex.
inline std::vector<std::vector<Vertex>> equipartition(std::size_t n, std::size_t t) {
    std::vector<std::vector<Vertex>> parts(t);
    Vertex v = 0;
    for (std::size_t i = 0; i < t; ++i) {
        std::size_t sz = n / t + (i < n % t ? 1 : 0);
        for (std::size_t k = 0; k < sz; ++k) parts[i].push_back(v++);
    }
    return parts;
}

inline PlantedInstance gen_planted_decomposition(const PlantedParams& prm) {
    if (prm.t < 1 || prm.ell < 1) throw std::invalid_argument("planted: t and ell must be >= 1");
    if (prm.groups_per_pair < 1 || prm.groups_per_pair > prm.ell)
        throw std::invalid_argument("planted: groups_per_pair must lie in [1, ell]");
    for (const Rational* p : {&prm.hi, &prm.lo, &prm.mid, &prm.noise})
        if (*p < 0 || *p > 1) throw std::invalid_argument("planted: probabilities must lie in [0,1]");

    const int t = static_cast<int>(prm.t);
    const auto parts = equipartition(prm.n, prm.t);
    PlantedInstance out;
    out.seed = prm.seed;

    // Pair splits: every cross pair (x in V_i, y in V_j) gets a uniform part index.
    Rng pair_rng = Rng::stream(prm.seed, "planted/pairs", {prm.n, prm.t, prm.ell});
    std::map<ClassPair, std::vector<PairList>> pair_parts;
    std::map<ClassPair, std::vector<std::uint32_t>> label;
    for (int i = 0; i < t; ++i)
        for (int j = i + 1; j < t; ++j) {
            auto& pp = pair_parts[{i, j}];
            pp.assign(prm.ell, {});
            auto& lab = label[{i, j}];
            lab.resize(parts[i].size() * parts[j].size());
            for (std::size_t x = 0; x < parts[i].size(); ++x)
                for (std::size_t y = 0; y < parts[j].size(); ++y) {
                    auto a = static_cast<std::uint32_t>(pair_rng.below(prm.ell));
                    lab[x * parts[j].size() + y] = a;
                    pp[a].emplace_back(parts[i][x], parts[j][y]);
                }
            std::vector<int> groups(prm.ell);
            for (std::size_t a = 0; a < prm.ell; ++a) groups[a] = static_cast<int>(a % prm.groups_per_pair);
            out.ground_truth.part_group[{i, j}] = std::move(groups);
        }

    // Triples: level from the group triple of the triad containing them, then noise.
    const Bernoulli hi(prm.hi), lo(prm.lo), mid(prm.mid), flip(prm.noise);
    Rng tri_rng = Rng::stream(prm.seed, "planted/triples", {prm.n, prm.t, prm.ell});
    std::vector<Triple> edges;
    const std::size_t L = prm.ell;
    BigInt homogeneous_mass = 0, total_mass = 0;
    for (int i = 0; i < t; ++i)
        for (int j = i + 1; j < t; ++j)
            for (int s = j + 1; s < t; ++s) {
                const auto& gij = out.ground_truth.part_group[{i, j}];
                const auto& gis = out.ground_truth.part_group[{i, s}];
                const auto& gjs = out.ground_truth.part_group[{j, s}];
                const auto& lij = label[{i, j}];
                const auto& lis = label[{i, s}];
                const auto& ljs = label[{j, s}];
                std::vector<std::size_t> counts(L * L * L, 0);
                const std::size_t nj = parts[j].size(), ns = parts[s].size();
                for (std::size_t x = 0; x < parts[i].size(); ++x)
                    for (std::size_t y = 0; y < nj; ++y)
                        for (std::size_t z = 0; z < ns; ++z) {
                            const auto a = lij[x * nj + y], b = lis[x * ns + z], c = ljs[y * ns + z];
                            ++counts[(a * L + b) * L + c];
                            const Level lv = prm.profile.at(gij[a], gis[b], gjs[c]);
                            bool in = lv == Level::hi ? hi(tri_rng) : lv == Level::lo ? lo(tri_rng) : mid(tri_rng);
                            if (flip(tri_rng)) in = !in;
                            if (in) edges.push_back({parts[i][x], parts[j][y], parts[s][z]});
                        }
                for (std::size_t a = 0; a < L; ++a)
                    for (std::size_t b = 0; b < L; ++b)
                        for (std::size_t c = 0; c < L; ++c) {
                            PlantedTriad pt;
                            pt.address = {i, j, s, static_cast<int>(a), static_cast<int>(b), static_cast<int>(c)};
                            pt.level = prm.profile.at(gij[a], gis[b], gjs[c]);
                            pt.planted_density = pt.level == Level::hi ? prm.hi : pt.level == Level::lo ? prm.lo : prm.mid;
                            pt.triangles = counts[(a * L + b) * L + c];
                            total_mass += pt.triangles;
                            if (pt.level != Level::mid) homogeneous_mass += pt.triangles;
                            out.ground_truth.triads.push_back(pt);
                        }
            }
    out.ground_truth.homogeneity_fraction = total_mass == 0 ? Rational(1) : make_rational(homogeneous_mass, total_mass);
    out.hypergraph = Hypergraph3(prm.n, std::move(edges));
    out.decomposition = Decomposition(parts, std::move(pair_parts));
    return out;
}

// ---------------------------------------------------------------------------------------
// Clustered edge-colored bipartite graphs

struct ClusteredColored {
    EdgeColoredBipartiteGraph graph;
    std::vector<int> labels;                 // planted cluster of each left vertex
    std::vector<std::vector<std::uint8_t>> prototypes;
};

// flip defaults to sep/40 when negative.
inline ClusteredColored gen_clustered_colored(std::size_t a, std::size_t b, std::size_t clusters, const Rational& sep,
                                              const Rational& eps2_mass, std::uint64_t seed,
                                              Rational flip = Rational(-1)) {
    if (sep <= 0 || sep >= 1) throw std::invalid_argument("clustered: sep must lie in (0,1)");
    if (clusters < 1 || clusters > a) throw std::invalid_argument("clustered: need 1 <= clusters <= a");
    if (eps2_mass < 0 || eps2_mass > 1) throw std::invalid_argument("clustered: eps2_mass must lie in [0,1]");
    if (flip < 0) flip = sep / 40;
    if (flip > sep / 8) throw std::invalid_argument("clustered: flip noise must be at most sep/8");
    const BigInt min_dist = ceil_of(sep * b);
    // Plotkin bound: with 2D > b at most 2D/(2D-b) codewords exist.
    if (clusters >= 2 && 2 * min_dist > b && Rational(clusters) > make_rational(2 * min_dist, 2 * min_dist - b))
        throw std::invalid_argument("clustered: infeasible separation");

    Rng proto_rng = Rng::stream(seed, "clustered/prototypes", {a, b, clusters});
    std::vector<std::vector<std::uint8_t>> protos;
    bool found = false;
    for (int attempt = 0; attempt < 1000 && !found; ++attempt) {
        protos.assign(clusters, std::vector<std::uint8_t>(b));
        for (auto& p : protos)
            for (auto& x : p) x = static_cast<std::uint8_t>(proto_rng.next() >> 63);
        if (clusters == 2 && 2 * min_dist > b)
            for (std::size_t j = 0; j < b; ++j) protos[1][j] = 1 - protos[0][j];
        found = true;
        for (std::size_t x = 0; x < clusters && found; ++x)
            for (std::size_t y = x + 1; y < clusters && found; ++y) {
                std::size_t d = 0;
                for (std::size_t j = 0; j < b; ++j) d += protos[x][j] != protos[y][j];
                if (BigInt(d) < min_dist) found = false;
            }
    }
    if (!found) throw std::invalid_argument("clustered: infeasible separation (no prototypes found)");

    ClusteredColored out;
    out.labels.resize(a);
    for (std::size_t i = 0; i < a; ++i) out.labels[i] = static_cast<int>(i % clusters);
    Rng label_rng = Rng::stream(seed, "clustered/labels", {a, clusters});
    label_rng.shuffle(out.labels);

    const Bernoulli flipper(flip), recolor(eps2_mass);
    Rng noise_rng = Rng::stream(seed, "clustered/noise", {a, b});
    std::vector<std::uint8_t> colors(a * b);
    for (std::size_t i = 0; i < a; ++i)
        for (std::size_t j = 0; j < b; ++j) {
            std::uint8_t c = protos[out.labels[i]][j];
            if (flipper(noise_rng)) c = 1 - c;
            if (recolor(noise_rng)) c = 2;
            colors[i * b + j] = c;
        }
    std::vector<std::int64_t> left(a), right(b);
    std::iota(left.begin(), left.end(), 0);
    std::iota(right.begin(), right.end(), 0);
    out.graph = EdgeColoredBipartiteGraph(std::move(left), std::move(right), std::move(colors));
    out.prototypes = std::move(protos);
    return out;
}

// ---------------------------------------------------------------------------------------
// Planted IP2 witnesses

struct Ip2Instance {
    Hypergraph3 hypergraph;
    std::vector<Vertex> a, b;  // a_1..a_k, b_1..b_k
    std::vector<Vertex> c;     // c_S indexed by the bitmask of S over cells (i,j) -> bit i*k+j
};

inline Ip2Instance gen_ip2_instance(int k, std::size_t n_extra, std::uint64_t seed) {
    if (k < 1 || k > 3) throw std::invalid_argument("ip2: k must lie in [1,3]");
    const std::size_t cells = static_cast<std::size_t>(k) * k;
    const std::size_t n = 2 * k + (std::size_t{1} << cells) + n_extra;
    std::vector<Vertex> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    Rng rng = Rng::stream(seed, "ip2/labels", {static_cast<std::uint64_t>(k), n_extra});
    rng.shuffle(perm);
    Ip2Instance out;
    std::size_t next = 0;
    for (int i = 0; i < k; ++i) out.a.push_back(perm[next++]);
    for (int i = 0; i < k; ++i) out.b.push_back(perm[next++]);
    for (std::size_t s = 0; s < (std::size_t{1} << cells); ++s) out.c.push_back(perm[next++]);
    std::vector<Triple> edges;
    for (std::size_t s = 0; s < out.c.size(); ++s)
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j)
                if (s >> (i * k + j) & 1u) edges.push_back({out.a[i], out.b[j], out.c[s]});
    out.hypergraph = Hypergraph3(n, std::move(edges));
    return out;
}

inline Hypergraph3 gen_ip2_hypergraph(int k, std::size_t n_extra = 0, std::uint64_t seed = 0) {
    return gen_ip2_instance(k, n_extra, seed).hypergraph;
}

}  // namespace vc2reg
