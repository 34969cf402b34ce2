#pragma once

#include "vc2reg/core/bipartite.hpp"
#include "vc2reg/core/decomposition.hpp"
#include "vc2reg/core/parallel.hpp"
#include "vc2reg/quasirandomness.hpp"

#include <array>
#include <map>
#include <set>
#include <stdexcept>
#include <vector>

namespace vc2reg {

inline BigInt choose(std::size_t n, std::size_t k) {
    if (k > n) return 0;
    BigInt r = 1;
    for (std::size_t i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
    return r;
}

// Dense H-membership bitsets, one per class triple i<j<s, indexed by local positions.
class ClassTripleCubes {
public:
    ClassTripleCubes(const Hypergraph3& h, const IndexedDecomposition& idx) : t_(idx.t()) {
        slot_.assign(static_cast<std::size_t>(t_) * t_ * t_, -1);
        for (int i = 0; i < t_; ++i)
            for (int j = i + 1; j < t_; ++j)
                for (int s = j + 1; s < t_; ++s) {
                    slot_[key(i, j, s)] = static_cast<int>(cubes_.size());
                    cubes_.emplace_back(idx.part(i).size() * idx.part(j).size() * idx.part(s).size());
                    dims_.push_back({idx.part(j).size(), idx.part(s).size()});
                }
        for (const auto& e : h.edges()) {
            std::array<std::pair<int, std::uint32_t>, 3> v;
            for (int k = 0; k < 3; ++k) v[k] = {idx.part_of(e[k]), idx.local(e[k])};
            std::sort(v.begin(), v.end());
            if (v[0].first == v[1].first || v[1].first == v[2].first) continue;
            const int c = slot_[key(v[0].first, v[1].first, v[2].first)];
            const auto [nj, ns] = dims_[c];
            cubes_[c].set((v[0].second * nj + v[1].second) * ns + v[2].second);
        }
    }

    bool contains(int i, int j, int s, std::size_t a, std::size_t b, std::size_t c) const {
        const int k = slot_[key(i, j, s)];
        const auto [nj, ns] = dims_[k];
        return cubes_[k].test((a * nj + b) * ns + c);
    }
    std::size_t edges_in(int i, int j, int s) const { return cubes_[slot_[key(i, j, s)]].count(); }

private:
    std::size_t key(int i, int j, int s) const { return (static_cast<std::size_t>(i) * t_ + j) * t_ + s; }
    int t_;
    std::vector<int> slot_;
    std::vector<Bitset> cubes_;
    std::vector<std::pair<std::size_t, std::size_t>> dims_;
};

// dev2 of every pair-part, computed once.
class PairPartStats {
public:
    explicit PairPartStats(const IndexedDecomposition& idx) : t_(idx.t()) {
        stats_.resize(static_cast<std::size_t>(t_) * t_);
        std::vector<std::array<int, 3>> jobs;
        for (int i = 0; i < t_; ++i)
            for (int j = i + 1; j < t_; ++j) {
                stats_[i * t_ + j].resize(idx.ell(i, j));
                for (std::size_t a = 0; a < idx.ell(i, j); ++a) jobs.push_back({i, j, static_cast<int>(a)});
            }
        parallel_for(jobs.size(), [&](std::size_t k) {
            auto [i, j, a] = jobs[k];
            const auto& g = idx.pair_part(i, j, a);
            if (g.nl() == 0 || g.nr() == 0) {
                stats_[i * t_ + j][a] = Dev2Result{0, 0, 0};
                return;
            }
            stats_[i * t_ + j][a] = dev2(g);
        });
    }
    const Dev2Result& at(int i, int j, int alpha) const { return stats_[i * t_ + j][alpha]; }
    std::size_t ell(int i, int j) const { return stats_[i * t_ + j].size(); }

    // has_dev2(eps2, 1/l_ij) for one part.
    bool quasirandom(int i, int j, int alpha, const Rational& eps2) const {
        return has_dev2(at(i, j, alpha), eps2, Rational(1, static_cast<long long>(ell(i, j))));
    }

private:
    int t_;
    std::vector<std::vector<Dev2Result>> stats_;
};

// Index, per-part dev2 and H cubes for one (H, P); P and H must outlive it.
class AnalysisContext {
public:
    AnalysisContext(const Hypergraph3& h, const Decomposition& p) : h_(&h), idx_(h, p), stats_(idx_), cubes_(h, idx_) {}
    const Hypergraph3& hypergraph() const { return *h_; }
    const IndexedDecomposition& index() const { return idx_; }
    const PairPartStats& stats() const { return stats_; }
    const ClassTripleCubes& cubes() const { return cubes_; }
    int t() const { return idx_.t(); }

private:
    const Hypergraph3* h_;
    IndexedDecomposition idx_;
    PairPartStats stats_;
    ClassTripleCubes cubes_;
};

// ---------------------------------------------------------------------------------------
// Equitability

struct PartFailure {
    int i = 0, j = 0, alpha = 0;
    Rational density, normalized;
};

struct EquitabilityReport {
    Rational eps1, eps2;
    bool equipartition = false;
    std::size_t min_part = 0, max_part = 0;
    BigInt good_pairs = 0;   // pairs in a pair-part with dev2(eps2, 1/l_ij)
    BigInt cross_pairs = 0;
    BigInt all_pairs = 0;    // C(n,2)
    Rational good_fraction;      // over cross pairs
    Rational good_fraction_all;  // over C(n,2)
    std::size_t quasirandom_parts = 0, total_parts = 0;
    std::vector<PartFailure> failing_parts;
    bool predicate = false;  // equipartition and good_fraction >= 1 - eps1
};

inline EquitabilityReport equitability_check(const AnalysisContext& ctx, const Rational& eps1, const Rational& eps2) {
    const auto& idx = ctx.index();
    EquitabilityReport r;
    r.eps1 = eps1;
    r.eps2 = eps2;
    const int t = idx.t();
    std::size_t n = 0;
    r.min_part = t ? idx.part(0).size() : 0;
    for (int i = 0; i < t; ++i) {
        r.min_part = std::min(r.min_part, idx.part(i).size());
        r.max_part = std::max(r.max_part, idx.part(i).size());
        n += idx.part(i).size();
    }
    r.equipartition = r.max_part - r.min_part <= 1;
    for (int i = 0; i < t; ++i)
        for (int j = i + 1; j < t; ++j)
            for (std::size_t a = 0; a < idx.ell(i, j); ++a) {
                ++r.total_parts;
                const auto& st = ctx.stats().at(i, j, static_cast<int>(a));
                if (ctx.stats().quasirandom(i, j, static_cast<int>(a), eps2)) {
                    ++r.quasirandom_parts;
                    r.good_pairs += idx.pair_part(i, j, static_cast<int>(a)).edge_count();
                } else {
                    r.failing_parts.push_back({i, j, static_cast<int>(a), st.density, st.normalized});
                }
            }
    r.cross_pairs = idx.cross_pairs();
    r.all_pairs = choose(n, 2);
    r.good_fraction = r.cross_pairs == 0 ? Rational(1) : make_rational(r.good_pairs, r.cross_pairs);
    r.good_fraction_all = r.all_pairs == 0 ? Rational(1) : make_rational(r.good_pairs, r.all_pairs);
    r.predicate = r.equipartition && r.good_fraction >= 1 - eps1;
    return r;
}

inline EquitabilityReport equitability_check(const Hypergraph3& h, const Decomposition& p, const Rational& eps1,
                                             const Rational& eps2) {
    return equitability_check(AnalysisContext(h, p), eps1, eps2);
}

// ---------------------------------------------------------------------------------------
// Triad measurement

// Canonical triad enumeration: class triples i<j<s in lexicographic order, then (alpha, beta, gamma)
// with alpha on (i,j), beta on (i,s), gamma on (j,s), lexicographic.
class TriadIndex {
public:
    TriadIndex() = default;
    explicit TriadIndex(const IndexedDecomposition& idx) : t_(idx.t()) {
        ell_.assign(static_cast<std::size_t>(t_) * t_, 0);
        for (int i = 0; i < t_; ++i)
            for (int j = i + 1; j < t_; ++j) ell_[i * t_ + j] = ell_[j * t_ + i] = idx.ell(i, j);
        base_.assign(static_cast<std::size_t>(t_) * t_ * t_, 0);
        std::size_t total = 0;
        for (int i = 0; i < t_; ++i)
            for (int j = i + 1; j < t_; ++j)
                for (int s = j + 1; s < t_; ++s) {
                    base_[(static_cast<std::size_t>(i) * t_ + j) * t_ + s] = total;
                    total += ell(i, j) * ell(i, s) * ell(j, s);
                }
        size_ = total;
    }
    int t() const { return t_; }
    std::size_t size() const { return size_; }
    std::size_t ell(int i, int j) const { return ell_[static_cast<std::size_t>(i) * t_ + j]; }
    std::size_t of(const TriadAddress& a) const {
        return base_[(static_cast<std::size_t>(a.i) * t_ + a.j) * t_ + a.s] +
               (static_cast<std::size_t>(a.alpha) * ell(a.i, a.s) + a.beta) * ell(a.j, a.s) + a.gamma;
    }
    std::vector<TriadAddress> all() const {
        std::vector<TriadAddress> out;
        out.reserve(size_);
        for (int i = 0; i < t_; ++i)
            for (int j = i + 1; j < t_; ++j)
                for (int s = j + 1; s < t_; ++s)
                    for (std::size_t a = 0; a < ell(i, j); ++a)
                        for (std::size_t b = 0; b < ell(i, s); ++b)
                            for (std::size_t c = 0; c < ell(j, s); ++c)
                                out.push_back({i, j, s, static_cast<int>(a), static_cast<int>(b), static_cast<int>(c)});
        return out;
    }

private:
    int t_ = 0;
    std::vector<std::size_t> ell_, base_;
    std::size_t size_ = 0;
};

// Address of the triad on classes {i,j,s} (any order) given the parts on each of its pairs.
inline TriadAddress triad_address_for(int i, int j, int s, int part_ij, int part_is, int part_js) {
    std::array<int, 3> c{i, j, s};
    std::sort(c.begin(), c.end());
    auto part_on = [&](int x, int y) {
        if ((x == i && y == j) || (x == j && y == i)) return part_ij;
        if ((x == i && y == s) || (x == s && y == i)) return part_is;
        return part_js;
    };
    return {c[0], c[1], c[2], part_on(c[0], c[1]), part_on(c[0], c[2]), part_on(c[1], c[2])};
}

struct TriadMeasure {
    TriadAddress address;
    std::uint64_t triangles = 0;
    std::uint64_t h_edges = 0;
    Rational density;  // h_edges / triangles, 0 when there are no triangles
    bool dev23_computed = false;
    bool dev23_pass = false;
    Rational dev23_lhs;  // raw_sum / (|U||W||Z|)^2
    Rational d2;         // mean pair density used by the regularity test
};

inline std::vector<TriadMeasure> measure_triads(const AnalysisContext& ctx, const TriadIndex& ti, bool with_dev23,
                                                const Rational& eps1 = 0, const Rational& eps2 = 1) {
    const auto& idx = ctx.index();
    const auto addrs = ti.all();
    std::vector<TriadMeasure> out(addrs.size());
    parallel_for(addrs.size(), [&](std::size_t k) {
        const auto& a = addrs[k];
        TriadMeasure m;
        m.address = a;
        const auto view = idx.triad_view(a);
        auto oracle = [&](std::size_t x, std::size_t y, std::size_t z) {
            return ctx.cubes().contains(a.i, a.j, a.s, x, y, z);
        };
        if (with_dev23 && view.na && view.nb && view.nc) {
            auto core = dev23_core(view, oracle, Mode::fast);
            const auto& st = ctx.stats();
            auto res = assemble_dev23(core, {st.at(a.i, a.j, a.alpha), st.at(a.i, a.s, a.beta), st.at(a.j, a.s, a.gamma)},
                                      view.na, view.nb, view.nc);
            m.triangles = static_cast<std::uint64_t>(core.triangles);
            m.h_edges = static_cast<std::uint64_t>(core.h_edges);
            m.density = core.d3;
            m.dev23_computed = true;
            m.dev23_lhs = res.normalized_bound_lhs;
            m.d2 = mean_pair_density(res);
            m.dev23_pass = has_dev23(res, eps1, eps2);
        } else {
            for_each_triangle(view, [&](std::size_t x, std::size_t y, std::size_t z) {
                ++m.triangles;
                if (oracle(x, y, z)) ++m.h_edges;
            });
            m.density = m.triangles ? make_rational(m.h_edges, m.triangles) : Rational(0);
        }
        out[k] = std::move(m);
    });
    return out;
}

// ---------------------------------------------------------------------------------------
// Classification

enum class TriadLabel : std::uint8_t { F0 = 0, F1 = 1, Ferr = 2 };

inline const char* to_string(TriadLabel l) { return l == TriadLabel::F0 ? "F0" : l == TriadLabel::F1 ? "F1" : "Ferr"; }
inline int color_of(TriadLabel l) { return static_cast<int>(l); }

struct TriadClassification {
    TriadIndex index;
    std::vector<TriadMeasure> triads;
    std::vector<TriadLabel> labels;
    std::vector<std::uint8_t> middle;                 // Ferr because of a middle density, not dev23
    std::vector<std::vector<std::uint8_t>> part_ok;  // per class pair i*t+j: dev2(eps2, 1/l_ij) flags
    Rational eps1, eps2, f_val;
    std::size_t f0 = 0, f1 = 0, ferr = 0, ferr_middle = 0;

    int t() const { return index.t(); }
    TriadLabel label(const TriadAddress& a) const { return labels[index.of(a)]; }
    const TriadMeasure& measure(const TriadAddress& a) const { return triads[index.of(a)]; }
    bool quasirandom(int i, int j, int alpha) const {
        if (i > j) std::swap(i, j);
        return part_ok[static_cast<std::size_t>(i) * t() + j][alpha];
    }
};

inline TriadClassification classify_triads(const AnalysisContext& ctx, const Rational& eps1, const Rational& eps2,
                                           const Rational& f_val) {
    if (f_val <= 0 || f_val >= Rational(1, 2)) throw std::invalid_argument("classify_triads: f_val must lie in (0,1/2)");
    if (eps2 <= 0 || eps2 > 1) throw std::invalid_argument("classify_triads: eps2 must lie in (0,1]");
    if (eps1 <= 0) throw std::invalid_argument("classify_triads: eps1 must be positive");
    TriadClassification c;
    c.index = TriadIndex(ctx.index());
    c.eps1 = eps1;
    c.eps2 = eps2;
    c.f_val = f_val;
    const int t = ctx.t();
    c.part_ok.resize(static_cast<std::size_t>(t) * t);
    for (int i = 0; i < t; ++i)
        for (int j = i + 1; j < t; ++j)
            for (std::size_t a = 0; a < ctx.index().ell(i, j); ++a)
                c.part_ok[i * t + j].push_back(ctx.stats().quasirandom(i, j, static_cast<int>(a), eps2));
    c.triads = measure_triads(ctx, c.index, true, eps1, eps2);
    c.labels.resize(c.triads.size());
    c.middle.assign(c.triads.size(), 0);
    for (std::size_t k = 0; k < c.triads.size(); ++k) {
        const auto& m = c.triads[k];
        TriadLabel l = TriadLabel::Ferr;
        if (m.dev23_pass) {
            if (m.density >= 1 - f_val)
                l = TriadLabel::F1;
            else if (m.density <= f_val)
                l = TriadLabel::F0;
            else
                c.middle[k] = 1;
        }
        c.labels[k] = l;
        (l == TriadLabel::F0 ? c.f0 : l == TriadLabel::F1 ? c.f1 : c.ferr)++;
        c.ferr_middle += c.middle[k];
    }
    return c;
}

inline TriadClassification classify_triads(const Hypergraph3& h, const Decomposition& p, const Rational& eps1,
                                           const Rational& eps2, const Rational& f_val) {
    return classify_triads(AnalysisContext(h, p), eps1, eps2, f_val);
}

// ---------------------------------------------------------------------------------------
// Auxiliary graphs H_ij

struct Corner {
    int s = 0, beta = 0, gamma = 0;  // beta: part of {i,s}; gamma: part of {j,s}
    bool operator==(const Corner&) const = default;
};

struct AuxGraph {
    int i = 0, j = 0;
    std::vector<int> left_parts;  // quasirandom parts of (i,j), stable order
    std::vector<Corner> corners;  // right side
    EdgeColoredBipartiteGraph graph;
};

inline std::vector<int> quasirandom_parts(const TriadClassification& c, int i, int j) {
    std::vector<int> out;
    const auto& flags = c.part_ok[static_cast<std::size_t>(std::min(i, j)) * c.t() + std::max(i, j)];
    for (std::size_t a = 0; a < flags.size(); ++a)
        if (flags[a]) out.push_back(static_cast<int>(a));
    return out;
}

inline AuxGraph build_aux_graph(const TriadClassification& c, int i, int j) {
    if (i > j) std::swap(i, j);
    if (i < 0 || j >= c.t() || i == j) throw std::invalid_argument("build_aux_graph: bad class pair");
    if (c.index.ell(i, j) == 0) throw std::invalid_argument("build_aux_graph: class pair has no pair-parts");
    AuxGraph g;
    g.i = i;
    g.j = j;
    g.left_parts = quasirandom_parts(c, i, j);
    for (int s = 0; s < c.t(); ++s) {
        if (s == i || s == j) continue;
        for (int b : quasirandom_parts(c, i, s))
            for (int cc : quasirandom_parts(c, j, s)) g.corners.push_back({s, b, cc});
    }
    std::vector<std::uint8_t> colors(g.left_parts.size() * g.corners.size());
    for (std::size_t x = 0; x < g.left_parts.size(); ++x)
        for (std::size_t y = 0; y < g.corners.size(); ++y) {
            const auto& k = g.corners[y];
            colors[x * g.corners.size() + y] =
                static_cast<std::uint8_t>(color_of(c.label(triad_address_for(i, j, k.s, g.left_parts[x], k.beta, k.gamma))));
        }
    std::vector<std::int64_t> left(g.left_parts.begin(), g.left_parts.end()), right(g.corners.size());
    for (std::size_t y = 0; y < right.size(); ++y) right[y] = static_cast<std::int64_t>(y);
    g.graph = EdgeColoredBipartiteGraph(std::move(left), std::move(right), std::move(colors));
    return g;
}

// ---------------------------------------------------------------------------------------
// Bad pairs

struct PsiResult {
    std::set<ClassPair> psi;
    std::map<ClassPair, std::size_t> ferr_counts;  // Ferr triads through each class pair
    Rational threshold;                            // coeff * l^3 * t
};

inline PsiResult bad_pairs_psi(const TriadClassification& c, const Rational& threshold_coeff) {
    PsiResult r;
    const int t = c.t();
    std::size_t ell = 0;
    for (int i = 0; i < t; ++i)
        for (int j = i + 1; j < t; ++j) ell = std::max(ell, c.index.ell(i, j));
    r.threshold = threshold_coeff * ell * ell * ell * t;
    for (int i = 0; i < t; ++i)
        for (int j = i + 1; j < t; ++j) r.ferr_counts[{i, j}] = 0;
    for (std::size_t k = 0; k < c.triads.size(); ++k) {
        if (c.labels[k] != TriadLabel::Ferr) continue;
        const auto& a = c.triads[k].address;
        ++r.ferr_counts[{a.i, a.j}];
        ++r.ferr_counts[{a.i, a.s}];
        ++r.ferr_counts[{a.j, a.s}];
    }
    for (const auto& [key, n] : r.ferr_counts)
        if (Rational(n) >= r.threshold) r.psi.insert(key);
    return r;
}

// ---------------------------------------------------------------------------------------
// Troublesome triples

// R colors part-triples (a on (i,j), b on (i,s), c on (j,s)). rep_of[k][x] is the representative of
// part x in coordinate k, or -1 when x lies in no cluster (that coordinate's case then cannot fire).
inline std::vector<std::array<std::size_t, 3>> troublesome_triples(const EdgeColoredTripartite3Graph& r,
                                                                   const std::array<std::vector<int>, 3>& rep_of) {
    const std::array<std::size_t, 3> dims{r.na(), r.nb(), r.nc()};
    for (int k = 0; k < 3; ++k)
        if (rep_of[k].size() != dims[k])
            throw std::invalid_argument("troublesome_triples: missing cluster assignment for some part");
    std::vector<std::array<std::size_t, 3>> out;
    for (std::size_t a = 0; a < dims[0]; ++a)
        for (std::size_t b = 0; b < dims[1]; ++b)
            for (std::size_t c = 0; c < dims[2]; ++c) {
                const auto col = r.color(a, b, c);
                const int ra = rep_of[0][a], rb = rep_of[1][b], rc = rep_of[2][c];
                const bool bad = (ra >= 0 && r.color(ra, b, c) != col) || (rb >= 0 && r.color(a, rb, c) != col) ||
                                 (rc >= 0 && r.color(a, b, rc) != col);
                if (bad) out.push_back({a, b, c});
            }
    return out;
}

// ---------------------------------------------------------------------------------------
// Homogeneity

struct HomogeneityTriad {
    TriadAddress address;
    Rational density;
    std::uint64_t triangles = 0;
    bool homogeneous = false;
    bool regular = false;
};

struct HomogeneityReport {
    Rational mu, eps1, eps2;
    bool regularity_computed = false;
    BigInt cross_triples = 0, all_triples = 0;
    BigInt triangle_total = 0;  // sum of |K3| over triads; equals cross_triples
    BigInt homogeneous_mass = 0, regular_mass = 0;
    Rational good_triple_fraction;      // over cross-part triples
    Rational good_triple_fraction_all;  // over C(n,3)
    Rational regular_triple_fraction;
    Rational regular_triple_fraction_all;
    bool homogeneous_predicate = false;  // good_triple_fraction >= 1 - mu
    bool regular_predicate = false;      // irregular mass <= eps1 n^3
    std::vector<HomogeneityTriad> triads;
};

inline HomogeneityReport homogeneity_from(const AnalysisContext& ctx, const std::vector<TriadMeasure>& ms,
                                          const Rational& mu, const Rational& eps1, const Rational& eps2,
                                          bool regular) {
    HomogeneityReport r;
    r.mu = mu;
    r.eps1 = eps1;
    r.eps2 = eps2;
    r.regularity_computed = regular;
    std::size_t n = 0;
    for (int i = 0; i < ctx.t(); ++i) n += ctx.index().part(i).size();
    r.cross_triples = ctx.index().cross_triples();
    r.all_triples = choose(n, 3);
    for (const auto& m : ms) {
        HomogeneityTriad ht;
        ht.address = m.address;
        ht.density = m.density;
        ht.triangles = m.triangles;
        ht.homogeneous = m.density <= mu || m.density >= 1 - mu;
        ht.regular = regular && m.dev23_pass;
        r.triangle_total += m.triangles;
        if (ht.homogeneous) r.homogeneous_mass += m.triangles;
        if (ht.regular) r.regular_mass += m.triangles;
        r.triads.push_back(std::move(ht));
    }
    auto frac = [](const BigInt& a, const BigInt& b) { return b == 0 ? Rational(1) : make_rational(a, b); };
    r.good_triple_fraction = frac(r.homogeneous_mass, r.cross_triples);
    r.good_triple_fraction_all = frac(r.homogeneous_mass, r.all_triples);
    r.regular_triple_fraction = frac(r.regular_mass, r.cross_triples);
    r.regular_triple_fraction_all = frac(r.regular_mass, r.all_triples);
    r.homogeneous_predicate = r.good_triple_fraction >= 1 - mu;
    r.regular_predicate = regular && Rational(r.cross_triples - r.regular_mass) <= eps1 * BigInt(n) * n * n;
    return r;
}

inline HomogeneityReport homogeneity_report(const AnalysisContext& ctx, const Rational& mu, const Rational& eps1,
                                            const Rational& eps2, bool with_regularity = true) {
    TriadIndex ti(ctx.index());
    auto ms = measure_triads(ctx, ti, with_regularity, eps1, eps2);
    return homogeneity_from(ctx, ms, mu, eps1, eps2, with_regularity);
}

inline HomogeneityReport homogeneity_report(const Hypergraph3& h, const Decomposition& p, const Rational& mu,
                                            const Rational& eps1, const Rational& eps2, bool with_regularity = true) {
    return homogeneity_report(AnalysisContext(h, p), mu, eps1, eps2, with_regularity);
}

}  // namespace vc2reg
