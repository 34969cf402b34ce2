#pragma once

#include "vc2reg/core/bipartite.hpp"
#include "vc2reg/core/parallel.hpp"
#include "vc2reg/core/random.hpp"
#include "vc2reg/core/rational.hpp"
#include "vc2reg/core/triad.hpp"

#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

namespace vc2reg {

enum class Mode { brute, fast };

struct Dev2Result {
    Rational density;
    Rational raw_sum;     // sum over (u0,u1,w0,w1) of prod g(u_i,w_j)
    Rational normalized;  // raw_sum / (|U|^2 |W|^2)
};

namespace detail {

constexpr i128 kTwoTo40 = static_cast<i128>(1) << 40;

// Exact dev2 sum over adjacency rows. The centred indicator g is scaled by N=|U||W| so
// that every value is an integer: N-e on edges, -e on non-edges.
inline Dev2Result dev2_rows(const std::vector<Bitset>& rows, std::size_t nr, Mode mode) {
    const std::size_t nl = rows.size();
    if (nl == 0 || nr == 0) throw std::invalid_argument("dev2: empty side");
    std::size_t e = 0;
    for (const auto& r : rows) e += r.count();
    const i128 n_pairs = static_cast<i128>(nl) * nr;
    if (n_pairs > kTwoTo40) throw std::invalid_argument("dev2: graph too large for exact path");
    const i128 pos = n_pairs - static_cast<i128>(e);
    const i128 neg = -static_cast<i128>(e);

    BigAccumulator total;
    if (mode == Mode::brute) {
        if (n_pairs > (static_cast<i128>(1) << 31)) throw std::invalid_argument("dev2 brute: graph too large");
        auto g = [&](std::size_t u, std::size_t w) { return rows[u].test(w) ? pos : neg; };
        for (std::size_t u0 = 0; u0 < nl; ++u0)
            for (std::size_t u1 = 0; u1 < nl; ++u1)
                for (std::size_t w0 = 0; w0 < nr; ++w0) {
                    const i128 c0 = g(u0, w0) * g(u1, w0);
                    if (c0 == 0) continue;
                    for (std::size_t w1 = 0; w1 < nr; ++w1) total.add(c0 * (g(u0, w1) * g(u1, w1)));
                }
    } else {
        // inner(u0,u1) = a*pos^2 + b*pos*neg + c*neg^2 with a common, b exclusive, c joint non-neighbours.
        std::vector<std::size_t> deg(nl);
        for (std::size_t u = 0; u < nl; ++u) deg[u] = rows[u].count();
        std::vector<BigAccumulator> per_row(nl);
        parallel_for(nl, [&](std::size_t u0) {
            BigAccumulator acc;
            for (std::size_t u1 = u0; u1 < nl; ++u1) {
                const i128 a = static_cast<i128>((rows[u0] & rows[u1]).count());
                const i128 b = static_cast<i128>(deg[u0] + deg[u1]) - 2 * a;
                const i128 c = static_cast<i128>(nr) - a - b;
                const i128 inner = a * pos * pos + b * pos * neg + c * neg * neg;
                acc.add_square(inner);
                if (u1 != u0) acc.add_square(inner);
            }
            per_row[u0] = acc;
        });
        for (const auto& a : per_row) total.add(a);
    }
    Dev2Result r;
    r.density = make_rational(e, to_bigint(n_pairs));
    BigInt scale = pow(to_bigint(n_pairs), 4);
    r.raw_sum = make_rational(total.value(), scale);
    r.normalized = r.raw_sum / (BigInt(nl) * nl * nr * nr);
    return r;
}

}  // namespace detail

inline Dev2Result dev2(const BipartiteGraph& b, Mode mode = Mode::fast) {
    return detail::dev2_rows(b.rows(), b.nr(), mode);
}

// Minimal certified dev2 parameter at reference density d.
inline Rational dev2_eps(const Dev2Result& r, const Rational& d) {
    Rational gap = abs(r.density - d);
    return gap > r.normalized ? gap : r.normalized;
}

inline bool has_dev2(const Dev2Result& r, const Rational& eps, const Rational& d) {
    if (eps <= 0 || eps > 1) throw std::invalid_argument("has_dev2: eps must lie in (0,1]");
    if (d < 0 || d > 1) throw std::invalid_argument("has_dev2: d must lie in [0,1]");
    return abs(r.density - d) < eps && r.normalized <= eps;
}

inline bool has_dev2(const BipartiteGraph& b, const Rational& eps, const Rational& d) {
    return has_dev2(dev2(b), eps, d);
}

// Floating path for large parts; agrees with the exact value to ~1e-9 relative.
inline double dev2_normalized_double(const BipartiteGraph& b) {
    const std::size_t nl = b.nl(), nr = b.nr();
    if (nl == 0 || nr == 0) throw std::invalid_argument("dev2: empty side");
    const long double d = static_cast<long double>(b.edge_count()) / (static_cast<long double>(nl) * nr);
    const long double pos = 1 - d, neg = -d;
    long double total = 0;
    for (std::size_t u0 = 0; u0 < nl; ++u0)
        for (std::size_t u1 = 0; u1 < nl; ++u1) {
            const auto a = static_cast<long double>((b.row(u0) & b.row(u1)).count());
            const auto bb = static_cast<long double>(b.row(u0).count() + b.row(u1).count()) - 2 * a;
            const long double c = nr - a - bb;
            const long double inner = a * pos * pos + bb * pos * neg + c * neg * neg;
            total += inner * inner;
        }
    return static_cast<double>(total / (static_cast<long double>(nl) * nl * nr * nr));
}

// ---------------------------------------------------------------------------------------
// disc2

enum class DiscMode { exact, sampled };

struct Disc2Result {
    Rational density;
    Rational defect;
    DiscMode mode = DiscMode::exact;
    std::vector<std::size_t> witness_left, witness_right;  // exact mode only
};

namespace detail {

// max over (U',W') of |e(U',W') - d|U'||W'|| / (|U||W|), by enumerating subsets of the
// smaller side and choosing the best subset of the other side coordinate-wise.
inline Disc2Result disc2_exact(const BipartiteGraph& b, const Rational& d) {
    const std::size_t nl = b.nl(), nr = b.nr();
    if (nl + nr > 28) throw std::invalid_argument("disc2 exact: |U|+|W| exceeds 28");
    if (nl == 0 || nr == 0) throw std::invalid_argument("disc2: empty side");
    const bool enum_left = nl <= nr;
    const std::size_t s = enum_left ? nl : nr, o = enum_left ? nr : nl;
    std::vector<std::uint32_t> mask(o, 0);
    for (std::size_t x = 0; x < o; ++x)
        for (std::size_t y = 0; y < s; ++y)
            if (enum_left ? b.has(y, x) : b.has(x, y)) mask[x] |= 1u << y;
    // Scaled by den(d): dd*c - dn*|S'|.
    const i128 dn = numerator(d).convert_to<long long>();
    const i128 dd = denominator(d).convert_to<long long>();
    i128 best = -1;
    std::uint32_t best_mask = 0;
    bool best_positive = true;
    for (std::uint32_t m = 0; m < (1u << s); ++m) {
        const i128 k = __builtin_popcount(m);
        i128 plus = 0, minus = 0;
        for (std::size_t x = 0; x < o; ++x) {
            const i128 v = dd * __builtin_popcount(mask[x] & m) - dn * k;
            if (v > 0) plus += v;
            else minus -= v;
        }
        if (plus > best) best = plus, best_mask = m, best_positive = true;
        if (minus > best) best = minus, best_mask = m, best_positive = false;
    }
    Disc2Result r;
    r.density = b.density();
    r.defect = make_rational(to_bigint(best), to_bigint(dd) * nl * nr);
    const i128 k = __builtin_popcount(best_mask);
    std::vector<std::size_t> ws, os;
    for (std::size_t y = 0; y < s; ++y)
        if (best_mask >> y & 1u) ws.push_back(y);
    for (std::size_t x = 0; x < o; ++x) {
        const i128 v = dd * __builtin_popcount(mask[x] & best_mask) - dn * k;
        if (best_positive ? v > 0 : v < 0) os.push_back(x);
    }
    r.witness_left = enum_left ? ws : os;
    r.witness_right = enum_left ? os : ws;
    return r;
}

}  // namespace detail

inline Disc2Result disc2(const BipartiteGraph& b, DiscMode mode, std::size_t trials = 0, std::uint64_t seed = 0) {
    if (mode == DiscMode::exact) return detail::disc2_exact(b, b.density());
    if (b.nl() == 0 || b.nr() == 0) throw std::invalid_argument("disc2: empty side");
    Disc2Result r;
    r.mode = DiscMode::sampled;
    r.density = b.density();
    r.defect = 0;
    const BigInt e = b.edge_count();
    const BigInt n_pairs = BigInt(b.nl()) * b.nr();
    Rng rng = Rng::stream(seed, "disc2");
    for (std::size_t t = 0; t < trials; ++t) {
        Bitset us(b.nl()), ws(b.nr());
        for (std::size_t i = 0; i < b.nl(); ++i) us[i] = rng.next() >> 63;
        for (std::size_t j = 0; j < b.nr(); ++j) ws[j] = rng.next() >> 63;
        std::size_t cnt = 0;
        for_each_bit(us, [&](std::size_t i) { cnt += (b.row(i) & ws).count(); });
        // |e' - (e/N)|U'||W'|| / N  =  |N e' - e |U'||W'|| / N^2
        BigInt num = abs(n_pairs * cnt - e * us.count() * ws.count());
        Rational val = make_rational(num, n_pairs * n_pairs);
        if (val > r.defect) r.defect = val;
    }
    return r;
}

struct EquivalenceResult {
    Rational dev_eps;
    Rational disc_eps;
    bool ok = false;
};

inline EquivalenceResult check_equivalence(const BipartiteGraph& b, const Rational& d) {
    EquivalenceResult r;
    r.dev_eps = dev2_eps(dev2(b), d);
    r.disc_eps = detail::disc2_exact(b, d).defect;
    r.ok = le_fourth_root(r.disc_eps, r.dev_eps);
    return r;
}

// ---------------------------------------------------------------------------------------
// Triangles, dev23, K_{2,2,2}

inline std::size_t triangle_count(const TriadView& v) {
    std::size_t total = 0;
    for (std::size_t a = 0; a < v.na; ++a)
        for_each_bit((*v.ab)[a], [&](std::size_t b) { total += ((*v.ac)[a] & (*v.bc)[b]).count(); });
    return total;
}

template <class F>
void for_each_triangle(const TriadView& v, F&& f) {
    for (std::size_t a = 0; a < v.na; ++a)
        for_each_bit((*v.ab)[a], [&](std::size_t b) {
            Bitset cs = (*v.ac)[a] & (*v.bc)[b];
            for_each_bit(cs, [&](std::size_t c) { f(a, b, c); });
        });
}

struct TriangleSet {
    std::vector<Triple> triples;  // (a,b,c) vertex labels, one from each part
    std::size_t count = 0;
};

inline TriangleSet triangle_set(const Triad& g) {
    TriangleSet s;
    const auto v = g.view();
    for_each_triangle(v, [&](std::size_t a, std::size_t b, std::size_t c) {
        s.triples.push_back({g.part_a()[a], g.part_b()[b], g.part_c()[c]});
    });
    s.count = s.triples.size();
    return s;
}

// Triangle statistics and the 8-fold h-product sum; h = T-E' on H-edges among triangles,
// -E' on the other triangles, 0 off the triangle set (scaled by T = |K3|).
struct Dev23Core {
    BigInt triangles = 0;
    BigInt h_edges = 0;
    Rational d3 = 0;
    Rational raw_sum = 0;
};

template <class Oracle>
Dev23Core dev23_core(const TriadView& v, Oracle&& in_h, Mode mode) {
    Dev23Core r;
    std::size_t tri = 0, hits = 0;
    for_each_triangle(v, [&](std::size_t a, std::size_t b, std::size_t c) {
        ++tri;
        if (in_h(a, b, c)) ++hits;
    });
    r.triangles = tri;
    r.h_edges = hits;
    if (tri == 0) return r;
    r.d3 = make_rational(hits, tri);
    if (hits == 0 || hits == tri) return r;  // h vanishes on every triangle

    const i128 pos = static_cast<i128>(tri - hits), neg = -static_cast<i128>(hits);
    auto h = [&](std::size_t a, std::size_t b, std::size_t c) -> i128 {
        if (!v.is_triangle(a, b, c)) return 0;
        return in_h(a, b, c) ? pos : neg;
    };
    BigAccumulator total;
    if (mode == Mode::brute) {
        const std::size_t na = v.na, nb = v.nb, nc = v.nc;
        std::vector<i128> hv(na * nb * nc);
        for (std::size_t a = 0; a < na; ++a)
            for (std::size_t b = 0; b < nb; ++b)
                for (std::size_t c = 0; c < nc; ++c) hv[(a * nb + b) * nc + c] = h(a, b, c);
        auto H = [&](std::size_t a, std::size_t b, std::size_t c) { return hv[(a * nb + b) * nc + c]; };
        const bool small = tri < (1u << 15);  // T^8 < 2^120 fits a 128-bit product
        for (std::size_t u0 = 0; u0 < na; ++u0)
            for (std::size_t u1 = 0; u1 < na; ++u1)
                for (std::size_t w0 = 0; w0 < nb; ++w0)
                    for (std::size_t w1 = 0; w1 < nb; ++w1)
                        for (std::size_t z0 = 0; z0 < nc; ++z0) {
                            const i128 f[4] = {H(u0, w0, z0), H(u0, w1, z0), H(u1, w0, z0), H(u1, w1, z0)};
                            if (!f[0] || !f[1] || !f[2] || !f[3]) continue;
                            for (std::size_t z1 = 0; z1 < nc; ++z1) {
                                const i128 g[4] = {H(u0, w0, z1), H(u0, w1, z1), H(u1, w0, z1), H(u1, w1, z1)};
                                if (!g[0] || !g[1] || !g[2] || !g[3]) continue;
                                if (small) {
                                    i128 p = 1;
                                    for (int k = 0; k < 4; ++k) p *= f[k] * g[k];
                                    total.add(p);
                                } else {
                                    BigInt p = 1;
                                    for (int k = 0; k < 4; ++k) p *= to_bigint(f[k]) * to_bigint(g[k]);
                                    total.add(p);
                                }
                            }
                        }
    } else {
        // For each (z0,z1): M(u,w) = h(u,w,z0) h(u,w,z1); add sum_{u0,u1} (sum_w M(u0,w) M(u1,w))^2.
        // M is supported on u in N(z0)&N(z1), w in N(z0)&N(z1), uw an edge.
        const std::size_t nc = v.nc;
        std::vector<BigAccumulator> per_z(nc);
        parallel_for(nc, [&](std::size_t z0) {
            BigAccumulator acc;
            std::vector<std::size_t> us, ws;
            std::vector<i128> m;
            for (std::size_t z1 = z0; z1 < nc; ++z1) {
                Bitset uc = (*v.ca)[z0] & (*v.ca)[z1];
                if (uc.none()) continue;
                Bitset wc = (*v.cb)[z0] & (*v.cb)[z1];
                if (wc.none()) continue;
                us.clear();
                ws.clear();
                for_each_bit(uc, [&](std::size_t u) { us.push_back(u); });
                for_each_bit(wc, [&](std::size_t w) { ws.push_back(w); });
                const std::size_t ku = us.size(), kw = ws.size();
                m.assign(ku * kw, 0);
                for (std::size_t x = 0; x < ku; ++x)
                    for (std::size_t y = 0; y < kw; ++y)
                        if ((*v.ab)[us[x]].test(ws[y])) {
                            const i128 h0 = in_h(us[x], ws[y], z0) ? pos : neg;
                            const i128 h1 = in_h(us[x], ws[y], z1) ? pos : neg;
                            m[x * kw + y] = h0 * h1;
                        }
                const int zw = z1 == z0 ? 1 : 2;
                for (std::size_t x0 = 0; x0 < ku; ++x0)
                    for (std::size_t x1 = x0; x1 < ku; ++x1) {
                        i128 inner = 0;
                        for (std::size_t y = 0; y < kw; ++y) inner += m[x0 * kw + y] * m[x1 * kw + y];
                        if (inner == 0) continue;
                        const int reps = zw * (x1 == x0 ? 1 : 2);
                        for (int k = 0; k < reps; ++k) acc.add_square(inner);
                    }
            }
            per_z[z0] = acc;
        });
        for (const auto& a : per_z) total.add(a);
    }
    r.raw_sum = make_rational(total.value(), pow(BigInt(tri), 8));
    return r;
}

struct Dev23Result {
    Rational d3;
    std::array<Rational, 3> d2_per_pair;  // densities of (A,B), (A,C), (B,C)
    Rational raw_sum;
    Rational normalized_bound_lhs;  // raw_sum / (|U|^2 |W|^2 |Z|^2)
    std::array<Dev2Result, 3> pair_dev2;
    BigInt triangles = 0;
    BigInt h_edges = 0;
};

inline Rational part_volume_sq(std::size_t na, std::size_t nb, std::size_t nc) {
    BigInt v = BigInt(na) * nb * nc;
    return Rational(v * v);
}

inline Dev23Result assemble_dev23(const Dev23Core& core, const std::array<Dev2Result, 3>& pairs, std::size_t na,
                                  std::size_t nb, std::size_t nc) {
    Dev23Result r;
    r.d3 = core.d3;
    r.raw_sum = core.raw_sum;
    r.triangles = core.triangles;
    r.h_edges = core.h_edges;
    r.pair_dev2 = pairs;
    for (int k = 0; k < 3; ++k) r.d2_per_pair[k] = pairs[k].density;
    r.normalized_bound_lhs = core.raw_sum / part_volume_sq(na, nb, nc);
    return r;
}

inline Dev23Result dev23(const Hypergraph3& h, const Triad& g, Mode mode = Mode::fast) {
    const auto v = g.view();
    if (v.na == 0 || v.nb == 0 || v.nc == 0) throw std::invalid_argument("dev23: empty part");
    const auto& A = g.part_a();
    const auto& B = g.part_b();
    const auto& C = g.part_c();
    auto oracle = [&](std::size_t a, std::size_t b, std::size_t c) { return h.contains(A[a], B[b], C[c]); };
    auto core = dev23_core(v, oracle, mode);
    return assemble_dev23(core, {dev2(g.ab()), dev2(g.ac()), dev2(g.bc())}, v.na, v.nb, v.nc);
}

inline Rational mean_pair_density(const Dev23Result& r) {
    return (r.d2_per_pair[0] + r.d2_per_pair[1] + r.d2_per_pair[2]) / 3;
}

// dev_{2,3}(eps1, eps2): common d2 (mean of the pair densities unless overridden), every
// pair has dev2(eps2, d2), and raw_sum <= eps1 d2^12 |U|^2|W|^2|Z|^2.
inline bool has_dev23(const Dev23Result& r, const Rational& eps1, const Rational& eps2,
                      std::optional<Rational> d2_override = {}) {
    const Rational d2 = d2_override ? *d2_override : mean_pair_density(r);
    for (const auto& p : r.pair_dev2)
        if (!has_dev2(p, eps2, d2)) return false;
    return r.normalized_bound_lhs <= eps1 * rpow(d2, 12);
}

inline bool has_dev23(const Hypergraph3& h, const Triad& g, const Rational& eps1, const Rational& eps2,
                      std::optional<Rational> d2_override = {}) {
    return has_dev23(dev23(h, g), eps1, eps2, d2_override);
}

// Ratio raw_sum / (d2^12 |U|^2|W|^2|Z|^2): the smallest eps1 the triad certifies.
inline Rational dev23_ratio(const Dev23Result& r, std::optional<Rational> d2_override = {}) {
    const Rational d2 = d2_override ? *d2_override : mean_pair_density(r);
    if (d2 == 0) return r.raw_sum == 0 ? Rational(0) : Rational(-1);
    return r.normalized_bound_lhs / rpow(d2, 12);
}

inline double dev23_normalized_double(const Hypergraph3& h, const Triad& g) {
    const auto v = g.view();
    std::size_t tri = 0, hits = 0;
    for_each_triangle(v, [&](std::size_t a, std::size_t b, std::size_t c) {
        ++tri;
        hits += h.contains(g.part_a()[a], g.part_b()[b], g.part_c()[c]);
    });
    if (tri == 0) return 0.0;
    const long double d3 = static_cast<long double>(hits) / tri;
    long double total = 0;
    for (std::size_t z0 = 0; z0 < v.nc; ++z0)
        for (std::size_t z1 = 0; z1 < v.nc; ++z1) {
            Bitset uc = (*v.ca)[z0] & (*v.ca)[z1];
            Bitset wc = (*v.cb)[z0] & (*v.cb)[z1];
            std::vector<std::size_t> us, ws;
            for_each_bit(uc, [&](std::size_t u) { us.push_back(u); });
            for_each_bit(wc, [&](std::size_t w) { ws.push_back(w); });
            auto hv = [&](std::size_t a, std::size_t b, std::size_t c) -> long double {
                return h.contains(g.part_a()[a], g.part_b()[b], g.part_c()[c]) ? 1 - d3 : -d3;
            };
            std::vector<long double> m(us.size() * ws.size(), 0);
            for (std::size_t x = 0; x < us.size(); ++x)
                for (std::size_t y = 0; y < ws.size(); ++y)
                    if ((*v.ab)[us[x]].test(ws[y])) m[x * ws.size() + y] = hv(us[x], ws[y], z0) * hv(us[x], ws[y], z1);
            for (std::size_t x0 = 0; x0 < us.size(); ++x0)
                for (std::size_t x1 = 0; x1 < us.size(); ++x1) {
                    long double inner = 0;
                    for (std::size_t y = 0; y < ws.size(); ++y) inner += m[x0 * ws.size() + y] * m[x1 * ws.size() + y];
                    total += inner * inner;
                }
        }
    const long double vol = static_cast<long double>(v.na) * v.nb * v.nc;
    return static_cast<double>(total / (vol * vol));
}

// Ordered 6-tuples (u0,u1,w0,w1,z0,z1) whose 8 mixed triples are all triangles.
inline BigInt k222_count(const TriadView& v) {
    BigAccumulator acc;
    for (std::size_t z0 = 0; z0 < v.nc; ++z0)
        for (std::size_t z1 = 0; z1 < v.nc; ++z1) {
            Bitset uc = (*v.ca)[z0] & (*v.ca)[z1];
            if (uc.none()) continue;
            Bitset wc = (*v.cb)[z0] & (*v.cb)[z1];
            std::vector<Bitset> rows;
            for_each_bit(uc, [&](std::size_t u) { rows.push_back((*v.ab)[u] & wc); });
            for (const auto& r0 : rows)
                for (const auto& r1 : rows) {
                    const i128 c = static_cast<i128>((r0 & r1).count());
                    acc.add(c * c);
                }
        }
    return acc.value();
}

inline BigInt k222_count(const Triad& g) { return k222_count(g.view()); }

// Completions (a1,b1,c1) of a fixed corner (a0,b0,c0) (local indices).
inline BigInt k222_link(const TriadView& v, std::size_t a0, std::size_t b0, std::size_t c0) {
    if (a0 >= v.na || b0 >= v.nb || c0 >= v.nc || !v.is_triangle(a0, b0, c0))
        throw std::invalid_argument("k222_link: corner is not a triangle");
    BigInt total = 0;
    const auto& ab = *v.ab;
    const auto& ac = *v.ac;
    const auto& bc = *v.bc;
    for (std::size_t a1 = 0; a1 < v.na; ++a1) {
        if (!ab[a1].test(b0) || !ac[a1].test(c0)) continue;
        Bitset bs = ab[a0] & ab[a1];
        Bitset cbase = ac[a0] & ac[a1] & bc[b0];
        for_each_bit(bs, [&](std::size_t b1) {
            if (!bc[b1].test(c0)) return;
            total += (cbase & bc[b1]).count();
        });
    }
    return total;
}

inline BigInt k222_link(const Triad& g, Vertex u, Vertex v, Vertex w) {
    auto pos = [](const std::vector<Vertex>& part, Vertex x) -> std::size_t {
        for (std::size_t i = 0; i < part.size(); ++i)
            if (part[i] == x) return i;
        throw std::invalid_argument("k222_link: vertex not in its part");
    };
    return k222_link(g.view(), pos(g.part_a(), u), pos(g.part_b(), v), pos(g.part_c(), w));
}

// ---------------------------------------------------------------------------------------
// Theorem-backed checks

struct CountingCheck {
    Rational lhs;                // | |K3| - d^3 |A||B||C| |
    Rational eps;                // max over pairs of the certified dev2 parameter
    Rational rhs_lo, rhs_hi;     // enclosure of 4 eps^(1/4) |A||B||C|
    bool ok = false;
};

inline CountingCheck counting_lemma_check(const Triad& g, const Rational& d) {
    CountingCheck r;
    const auto v = g.view();
    const BigInt vol = BigInt(v.na) * v.nb * v.nc;
    r.eps = 0;
    for (const auto* p : g.pair_graphs()) {
        Rational e = dev2_eps(dev2(*p), d);
        if (e > r.eps) r.eps = e;
    }
    r.lhs = abs(Rational(triangle_count(v)) - d * d * d * vol);
    auto [lo, hi] = fourth_root_bounds(r.eps, 64);
    r.rhs_lo = 4 * lo * vol;
    r.rhs_hi = 4 * hi * vol;
    r.ok = vol == 0 || le_fourth_root(r.lhs / (4 * vol), r.eps);
    return r;
}

struct SymmetryScan {
    enum class Branch { low_density, high_density, left_witness, right_witness, none };
    Branch branch = Branch::none;
    std::vector<std::size_t> witness;  // local indices on the witness side
};

inline const char* to_string(SymmetryScan::Branch b) {
    switch (b) {
        case SymmetryScan::Branch::low_density: return "density <= 2 eps^(1/2)";
        case SymmetryScan::Branch::high_density: return "density >= 1 - 2 eps^(1/2)";
        case SymmetryScan::Branch::left_witness: return "left witness";
        case SymmetryScan::Branch::right_witness: return "right witness";
        case SymmetryScan::Branch::none: return "none";
    }
    return "none";
}

inline SymmetryScan symmetry_scan(const BipartiteGraph& b, const Rational& eps) {
    if (eps <= 0 || eps >= Rational(1, 4)) throw std::invalid_argument("symmetry_scan: eps must lie in (0,1/4)");
    SymmetryScan r;
    const Rational d = b.density();
    if (d * d <= 4 * eps) {
        r.branch = SymmetryScan::Branch::low_density;
        return r;
    }
    if ((1 - d) * (1 - d) <= 4 * eps) {
        r.branch = SymmetryScan::Branch::high_density;
        return r;
    }
    auto scan = [&](const std::vector<Bitset>& rows, std::size_t width) {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            Rational frac = make_rational(rows[i].count(), width);
            if (frac > eps && frac < 1 - eps) out.push_back(i);
        }
        return out;
    };
    auto left = scan(b.rows(), b.nr());
    if (!left.empty() && Rational(left.size()) >= eps * b.nl()) {
        r.branch = SymmetryScan::Branch::left_witness;
        r.witness = std::move(left);
        return r;
    }
    auto right = scan(b.cols(), b.nl());
    if (!right.empty() && Rational(right.size()) >= eps * b.nr()) {
        r.branch = SymmetryScan::Branch::right_witness;
        r.witness = std::move(right);
    }
    return r;
}

inline void require_edge_disjoint(const BipartiteGraph& x, const BipartiteGraph& y) {
    if (!x.same_sides(y)) throw std::invalid_argument("graphs do not share identical sides");
    for (std::size_t i = 0; i < x.nl(); ++i)
        if ((x.row(i) & y.row(i)).any()) throw std::invalid_argument("graphs have overlapping edges");
}

struct UnionCheck {
    Rational eps1, eps2;       // certified parameters at each graph's own density
    Dev2Result union_dev2;
    double bound = 0;          // eps1^(1/4) + eps2^(1/4)
    bool ok = false;
};

inline UnionCheck union_dev2_check(const BipartiteGraph& b1, const BipartiteGraph& b2) {
    require_edge_disjoint(b1, b2);
    UnionCheck r;
    auto r1 = dev2(b1), r2 = dev2(b2);
    r.eps1 = r1.normalized;
    r.eps2 = r2.normalized;
    std::vector<Bitset> rows = b1.rows();
    for (std::size_t i = 0; i < rows.size(); ++i) rows[i] |= b2.row(i);
    r.union_dev2 = detail::dev2_rows(rows, b1.nr(), Mode::fast);
    r.bound = std::pow(to_double(r.eps1), 0.25) + std::pow(to_double(r.eps2), 0.25);
    const Rational gap = abs(r.union_dev2.density - (r1.density + r2.density));
    r.ok = le_sum_fourth_roots(gap, r.eps1, r.eps2) && le_sum_fourth_roots(r.union_dev2.normalized, r.eps1, r.eps2);
    return r;
}

struct HomRandomCheck {
    bool ok = false;
    Rational raw_sum;
    Rational bound;  // 6 eps d2^12 |V1|^2|V2|^2|V3|^2
    std::array<bool, 3> pair_dev2_ok{};
    bool sizes_ok = false;
    bool delta_small_ok = false;  // delta <= (d2/2)^48, reported only
    BigInt triangles = 0, h_edges = 0;
    BigInt i1 = 0;         // 6-tuples with all 8 triples in H restricted to the triangles
    Rational chain_bound;  // 3 d d2^12 |V1|^2|V2|^2|V3|^2
    bool chain_ok = false;
};

inline HomRandomCheck hom_implies_random_check(const Hypergraph3& h, const Triad& g, const Rational& eps,
                                               const Rational& delta, const Rational& d2) {
    HomRandomCheck r;
    const auto v = g.view();
    const auto& A = g.part_a();
    const auto& B = g.part_b();
    const auto& C = g.part_c();
    auto oracle = [&](std::size_t a, std::size_t b, std::size_t c) { return h.contains(A[a], B[b], C[c]); };
    auto core = dev23_core(v, oracle, Mode::fast);
    r.triangles = core.triangles;
    r.h_edges = core.h_edges;
    if (Rational(core.h_edges) > eps * core.triangles)
        throw std::domain_error("hom_implies_random_check: precondition on density direction violated");
    const auto pairs = g.pair_graphs();
    for (int k = 0; k < 3; ++k) r.pair_dev2_ok[k] = has_dev2(dev2(*pairs[k]), delta, d2);
    const std::size_t sz[3] = {v.na, v.nb, v.nc};
    r.sizes_ok = true;
    for (int x = 0; x < 3; ++x)
        for (int y = 0; y < 3; ++y)
            if (Rational(sz[x] > sz[y] ? sz[x] - sz[y] : sz[y] - sz[x]) > delta * sz[x]) r.sizes_ok = false;
    r.delta_small_ok = delta <= rpow(d2 / 2, 48);
    const Rational vol2 = part_volume_sq(v.na, v.nb, v.nc);
    r.raw_sum = core.raw_sum;
    r.bound = 6 * eps * rpow(d2, 12) * vol2;
    r.ok = r.raw_sum <= r.bound;

    BigAccumulator acc;
    for (std::size_t z0 = 0; z0 < v.nc; ++z0)
        for (std::size_t z1 = 0; z1 < v.nc; ++z1) {
            Bitset uc = (*v.ca)[z0] & (*v.ca)[z1];
            if (uc.none()) continue;
            Bitset wc = (*v.cb)[z0] & (*v.cb)[z1];
            std::vector<Bitset> rows;
            for_each_bit(uc, [&](std::size_t u) {
                Bitset m = (*v.ab)[u] & wc;
                for_each_bit(Bitset(m), [&](std::size_t w) {
                    if (!oracle(u, w, z0) || !oracle(u, w, z1)) m.reset(w);
                });
                rows.push_back(std::move(m));
            });
            for (const auto& r0 : rows)
                for (const auto& r1 : rows) {
                    const i128 c = static_cast<i128>((r0 & r1).count());
                    acc.add(c * c);
                }
        }
    r.i1 = acc.value();
    const Rational d = core.triangles == 0 ? Rational(0) : make_rational(core.h_edges, core.triangles);
    r.chain_bound = 3 * d * rpow(d2, 12) * vol2;
    r.chain_ok = Rational(r.i1) <= r.chain_bound;
    return r;
}

}  // namespace vc2reg
