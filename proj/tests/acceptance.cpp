// Prints one PASS/FAIL line per acceptance criterion; exit status is the number of failures.
#include "vc2reg/generators.hpp"
#include "vc2reg/packing.hpp"
#include "vc2reg/pipeline.hpp"
#include "vc2reg/quasirandomness.hpp"
#include "vc2reg/schedule.hpp"
#include "vc2reg/splitting.hpp"
#include "vc2reg/vc.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>

using namespace vc2reg;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
    bool pass = false;
    std::string detail;
};

int failures = 0;

void criterion(int n, double limit_s, const std::function<Outcome()>& body) {
    const auto t0 = Clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double s = std::chrono::duration<double>(Clock::now() - t0).count();
    const bool in_time = limit_s <= 0 || s < limit_s;
    if (!in_time) o.detail += "; over time limit";
    const bool pass = o.pass && in_time;
    failures += !pass;
    std::printf("%s criterion %d: %s (%.2f s", pass ? "PASS" : "FAIL", n, o.detail.c_str(), s);
    if (limit_s > 0) std::printf(", limit %.0f s", limit_s);
    std::printf(")\n");
    std::fflush(stdout);
}

template <class... A>
std::string fmt(const char* f, A... a) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, a...);
    return buf;
}

// Best-permutation agreement between packing clusters and planted labels.
double agreement(const PackingResult& r, const std::vector<int>& labels, std::size_t k) {
    std::vector<int> perm(k);
    std::iota(perm.begin(), perm.end(), 0);
    std::size_t best = 0;
    do {
        std::size_t hit = 0;
        for (std::size_t a = 0; a < labels.size(); ++a)
            hit += r.clusters[a] >= 0 && static_cast<std::size_t>(r.clusters[a]) < k && perm[r.clusters[a]] == labels[a];
        best = std::max(best, hit);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return double(best) / labels.size();
}

Hypergraph3 complete_3graph(std::size_t n) {
    std::vector<Triple> e;
    for (Vertex a = 0; a < n; ++a)
        for (Vertex b = a + 1; b < n; ++b)
            for (Vertex c = b + 1; c < n; ++c) e.push_back({a, b, c});
    return Hypergraph3(n, e);
}

// Every cross triple is counted once by enumerating all vertex triples and locating its triad by pair-part lookup.
bool triple_partition_recount(const Decomposition& q) {
    const auto& vp = q.vertex_parts();
    std::size_t n = 0;
    for (const auto& part : vp) n += part.size();
    std::vector<int> cls(n, -1);
    for (std::size_t i = 0; i < vp.size(); ++i)
        for (auto v : vp[i]) cls[v] = static_cast<int>(i);
    std::map<std::pair<Vertex, Vertex>, int> part_of;
    for (const auto& [key, parts] : q.pair_parts())
        for (std::size_t a = 0; a < parts.size(); ++a)
            for (auto [x, y] : parts[a]) {
                if (!part_of.emplace(std::minmax(x, y), static_cast<int>(a)).second) return false;
            }
    std::map<std::array<int, 6>, std::size_t> triad_count;
    std::size_t cross = 0;
    for (Vertex a = 0; a < n; ++a)
        for (Vertex b = a + 1; b < n; ++b)
            for (Vertex c = b + 1; c < n; ++c) {
                std::array<std::pair<int, Vertex>, 3> s{{{cls[a], a}, {cls[b], b}, {cls[c], c}}};
                std::sort(s.begin(), s.end());
                if (s[0].first == s[1].first || s[1].first == s[2].first) continue;
                ++cross;
                const auto f = [&](Vertex x, Vertex y) {
                    auto it = part_of.find(std::minmax(x, y));
                    return it == part_of.end() ? -1 : it->second;
                };
                const int al = f(s[0].second, s[1].second), be = f(s[0].second, s[2].second), ga = f(s[1].second, s[2].second);
                if (al < 0 || be < 0 || ga < 0) return false;
                ++triad_count[{s[0].first, s[1].first, s[2].first, al, be, ga}];
            }
    // Recount each triad from its part sizes: the triangle count summed over triads must match.
    std::size_t summed = 0;
    for (const auto& [addr, c] : triad_count) summed += c;
    BigInt expected = 0;
    for (std::size_t i = 0; i < vp.size(); ++i)
        for (std::size_t j = i + 1; j < vp.size(); ++j)
            for (std::size_t s = j + 1; s < vp.size(); ++s) expected += BigInt(vp[i].size()) * vp[j].size() * vp[s].size();
    return summed == cross && BigInt(cross) == expected;
}

}  // namespace

int main() {
    criterion(1, 60, [] {
        std::size_t instances = 0, mismatches = 0;
        for (std::uint64_t seed = 0; seed < 150; ++seed) {
            const auto g = gen_random_bipartite(1 + seed % 8, 1 + (seed / 8) % 8, Rational(1 + seed % 5, 6), seed);
            const auto f = dev2(g, Mode::fast), b = dev2(g, Mode::brute);
            ++instances;
            mismatches += !(f.raw_sum == b.raw_sum && f.normalized == b.normalized && f.density == b.density);
        }
        for (std::uint64_t seed = 0; seed < 100; ++seed) {
            const auto g = gen_random_triad(2 + seed % 4, 2 + (seed / 4) % 4, 3 + seed % 3, Rational(1 + seed % 3, 4), seed);
            const auto h = gen_random_hypergraph_on(g, Rational(1 + seed % 4, 5), seed + 1000);
            const auto f = dev23(h, g, Mode::fast), b = dev23(h, g, Mode::brute);
            ++instances;
            mismatches += !(f.raw_sum == b.raw_sum && f.normalized_bound_lhs == b.normalized_bound_lhs && f.triangles == b.triangles);
        }
        return Outcome{mismatches == 0 && instances >= 200, fmt("%zu fast/brute mismatches over %zu instances", mismatches, instances)};
    });

    criterion(2, 300, [] {
        std::size_t counting = 0, uni = 0, equiv = 0, hom = 0;
        const std::size_t runs = 50;
        for (std::uint64_t seed = 0; seed < runs; ++seed) {
            const auto g = gen_random_triad(20, 20, 20, Rational(1 + seed % 3, 4), seed);
            counting += !counting_lemma_check(g, Rational(1 + seed % 3, 4)).ok;

            const auto b = gen_random_bipartite(40, 40, Rational(1, 2), seed);
            std::vector<LocalEdge> x, y;
            Rng rng = Rng::stream(seed, "acceptance/union");
            for (const auto& e : b.local_edges()) (rng.below(3) ? x : y).push_back(e);
            uni += !union_dev2_check(BipartiteGraph(b.left(), b.right(), x), BipartiteGraph(b.left(), b.right(), y)).ok;

            const auto small = gen_random_bipartite(14, 14, Rational(1 + seed % 4, 5), seed + 300);
            equiv += !check_equivalence(small, small.density()).ok;

            const auto t = gen_random_triad(30, 30, 30, Rational(1, 2), seed + 600);
            const auto h = gen_random_hypergraph_on(t, Rational(1, 40), seed + 900);
            const auto r = hom_implies_random_check(h, t, Rational(1, 20), Rational(1, 10), Rational(1, 2));
            hom += !(r.ok && r.chain_ok);
        }
        const bool ok = counting + uni + equiv + hom == 0;
        return Outcome{ok, fmt("failures over %zu seeds each: counting %zu, union %zu, equivalence %zu, hom-implies-random %zu",
                               runs, counting, uni, equiv, hom)};
    });

    criterion(3, 0, [] {
        const Rational eps(1, 25);
        const double exc_cap = std::sqrt(to_double(eps)) * 200;
        std::size_t bad_m = 0, bad_acc = 0, bad_exc = 0;
        double worst = 1;
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            const auto inst = gen_clustered_colored(200, 200, 3, Rational(2, 5), Rational(1, 100), seed);
            const auto r = packing_cluster(inst.graph, Rational(1, 5), eps);
            const double acc = agreement(r, inst.labels, 3);
            worst = std::min(worst, acc);
            bad_m += r.m != 3;
            bad_acc += acc < 0.98;
            bad_exc += double(r.exceptions.size()) > exc_cap;
        }
        return Outcome{bad_m + bad_acc + bad_exc == 0,
                       fmt("20 seeds: m!=3 in %zu, accuracy<98%% in %zu (worst %.4f), exceptions>sqrt(eps)a in %zu", bad_m,
                           bad_acc, worst, bad_exc)};
    });

    criterion(4, 120, [] {
        bool ok = true;
        std::string d;
        for (int k : {1, 2}) {
            const auto r = vc2_dim(gen_ip2_hypergraph(k), k);
            ok = ok && r.dimension == k && !r.incomplete;
            d += fmt("ip2(%d) -> %d; ", k, r.dimension);
        }
        for (std::size_t n : {4u, 7u, 10u}) {
            const auto c = vc2_dim(complete_3graph(n), 2), e = vc2_dim(Hypergraph3(n, {}), 2);
            ok = ok && c.dimension == 0 && e.dimension == 0 && !c.incomplete && !e.incomplete;
            d += fmt("K(%zu) -> %d, empty(%zu) -> %d; ", n, c.dimension, n, e.dimension);
        }
        return Outcome{ok, d};
    });

    criterion(5, 0, [] {
        std::size_t good = 0, nonempty_e0 = 0, roundtrip_fail = 0;
        for (std::uint64_t seed = 0; seed < 100; ++seed) {
            const auto b = gen_random_bipartite(200, 200, Rational(1, 2), seed);
            const auto r = split_quasirandom(b, 4, Rational(1, 10), seed, 1);
            bool ok = true;
            for (const auto& a : r.achieved)
                ok = ok && abs(a.density - Rational(1, 8)) <= Rational(1, 80) && a.normalized <= 4 * r.input_dev2.normalized;
            good += ok;
            nonempty_e0 += r.remainder.edge_count() != 0;
            roundtrip_fail += !(merge_parts(r.parts).graph == b);
        }
        return Outcome{good >= 90 && nonempty_e0 == 0 && roundtrip_fail == 0,
                       fmt("%zu/100 seeds meet density and dev2 targets; E0 nonempty in %zu; round-trip failures %zu", good,
                           nonempty_e0, roundtrip_fail)};
    });

    criterion(6, 60, [] {
        PlantedParams p;
        p.n = 360;
        p.t = 6;
        p.ell = 8;
        p.groups_per_pair = 2;
        p.hi = Rational(19, 20);
        p.lo = Rational(1, 20);
        p.seed = 1;
        const auto inst = gen_planted_decomposition(p);
        const auto sch = desk_schedule();
        const auto a = compress_decomposition(inst.hypergraph, inst.decomposition, sch, 1);
        const auto b = compress_decomposition(inst.hypergraph, inst.decomposition, sch, 1);
        const auto& r = a.report;
        const bool valid = validate_decomposition(inst.hypergraph, a.q).ok;
        bool ell_exact = true;
        for (const auto& [key, parts] : a.q.pair_parts()) ell_exact = ell_exact && parts.size() == r.ell1;
        const bool hom = r.output_metrics.good_triple_fraction >= r.input_metrics.good_triple_fraction - Rational(1, 20);
        const bool claims = r.claim_failed == 0 && r.claim_passed == r.claim_checked;
        const bool same = serialize_decomposition(a.q) == serialize_decomposition(b.q) &&
                          pipeline_report_json(a.report).dump() == pipeline_report_json(b.report).dump();
        return Outcome{valid && ell_exact && hom && r.psi.psi.empty() && claims && same,
                       fmt("valid %d, ell1=%zu exact %d, homogeneity P %.4f -> Q %.4f, |Psi|=%zu, claims %zu/%zu, "
                           "byte-identical rerun %d",
                           valid, r.ell1, ell_exact, to_double(r.input_metrics.good_triple_fraction),
                           to_double(r.output_metrics.good_triple_fraction), r.psi.psi.size(), r.claim_passed,
                           r.claim_checked, same)};
    });

    criterion(7, 0, [] {
        Rng rng = Rng::stream(7, "acceptance/schedule");
        std::size_t bad = 0;
        std::string first_bad;
        for (int s = 0; s < 20; ++s) {
            const Rational eps1(1 + static_cast<long long>(rng.below(98)), 100);
            const int k = 1 + static_cast<int>(rng.below(4)), D = 1 + static_cast<int>(rng.below(4));
            const Rational c1(1 + static_cast<long long>(rng.below(40)), 8);
            const auto sch = derive_paper_schedule(eps1, k, D, c1);
            const auto cs = schedule_checks(sch);
            if (!all_checks_hold(cs)) {
                ++bad;
                if (first_bad.empty()) first_bad = fmt(" (first: eps1=%s k=%d D=%d c1=%s)", to_string(eps1).c_str(), k, D, to_string(c1).c_str());
            }
        }
        return Outcome{bad == 0, fmt("%zu/20 random tuples violate the constant chain", bad) + first_bad};
    });

    criterion(8, 0, [] {
        std::size_t runs = 0, bad = 0;
        for (std::uint64_t seed = 0; seed < 12; ++seed) {
            PlantedParams p;
            p.n = 36 + 2 * (seed % 13);
            p.t = 3 + seed % 3;
            p.ell = 1 + seed % 4;
            p.groups_per_pair = 1 + seed % 2;
            p.noise = Rational(seed % 3, 50);
            p.seed = seed;
            if (seed % 4 == 3) {
                p.profile.kind = DensityProfile::Kind::table;
                p.profile.fallback = Level::mid;
            }
            const auto inst = gen_planted_decomposition(p);
            const auto res = compress_decomposition(inst.hypergraph, inst.decomposition, desk_schedule(), seed);
            ++runs;
            const auto& r = res.report;
            bool ok = r.invariants.ok() && validate_decomposition(inst.hypergraph, res.q).ok &&
                      triple_partition_recount(inst.decomposition) && triple_partition_recount(res.q);
            for (int k = 0; k < 3; ++k) ok = ok && r.omega[k] >= r.omega[k + 1] && r.y[k] >= r.y[k + 1];
            bad += !ok;
        }
        return Outcome{bad == 0, fmt("%zu/%zu pipeline runs at n<=60 break an invariant", bad, runs)};
    });

    std::printf("%d criteria failed\n", failures);
    return failures;
}
