#pragma once

#include "vc2reg/analysis.hpp"
#include "vc2reg/core/random.hpp"
#include "vc2reg/packing.hpp"
#include "vc2reg/report.hpp"
#include "vc2reg/schedule.hpp"
#include "vc2reg/splitting.hpp"

#include <array>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

namespace vc2reg {

// ---------------------------------------------------------------------------------------
// Claim check on one cluster cell

struct ClaimHomResult {
    std::optional<int> sigma;  // set when the majority color reaches the threshold
    Rational fraction;         // max over sigma in {0,1} of |R_sigma cap cell| / |cell|
    std::array<std::size_t, 3> color_counts{};
    std::size_t cell_size = 0;
};

inline ClaimHomResult claim_hom_check(const EdgeColoredTripartite3Graph& r,
                                      const std::array<std::vector<std::size_t>, 3>& groups, const Rational& threshold) {
    for (const auto& g : groups)
        if (g.empty()) throw std::invalid_argument("claim_hom_check: empty group cell");
    ClaimHomResult out;
    for (auto a : groups[0])
        for (auto b : groups[1])
            for (auto c : groups[2]) ++out.color_counts[r.color(a, b, c)];
    out.cell_size = groups[0].size() * groups[1].size() * groups[2].size();
    const std::size_t best = std::max(out.color_counts[0], out.color_counts[1]);
    out.fraction = make_rational(best, out.cell_size);
    if (out.fraction >= threshold) out.sigma = out.color_counts[1] >= out.color_counts[0] ? 1 : 0;
    return out;
}

// ---------------------------------------------------------------------------------------
// Report types

struct PairClusters {
    int i = 0, j = 0;
    bool in_psi = false;
    std::vector<int> quasirandom_parts;  // original part indices, ascending
    std::vector<int> non_quasirandom;
    std::size_t corners = 0;
    std::size_t m = 0;                      // clusters found by packing
    std::vector<std::vector<int>> clusters;  // original part indices per cluster
    std::vector<int> representatives;        // original part index per cluster
    std::vector<std::uint8_t> nontrivial;
    std::vector<int> exceptions;  // packing exception set, original indices
    std::vector<int> cluster_of;  // per original part: cluster or -1
    std::size_t similarity_violations = 0;
    bool color2_over_budget = false;
    bool m_cap_exceeded = false;
};

struct PoolSplit {
    int cluster = -1;  // -1: leftover pool
    BigInt mass = 0;
    Rational rho;           // |W| / (|V_i||V_j|)
    Rational p;             // rho^-1 / l1, 0 when the pool is empty
    BigInt s_floor = 0;     // floor(1/p)
    std::size_t slots = 0;  // parts assigned in Q
    std::size_t first_part = 0;
    bool met = true;
    std::size_t attempts = 0;
    Rational merged_normalized;  // dev2 of the pool union
};

struct PairSplit {
    int i = 0, j = 0;
    std::vector<PoolSplit> pools;
    std::size_t folded_clusters = 0;  // clusters moved to the leftover pool for lack of slots
};

struct CellRecord {
    int i = 0, j = 0, s = 0, u = 0, v = 0, w = 0;
    std::size_t cell_size = 0;  // part triples
    BigInt mass = 0;            // triangles
    std::size_t r2 = 0, tr = 0;
    bool omega1 = false, omega2 = false, omega3 = false;
    std::optional<ClaimHomResult> claim;
    std::array<std::size_t, 5> sigma{};  // |Sigma_0| .. |Sigma_4|
};

struct PipelineInvariants {
    bool q_valid = false;
    bool q_ell_exact = false;
    bool pool_conservation = false;  // pool masses sum to |V_i||V_j| for every class pair
    bool p_triangle_partition = false;
    bool q_triangle_partition = false;
    bool omega_monotone = false;
    bool y_monotone = false;
    bool ok() const {
        return q_valid && q_ell_exact && pool_conservation && p_triangle_partition && q_triangle_partition &&
               omega_monotone && y_monotone;
    }
};

struct PipelineReport {
    TuningSchedule schedule;
    std::uint64_t seed = 0;
    std::size_t t = 0, ell_in = 0, ell1 = 0, m_max = 0;
    HomogeneityReport input_metrics;
    std::size_t f0 = 0, f1 = 0, ferr = 0, ferr_middle = 0;
    PsiResult psi;
    std::vector<PairClusters> pairs;
    std::size_t psi_free_class_triples = 0;
    std::size_t tr_size = 0;
    std::array<std::size_t, 4> omega{};
    std::array<BigInt, 4> y{};
    std::vector<CellRecord> cells;
    std::size_t claim_checked = 0, claim_passed = 0, claim_failed = 0;
    std::vector<PairSplit> splits;
    std::size_t splits_unmet = 0;
    std::array<BigInt, 5> sigma{};
    HomogeneityReport output_metrics;
    bool degenerate = false;
    PipelineInvariants invariants;
};

// ---------------------------------------------------------------------------------------

namespace detail {

// Largest remainder with at least one slot per nonzero mass; needs slots >= number of nonzero masses.
inline std::vector<std::size_t> apportion(const std::vector<BigInt>& masses, std::size_t slots) {
    BigInt total = 0;
    std::size_t nonzero = 0;
    for (const auto& m : masses) {
        total += m;
        nonzero += m > 0;
    }
    std::vector<std::size_t> alloc(masses.size(), 0);
    if (total == 0) return alloc;
    if (slots < nonzero) throw std::invalid_argument("apportion: fewer slots than nonempty pools");
    std::vector<Rational> quota(masses.size());
    std::size_t used = 0;
    for (std::size_t k = 0; k < masses.size(); ++k) {
        if (masses[k] == 0) continue;
        quota[k] = make_rational(masses[k] * slots, total);
        alloc[k] = std::max<std::size_t>(1, floor_of(quota[k]).convert_to<std::size_t>());
        used += alloc[k];
    }
    while (used < slots) {
        std::size_t best = masses.size();
        for (std::size_t k = 0; k < masses.size(); ++k)
            if (masses[k] > 0 && (best == masses.size() || quota[k] - alloc[k] > quota[best] - alloc[best])) best = k;
        ++alloc[best];
        ++used;
    }
    while (used > slots) {
        std::size_t worst = masses.size();
        for (std::size_t k = 0; k < masses.size(); ++k)
            if (alloc[k] > 1 && (worst == masses.size() || quota[k] - alloc[k] < quota[worst] - alloc[worst])) worst = k;
        --alloc[worst];
        --used;
    }
    return alloc;
}

inline BipartiteGraph union_of(const IndexedDecomposition& idx, int i, int j, const std::vector<int>& parts) {
    std::vector<Bitset> rows(idx.part(i).size(), Bitset(idx.part(j).size()));
    for (int a : parts) {
        const auto& g = idx.pair_part(i, j, a);
        for (std::size_t x = 0; x < rows.size(); ++x) rows[x] |= g.row(x);
    }
    return BipartiteGraph::from_rows(idx.part(i), idx.part(j), std::move(rows));
}

inline PairList to_pair_list(const BipartiteGraph& g) {
    PairList out;
    for (const auto& [x, y] : g.edges()) out.emplace_back(x, y);
    return out;
}

}  // namespace detail

// Equitability and homogeneity of an output decomposition plus the leftover-mass check.
struct AuditReport {
    EquitabilityReport equitability;
    HomogeneityReport homogeneity;
    Rational gamma_fraction;  // cross pairs outside dev2(eps2(l), 1/l) parts
    bool gamma_ok = false;    // gamma_fraction <= schedule eps1
};

inline AuditReport audit_output(const AnalysisContext& qctx, const TuningSchedule& sch,
                                const std::vector<TriadMeasure>* measures = nullptr) {
    AuditReport a;
    const std::size_t ell = qctx.index().decomposition().ell();
    const Rational eps2 = sch.eps2_target(std::max<std::size_t>(ell, 1));
    a.equitability = equitability_check(qctx, sch.eps1, eps2);
    if (measures)
        a.homogeneity = homogeneity_from(qctx, *measures, sch.mu, sch.classify_eps1, eps2, true);
    else
        a.homogeneity = homogeneity_report(qctx, sch.mu, sch.classify_eps1, eps2, true);
    a.gamma_fraction = 1 - a.equitability.good_fraction;
    a.gamma_ok = a.gamma_fraction <= sch.eps1;
    return a;
}

inline AuditReport audit_output(const Hypergraph3& h, const Decomposition& q, const TuningSchedule& sch) {
    return audit_output(AnalysisContext(h, q), sch);
}

// ---------------------------------------------------------------------------------------

struct CompressResult {
    Decomposition q;
    PipelineReport report;
    AuditReport audit;
};

inline CompressResult compress_decomposition(const Hypergraph3& h, const Decomposition& p, const TuningSchedule& sch,
                                             std::uint64_t seed) {
    if (sch.mode != ScheduleMode::desk)
        throw std::invalid_argument("compress_decomposition: paper-mode constants are not runnable thresholds");
    validate_desk(sch);
    AnalysisContext ctx(h, p);
    const auto& idx = ctx.index();
    const int t = ctx.t();
    PipelineReport rep;
    rep.schedule = sch;
    rep.seed = seed;
    rep.t = static_cast<std::size_t>(t);
    rep.ell_in = p.ell();

    // (1) F-sets
    const auto cls = classify_triads(ctx, sch.classify_eps1, sch.classify_eps2, sch.f_val);
    rep.f0 = cls.f0;
    rep.f1 = cls.f1;
    rep.ferr = cls.ferr;
    rep.ferr_middle = cls.ferr_middle;
    rep.input_metrics = homogeneity_from(ctx, cls.triads, sch.mu, sch.classify_eps1, sch.classify_eps2, true);

    // (2) Psi
    rep.psi = bad_pairs_psi(cls, sch.psi_coeff);

    // (3)-(4) aux graphs, clusters, nontriviality
    std::vector<ClassPair> class_pairs;
    for (int i = 0; i < t; ++i)
        for (int j = i + 1; j < t; ++j) class_pairs.push_back({i, j});
    rep.pairs.resize(class_pairs.size());
    std::map<ClassPair, std::size_t> pair_slot;
    for (std::size_t k = 0; k < class_pairs.size(); ++k) pair_slot[class_pairs[k]] = k;
    const Rational ell_nominal(static_cast<long long>(rep.ell_in));
    parallel_for(class_pairs.size(), [&](std::size_t k) {
        auto [i, j] = class_pairs[k];
        PairClusters pc;
        pc.i = i;
        pc.j = j;
        pc.in_psi = rep.psi.psi.count({i, j}) > 0;
        const std::size_t lij = idx.ell(i, j);
        pc.cluster_of.assign(lij, -1);
        pc.quasirandom_parts = quasirandom_parts(cls, i, j);
        for (std::size_t a = 0; a < lij; ++a)
            if (!cls.quasirandom(i, j, static_cast<int>(a))) pc.non_quasirandom.push_back(static_cast<int>(a));
        if (!pc.in_psi && !pc.quasirandom_parts.empty()) {
            const auto aux = build_aux_graph(cls, i, j);
            pc.corners = aux.corners.size();
            if (aux.graph.nb() == 0) {
                // No corners (t = 2): nothing distinguishes the parts.
                pc.m = 1;
                pc.clusters = {aux.left_parts};
                pc.representatives = {aux.left_parts.front()};
            } else {
                const auto pk = packing_cluster(aux.graph, sch.delta, sch.packing_eps);
                pc.m = pk.m;
                pc.clusters.resize(pk.m);
                for (auto x : pk.representatives) pc.representatives.push_back(aux.left_parts[x]);
                for (std::size_t x = 0; x < aux.left_parts.size(); ++x)
                    if (pk.clusters[x] >= 0) pc.clusters[pk.clusters[x]].push_back(aux.left_parts[x]);
                for (auto x : pk.exceptions) pc.exceptions.push_back(aux.left_parts[x]);
                pc.similarity_violations = pk.violations.size();
                pc.color2_over_budget = pk.color2_over_budget;
            }
            for (std::size_t u = 0; u < pc.clusters.size(); ++u)
                for (int a : pc.clusters[u]) pc.cluster_of[a] = static_cast<int>(u);
            pc.m_cap_exceeded = sch.m_cap > 0 && pc.m > sch.m_cap;
            pc.nontrivial.resize(pc.m);
            for (std::size_t u = 0; u < pc.m; ++u)
                pc.nontrivial[u] =
                    Rational(pc.clusters[u].size()) * static_cast<long long>(pc.m) >= sch.nontrivial_coeff * ell_nominal;
        }
        rep.pairs[k] = std::move(pc);
    });
    for (const auto& pc : rep.pairs) rep.m_max = std::max(rep.m_max, pc.m);
    rep.ell1 = sch.ell1 ? sch.ell1 : std::max<std::size_t>(1, rep.m_max * rep.m_max);
    auto pc_of = [&](int i, int j) -> const PairClusters& { return rep.pairs[pair_slot.at({i, j})]; };

    // (5)-(7) R coloring, Tr, Omega filters, claim checks
    for (int i = 0; i < t; ++i)
        for (int j = i + 1; j < t; ++j)
            for (int s = j + 1; s < t; ++s) {
                const auto& pij = pc_of(i, j);
                const auto& pis = pc_of(i, s);
                const auto& pjs = pc_of(j, s);
                if (pij.in_psi || pis.in_psi || pjs.in_psi) continue;
                ++rep.psi_free_class_triples;
                const std::size_t la = idx.ell(i, j), lb = idx.ell(i, s), lc = idx.ell(j, s);
                std::vector<std::uint8_t> colors(la * lb * lc);
                for (std::size_t a = 0; a < la; ++a)
                    for (std::size_t b = 0; b < lb; ++b)
                        for (std::size_t c = 0; c < lc; ++c)
                            colors[(a * lb + b) * lc + c] = static_cast<std::uint8_t>(color_of(cls.label(
                                {i, j, s, static_cast<int>(a), static_cast<int>(b), static_cast<int>(c)})));
                EdgeColoredTripartite3Graph r(la, lb, lc, std::move(colors));
                std::array<std::vector<int>, 3> rep_of;
                for (int k = 0; k < 3; ++k) {
                    const auto& pc = k == 0 ? pij : k == 1 ? pis : pjs;
                    for (int x : pc.cluster_of) rep_of[k].push_back(x < 0 ? -1 : pc.representatives[x]);
                }
                const auto tr = troublesome_triples(r, rep_of);
                rep.tr_size += tr.size();
                std::vector<std::uint8_t> in_tr(la * lb * lc, 0);
                for (const auto& x : tr) in_tr[(x[0] * lb + x[1]) * lc + x[2]] = 1;

                for (std::size_t u = 0; u < pij.m; ++u)
                    for (std::size_t v = 0; v < pis.m; ++v)
                        for (std::size_t w = 0; w < pjs.m; ++w) {
                            CellRecord cell;
                            cell.i = i;
                            cell.j = j;
                            cell.s = s;
                            cell.u = static_cast<int>(u);
                            cell.v = static_cast<int>(v);
                            cell.w = static_cast<int>(w);
                            const auto &A = pij.clusters[u], &B = pis.clusters[v], &C = pjs.clusters[w];
                            cell.cell_size = A.size() * B.size() * C.size();
                            for (int a : A)
                                for (int b : B)
                                    for (int c : C) {
                                        cell.mass += cls.measure({i, j, s, a, b, c}).triangles;
                                        cell.r2 += r.color(a, b, c) == 2;
                                        cell.tr += in_tr[(a * lb + b) * lc + c];
                                    }
                            cell.omega1 = pij.nontrivial[u] && pis.nontrivial[v] && pjs.nontrivial[w];
                            cell.omega2 = cell.omega1 && Rational(cell.r2) <= sch.omega2_coeff * cell.cell_size;
                            cell.omega3 = cell.omega2 && Rational(cell.tr) <= sch.omega3_coeff * cell.cell_size;
                            ++rep.omega[0];
                            rep.y[0] += cell.mass;
                            if (cell.omega1) ++rep.omega[1], rep.y[1] += cell.mass;
                            if (cell.omega2) ++rep.omega[2], rep.y[2] += cell.mass;
                            if (cell.omega3) {
                                ++rep.omega[3];
                                rep.y[3] += cell.mass;
                                std::array<std::vector<std::size_t>, 3> groups;
                                groups[0].assign(A.begin(), A.end());
                                groups[1].assign(B.begin(), B.end());
                                groups[2].assign(C.begin(), C.end());
                                cell.claim = claim_hom_check(r, groups, 1 - sch.claim_slack);
                                ++rep.claim_checked;
                                if (cell.claim->sigma)
                                    ++rep.claim_passed;
                                else
                                    ++rep.claim_failed;
                            }
                            rep.cells.push_back(std::move(cell));
                        }
            }

    // (8)-(9) split pools into l1 parts per class pair
    std::vector<std::vector<PairList>> new_parts(class_pairs.size());
    rep.splits.resize(class_pairs.size());
    parallel_for(class_pairs.size(), [&](std::size_t k) {
        auto [i, j] = class_pairs[k];
        const auto& pc = rep.pairs[k];
        PairSplit ps;
        ps.i = i;
        ps.j = j;
        const BigInt full = BigInt(idx.part(i).size()) * idx.part(j).size();
        auto mass_of = [&](const std::vector<int>& parts) {
            BigInt m = 0;
            for (int a : parts) m += idx.pair_part(i, j, a).edge_count();
            return m;
        };
        // Pools: nontrivial clusters (by index), then the leftover.
        std::vector<int> pool_cluster;
        for (std::size_t u = 0; u < pc.m; ++u)
            if (pc.nontrivial[u] && mass_of(pc.clusters[u]) > 0) pool_cluster.push_back(static_cast<int>(u));
        std::vector<int> leftover;
        auto rebuild_leftover = [&] {
            std::vector<std::uint8_t> pooled(idx.ell(i, j), 0);
            for (int u : pool_cluster)
                for (int a : pc.clusters[u]) pooled[a] = 1;
            leftover.clear();
            for (std::size_t a = 0; a < pooled.size(); ++a)
                if (!pooled[a]) leftover.push_back(static_cast<int>(a));
        };
        rebuild_leftover();
        auto pool_count = [&] { return pool_cluster.size() + (mass_of(leftover) > 0 ? 1 : 0); };
        while (pool_count() > rep.ell1) {
            // fold the lightest cluster into the leftover
            auto lightest = std::min_element(pool_cluster.begin(), pool_cluster.end(), [&](int x, int y) {
                return mass_of(pc.clusters[x]) < mass_of(pc.clusters[y]);
            });
            pool_cluster.erase(lightest);
            ++ps.folded_clusters;
            rebuild_leftover();
        }
        std::vector<std::vector<int>> pool_parts;
        std::vector<BigInt> masses;
        for (int u : pool_cluster) {
            pool_parts.push_back(pc.clusters[u]);
            masses.push_back(mass_of(pc.clusters[u]));
        }
        pool_parts.push_back(leftover);
        masses.push_back(mass_of(leftover));
        const auto slots = detail::apportion(masses, rep.ell1);
        std::size_t next = 0;
        for (std::size_t q = 0; q < pool_parts.size(); ++q) {
            PoolSplit pool;
            pool.cluster = q < pool_cluster.size() ? pool_cluster[q] : -1;
            pool.mass = masses[q];
            pool.rho = make_rational(masses[q], full);
            if (pool.mass > 0) {
                pool.p = 1 / (pool.rho * static_cast<long long>(rep.ell1));
                pool.s_floor = floor_of(1 / pool.p);
            }
            pool.slots = slots[q];
            pool.first_part = next;
            if (pool.slots > 0) {
                const auto g = detail::union_of(idx, i, j, pool_parts[q]);
                pool.merged_normalized = dev2(g).normalized;
                const auto split = split_quasirandom(g, pool.slots, sch.split_delta,
                                                     Rng::derive(seed, "pipeline/split", {std::uint64_t(i), std::uint64_t(j), q}),
                                                     sch.split_max_attempts);
                pool.met = split.met;
                pool.attempts = split.attempts;
                for (const auto& part : split.parts) new_parts[k].push_back(detail::to_pair_list(part));
                next += pool.slots;
            }
            ps.pools.push_back(std::move(pool));
        }
        rep.splits[k] = std::move(ps);
    });
    for (const auto& ps : rep.splits)
        for (const auto& pool : ps.pools) rep.splits_unmet += pool.slots > 0 && !pool.met;

    rep.degenerate = true;
    for (const auto& pc : rep.pairs)
        if (!pc.in_psi && !pc.clusters.empty()) rep.degenerate = false;

    // (10) assemble Q and measure it
    std::map<ClassPair, std::vector<PairList>> q_pairs;
    for (std::size_t k = 0; k < class_pairs.size(); ++k) q_pairs[class_pairs[k]] = std::move(new_parts[k]);
    Decomposition q(p.vertex_parts(), std::move(q_pairs));
    rep.invariants.q_valid = validate_decomposition(h, q).ok;
    rep.invariants.q_ell_exact = true;
    for (const auto& [key, parts] : q.pair_parts()) rep.invariants.q_ell_exact &= parts.size() == rep.ell1;
    rep.invariants.pool_conservation = true;
    for (std::size_t k = 0; k < class_pairs.size(); ++k) {
        auto [i, j] = class_pairs[k];
        BigInt sum = 0;
        for (const auto& pool : rep.splits[k].pools) sum += pool.mass;
        rep.invariants.pool_conservation &= sum == BigInt(idx.part(i).size()) * idx.part(j).size();
    }
    rep.invariants.p_triangle_partition = rep.input_metrics.triangle_total == rep.input_metrics.cross_triples;

    CompressResult out;
    if (!rep.invariants.q_valid) throw std::logic_error("compress_decomposition: assembled Q does not validate");
    AnalysisContext qctx(h, q);
    TriadIndex qti(qctx.index());
    const Rational eps2q = sch.eps2_target(rep.ell1);
    const auto qms = measure_triads(qctx, qti, true, sch.classify_eps1, eps2q);
    out.audit = audit_output(qctx, sch, &qms);
    rep.output_metrics = out.audit.homogeneity;
    rep.invariants.q_triangle_partition = rep.output_metrics.triangle_total == rep.output_metrics.cross_triples;

    // Sigma filters per claimed cell, on the Q triads built from the cell's split pieces.
    auto pieces = [&](int i, int j, int u) -> std::pair<std::size_t, std::size_t> {
        for (const auto& pool : rep.splits[pair_slot.at({i, j})].pools)
            if (pool.cluster == u) return {pool.first_part, pool.slots};
        return {0, 0};
    };
    for (auto& cell : rep.cells) {
        if (!cell.claim || !cell.claim->sigma) continue;
        const auto [fu, su] = pieces(cell.i, cell.j, cell.u);
        const auto [fv, sv] = pieces(cell.i, cell.s, cell.v);
        const auto [fw, sw] = pieces(cell.j, cell.s, cell.w);
        cell.sigma[0] = (su + 1) * (sv + 1) * (sw + 1);
        cell.sigma[2] = su * sv * sw;
        cell.sigma[1] = cell.sigma[0] - cell.sigma[2];
        const int sigma = *cell.claim->sigma;
        for (std::size_t x = 0; x < su; ++x)
            for (std::size_t y = 0; y < sv; ++y)
                for (std::size_t z = 0; z < sw; ++z) {
                    const auto& m = qms[qti.of({cell.i, cell.j, cell.s, static_cast<int>(fu + x), static_cast<int>(fv + y),
                                                static_cast<int>(fw + z)})];
                    if (m.triangles == 0) continue;
                    const Rational frac = sigma == 1 ? m.density : 1 - m.density;
                    if (frac < 1 - sch.sigma_slack) ++cell.sigma[3];
                }
        cell.sigma[4] = cell.sigma[2] - cell.sigma[3];
        for (int k = 0; k < 5; ++k) rep.sigma[k] += cell.sigma[k];
    }

    rep.invariants.omega_monotone =
        rep.omega[0] >= rep.omega[1] && rep.omega[1] >= rep.omega[2] && rep.omega[2] >= rep.omega[3];
    rep.invariants.y_monotone = rep.y[0] >= rep.y[1] && rep.y[1] >= rep.y[2] && rep.y[2] >= rep.y[3];

    out.q = std::move(q);
    out.report = std::move(rep);
    return out;
}

// ---------------------------------------------------------------------------------------
// JSON

inline Json homogeneity_json(const HomogeneityReport& r, bool with_table = false) {
    Json j;
    j["mu"] = num(r.mu);
    j["eps1"] = num(r.eps1);
    j["eps2"] = num(r.eps2);
    j["cross_triples"] = num(r.cross_triples);
    j["all_triples"] = num(r.all_triples);
    j["triangle_total"] = num(r.triangle_total);
    j["homogeneous_mass"] = num(r.homogeneous_mass);
    j["regular_mass"] = num(r.regular_mass);
    j["good_triple_fraction"] = num(r.good_triple_fraction);
    j["good_triple_fraction_all"] = num(r.good_triple_fraction_all);
    j["regular_triple_fraction"] = num(r.regular_triple_fraction);
    j["regular_triple_fraction_all"] = num(r.regular_triple_fraction_all);
    j["homogeneous_predicate"] = r.homogeneous_predicate;
    j["regular_predicate"] = r.regular_predicate;
    j["regularity_computed"] = r.regularity_computed;
    if (with_table) {
        Json rows = Json::array();
        for (const auto& t : r.triads)
            rows.push_back({{"i", t.address.i}, {"j", t.address.j}, {"s", t.address.s}, {"alpha", t.address.alpha},
                            {"beta", t.address.beta}, {"gamma", t.address.gamma}, {"density", num(t.density)},
                            {"triangles", num(static_cast<std::size_t>(t.triangles))},
                            {"homogeneous", t.homogeneous}, {"regular", t.regular}});
        j["triads"] = rows;
    }
    return j;
}

inline Json equitability_json(const EquitabilityReport& r) {
    Json j;
    j["eps1"] = num(r.eps1);
    j["eps2"] = num(r.eps2);
    j["equipartition"] = r.equipartition;
    j["min_part"] = num(r.min_part);
    j["max_part"] = num(r.max_part);
    j["good_pairs"] = num(r.good_pairs);
    j["cross_pairs"] = num(r.cross_pairs);
    j["all_pairs"] = num(r.all_pairs);
    j["good_fraction"] = num(r.good_fraction);
    j["good_fraction_all"] = num(r.good_fraction_all);
    j["quasirandom_parts"] = num(r.quasirandom_parts);
    j["total_parts"] = num(r.total_parts);
    j["predicate"] = r.predicate;
    Json fails = Json::array();
    for (const auto& f : r.failing_parts)
        fails.push_back({{"i", f.i}, {"j", f.j}, {"alpha", f.alpha}, {"density", num(f.density)},
                         {"normalized", num(f.normalized)}});
    j["failing_parts"] = fails;
    return j;
}

inline Json pipeline_report_json(const PipelineReport& r) {
    Json j;
    j["schedule"] = schedule_to_json(r.schedule);
    j["seed"] = r.seed;
    j["t"] = r.t;
    j["ell_in"] = r.ell_in;
    j["ell1"] = r.ell1;
    j["m_max"] = r.m_max;
    j["degenerate"] = r.degenerate;
    j["input_metrics"] = homogeneity_json(r.input_metrics);
    j["output_metrics"] = homogeneity_json(r.output_metrics);
    j["classification"] = {{"F0", num(r.f0)}, {"F1", num(r.f1)}, {"Ferr", num(r.ferr)}, {"Ferr_middle", num(r.ferr_middle)}};
    Json psi;
    psi["threshold"] = num(r.psi.threshold);
    Json members = Json::array(), counts = Json::array();
    for (const auto& [i, j2] : r.psi.psi) members.push_back({i, j2});
    for (const auto& [key, n] : r.psi.ferr_counts)
        counts.push_back({{"i", key.first}, {"j", key.second}, {"ferr_triads", num(n)}});
    psi["pairs"] = members;
    psi["ferr_counts"] = counts;
    j["psi"] = psi;
    Json pairs = Json::array();
    for (const auto& pc : r.pairs) {
        Json x;
        x["i"] = pc.i;
        x["j"] = pc.j;
        x["in_psi"] = pc.in_psi;
        x["quasirandom_parts"] = pc.quasirandom_parts;
        x["non_quasirandom"] = pc.non_quasirandom;
        x["corners"] = num(pc.corners);
        x["m"] = num(pc.m);
        x["clusters"] = pc.clusters;
        x["representatives"] = pc.representatives;
        x["nontrivial"] = pc.nontrivial;
        x["exceptions"] = pc.exceptions;
        x["similarity_violations"] = num(pc.similarity_violations);
        x["color2_over_budget"] = pc.color2_over_budget;
        x["m_cap_exceeded"] = pc.m_cap_exceeded;
        pairs.push_back(x);
    }
    j["pairs"] = pairs;
    j["psi_free_class_triples"] = num(r.psi_free_class_triples);
    j["troublesome_triples"] = num(r.tr_size);
    j["omega"] = {num(r.omega[0]), num(r.omega[1]), num(r.omega[2]), num(r.omega[3])};
    j["y"] = {num(r.y[0]), num(r.y[1]), num(r.y[2]), num(r.y[3])};
    Json cells = Json::array();
    for (const auto& c : r.cells) {
        Json x;
        x["cell"] = {c.i, c.j, c.s, c.u, c.v, c.w};
        x["cell_size"] = num(c.cell_size);
        x["mass"] = num(c.mass);
        x["r2"] = num(c.r2);
        x["tr"] = num(c.tr);
        x["omega"] = {c.omega1, c.omega2, c.omega3};
        if (c.claim) {
            x["claim_fraction"] = num(c.claim->fraction);
            x["claim_sigma"] = c.claim->sigma ? Json(*c.claim->sigma) : Json(nullptr);
            x["sigma_counts"] = {num(c.sigma[0]), num(c.sigma[1]), num(c.sigma[2]), num(c.sigma[3]), num(c.sigma[4])};
        }
        cells.push_back(x);
    }
    j["cells"] = cells;
    j["claim"] = {{"checked", num(r.claim_checked)}, {"passed", num(r.claim_passed)}, {"failed", num(r.claim_failed)}};
    Json splits = Json::array();
    for (const auto& ps : r.splits) {
        Json x;
        x["i"] = ps.i;
        x["j"] = ps.j;
        x["folded_clusters"] = num(ps.folded_clusters);
        Json pools = Json::array();
        for (const auto& pool : ps.pools)
            pools.push_back({{"cluster", pool.cluster}, {"mass", num(pool.mass)}, {"rho", num(pool.rho)},
                             {"p", num(pool.p)}, {"s_floor", num(pool.s_floor)}, {"slots", num(pool.slots)},
                             {"first_part", pool.first_part}, {"met", pool.met}, {"attempts", num(pool.attempts)},
                             {"merged_normalized", num(pool.merged_normalized)}});
        x["pools"] = pools;
        splits.push_back(x);
    }
    j["splits"] = splits;
    j["splits_unmet"] = num(r.splits_unmet);
    j["sigma"] = {num(r.sigma[0]), num(r.sigma[1]), num(r.sigma[2]), num(r.sigma[3]), num(r.sigma[4])};
    const auto& inv = r.invariants;
    j["invariants"] = {{"q_valid", inv.q_valid},
                       {"q_ell_exact", inv.q_ell_exact},
                       {"pool_conservation", inv.pool_conservation},
                       {"p_triangle_partition", inv.p_triangle_partition},
                       {"q_triangle_partition", inv.q_triangle_partition},
                       {"omega_monotone", inv.omega_monotone},
                       {"y_monotone", inv.y_monotone},
                       {"ok", inv.ok()}};
    return j;
}

inline Json audit_json(const AuditReport& a) {
    return {{"equitability", equitability_json(a.equitability)},
            {"homogeneity", homogeneity_json(a.homogeneity)},
            {"gamma_fraction", num(a.gamma_fraction)},
            {"gamma_ok", a.gamma_ok}};
}

}  // namespace vc2reg
