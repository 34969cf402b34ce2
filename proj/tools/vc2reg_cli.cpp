// Command-line front end: generate | analyze | compress | schedule-dump.

#include "vc2reg/analysis.hpp"
#include "vc2reg/generators.hpp"
#include "vc2reg/pipeline.hpp"
#include "vc2reg/report.hpp"
#include "vc2reg/schedule.hpp"
#include "vc2reg/vc.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace vc2reg;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot open '" + path + "'");
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << text;
    if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

Json parse_json_file(const std::string& path) {
    const std::string text = read_file(path);
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw UsageError(path + ": invalid JSON at byte " + std::to_string(e.byte) + ": " + e.what());
    }
}

Rational rational_flag(const std::string& s, const char* name) {
    try {
        return parse_rational(s);
    } catch (const std::exception&) {
        throw UsageError(std::string("--") + name + ": not a rational number: '" + s + "'");
    }
}

struct Common {
    std::uint64_t seed = 0;
    unsigned threads = 0;
    std::string format = "json";
    std::string out;
};

using Clock = std::chrono::steady_clock;

// Timings are integer milliseconds: reports carry no bare floats.
long long ms_since(Clock::time_point t0) {
    return std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - t0).count();
}

// Canonical JSON, or CSV with one "# table" section per array-of-object metric.
std::string render(const Json& doc, const std::string& format) {
    if (format == "json") return doc.dump(2) + "\n";
    std::ostringstream out;
    out << "# command," << doc["command"].get<std::string>() << "\n";
    for (auto it = doc["metrics"].begin(); it != doc["metrics"].end(); ++it) {
        const auto& v = it.value();
        if (v.is_array() && !v.empty() && v[0].is_object()) {
            out << "# table," << it.key() << "\n" << json_table_to_csv(v);
        } else if (v.is_object()) {
            Json row = Json::object();
            for (auto f = v.begin(); f != v.end(); ++f)
                if (!f.value().is_array() && (!f.value().is_object() || f.value().contains("exact"))) row[f.key()] = f.value();
            out << "# table," << it.key() << "\n" << json_table_to_csv(Json::array({row}));
        }
    }
    return out.str();
}

void emit(const Json& doc, const Common& c) {
    const auto problems = validate_report(doc);
    if (!problems.empty()) throw std::logic_error("report failed schema validation: " + problems.front());
    const std::string text = render(doc, c.format);
    if (c.out.empty())
        std::cout << text;
    else
        write_file(c.out, text);
}

Json base_doc(const std::string& command, const Common& c, Json parameters) {
    Json doc;
    doc["command"] = command;
    doc["seed"] = c.seed;
    doc["parameters"] = std::move(parameters);
    doc["metrics"] = Json::object();
    doc["warnings"] = Json::array();
    return doc;
}

// ---------------------------------------------------------------------------------------
// generate

int cmd_generate(const std::string& params_path, const Common& c) {
    const auto t0 = Clock::now();
    const Json prm = parse_json_file(params_path);
    if (c.out.empty()) throw UsageError("generate needs --out <prefix>");
    const std::string kind = prm.value("kind", std::string("planted"));
    Json params = prm;
    if (kind == "planted") {
        PlantedParams p;
        try {
            p.n = prm.at("n").get<std::size_t>();
            p.t = prm.at("t").get<std::size_t>();
            p.ell = prm.at("ell").get<std::size_t>();
        } catch (const Json::exception& e) {
            throw UsageError(params_path + ": " + e.what());
        }
        p.groups_per_pair = prm.value("groups_per_pair", std::size_t{1});
        if (prm.contains("hi")) p.hi = json_rational(prm["hi"]);
        if (prm.contains("lo")) p.lo = json_rational(prm["lo"]);
        if (prm.contains("mid")) p.mid = json_rational(prm["mid"]);
        if (prm.contains("noise")) p.noise = json_rational(prm["noise"]);
        const std::string profile = prm.value("profile", std::string("parity"));
        if (profile == "parity")
            p.profile.kind = DensityProfile::Kind::parity;
        else if (profile == "all_hi")
            p.profile.kind = DensityProfile::Kind::all_hi;
        else if (profile == "all_lo")
            p.profile.kind = DensityProfile::Kind::all_lo;
        else
            throw UsageError(params_path + ": profile must be parity, all_hi or all_lo");
        p.seed = c.seed;
        PlantedInstance inst;
        try {
            inst = gen_planted_decomposition(p);
        } catch (const std::invalid_argument& e) {
            throw UsageError(params_path + ": " + e.what());
        }
        write_file(c.out + ".hg", serialize_hypergraph(inst.hypergraph));
        write_file(c.out + ".decomp.json", serialize_decomposition(inst.decomposition));
        Json truth;
        truth["seed"] = c.seed;
        truth["homogeneity_fraction"] = num(inst.ground_truth.homogeneity_fraction);
        Json groups = Json::object();
        for (const auto& [key, g] : inst.ground_truth.part_group) groups[class_key(key.first, key.second)] = g;
        truth["part_group"] = groups;
        Json triads = Json::array();
        for (const auto& pt : inst.ground_truth.triads)
            triads.push_back({{"i", pt.address.i}, {"j", pt.address.j}, {"s", pt.address.s}, {"alpha", pt.address.alpha},
                              {"beta", pt.address.beta}, {"gamma", pt.address.gamma}, {"level", to_string(pt.level)},
                              {"planted_density", num(pt.planted_density)}, {"triangles", num(pt.triangles)}});
        truth["triads"] = triads;
        write_file(c.out + ".truth.json", truth.dump(2) + "\n");
    } else if (kind == "ip2") {
        const int k = prm.value("k", 2);
        try {
            write_file(c.out + ".hg", serialize_hypergraph(gen_ip2_hypergraph(k, prm.value("n_extra", std::size_t{0}), c.seed)));
        } catch (const std::invalid_argument& e) {
            throw UsageError(params_path + ": " + e.what());
        }
    } else {
        throw UsageError(params_path + ": kind must be 'planted' or 'ip2'");
    }
    std::cerr << "generate: wrote " << c.out << ".* in " << ms_since(t0) << " ms\n";
    return 0;
}

// ---------------------------------------------------------------------------------------
// analyze

struct AnalyzeOptions {
    std::string hypergraph, decomposition;
    std::vector<std::string> metrics;
    std::string eps1 = "1000", eps2 = "1/10", mu = "1/10", target_eps1 = "1/10";
    int vc2_kmax = 2;
    std::uint64_t vc2_budget = 200'000'000ULL;
    bool no_timing = false;
};

int cmd_analyze(const AnalyzeOptions& o, Common c) {
    const auto t0 = Clock::now();
    Hypergraph3 h;
    try {
        h = parse_hypergraph(read_file(o.hypergraph));
    } catch (const ParseError& e) {
        throw UsageError(o.hypergraph + ": " + e.what());
    }
    std::vector<std::string> metrics = o.metrics;
    if (metrics.empty()) metrics = {"dev2", "dev23", "homogeneity", "equitability"};
    for (const auto& m : metrics)
        if (m != "dev2" && m != "dev23" && m != "homogeneity" && m != "equitability" && m != "vc2")
            throw UsageError("--metric: unknown metric '" + m + "'");
    auto wants = [&](const char* m) { return std::find(metrics.begin(), metrics.end(), m) != metrics.end(); };
    const Rational eps1 = rational_flag(o.eps1, "eps1"), eps2 = rational_flag(o.eps2, "eps2"),
                   mu = rational_flag(o.mu, "mu"), target = rational_flag(o.target_eps1, "target-eps1");
    Json params{{"hypergraph", o.hypergraph}, {"decomposition", o.decomposition}, {"metrics", metrics},
                {"eps1", num(eps1)},         {"eps2", num(eps2)},                 {"mu", num(mu)},
                {"target_eps1", num(target)}, {"vc2_kmax", o.vc2_kmax},           {"vc2_budget", o.vc2_budget}};
    Json doc = base_doc("analyze", c, params);
    Json& out = doc["metrics"];
    Json timing = Json::object();

    const bool needs_p = wants("dev2") || wants("dev23") || wants("homogeneity") || wants("equitability");
    if (needs_p) {
        if (o.decomposition.empty()) throw UsageError("the selected metrics need --decomposition");
        Decomposition p;
        try {
            p = parse_decomposition(read_file(o.decomposition));
        } catch (const std::exception& e) {
            throw UsageError(o.decomposition + ": " + e.what());
        }
        const auto v = validate_decomposition(h, p);
        if (!v.ok) throw UsageError(o.decomposition + ": invalid decomposition: " + v.violations.front().kind + " at " +
                                    v.violations.front().location);
        const AnalysisContext ctx(h, p);
        if (wants("dev2")) {
            const auto t = Clock::now();
            Json rows = Json::array();
            for (int i = 0; i < ctx.t(); ++i)
                for (int j = i + 1; j < ctx.t(); ++j)
                    for (std::size_t a = 0; a < ctx.index().ell(i, j); ++a) {
                        const auto& st = ctx.stats().at(i, j, static_cast<int>(a));
                        rows.push_back({{"i", i},
                                        {"j", j},
                                        {"alpha", a},
                                        {"density", num(st.density)},
                                        {"normalized", num(st.normalized)},
                                        {"quasirandom", ctx.stats().quasirandom(i, j, static_cast<int>(a), eps2)}});
                    }
            out["dev2"] = rows;
            timing["dev2_ms"] = ms_since(t);
        }
        std::vector<TriadMeasure> ms;
        if (wants("dev23") || wants("homogeneity")) {
            const auto t = Clock::now();
            ms = measure_triads(ctx, TriadIndex(ctx.index()), wants("dev23"), eps1, eps2);
            timing["triads_ms"] = ms_since(t);
        }
        if (wants("dev23")) {
            Json rows = Json::array();
            for (const auto& m : ms)
                rows.push_back({{"i", m.address.i},
                                {"j", m.address.j},
                                {"s", m.address.s},
                                {"alpha", m.address.alpha},
                                {"beta", m.address.beta},
                                {"gamma", m.address.gamma},
                                {"triangles", num(static_cast<std::size_t>(m.triangles))},
                                {"density", num(m.density)},
                                {"normalized_bound_lhs", num(m.dev23_lhs)},
                                {"d2", num(m.d2)},
                                {"regular", m.dev23_pass}});
            out["dev23"] = rows;
        }
        if (wants("homogeneity")) out["homogeneity"] = homogeneity_json(homogeneity_from(ctx, ms, mu, eps1, eps2, wants("dev23")));
        if (wants("equitability")) {
            const auto t = Clock::now();
            out["equitability"] = equitability_json(equitability_check(ctx, target, eps2));
            timing["equitability_ms"] = ms_since(t);
        }
    }
    if (wants("vc2")) {
        const auto t = Clock::now();
        if (o.vc2_kmax < 0 || o.vc2_kmax > 4) throw UsageError("--vc2-kmax must lie in [0,4]");
        const auto r = vc2_dim(h, o.vc2_kmax, o.vc2_budget);
        Json v{{"dimension", num(r.dimension)}, {"incomplete", r.incomplete}, {"evaluations", num(static_cast<std::size_t>(r.evaluations))}};
        if (r.witness) v["witness"] = {{"a", r.witness->a}, {"b", r.witness->b}, {"c", r.witness->c}};
        if (r.incomplete) doc["warnings"].push_back("vc2 search budget exhausted; dimension is a lower bound");
        out["vc2"] = v;
        timing["vc2_ms"] = ms_since(t);
    }
    timing["total_ms"] = ms_since(t0);
    if (!o.no_timing) doc["timing"] = timing;
    emit(doc, c);
    return 0;
}

// ---------------------------------------------------------------------------------------
// compress / schedule-dump

struct CompressOptions {
    std::string hypergraph, decomposition, schedule;
    bool no_timing = false;
};

TuningSchedule load_schedule(const std::string& path) {
    if (path.empty()) return desk_schedule();
    const Json j = parse_json_file(path);
    try {
        return schedule_from_json(j);
    } catch (const std::exception& e) {
        throw UsageError(path + ": " + e.what());
    }
}

int cmd_compress(const CompressOptions& o, const Common& c) {
    const auto t0 = Clock::now();
    const TuningSchedule sch = load_schedule(o.schedule);
    Json params{{"hypergraph", o.hypergraph}, {"decomposition", o.decomposition}, {"schedule", o.schedule}};
    Json doc = base_doc("compress", c, params);
    if (sch.mode == ScheduleMode::paper) {
        doc["warnings"].push_back("paper-mode schedule: constants are not runnable thresholds; emitting the symbolic schedule");
        doc["metrics"]["status"] = "refused";
        doc["metrics"]["schedule"] = schedule_to_json(sch);
        emit(doc, c);
        return 0;
    }
    if (c.out.empty()) throw UsageError("compress needs --out <prefix>");
    Hypergraph3 h;
    Decomposition p;
    try {
        h = parse_hypergraph(read_file(o.hypergraph));
        p = parse_decomposition(read_file(o.decomposition));
    } catch (const UsageError&) {
        throw;
    } catch (const std::exception& e) {
        throw UsageError(std::string("input: ") + e.what());
    }
    const auto v = validate_decomposition(h, p);
    if (!v.ok) throw UsageError(o.decomposition + ": invalid decomposition: " + v.violations.front().kind);
    const auto res = compress_decomposition(h, p, sch, c.seed);
    write_file(c.out + ".decomp.json", serialize_decomposition(res.q));
    doc["metrics"]["status"] = "ok";
    doc["metrics"]["pipeline"] = pipeline_report_json(res.report);
    doc["metrics"]["audit"] = audit_json(res.audit);
    if (res.report.splits_unmet) doc["warnings"].push_back("some splits did not meet their verification targets");
    if (res.report.claim_failed) doc["warnings"].push_back("some claim-hom cells failed and were excluded");
    if (!o.no_timing) doc["timing"] = {{"total_ms", ms_since(t0)}};
    Common rc = c;
    rc.out = c.out + (c.format == "json" ? ".report.json" : ".report.csv");
    emit(doc, rc);
    return 0;
}

struct DumpOptions {
    std::string schedule;
    std::string eps1 = "1/2", c1 = "1";
    int k = 1, D = 1;
};

int cmd_schedule_dump(const DumpOptions& o, const Common& c) {
    TuningSchedule s;
    if (!o.schedule.empty()) {
        s = load_schedule(o.schedule);
    } else {
        try {
            s = derive_paper_schedule(rational_flag(o.eps1, "eps1"), o.k, o.D, rational_flag(o.c1, "c1"));
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
    }
    Json doc = base_doc("schedule-dump", c, {{"schedule", o.schedule}, {"eps1", o.eps1}, {"k", o.k}, {"D", o.D}, {"c1", o.c1}});
    doc["metrics"]["schedule"] = schedule_to_json(s);
    if (s.paper) doc["metrics"]["chain_holds"] = all_checks_hold(schedule_checks(s));
    emit(doc, c);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"vc2reg: regular decompositions of 3-graphs of bounded VC2-dimension"};
    app.require_subcommand(1);
    Common common;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--seed", common.seed, "seed for every random stream")->capture_default_str();
        sub->add_option("--threads", common.threads, "worker cap (0 = hardware)")->capture_default_str();
        sub->add_option("--format", common.format, "report format")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
        sub->add_option("--out", common.out, "output path or prefix");
    };

    std::string params_path;
    auto* gen = app.add_subcommand("generate", "write a generated instance (<out>.hg, <out>.decomp.json, <out>.truth.json)");
    gen->add_option("--params", params_path, "generator parameter file (JSON)")->required();
    add_common(gen);

    AnalyzeOptions ao;
    auto* ana = app.add_subcommand("analyze", "compute metrics of (H, P)");
    ana->add_option("--hypergraph", ao.hypergraph)->required();
    ana->add_option("--decomposition", ao.decomposition);
    ana->add_option("--metric", ao.metrics, "dev2 | dev23 | homogeneity | equitability | vc2 (repeatable)");
    ana->add_option("--eps1", ao.eps1, "dev23 bound for the regularity test")->capture_default_str();
    ana->add_option("--eps2", ao.eps2, "dev2 bound for pair-parts")->capture_default_str();
    ana->add_option("--mu", ao.mu, "homogeneity parameter")->capture_default_str();
    ana->add_option("--target-eps1", ao.target_eps1, "equitability eps1")->capture_default_str();
    ana->add_option("--vc2-kmax", ao.vc2_kmax)->capture_default_str();
    ana->add_option("--vc2-budget", ao.vc2_budget)->capture_default_str();
    ana->add_flag("--no-timing", ao.no_timing, "omit wall-clock timings (byte-stable reports)");
    add_common(ana);

    CompressOptions co;
    auto* cmp = app.add_subcommand("compress", "run the compression pipeline; writes <out>.decomp.json and <out>.report.*");
    cmp->add_option("--hypergraph", co.hypergraph)->required();
    cmp->add_option("--decomposition", co.decomposition)->required();
    cmp->add_option("--schedule", co.schedule, "schedule file (JSON); desk defaults when omitted");
    cmp->add_flag("--no-timing", co.no_timing, "omit wall-clock timings (byte-stable reports)");
    add_common(cmp);

    DumpOptions dopt;
    auto* dump = app.add_subcommand("schedule-dump", "print a schedule, deriving paper-mode constants when asked");
    dump->add_option("--schedule", dopt.schedule);
    dump->add_option("--eps1", dopt.eps1)->capture_default_str();
    dump->add_option("--k", dopt.k)->capture_default_str();
    dump->add_option("--D", dopt.D)->capture_default_str();
    dump->add_option("--c1", dopt.c1, "surrogate for the packing constant")->capture_default_str();
    add_common(dump);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }
    set_thread_limit(common.threads);
    try {
        if (*gen) return cmd_generate(params_path, common);
        if (*ana) return cmd_analyze(ao, common);
        if (*cmp) return cmd_compress(co, common);
        if (*dump) return cmd_schedule_dump(dopt, common);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
