#pragma once

#include "vc2reg/core/bipartite.hpp"
#include "vc2reg/core/hypergraph.hpp"
#include "vc2reg/core/triad.hpp"

#include <json.hpp>

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace vc2reg {

using PairList = std::vector<std::pair<Vertex, Vertex>>;
using ClassPair = std::pair<int, int>;  // i < j

// Vertex partition plus, per class pair (i,j), a list of pair-parts of K2[V_i,V_j].
// Pairs are stored oriented (x in V_i, y in V_j) once validated; raw input is kept as given.
class Decomposition {
public:
    Decomposition() = default;
    Decomposition(std::vector<std::vector<Vertex>> vertex_parts, std::map<ClassPair, std::vector<PairList>> pair_parts)
        : vertex_parts_(std::move(vertex_parts)), pair_parts_(std::move(pair_parts)) {}

    std::size_t t() const { return vertex_parts_.size(); }
    const std::vector<std::vector<Vertex>>& vertex_parts() const { return vertex_parts_; }
    const std::map<ClassPair, std::vector<PairList>>& pair_parts() const { return pair_parts_; }

    std::size_t ell(int i, int j) const {
        auto it = pair_parts_.find({std::min(i, j), std::max(i, j)});
        return it == pair_parts_.end() ? 0 : it->second.size();
    }
    // Nominal ell: max over class pairs.
    std::size_t ell() const {
        std::size_t m = 0;
        for (const auto& [k, v] : pair_parts_) m = std::max(m, v.size());
        return m;
    }

    bool operator==(const Decomposition&) const = default;

private:
    std::vector<std::vector<Vertex>> vertex_parts_;
    std::map<ClassPair, std::vector<PairList>> pair_parts_;
};

struct Violation {
    std::string kind;
    std::string location;
    std::string detail;
};

struct ValidationReport {
    bool ok = true;
    std::vector<Violation> violations;
    std::vector<Violation> warnings;
};

inline std::string class_key(int i, int j) { return std::to_string(i) + "," + std::to_string(j); }

inline ValidationReport validate_decomposition(const Hypergraph3& h, const Decomposition& p) {
    ValidationReport rep;
    auto fail = [&](std::string kind, std::string loc, std::string detail) {
        rep.ok = false;
        rep.violations.push_back({std::move(kind), std::move(loc), std::move(detail)});
    };
    const std::size_t n = h.n();
    const int t = static_cast<int>(p.t());
    std::vector<int> part_of(n, -1);
    for (int i = 0; i < t; ++i) {
        const auto& part = p.vertex_parts()[i];
        if (part.empty()) rep.warnings.push_back({"empty_vertex_part", "part " + std::to_string(i), ""});
        for (Vertex v : part) {
            if (v >= n) {
                fail("vertex_out_of_range", "part " + std::to_string(i), "vertex " + std::to_string(v));
            } else if (part_of[v] != -1) {
                fail("vertex_duplicate", "part " + std::to_string(i),
                     "vertex " + std::to_string(v) + " already in part " + std::to_string(part_of[v]));
            } else {
                part_of[v] = i;
            }
        }
    }
    for (std::size_t v = 0; v < n; ++v)
        if (part_of[v] == -1) fail("vertex_uncovered", "vertex " + std::to_string(v), "not in any part");

    for (const auto& [key, parts] : p.pair_parts()) {
        auto [i, j] = key;
        if (i < 0 || j >= t || i >= j) fail("bad_class_pair", class_key(i, j), "class indices must satisfy 0<=i<j<t");
    }
    for (int i = 0; i < t; ++i) {
        for (int j = i + 1; j < t; ++j) {
            const std::string loc = class_key(i, j);
            auto it = p.pair_parts().find({i, j});
            const std::size_t ni = p.vertex_parts()[i].size(), nj = p.vertex_parts()[j].size();
            if (it == p.pair_parts().end()) {
                if (ni * nj > 0) fail("missing_class_pair", loc, "no pair-parts given");
                continue;
            }
            std::map<std::pair<Vertex, Vertex>, int> seen;
            for (std::size_t a = 0; a < it->second.size(); ++a) {
                if (it->second[a].empty())
                    rep.warnings.push_back({"empty_pair_part", loc, "part " + std::to_string(a)});
                for (auto [x, y] : it->second[a]) {
                    Vertex u = x, w = y;
                    auto side = [&](Vertex v) { return v < n ? part_of[v] : -2; };
                    if (side(u) == j && side(w) == i) std::swap(u, w);
                    if (side(u) != i || side(w) != j) {
                        fail("foreign_pair", loc,
                             "pair (" + std::to_string(x) + "," + std::to_string(y) + ") not in K2[V_i,V_j]");
                        continue;
                    }
                    auto [pos, inserted] = seen.emplace(std::make_pair(u, w), static_cast<int>(a));
                    if (!inserted)
                        fail("overlap", "overlap at (" + std::to_string(i) + "," + std::to_string(j) + ")",
                             "pair (" + std::to_string(u) + "," + std::to_string(w) + ") in parts " +
                                 std::to_string(pos->second) + " and " + std::to_string(a));
                }
            }
            if (seen.size() != ni * nj)
                fail("uncovered_pairs", loc,
                     std::to_string(ni * nj - seen.size()) + " of " + std::to_string(ni * nj) + " pairs uncovered");
        }
    }
    return rep;
}

// Dense indexing of a validated decomposition: part membership, local positions, and per
// pair-part adjacency bitsets over (V_i, V_j).
class IndexedDecomposition {
public:
    IndexedDecomposition(const Hypergraph3& h, const Decomposition& p) : p_(&p) {
        auto rep = validate_decomposition(h, p);
        if (!rep.ok) throw std::invalid_argument("invalid decomposition: " + rep.violations.front().kind + " at " +
                                                 rep.violations.front().location);
        t_ = static_cast<int>(p.t());
        part_of_.assign(h.n(), -1);
        local_.assign(h.n(), 0);
        for (int i = 0; i < t_; ++i)
            for (std::size_t x = 0; x < p.vertex_parts()[i].size(); ++x) {
                part_of_[p.vertex_parts()[i][x]] = i;
                local_[p.vertex_parts()[i][x]] = static_cast<std::uint32_t>(x);
            }
        classes_.resize(static_cast<std::size_t>(t_) * t_);
        for (int i = 0; i < t_; ++i)
            for (int j = i + 1; j < t_; ++j) {
                auto& cls = classes_[i * t_ + j];
                const auto& vi = p.vertex_parts()[i];
                const auto& vj = p.vertex_parts()[j];
                cls.label.assign(vi.size() * vj.size(), 0);
                auto it = p.pair_parts().find({i, j});
                if (it == p.pair_parts().end()) continue;
                for (std::size_t a = 0; a < it->second.size(); ++a) {
                    std::vector<LocalEdge> edges;
                    edges.reserve(it->second[a].size());
                    for (auto [x, y] : it->second[a]) {
                        if (part_of_[x] != i) std::swap(x, y);
                        edges.emplace_back(local_[x], local_[y]);
                        cls.label[local_[x] * vj.size() + local_[y]] = static_cast<std::uint32_t>(a);
                    }
                    cls.parts.emplace_back(vi, vj, edges);
                }
            }
    }

    int t() const { return t_; }
    const Decomposition& decomposition() const { return *p_; }
    const std::vector<Vertex>& part(int i) const { return p_->vertex_parts()[i]; }
    int part_of(Vertex v) const { return part_of_[v]; }
    std::uint32_t local(Vertex v) const { return local_[v]; }
    std::size_t ell(int i, int j) const { return cls(i, j).parts.size(); }
    const BipartiteGraph& pair_part(int i, int j, int alpha) const { return cls(i, j).parts[alpha]; }
    // Pair-part label of (x in V_i, y in V_j), local indices.
    std::uint32_t label(int i, int j, std::size_t x, std::size_t y) const {
        return cls(i, j).label[x * part(j).size() + y];
    }

    TriadView triad_view(const TriadAddress& a) const {
        return make_view(pair_part(a.i, a.j, a.alpha), pair_part(a.i, a.s, a.beta), pair_part(a.j, a.s, a.gamma));
    }
    Triad triad(const TriadAddress& a) const {
        return Triad(pair_part(a.i, a.j, a.alpha), pair_part(a.i, a.s, a.beta), pair_part(a.j, a.s, a.gamma), a);
    }

    // Number of cross-part triples (x,y,z from three distinct parts).
    BigInt cross_triples() const {
        BigInt s = 0;
        for (int i = 0; i < t_; ++i)
            for (int j = i + 1; j < t_; ++j)
                for (int k = j + 1; k < t_; ++k) s += BigInt(part(i).size()) * part(j).size() * part(k).size();
        return s;
    }
    BigInt cross_pairs() const {
        BigInt s = 0;
        for (int i = 0; i < t_; ++i)
            for (int j = i + 1; j < t_; ++j) s += BigInt(part(i).size()) * part(j).size();
        return s;
    }

private:
    struct Class {
        std::vector<BipartiteGraph> parts;
        std::vector<std::uint32_t> label;
    };
    const Class& cls(int i, int j) const { return classes_[i * t_ + j]; }

    const Decomposition* p_;
    int t_ = 0;
    std::vector<int> part_of_;
    std::vector<std::uint32_t> local_;
    std::vector<Class> classes_;
};

// JSON: {"vertex_parts": [[int]], "pair_parts": {"i,j": [[[u,w], ...], ...]}}
inline nlohmann::json decomposition_to_json(const Decomposition& p) {
    nlohmann::json j;
    j["vertex_parts"] = p.vertex_parts();
    nlohmann::json pp = nlohmann::json::object();
    for (const auto& [key, parts] : p.pair_parts()) {
        nlohmann::json arr = nlohmann::json::array();
        for (auto part : parts) {
            std::sort(part.begin(), part.end());
            nlohmann::json pairs = nlohmann::json::array();
            for (auto [x, y] : part) pairs.push_back({x, y});
            arr.push_back(std::move(pairs));
        }
        pp[class_key(key.first, key.second)] = std::move(arr);
    }
    j["pair_parts"] = std::move(pp);
    return j;
}

inline std::string serialize_decomposition(const Decomposition& p) { return decomposition_to_json(p).dump() + "\n"; }

inline Decomposition decomposition_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("vertex_parts") || !j.contains("pair_parts"))
        throw std::invalid_argument("decomposition document needs vertex_parts and pair_parts");
    auto vp = j.at("vertex_parts").get<std::vector<std::vector<Vertex>>>();
    std::map<ClassPair, std::vector<PairList>> pp;
    for (const auto& [key, val] : j.at("pair_parts").items()) {
        auto comma = key.find(',');
        if (comma == std::string::npos) throw std::invalid_argument("pair_parts key '" + key + "' is not \"i,j\"");
        int a = std::stoi(key.substr(0, comma)), b = std::stoi(key.substr(comma + 1));
        std::vector<PairList> parts;
        for (const auto& part : val) {
            PairList pl;
            for (const auto& pr : part) {
                if (!pr.is_array() || pr.size() != 2) throw std::invalid_argument("pair entry must be [u,w]");
                pl.emplace_back(pr[0].get<Vertex>(), pr[1].get<Vertex>());
            }
            parts.push_back(std::move(pl));
        }
        if (a > b) std::swap(a, b);
        pp[{a, b}] = std::move(parts);
    }
    return Decomposition(std::move(vp), std::move(pp));
}

inline Decomposition parse_decomposition(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(std::string("decomposition JSON: ") + e.what());
    }
    return decomposition_from_json(j);
}

}  // namespace vc2reg
