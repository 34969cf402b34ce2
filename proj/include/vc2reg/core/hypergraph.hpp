#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

namespace vc2reg {

using Vertex = std::uint32_t;
using Triple = std::array<Vertex, 3>;

class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

inline Triple sorted_triple(Vertex a, Vertex b, Vertex c) {
    if (a > b) std::swap(a, b);
    if (b > c) std::swap(b, c);
    if (a > b) std::swap(a, b);
    return {a, b, c};
}

// 3-uniform hypergraph; edges kept sorted, membership via hash set.
class Hypergraph3 {
public:
    Hypergraph3() = default;

    Hypergraph3(std::size_t n, std::vector<Triple> triples) : n_(n) {
        if (n > (1u << 21)) throw std::invalid_argument("vertex count exceeds 2^21");
        for (auto& t : triples) {
            for (auto v : t)
                if (v >= n) throw std::out_of_range("vertex " + std::to_string(v) + " out of range");
            if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2])
                throw std::invalid_argument("non-distinct triple");
            t = sorted_triple(t[0], t[1], t[2]);
        }
        std::sort(triples.begin(), triples.end());
        triples.erase(std::unique(triples.begin(), triples.end()), triples.end());
        edges_ = std::move(triples);
        members_.reserve(edges_.size() * 2);
        for (const auto& t : edges_) members_.insert(key(t));
    }

    std::size_t n() const { return n_; }
    std::size_t edge_count() const { return edges_.size(); }
    const std::vector<Triple>& edges() const { return edges_; }

    bool contains(Vertex a, Vertex b, Vertex c) const {
        if (a == b || b == c || a == c || a >= n_ || b >= n_ || c >= n_) return false;
        return members_.count(key(sorted_triple(a, b, c))) != 0;
    }

    bool operator==(const Hypergraph3& o) const { return n_ == o.n_ && edges_ == o.edges_; }

private:
    std::uint64_t key(const Triple& t) const {
        return (static_cast<std::uint64_t>(t[0]) * n_ + t[1]) * n_ + t[2];
    }

    std::size_t n_ = 0;
    std::vector<Triple> edges_;
    std::unordered_set<std::uint64_t> members_;
};

// Text format: "n=<int>" header, then one triple per record. Records are separated by
// newlines or ';'. '#' starts a comment.
inline Hypergraph3 parse_hypergraph(const std::string& text) {
    std::vector<std::pair<std::size_t, std::string>> records;
    std::size_t line = 1;
    std::string cur;
    bool in_comment = false;
    for (char c : text) {
        if (c == '\n' || c == ';') {
            records.emplace_back(line, cur);
            cur.clear();
            in_comment = false;
            if (c == '\n') ++line;
        } else if (c == '#') {
            in_comment = true;
        } else if (!in_comment) {
            cur.push_back(c);
        }
    }
    records.emplace_back(line, cur);

    bool have_n = false;
    std::size_t n = 0;
    std::vector<Triple> triples;
    for (auto& [ln, rec] : records) {
        auto first = rec.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        std::string body = rec.substr(first);
        if (!have_n) {
            if (body.rfind("n=", 0) != 0) throw ParseError(ln, "expected header n=<int>");
            std::istringstream in(body.substr(2));
            long long v = -1;
            std::string rest;
            if (!(in >> v) || v < 0 || (in >> rest)) throw ParseError(ln, "malformed vertex count");
            n = static_cast<std::size_t>(v);
            have_n = true;
            continue;
        }
        std::istringstream in(body);
        long long a, b, c;
        std::string rest;
        if (!(in >> a >> b >> c) || (in >> rest)) throw ParseError(ln, "expected three integers");
        for (long long v : {a, b, c})
            if (v < 0 || static_cast<std::size_t>(v) >= n)
                throw ParseError(ln, "vertex " + std::to_string(v) + " out of range [0," + std::to_string(n) + ")");
        if (a == b || b == c || a == c) throw ParseError(ln, "non-distinct triple");
        triples.push_back({static_cast<Vertex>(a), static_cast<Vertex>(b), static_cast<Vertex>(c)});
    }
    if (!have_n) throw ParseError(line, "missing header n=<int>");
    return Hypergraph3(n, std::move(triples));
}

inline std::string serialize_hypergraph(const Hypergraph3& h) {
    std::ostringstream out;
    out << "n=" << h.n() << '\n';
    for (const auto& t : h.edges()) out << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
    return out.str();
}

}  // namespace vc2reg
