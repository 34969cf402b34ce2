#pragma once

#include "vc2reg/core/bipartite.hpp"

#include <array>
#include <optional>
#include <vector>

namespace vc2reg {

// Vertex classes i<j<s; alpha indexes the (i,j) pair-part, beta (i,s), gamma (j,s).
struct TriadAddress {
    int i = 0, j = 0, s = 0;
    int alpha = 0, beta = 0, gamma = 0;
    bool operator==(const TriadAddress&) const = default;
};

// Non-owning adjacency view of a 3-partite graph on A, B, C (local indices).
struct TriadView {
    const std::vector<Bitset>* ab = nullptr;  // |A| rows over B
    const std::vector<Bitset>* ac = nullptr;  // |A| rows over C
    const std::vector<Bitset>* bc = nullptr;  // |B| rows over C
    const std::vector<Bitset>* ca = nullptr;  // |C| rows over A
    const std::vector<Bitset>* cb = nullptr;  // |C| rows over B
    std::size_t na = 0, nb = 0, nc = 0;

    bool is_triangle(std::size_t a, std::size_t b, std::size_t c) const {
        return (*ab)[a].test(b) && (*ac)[a].test(c) && (*bc)[b].test(c);
    }
};

inline TriadView make_view(const BipartiteGraph& ab, const BipartiteGraph& ac, const BipartiteGraph& bc) {
    TriadView v;
    v.ab = &ab.rows();
    v.ac = &ac.rows();
    v.bc = &bc.rows();
    v.ca = &ac.cols();
    v.cb = &bc.cols();
    v.na = ab.nl();
    v.nb = ab.nr();
    v.nc = ac.nr();
    return v;
}

// A 3-partite graph from three pair graphs: ab on (A,B), ac on (A,C), bc on (B,C).
class Triad {
public:
    Triad(BipartiteGraph ab, BipartiteGraph ac, BipartiteGraph bc, std::optional<TriadAddress> address = {})
        : ab_(std::move(ab)), ac_(std::move(ac)), bc_(std::move(bc)), address_(address) {
        if (ab_.left() != ac_.left() || ab_.right() != bc_.left() || ac_.right() != bc_.right())
            throw std::invalid_argument("triad pair graphs do not connect the correct parts");
        require_disjoint_sides(ab_.left(), ab_.right());
        require_disjoint_sides(ab_.left(), ac_.right());
        require_disjoint_sides(ab_.right(), ac_.right());
    }

    const std::vector<Vertex>& part_a() const { return ab_.left(); }
    const std::vector<Vertex>& part_b() const { return ab_.right(); }
    const std::vector<Vertex>& part_c() const { return ac_.right(); }
    const BipartiteGraph& ab() const { return ab_; }
    const BipartiteGraph& ac() const { return ac_; }
    const BipartiteGraph& bc() const { return bc_; }
    std::array<const BipartiteGraph*, 3> pair_graphs() const { return {&ab_, &ac_, &bc_}; }
    const std::optional<TriadAddress>& address() const { return address_; }
    TriadView view() const { return make_view(ab_, ac_, bc_); }

private:
    BipartiteGraph ab_, ac_, bc_;
    std::optional<TriadAddress> address_;
};

}  // namespace vc2reg
