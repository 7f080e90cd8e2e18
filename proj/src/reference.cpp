#include "bianchi/reference.hpp"

#include <map>
#include <set>
#include <string>

namespace bianchi {

namespace {

const std::map<long, long>& betti_table() {
    static const std::map<long, long> t = {{19, 1}, {43, 2}, {67, 3}, {163, 7}};
    return t;
}

AbelianGroup grp(long rank, std::initializer_list<long> tors) {
    AbelianGroup g;
    g.rank = rank;
    for (long d : tors) g.torsion.push_back(Int(d));
    return g;
}

}  // namespace

long reference_betti1(long m) {
    auto it = betti_table().find(m);
    if (it == betti_table().end())
        throw UnknownArtifact("no reference Betti number for m = " + std::to_string(m));
    return it->second;
}

AbelianGroup reference_h1(long m) { return grp(reference_betti1(m), {}); }

AbelianGroup reference_h2(long m) {
    // Z^{beta_1 - 1} + Z/4 + Z/2 + Z/3, in invariant factors 2 | 12
    return grp(reference_betti1(m) - 1, {2, 12});
}

std::pair<IPoly, IPoly> reference_p2_series() {
    // -t^3 (t^3 - 2 t^2 + 2 t - 3) / ((t - 1)^2 (t^2 + t + 1))
    return {IPoly{0, 0, 0, 3, -2, 2, -1}, IPoly{1, -1, 0, -1, 1}};
}

std::pair<IPoly, IPoly> reference_p3_series() {
    // -t^3 (t^2 - t + 2) / ((t - 1)(t^2 + 1))
    return {IPoly{0, 0, 0, -2, 1, -1}, IPoly{-1, 1, -1, 1}};
}

bool reference_homeo3(long m, HomeoType& out) {
    static const std::set<long> circle = {2,  5,  6,  10, 11, 15,  22,  29,  34,  35, 46,
                                          51, 58, 87, 95, 115, 123, 155, 159, 187, 191,
                                          235, 267};
    static const std::set<long> interval = {7, 19, 43, 67, 139, 151, 163};
    static const std::set<long> two_intervals = {13, 37, 91, 403, 427};
    if (circle.count(m)) out = {1, 0, {}};
    else if (interval.count(m)) out = {0, 1, {}};
    else if (two_intervals.count(m)) out = {0, 2, {}};
    else if (m == 39) out = {1, 1, {}};
    else return false;
    return true;
}

bool reference_k_homology(long m, AbelianGroup& k0, AbelianGroup& k1) {
    switch (m) {
        case 1: k0 = grp(6, {}); k1 = grp(1, {}); return true;
        case 2: k0 = grp(5, {2}); k1 = grp(3, {}); return true;
        case 3: k0 = grp(5, {2}); k1 = grp(0, {}); return true;
        case 7: k0 = grp(3, {}); k1 = grp(3, {}); return true;
        case 11: k0 = grp(4, {2}); k1 = grp(3, {}); return true;
        case 19: case 43: case 67: case 163: {
            long b = reference_betti1(m);
            k0 = grp(b - 1 + 3, {2});  // Z^{b-1} + Z^3 + Z/2
            k1 = grp(1 + b, {});       // Z + Z^b
            return true;
        }
        default: return false;
    }
}

}  // namespace bianchi
