#include "bianchi/torsion.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "bianchi/groupres.hpp"

namespace bianchi {

TorsionGraph torsion_subgraph(const OrbitComplex& oc, long ell) {
    TorsionGraph g;
    g.ell = ell;
    std::map<long, long> vindex;
    for (long c : oc.by_dim[0]) {
        const OrbitCell& cell = oc.cells[c];
        if (!cell.in_spine) continue;
        if (finite_group_order(cell.type) % ell != 0) continue;
        vindex[c] = static_cast<long>(g.vertices.size());
        g.vertices.push_back({c, cell.type});
    }
    for (long c : oc.by_dim[1]) {
        const OrbitCell& cell = oc.cells[c];
        if (!cell.in_spine) continue;
        if (finite_group_order(cell.type) % ell != 0) continue;
        TorsionEdge e;
        e.cell = c;
        e.type = cell.type;
        long ends = 0;
        for (const OrbitBoundaryTerm& t : cell.boundary) {
            auto it = vindex.find(t.orbit);
            if (it == vindex.end())
                throw InvariantViolation(
                    "edge stabiliser not contained in an endpoint stabiliser");
            (ends++ == 0 ? e.v0 : e.v1) = it->second;
        }
        if (ends > 2) throw InvariantViolation("torsion edge with more than two ends");
        g.edges.push_back(e);
    }
    return g;
}

bool torsion_reduction_admissible(FiniteGroupType t, long ell) {
    FiniteGroupType cyc;
    if (ell == 2)
        cyc = FiniteGroupType::c2;
    else if (ell == 3)
        cyc = FiniteGroupType::c3;
    else
        return false;
    // the homology of every admissible type is periodic with period dividing
    // 12, so agreement up to degree 13 decides agreement everywhere
    for (long q = 1; q <= 13; ++q)
        if (finite_group_homology(t, q).primary_part(ell) !=
            finite_group_homology(cyc, q).primary_part(ell))
            return false;
    return true;
}

long expected_torsion_edge_count(FiniteGroupType t, long ell) {
    if (ell == 2) {
        switch (t) {
            case FiniteGroupType::trivial: return 0;
            case FiniteGroupType::c2: return 2;
            case FiniteGroupType::c3: return 0;
            case FiniteGroupType::v4: return 3;
            case FiniteGroupType::s3: return 2;
            case FiniteGroupType::a4: return 1;
        }
    }
    if (ell == 3) {
        switch (t) {
            case FiniteGroupType::trivial: return 0;
            case FiniteGroupType::c2: return 0;
            case FiniteGroupType::c3: return 2;
            case FiniteGroupType::v4: return 0;
            case FiniteGroupType::s3: return 1;
            case FiniteGroupType::a4: return 2;
        }
    }
    return 0;
}

namespace {

struct MutableEdge {
    long v0, v1;
    bool alive = true;
};

}  // namespace

ReducedGraph reduce_torsion_graph(const TorsionGraph& g) {
    ReducedGraph out;
    out.ell = g.ell;
    long nv = static_cast<long>(g.vertices.size());
    std::vector<MutableEdge> edges;
    for (const TorsionEdge& e : g.edges) edges.push_back({e.v0, e.v1});
    std::vector<bool> valive(nv, true);

    auto incidences = [&](long v) {
        std::vector<std::pair<long, int>> inc;  // (edge, end)
        for (size_t e = 0; e < edges.size(); ++e) {
            if (!edges[e].alive) continue;
            if (edges[e].v0 == v) inc.push_back({static_cast<long>(e), 0});
            if (edges[e].v1 == v) inc.push_back({static_cast<long>(e), 1});
        }
        return inc;
    };

    long pure_circles = 0;
    bool changed = true;
    while (changed) {
        changed = false;
        for (long v = 0; v < nv; ++v) {
            if (!valive[v] || !torsion_reduction_admissible(g.vertices[v].type, g.ell)) continue;
            auto inc = incidences(v);
            if (inc.size() != 2) continue;
            valive[v] = false;
            changed = true;
            if (inc[0].first == inc[1].first) {
                // a loop closes up into a circle with no marked points
                edges[inc[0].first].alive = false;
                ++pure_circles;
            } else {
                // fuse the two edges across the vanished vertex
                long e = inc[0].first, f = inc[1].first;
                long far = inc[1].second == 0 ? edges[f].v1 : edges[f].v0;
                (inc[0].second == 0 ? edges[e].v0 : edges[e].v1) = far;
                edges[f].alive = false;
            }
        }
    }

    for (long i = 0; i < pure_circles; ++i) {
        ReducedComponent c;
        c.circle = true;
        c.certificate = "circle";
        out.components.push_back(std::move(c));
    }

    // connected components of what is left
    std::vector<long> comp(nv, -1);
    long ncomp = 0;
    std::vector<std::vector<long>> comp_edges;
    for (size_t e = 0; e < edges.size(); ++e) {
        if (!edges[e].alive) continue;
        long c0 = edges[e].v0 >= 0 ? comp[edges[e].v0] : -1;
        long c1 = edges[e].v1 >= 0 ? comp[edges[e].v1] : -1;
        long target;
        if (c0 < 0 && c1 < 0) {
            target = ncomp++;
            comp_edges.emplace_back();
        } else if (c0 < 0 || c1 < 0 || c0 == c1) {
            target = std::max(c0, c1);
        } else {  // merge c1 into c0
            target = c0;
            for (long v = 0; v < nv; ++v)
                if (comp[v] == c1) comp[v] = c0;
            for (long x : comp_edges[c1]) comp_edges[c0].push_back(x);
            comp_edges[c1].clear();
        }
        if (edges[e].v0 >= 0) comp[edges[e].v0] = target;
        if (edges[e].v1 >= 0) comp[edges[e].v1] = target;
        comp_edges[target].push_back(static_cast<long>(e));
    }
    for (long v = 0; v < nv; ++v) {  // isolated leftover vertices
        if (!valive[v] || comp[v] >= 0) continue;
        comp[v] = ncomp++;
        comp_edges.emplace_back();
    }

    for (long c = 0; c < ncomp; ++c) {
        if (comp_edges[c].empty()) {
            bool has_vertex = false;
            ReducedComponent rc;
            for (long v = 0; v < nv; ++v)
                if (valive[v] && comp[v] == c) {
                    has_vertex = true;
                    rc.vertex_types.push_back(g.vertices[v].type);
                }
            if (!has_vertex) continue;
            rc.certificate = "isolated vertex";
            out.components.push_back(std::move(rc));
            continue;
        }
        ReducedComponent rc;
        std::map<long, long> degree;
        long dangling = 0;
        for (long e : comp_edges[c])
            for (long v : {edges[e].v0, edges[e].v1}) {
                if (v < 0)
                    ++dangling;
                else
                    ++degree[v];
            }
        long deg1 = 0, deg_ge3 = 0;
        for (const auto& [v, d] : degree) {
            rc.vertex_types.push_back(g.vertices[v].type);
            if (d == 1) ++deg1;
            if (d >= 3) ++deg_ge3;
        }
        std::sort(rc.vertex_types.begin(), rc.vertex_types.end());
        long vcount = static_cast<long>(degree.size());
        long ecount = static_cast<long>(comp_edges[c].size());
        std::ostringstream cert;
        if (dangling == 0 && deg_ge3 == 0 && deg1 == 2 && ecount == vcount - 1) {
            rc.interval = true;
            cert << "interval[";
            for (size_t i = 0; i < rc.vertex_types.size(); ++i)
                cert << (i ? "," : "") << finite_group_name(rc.vertex_types[i]);
            cert << "]";
        } else if (dangling == 0 && deg_ge3 == 0 && deg1 == 0 && ecount == vcount) {
            rc.circle = true;
            cert << "circle";
        } else {
            cert << "graph(v=" << vcount << ",e=" << ecount << ",open=" << dangling
                 << ",degrees=";
            std::vector<long> degs;
            for (const auto& [v, d] : degree) degs.push_back(d);
            std::sort(degs.begin(), degs.end());
            for (size_t i = 0; i < degs.size(); ++i) cert << (i ? "," : "") << degs[i];
            cert << ")";
        }
        rc.certificate = cert.str();
        out.components.push_back(std::move(rc));
    }
    return out;
}

std::string HomeoType::str() const {
    std::ostringstream os;
    bool first = true;
    auto emit = [&](const std::string& s) {
        os << (first ? "" : " + ") << s;
        first = false;
    };
    if (circles == 1) emit("circle");
    if (circles > 1) emit(std::to_string(circles) + " circles");
    if (intervals == 1) emit("interval");
    if (intervals > 1) emit(std::to_string(intervals) + " intervals");
    for (const std::string& s : other) emit(s);
    if (first) os << "empty";
    return os.str();
}

HomeoType homeo_type(const ReducedGraph& g) {
    HomeoType h;
    for (const ReducedComponent& c : g.components) {
        if (c.circle)
            ++h.circles;
        else if (c.interval)
            ++h.intervals;
        else
            h.other.push_back(c.certificate);
    }
    std::sort(h.other.begin(), h.other.end());
    return h;
}

std::pair<IPoly, IPoly> torsion_poincare_series(const HomeoType& h) {
    if (!h.other.empty())
        throw UnknownType("no series formula for an unrecognised component: " + h.other[0]);
    IPoly num{0}, den{1};
    // circle: -2t^3 / (t - 1)
    for (long i = 0; i < h.circles; ++i)
        rational_add(num, den, IPoly{0, 0, 0, -2}, IPoly{-1, 1});
    // interval: -t^3 (t^2 - t + 2) / ((t - 1)(t^2 + 1))
    for (long i = 0; i < h.intervals; ++i)
        rational_add(num, den, IPoly{0, 0, 0, -2, 1, -1}, IPoly{-1, 1, -1, 1});
    return {num, den};
}

bool verify_rigidity_counts(const OrbitComplex& oc, long ell, std::string* report) {
    std::map<long, long> counts;
    for (long c : oc.by_dim[0])
        if (oc.cells[c].in_spine) counts[c] = 0;
    for (long c : oc.by_dim[1]) {
        const OrbitCell& cell = oc.cells[c];
        if (!cell.in_spine) continue;
        if (finite_group_order(cell.type) % ell != 0) continue;
        for (const OrbitBoundaryTerm& t : cell.boundary) {
            auto it = counts.find(t.orbit);
            if (it != counts.end()) ++it->second;
        }
    }
    bool ok = true;
    for (const auto& [c, n] : counts) {
        long want = expected_torsion_edge_count(oc.cells[c].type, ell);
        if (n != want) {
            ok = false;
            if (report) {
                std::ostringstream os;
                os << "vertex " << oc.cells[c].label << " ("
                   << finite_group_name(oc.cells[c].type) << "): " << n << " ends of " << ell
                   << "-torsion edges, expected " << want << "\n";
                *report += os.str();
            }
        }
    }
    return ok;
}

namespace {

// boundary fixed points of a Moebius transformation are the roots of
// c z^2 + (d - a) z - b; the axis is recorded by that quadratic up to scale
struct AxisKey {
    QuadInt q0, q1, q2;

    bool proportional(const AxisKey& o) const {
        return q0 * o.q1 == q1 * o.q0 && q0 * o.q2 == q2 * o.q0 && q1 * o.q2 == q2 * o.q1;
    }
};

AxisKey axis_of(const GroupElement& g) { return {g.c, g.d - g.a, -g.b}; }

}  // namespace

AxesReport stabiliser_axes(const std::vector<GroupElement>& stab) {
    // nontrivial cyclic subgroups, as sorted element lists
    std::set<std::vector<GroupElement>> subs;
    for (const GroupElement& g : stab) {
        if (g.is_identity()) continue;
        std::vector<GroupElement> s;
        GroupElement p = g;
        while (!p.is_identity()) {
            s.push_back(p);
            p = p * g;
        }
        std::sort(s.begin(), s.end());
        subs.insert(std::move(s));
    }
    std::vector<std::vector<GroupElement>> sub_list(subs.begin(), subs.end());
    AxesReport r;
    r.cyclic_subgroups = static_cast<long>(sub_list.size());

    std::vector<AxisKey> keys;
    for (const auto& s : sub_list) {
        AxisKey k = axis_of(s[0]);
        for (const GroupElement& g : s)
            if (!k.proportional(axis_of(g)))
                throw InvariantViolation("powers of one rotation disagree about its axis");
        keys.push_back(k);
    }
    std::vector<long> axis_of_sub(keys.size());
    std::vector<AxisKey> distinct;
    for (size_t i = 0; i < keys.size(); ++i) {
        long found = -1;
        for (size_t j = 0; j < distinct.size(); ++j)
            if (keys[i].proportional(distinct[j])) found = static_cast<long>(j);
        if (found < 0) {
            found = static_cast<long>(distinct.size());
            distinct.push_back(keys[i]);
        }
        axis_of_sub[i] = found;
    }
    r.axes = static_cast<long>(distinct.size());

    // conjugation orbits on the subgroups (equivalently on the axes when the
    // correspondence is injective)
    std::vector<long> orbit(sub_list.size(), -1);
    for (size_t i = 0; i < sub_list.size(); ++i) {
        if (orbit[i] >= 0) continue;
        long size = 0;
        std::vector<size_t> todo{i};
        orbit[i] = static_cast<long>(i);
        while (!todo.empty()) {
            size_t cur = todo.back();
            todo.pop_back();
            ++size;
            for (const GroupElement& s : stab) {
                std::vector<GroupElement> img;
                GroupElement si = s.inverse();
                for (const GroupElement& g : sub_list[cur]) img.push_back(s * g * si);
                std::sort(img.begin(), img.end());
                for (size_t j = 0; j < sub_list.size(); ++j)
                    if (orbit[j] < 0 && sub_list[j] == img) {
                        orbit[j] = static_cast<long>(i);
                        todo.push_back(j);
                    }
            }
        }
        r.orbit_sizes.push_back(size);
    }
    std::sort(r.orbit_sizes.begin(), r.orbit_sizes.end());
    return r;
}

bool verify_axes_theorem(const std::vector<GroupElement>& stab, std::string* report) {
    FiniteGroupType t = classify_finite_group(stab);
    if (t == FiniteGroupType::trivial) return true;
    AxesReport r = stabiliser_axes(stab);
    long want_subs = 0;
    std::vector<long> want_orbits;
    switch (t) {
        case FiniteGroupType::trivial: return true;
        case FiniteGroupType::c2:
        case FiniteGroupType::c3:
            want_subs = 1;
            want_orbits = {1};
            break;
        case FiniteGroupType::v4:
            want_subs = 3;
            want_orbits = {1, 1, 1};
            break;
        case FiniteGroupType::s3:
            want_subs = 4;
            want_orbits = {1, 3};
            break;
        case FiniteGroupType::a4:
            want_subs = 7;
            want_orbits = {3, 4};
            break;
    }
    bool ok = r.cyclic_subgroups == want_subs && r.axes == want_subs &&
              r.orbit_sizes == want_orbits;
    if (!ok && report) {
        std::ostringstream os;
        os << finite_group_name(t) << ": " << r.cyclic_subgroups << " cyclic subgroups, "
           << r.axes << " axes, orbits";
        for (long s : r.orbit_sizes) os << " " << s;
        os << " (expected " << want_subs << " with orbits";
        for (long s : want_orbits) os << " " << s;
        os << ")\n";
        *report += os.str();
    }
    return ok;
}

std::string torsion_graph_dot(const TorsionGraph& g) {
    std::ostringstream os;
    os << "graph torsion_" << g.ell << " {\n";
    for (size_t v = 0; v < g.vertices.size(); ++v)
        os << "  v" << v << " [label=\"" << finite_group_name(g.vertices[v].type) << "\"];\n";
    long open_id = 0;
    for (size_t e = 0; e < g.edges.size(); ++e) {
        auto end = [&](long v) {
            if (v >= 0) return "v" + std::to_string(v);
            os << "  open" << open_id << " [shape=point];\n";
            return "open" + std::to_string(open_id++);
        };
        std::string a = end(g.edges[e].v0), b = end(g.edges[e].v1);
        os << "  " << a << " -- " << b << " [label=\"" << finite_group_name(g.edges[e].type)
           << "\"];\n";
    }
    os << "}\n";
    return os.str();
}

}  // namespace bianchi
