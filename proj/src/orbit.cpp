#include "bianchi/orbit.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "bianchi/errors.hpp"
#include "json.hpp"

namespace bianchi {

namespace {

// tag for a vertex position of a refined boundary cycle
struct VTag {
    int kind = 0;  // 0 = polyhedron vertex, 1 = barycentre of a flipped edge
    long id = -1;  // vertex id (kind 0) or edge cell id (kind 1)
    bool operator==(const VTag&) const = default;
};

// refined directed boundary piece: sign * (g . orbit-representative edge)
struct ETerm {
    long out = -1;  // output cell index (dim 1)
    int sign = 0;
    GroupElement g;
};

struct Builder {
    const FundamentalPolyhedron& P;
    RingDescriptor ring;

    std::map<std::pair<QuadRat, Rat>, long> vlookup;       // finite vertices
    std::map<std::pair<long, long>, long> edge_by_verts;   // sorted endpoints
    std::map<std::pair<long, long>, std::vector<GroupElement>> tcache;

    // union-find over polyhedron cell ids
    std::vector<long> parent;
    // per cell: witness g with cell = g . representative(root)
    std::map<long, GroupElement> witness;

    // edge-orbit refinement data (keyed by root edge cell id)
    struct EdgeOrbit {
        std::vector<GroupElement> stab_pw, stab_set;
        std::optional<GroupElement> flip;  // maps lo -> hi of the representative
        long out = -1;                     // dim-1 output index (edge or half-edge)
        long bary_out = -1;                // dim-0 output index of the barycentre
    };
    std::map<long, EdgeOrbit> eorb;

    // face-orbit data (keyed by root face cell id)
    struct FaceOrbit {
        std::vector<GroupElement> stab_set;
        std::vector<VTag> vseq;    // refined cycle vertex tags
        std::vector<ETerm> eseq;   // refined cycle edges, vseq[k] -> vseq[k+1]
        long out = -1;             // unsubdivided face output index
        // cone subdivision (when |stab_set| > 1)
        long centre_out = -1;
        std::vector<long> vpos_root;       // refined-cycle position -> orbit rep position
        std::map<long, GroupElement> vpos_wit;  // position -> h in stab_set, pos = h . rep
        std::map<long, long> cone_out;     // rep position -> cone-edge output index
        std::map<long, long> tri_out;      // rep position -> triangle output index
        struct TriInstance {
            long rep;        // rep edge position
            GroupElement h;  // h in stab_set with position = h . rep
            int dir;         // +1 if h acts as a rotation on the cycle, -1 reflection
        };
        std::vector<TriInstance> tri_instances;  // one per edge position
    };
    std::map<long, FaceOrbit> forb;

    OrbitComplex oc;

    explicit Builder(const FundamentalPolyhedron& poly) : P(poly), ring(poly.ring) {
        parent.assign(P.cells.size(), 0);
        for (size_t i = 0; i < parent.size(); ++i) parent[i] = static_cast<long>(i);
        for (long i = 0; i < static_cast<long>(P.vertices.size()); ++i)
            if (!P.vertices[i].at_infinity) vlookup[{P.vertices[i].p.z, P.vertices[i].p.t_sq}] = i;
        for (long c : P.cells_by_dim[1])
            edge_by_verts[{P.cells[c].vertices[0], P.cells[c].vertices[1]}] = c;
        oc.ring = ring;
        oc.by_dim.assign(4, {});
    }

    long find(long x) { return parent[x] == x ? x : parent[x] = find(parent[x]); }

    bool is_cusp(long vid) const { return P.vertices[vid].cusp; }

    const std::vector<GroupElement>& trans(long i, long j) {
        auto key = std::make_pair(i, j);
        auto it = tcache.find(key);
        if (it != tcache.end()) return it->second;
        return tcache.emplace(key, transporters(P.vertices[i].p, P.vertices[j].p)).first->second;
    }

    // image of a polyhedron vertex under g, as a vertex id; -1 when the image
    // is not a vertex of the polyhedron
    long map_vertex(const GroupElement& g, long vid) {
        const PolyVertex& v = P.vertices[vid];
        BoundaryPoint image_b;
        if (v.at_infinity) {
            image_b = act_boundary(g, BoundaryPoint::infinity());
        } else if (v.p.t_sq == 0) {
            image_b = act_boundary(g, BoundaryPoint::finite(v.p.z));
        } else {
            UhsPoint q = act(g, v.p);
            auto it = vlookup.find({q.z, q.t_sq});
            return it == vlookup.end() ? -1 : it->second;
        }
        if (image_b.at_infinity) return P.infinity_vertex;
        auto it = vlookup.find({image_b.z, Rat(0)});
        return it == vlookup.end() ? -1 : it->second;
    }

    // true when g maps the vertex set of cell a onto the vertex set of cell b
    bool maps_cell(const GroupElement& g, long a, long b) {
        const auto& va = P.cells[a].vertices;
        const auto& vb = P.cells[b].vertices;
        if (va.size() != vb.size()) return false;
        std::set<long> target(vb.begin(), vb.end());
        for (long vid : va) {
            long im = map_vertex(g, vid);
            if (im < 0 || !target.erase(im)) return false;
        }
        return true;
    }

    long first_finite_vertex(long cell) const {
        for (long vid : P.cells[cell].vertices)
            if (!is_cusp(vid)) return vid;
        return -1;
    }

    // Interior anchor of a cell whose vertices are all cusps. Such a cell is
    // a 1-cell running between two singular points; it is a full geodesic
    // arc, so its apex (Euclidean midpoint of the endpoints, at height half
    // their distance) is rational and respected by every group element.
    UhsPoint cusp_cell_anchor(long cell) const {
        if (P.cells[cell].dim != 1)
            throw BoundaryCheckFailed("cell of dimension != 1 with no interior vertex");
        const PolyVertex& a = P.vertices[P.cells[cell].vertices[0]];
        const PolyVertex& b = P.vertices[P.cells[cell].vertices[1]];
        if (a.at_infinity || b.at_infinity)
            throw BoundaryCheckFailed("vertical cell with no interior vertex");
        QuadRat sum = a.p.z + b.p.z;
        QuadRat mid(sum.num, sum.den * 2);
        Rat t_sq = (a.p.z - b.p.z).norm_q() / 4;
        return {mid, t_sq};
    }

    std::optional<GroupElement> cell_transporter(long a, long b) {
        if (P.cells[a].dim == 0) {
            long va = P.cells[a].vertices[0], vb = P.cells[b].vertices[0];
            const auto& ts = trans(va, vb);
            if (ts.empty()) return std::nullopt;
            return ts.front();
        }
        long v = first_finite_vertex(a);
        if (v < 0) {
            if (first_finite_vertex(b) >= 0) return std::nullopt;
            for (const GroupElement& g : transporters(cusp_cell_anchor(a), cusp_cell_anchor(b)))
                if (maps_cell(g, a, b)) return g;
            return std::nullopt;
        }
        for (long w : P.cells[b].vertices) {
            if (is_cusp(w)) continue;
            Rat s;
            if (!rat_sqrt(P.vertices[v].p.t_sq / P.vertices[w].p.t_sq, s)) continue;
            for (const GroupElement& g : trans(v, w))
                if (maps_cell(g, a, b)) return g;
        }
        return std::nullopt;
    }

    std::vector<GroupElement> cell_self_maps(long cell) {
        if (P.cells[cell].dim == 0)
            return trans(P.cells[cell].vertices[0], P.cells[cell].vertices[0]);
        std::set<GroupElement> out;
        long v = first_finite_vertex(cell);
        if (v < 0) {
            UhsPoint anchor = cusp_cell_anchor(cell);
            for (const GroupElement& g : transporters(anchor, anchor))
                if (maps_cell(g, cell, cell)) out.insert(g);
            return {out.begin(), out.end()};
        }
        for (long w : P.cells[cell].vertices) {
            if (is_cusp(w)) continue;
            if (P.vertices[v].p.t_sq != P.vertices[w].p.t_sq) {
                Rat s;
                if (!rat_sqrt(P.vertices[v].p.t_sq / P.vertices[w].p.t_sq, s)) continue;
            }
            for (const GroupElement& g : trans(v, w))
                if (maps_cell(g, cell, cell)) out.insert(g);
        }
        return {out.begin(), out.end()};
    }

    std::vector<GroupElement> pointwise_part(long cell, const std::vector<GroupElement>& setw) {
        std::vector<GroupElement> pw;
        for (const GroupElement& g : setw) {
            bool fixes = true;
            for (long vid : P.cells[cell].vertices)
                if (map_vertex(g, vid) != vid) {
                    fixes = false;
                    break;
                }
            if (fixes) pw.push_back(g);
        }
        return pw;
    }

    void unite(long a, long b) {
        long ra = find(a), rb = find(b);
        if (ra != rb) parent[std::max(ra, rb)] = std::min(ra, rb);
    }

    // ---- orbit determination ----------------------------------------------

    void compute_orbits(int dim) {
        std::vector<long> items;
        for (long c : P.cells_by_dim[dim]) {
            if (dim == 0 && is_cusp(P.cells[c].vertices[0])) continue;
            items.push_back(c);
        }
        // prefilter: group by a cheap signature
        std::map<std::string, std::vector<long>> groups;
        for (long c : items) {
            std::ostringstream key;
            long cusps = 0;
            std::vector<std::string> hs;
            for (long vid : P.cells[c].vertices) {
                if (is_cusp(vid))
                    ++cusps;
                else
                    hs.push_back(P.vertices[vid].p.t_sq.get_str());
            }
            std::sort(hs.begin(), hs.end());
            key << cusps;
            for (auto& h : hs) key << "|" << h;
            groups[key.str()].push_back(c);
        }
        for (auto& [key, cells] : groups) {
            for (size_t i = 0; i < cells.size(); ++i)
                for (size_t j = i + 1; j < cells.size(); ++j) {
                    if (find(cells[i]) == find(cells[j])) continue;
                    if (cell_transporter(cells[i], cells[j])) unite(cells[i], cells[j]);
                }
        }
        for (long c : items) {
            long r = find(c);
            if (c == r) {
                witness.emplace(c, GroupElement::identity(ring));
            } else {
                auto g = cell_transporter(r, c);
                if (!g) throw BoundaryCheckFailed("orbit witness not found");
                witness.emplace(c, *g);
            }
        }
    }

    // ---- output helpers ---------------------------------------------------

    long emit(OrbitCell cell) {
        long idx = static_cast<long>(oc.cells.size());
        oc.by_dim[cell.dim].push_back(idx);
        oc.cells.push_back(std::move(cell));
        return idx;
    }

    // boundary term for a polyhedron vertex, or nothing when it is a cusp
    std::optional<OrbitBoundaryTerm> vertex_term(long vid, int sign,
                                                const std::map<long, long>& vout) {
        if (is_cusp(vid)) return std::nullopt;
        long r = find(P.cells_by_dim[0][vid]);  // 0-cells are emitted per vertex id
        return OrbitBoundaryTerm{vout.at(r), sign, witness.at(P.cells_by_dim[0][vid])};
    }

    std::map<long, long> vout;  // vertex-orbit root (0-cell id) -> output index

    // ---- main build -------------------------------------------------------

    void build() {
        compute_orbits(0);
        compute_orbits(1);
        compute_orbits(2);

        // vertex orbits
        for (long c : P.cells_by_dim[0]) {
            if (is_cusp(P.cells[c].vertices[0])) continue;
            if (find(c) != c) continue;
            OrbitCell cell;
            cell.dim = 0;
            cell.stab = trans(P.cells[c].vertices[0], P.cells[c].vertices[0]);
            cell.type = classify_finite_group(cell.stab);
            cell.label = "v" + std::to_string(P.cells[c].vertices[0]);
            vout[c] = emit(std::move(cell));
        }

        // edge orbit analysis
        for (long c : P.cells_by_dim[1]) {
            if (find(c) != c) continue;
            EdgeOrbit eo;
            eo.stab_set = cell_self_maps(c);
            eo.stab_pw = pointwise_part(c, eo.stab_set);
            long lo = P.cells[c].vertices[0], hi = P.cells[c].vertices[1];
            for (const GroupElement& g : eo.stab_set)
                if (map_vertex(g, lo) == hi) {
                    eo.flip = g;
                    break;
                }
            eorb.emplace(c, std::move(eo));
        }
        // normalise edge witnesses of flipped orbits to preserve orientation
        for (long c : P.cells_by_dim[1]) {
            long r = find(c);
            const EdgeOrbit& eo = eorb.at(r);
            if (!eo.flip) continue;
            GroupElement& w = witness.at(c);
            if (map_vertex(w, P.cells[r].vertices[0]) != P.cells[c].vertices[0]) w = w * *eo.flip;
        }

        // barycentres of flipped edge orbits
        for (auto& [r, eo] : eorb) {
            if (!eo.flip) continue;
            ++oc.flipped_edge_orbits;
            OrbitCell b;
            b.dim = 0;
            b.stab = eo.stab_set;
            b.type = classify_finite_group(b.stab);
            b.label = "b" + std::to_string(r);
            eo.bary_out = emit(std::move(b));
        }

        // face orbit analysis: setwise stabilisers and refined cycles
        for (long c : P.cells_by_dim[2]) {
            if (find(c) != c) continue;
            FaceOrbit fo;
            fo.stab_set = cell_self_maps(c);
            auto pw = pointwise_part(c, fo.stab_set);
            if (pw.size() != 1)
                throw BoundaryCheckFailed("2-cell with nontrivial pointwise stabiliser");
            forb.emplace(c, std::move(fo));
        }
        // centres of rotated face orbits
        for (auto& [r, fo] : forb) {
            if (fo.stab_set.size() <= 1) continue;
            ++oc.rotated_face_orbits;
            OrbitCell ctr;
            ctr.dim = 0;
            ctr.stab = fo.stab_set;
            ctr.type = classify_finite_group(ctr.stab);
            ctr.label = "c" + std::to_string(r);
            fo.centre_out = emit(std::move(ctr));
        }

        // dim-1 cells: edges / half-edges
        for (auto& [r, eo] : eorb) {
            long lo = P.cells[r].vertices[0], hi = P.cells[r].vertices[1];
            OrbitCell e;
            e.dim = 1;
            e.stab = eo.stab_pw;
            e.type = classify_finite_group(e.stab);
            if (!eo.flip) {
                e.label = "e" + std::to_string(r);
                if (auto t = vertex_term(hi, +1, vout))
                    e.boundary.push_back(*t);
                else
                    e.on_cusp = true;
                if (auto t = vertex_term(lo, -1, vout))
                    e.boundary.push_back(*t);
                else
                    e.on_cusp = true;
            } else {
                // half-edge from the barycentre to the lower endpoint
                e.label = "h" + std::to_string(r);
                if (auto t = vertex_term(lo, +1, vout))
                    e.boundary.push_back(*t);
                else
                    e.on_cusp = true;
                e.boundary.push_back({eo.bary_out, -1, GroupElement::identity(ring)});
            }
            eo.out = emit(std::move(e));
        }

        build_face_cycles();

        // cone edges of rotated faces
        for (auto& [r, fo] : forb) {
            if (fo.stab_set.size() <= 1) continue;
            subdivide_face(r, fo);
        }

        // dim-2 cells
        for (auto& [r, fo] : forb) {
            if (fo.stab_set.size() > 1) {
                emit_triangles(r, fo);
                continue;
            }
            OrbitCell f;
            f.dim = 2;
            f.stab = {GroupElement::identity(ring)};
            f.type = FiniteGroupType::trivial;
            f.label = "f" + std::to_string(r);
            for (const ETerm& t : fo.eseq) f.boundary.push_back({t.out, t.sign, t.g});
            for (const VTag& tag : fo.vseq)
                if (tag.kind == 0 && is_cusp(tag.id)) f.on_cusp = true;
            fo.out = emit(std::move(f));
        }

        emit_top_cell();
        mark_spine();
        check_boundaries();
    }

    // the translates of the hemisphere floor form a cocompact 2-dimensional
    // deformation retract of hyperbolic space: a point of the fundamental
    // polyhedron sits on the retract exactly when its maximal horoball reach
    // is attained by at least two cusps, which happens on the floor surface.
    // Its cell orbits are the floor-face orbits with their boundary closure.
    void mark_spine() {
        for (long c : P.cells_by_dim[2]) {
            if (P.cells[c].support_hemisphere < 0) continue;
            const FaceOrbit& fo = forb.at(find(c));
            if (fo.out >= 0)
                oc.cells[fo.out].in_spine = true;
            else
                for (const auto& [pos, idx] : fo.tri_out) oc.cells[idx].in_spine = true;
        }
        bool changed = true;
        while (changed) {
            changed = false;
            for (const OrbitCell& cell : oc.cells) {
                if (!cell.in_spine) continue;
                for (const auto& t : cell.boundary)
                    if (!oc.cells[t.orbit].in_spine) {
                        oc.cells[t.orbit].in_spine = true;
                        changed = true;
                    }
            }
        }
    }

    // refined boundary cycle of each face-orbit representative
    void build_face_cycles() {
        for (auto& [r, fo] : forb) {
            const std::vector<long>& cyc = P.cells[r].cycle;
            size_t n = cyc.size();
            for (size_t k = 0; k < n; ++k) {
                long x = cyc[k], y = cyc[(k + 1) % n];
                long e = edge_by_verts.at({std::min(x, y), std::max(x, y)});
                int dir = (x == P.cells[e].vertices[0]) ? +1 : -1;
                long er = find(e);
                const EdgeOrbit& eo = eorb.at(er);
                const GroupElement& w = witness.at(e);
                if (!eo.flip) {
                    int delta = (map_vertex(w, P.cells[er].vertices[0]) == P.cells[e].vertices[0])
                                    ? +1
                                    : -1;
                    fo.vseq.push_back({0, x});
                    fo.eseq.push_back({eo.out, dir * delta, w});
                } else {
                    // traversal passes through the barycentre; witness is
                    // orientation-preserving by normalisation
                    GroupElement wf = w * *eo.flip;
                    if (dir == +1) {
                        fo.vseq.push_back({0, x});
                        fo.eseq.push_back({eo.out, -1, w});
                        fo.vseq.push_back({1, e});
                        fo.eseq.push_back({eo.out, +1, wf});
                    } else {
                        fo.vseq.push_back({0, x});
                        fo.eseq.push_back({eo.out, -1, wf});
                        fo.vseq.push_back({1, e});
                        fo.eseq.push_back({eo.out, +1, w});
                    }
                }
            }
        }
    }

    VTag map_tag(const GroupElement& g, const VTag& tag) {
        if (tag.kind == 0) return {0, map_vertex(g, tag.id)};
        long lo = P.cells[tag.id].vertices[0], hi = P.cells[tag.id].vertices[1];
        long a = map_vertex(g, lo), b = map_vertex(g, hi);
        if (a < 0 || b < 0) return {1, -1};
        auto it = edge_by_verts.find({std::min(a, b), std::max(a, b)});
        return {1, it == edge_by_verts.end() ? -1 : it->second};
    }

    // position permutation of the refined cycle under h; second = direction
    std::pair<std::vector<long>, int> cycle_action(const FaceOrbit& fo, const GroupElement& h) {
        long n = static_cast<long>(fo.vseq.size());
        VTag i0 = map_tag(h, fo.vseq[0]), i1 = map_tag(h, fo.vseq[1]);
        long p = -1;
        for (long k = 0; k < n; ++k)
            if (fo.vseq[k] == i0) p = k;
        if (p < 0) throw BoundaryCheckFailed("face symmetry does not permute the cycle");
        int dir = 0;
        if (fo.vseq[(p + 1) % n] == i1)
            dir = +1;
        else if (fo.vseq[(p - 1 + n) % n] == i1)
            dir = -1;
        else
            throw BoundaryCheckFailed("face symmetry does not permute the cycle");
        std::vector<long> pi(n);
        for (long k = 0; k < n; ++k) {
            pi[k] = ((p + dir * k) % n + n) % n;
            if (!(map_tag(h, fo.vseq[k]) == fo.vseq[pi[k]]))
                throw BoundaryCheckFailed("face symmetry does not permute the cycle");
        }
        return {pi, dir};
    }

    void subdivide_face(long r, FaceOrbit& fo) {
        long n = static_cast<long>(fo.vseq.size());
        std::vector<std::pair<std::vector<long>, int>> actions;
        for (const GroupElement& h : fo.stab_set) actions.push_back(cycle_action(fo, h));

        // orbits of vertex positions under the stabiliser
        fo.vpos_root.assign(n, -1);
        for (long k = 0; k < n; ++k) {
            if (fo.vpos_root[k] >= 0) continue;
            fo.vpos_root[k] = k;
            fo.vpos_wit.emplace(k, GroupElement::identity(ring));
            for (size_t a = 0; a < actions.size(); ++a) {
                long im = actions[a].first[k];
                if (fo.vpos_root[im] < 0) {
                    fo.vpos_root[im] = k;
                    fo.vpos_wit.emplace(im, fo.stab_set[a]);
                }
            }
        }
        // cone edges, one per vertex-position orbit
        for (long k = 0; k < n; ++k) {
            if (fo.vpos_root[k] != k) continue;
            OrbitCell ce;
            ce.dim = 1;
            std::vector<GroupElement> st;
            for (size_t a = 0; a < actions.size(); ++a)
                if (actions[a].first[k] == k) st.push_back(fo.stab_set[a]);
            ce.stab = st;
            ce.type = classify_finite_group(ce.stab);
            ce.label = "r" + std::to_string(r) + ":" + std::to_string(k);
            const VTag& tag = fo.vseq[k];
            if (tag.kind == 0 && is_cusp(tag.id)) {
                ce.on_cusp = true;
            } else if (tag.kind == 0) {
                ce.boundary.push_back(*vertex_term(tag.id, +1, vout));
            } else {
                long er = find(tag.id);
                ce.boundary.push_back({eorb.at(er).bary_out, +1, witness.at(tag.id)});
            }
            ce.boundary.push_back({fo.centre_out, -1, GroupElement::identity(ring)});
            fo.cone_out[k] = emit(std::move(ce));
        }
        // triangle instances: edge position k spans vseq[k] -> vseq[k+1];
        // under a direction-reversing symmetry edge k maps to edge pi[k+1]
        std::vector<long> epos_root(n, -1);
        std::map<long, GroupElement> epos_wit;
        std::map<long, int> epos_dir;
        for (long k = 0; k < n; ++k) {
            if (epos_root[k] >= 0) continue;
            epos_root[k] = k;
            epos_wit.emplace(k, GroupElement::identity(ring));
            epos_dir.emplace(k, +1);
            for (size_t a = 0; a < actions.size(); ++a) {
                const auto& [pi, dir] = actions[a];
                long im = dir == +1 ? pi[k] : pi[(k + 1) % n];
                if (im == k && !fo.stab_set[a].is_identity())
                    throw BoundaryCheckFailed("face symmetry fixes a refined edge position");
                if (epos_root[im] < 0) {
                    epos_root[im] = k;
                    epos_wit.emplace(im, fo.stab_set[a]);
                    epos_dir.emplace(im, dir);
                }
            }
        }
        fo.tri_instances.clear();
        for (long k = 0; k < n; ++k)
            fo.tri_instances.push_back({epos_root[k], epos_wit.at(k), epos_dir.at(k)});
    }

    void emit_triangles(long r, FaceOrbit& fo) {
        long n = static_cast<long>(fo.vseq.size());
        for (long k = 0; k < n; ++k) {
            if (fo.tri_instances[k].rep != k) continue;
            OrbitCell t;
            t.dim = 2;
            t.stab = {GroupElement::identity(ring)};
            t.type = FiniteGroupType::trivial;
            t.label = "t" + std::to_string(r) + ":" + std::to_string(k);
            const ETerm& e = fo.eseq[k];
            t.boundary.push_back({e.out, e.sign, e.g});
            long head = (k + 1) % n;
            t.boundary.push_back(
                {fo.cone_out.at(fo.vpos_root[head]), -1, fo.vpos_wit.at(head)});
            t.boundary.push_back({fo.cone_out.at(fo.vpos_root[k]), +1, fo.vpos_wit.at(k)});
            const VTag& tag0 = fo.vseq[k];
            const VTag& tag1 = fo.vseq[head];
            t.on_cusp = (tag0.kind == 0 && is_cusp(tag0.id)) || (tag1.kind == 0 && is_cusp(tag1.id));
            fo.tri_out[k] = emit(std::move(t));
        }
    }

    // orientation of face b relative to g . (representative r): +1 when the
    // image cycle agrees up to rotation, -1 when reversed
    int face_delta(long r, long b, const GroupElement& g) {
        const std::vector<long>& cr = P.cells[r].cycle;
        const std::vector<long>& cb = P.cells[b].cycle;
        long n = static_cast<long>(cr.size());
        if (static_cast<long>(cb.size()) != n)
            throw BoundaryCheckFailed("paired faces with different cycle lengths");
        std::vector<long> im(n);
        for (long k = 0; k < n; ++k) {
            im[k] = map_vertex(g, cr[k]);
            if (im[k] < 0) throw BoundaryCheckFailed("face witness does not map vertices");
        }
        long p = -1;
        for (long k = 0; k < n; ++k)
            if (cb[k] == im[0]) p = k;
        if (p < 0) throw BoundaryCheckFailed("face witness does not map the cycle");
        if (cb[(p + 1) % n] == im[1]) return +1;
        if (cb[(p - 1 + n) % n] == im[1]) return -1;
        throw BoundaryCheckFailed("face witness does not map the cycle");
    }

    void emit_top_cell() {
        // count the units modulo sign: the extra rotations of m = 1 and
        // m = 3 map the translation-strip polyhedron to itself, so the
        // 3-cell below is a multiple cover of a strict fundamental domain
        long units = 0;
        std::vector<GroupElement> seen;
        for (const QuadInt& u : unit_group(ring)) {
            QuadInt zero{Int(0), Int(0), ring};
            GroupElement g(u, zero, zero, u.conj());
            bool dup = false;
            for (const GroupElement& h : seen) dup = dup || h == g;
            if (!dup) { seen.push_back(g); ++units; }
        }
        oc.top_cell_multiplicity = units;
        long top = P.cells_by_dim[3][0];
        OrbitCell cell;
        cell.dim = 3;
        cell.stab = {GroupElement::identity(ring)};
        cell.type = FiniteGroupType::trivial;
        cell.label = "T";
        cell.on_cusp = true;
        for (const auto& [face, sign] : P.cells[top].boundary) {
            long fr = find(face);
            const FaceOrbit& fo = forb.at(fr);
            const GroupElement& g = witness.at(face);
            int delta = face_delta(fr, face, g);
            if (fo.stab_set.size() <= 1) {
                cell.boundary.push_back({fo.out, sign * delta, g});
            } else {
                // an instance reached through a reflection of the cycle enters
                // with reversed orientation
                for (const auto& ti : fo.tri_instances)
                    cell.boundary.push_back({fo.tri_out.at(ti.rep), sign * delta * ti.dir, g * ti.h});
            }
        }
        emit(std::move(cell));
    }

    void check_boundaries() {
        // quotient chain complex: signed boundary-of-boundary must vanish
        for (long idx = 0; idx < static_cast<long>(oc.cells.size()); ++idx) {
            const OrbitCell& cell = oc.cells[idx];
            if (cell.dim < 2) continue;
            std::map<long, long> acc;
            for (const auto& t : cell.boundary)
                for (const auto& s : oc.cells[t.orbit].boundary) acc[s.orbit] += t.sign * s.sign;
            for (const auto& [o, v] : acc)
                if (v != 0) {
                    throw BoundaryCheckFailed("orbit boundary of boundary nonzero at " +
                                              cell.label + ": coefficient " +
                                              std::to_string(v) + " on " + oc.cells[o].label);
                }
        }
        // gluing compatibility: conjugated stabilisers include into boundary
        for (const OrbitCell& cell : oc.cells) {
            for (const auto& t : cell.boundary) {
                const OrbitCell& tgt = oc.cells[t.orbit];
                std::set<GroupElement> tgt_stab(tgt.stab.begin(), tgt.stab.end());
                GroupElement gi = t.g.inverse();
                for (const GroupElement& h : cell.stab)
                    if (!tgt_stab.count(gi * h * t.g))
                        throw BoundaryCheckFailed("stabiliser not carried into boundary cell at " +
                                                  cell.label);
            }
        }
    }
};

}  // namespace

OrbitComplex build_orbit_complex(const FundamentalPolyhedron& P) {
    Builder b(P);
    b.build();
    return std::move(b.oc);
}

const char* linear_preimage_name(FiniteGroupType t) {
    switch (t) {
        case FiniteGroupType::trivial: return "Z/2";
        case FiniteGroupType::c2: return "Z/4";
        case FiniteGroupType::c3: return "Z/6";
        case FiniteGroupType::v4: return "Q8";
        case FiniteGroupType::s3: return "Dic3";
        case FiniteGroupType::a4: return "2T";
    }
    return "?";
}

namespace {

nlohmann::ordered_json element_json(const GroupElement& g) {
    auto s = [](const Int& x) { return x.get_str(); };
    return nlohmann::ordered_json::array({s(g.a.a), s(g.a.b), s(g.b.a), s(g.b.b),
                                          s(g.c.a), s(g.c.b), s(g.d.a), s(g.d.b)});
}

GroupElement element_from_json(const nlohmann::json& j, const RingDescriptor& ring) {
    auto q = [&](size_t k) {
        return QuadInt(Int(j[k].get<std::string>()), Int(j[k + 1].get<std::string>()), ring);
    };
    return GroupElement(q(0), q(2), q(4), q(6));
}

}  // namespace

std::string orbit_complex_json(const OrbitComplex& oc) {
    nlohmann::ordered_json j;
    j["m"] = oc.ring.m;
    j["flipped_edge_orbits"] = oc.flipped_edge_orbits;
    j["rotated_face_orbits"] = oc.rotated_face_orbits;
    j["top_cell_multiplicity"] = oc.top_cell_multiplicity;
    nlohmann::ordered_json cells = nlohmann::ordered_json::array();
    for (const OrbitCell& c : oc.cells) {
        nlohmann::ordered_json jc;
        jc["dim"] = c.dim;
        jc["label"] = c.label;
        jc["stabiliser"] = finite_group_name(c.type);
        jc["stabiliser_order"] = static_cast<long>(c.stab.size());
        jc["on_cusp"] = c.on_cusp;
        jc["in_spine"] = c.in_spine;
        nlohmann::ordered_json st = nlohmann::ordered_json::array();
        for (const GroupElement& g : c.stab) st.push_back(element_json(g));
        jc["stab"] = st;
        nlohmann::ordered_json bd = nlohmann::ordered_json::array();
        for (const auto& t : c.boundary)
            bd.push_back({{"orbit", t.orbit},
                          {"sign", t.sign},
                          {"g", t.g.str()},
                          {"g_mat", element_json(t.g)}});
        jc["boundary"] = bd;
        cells.push_back(jc);
    }
    j["cells"] = cells;
    return j.dump(1);
}

OrbitComplex orbit_complex_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    OrbitComplex oc;
    oc.ring = make_ring(j.at("m").get<long>());
    oc.flipped_edge_orbits = j.at("flipped_edge_orbits").get<long>();
    oc.rotated_face_orbits = j.at("rotated_face_orbits").get<long>();
    oc.top_cell_multiplicity = j.at("top_cell_multiplicity").get<long>();
    oc.by_dim.assign(4, {});
    for (const auto& jc : j.at("cells")) {
        OrbitCell c;
        c.dim = jc.at("dim").get<int>();
        c.label = jc.at("label").get<std::string>();
        c.on_cusp = jc.at("on_cusp").get<bool>();
        c.in_spine = jc.at("in_spine").get<bool>();
        for (const auto& g : jc.at("stab")) c.stab.push_back(element_from_json(g, oc.ring));
        c.type = classify_finite_group(c.stab);
        if (finite_group_name(c.type) != jc.at("stabiliser").get<std::string>())
            throw BoundaryCheckFailed("cached stabiliser type does not match its elements");
        for (const auto& t : jc.at("boundary"))
            c.boundary.push_back({t.at("orbit").get<long>(), t.at("sign").get<int>(),
                                  element_from_json(t.at("g_mat"), oc.ring)});
        oc.by_dim[c.dim].push_back(static_cast<long>(oc.cells.size()));
        oc.cells.push_back(std::move(c));
    }
    return oc;
}

}  // namespace bianchi
