#include "bianchi/swan.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

#include "bianchi/snf.hpp"
#include "json.hpp"

namespace bianchi {

std::strong_ordering Vec2::operator<=>(const Vec2& o) const {
    int c = cmp(x, o.x);
    if (c != 0) return c < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
    c = cmp(y, o.y);
    if (c != 0) return c < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

Poly2 clip_halfplane(const Poly2& poly, const Rat& a, const Rat& b, const Rat& c) {
    Poly2 out;
    size_t n = poly.size();
    if (n == 0) return out;
    std::vector<Rat> side(n);
    for (size_t i = 0; i < n; ++i) side[i] = a * poly[i].x + b * poly[i].y + c;
    for (size_t i = 0; i < n; ++i) {
        size_t j = (i + 1) % n;
        bool in_i = side[i] >= 0, in_j = side[j] >= 0;
        if (in_i) out.push_back(poly[i]);
        if (in_i != in_j) {
            Rat t = side[i] / (side[i] - side[j]);
            out.push_back({poly[i].x + t * (poly[j].x - poly[i].x),
                           poly[i].y + t * (poly[j].y - poly[i].y)});
        }
    }
    // drop repeated points created by clipping through vertices
    Poly2 clean;
    for (auto& p : out) {
        if (clean.empty() || !(clean.back() == p)) clean.push_back(p);
    }
    while (clean.size() > 1 && clean.front() == clean.back()) clean.pop_back();
    return clean;
}

Rat polygon_area_twice(const Poly2& poly) {
    Rat acc;
    size_t n = poly.size();
    for (size_t i = 0; i < n; ++i) {
        size_t j = (i + 1) % n;
        acc += poly[i].x * poly[j].y - poly[j].x * poly[i].y;
    }
    return acc;
}

Hemisphere::Hemisphere(QuadInt l, QuadInt m) : lambda(std::move(l)), mu(std::move(m)) {
    assert(!lambda.is_zero());
    center = QuadRat(mu) / QuadRat(lambda);
    radius_sq = Rat(1) / Rat(lambda.norm());
}

Rat Hemisphere::height_sq_at(const Vec2& p) const {
    Rat du = p.x - center.u();
    Rat dv = p.y - center.v();
    return radius_sq - du * du - Rat(lambda.ring.m) * dv * dv;
}

Poly2 translation_parallelogram(const RingDescriptor& ring) {
    Rat half(1, 2);
    if (ring.half_integral) {
        return {{-half, Rat(0)}, {half, Rat(0)}, {Rat(1), half}, {Rat(0), half}};
    }
    return {{-half, Rat(0)}, {half, Rat(0)}, {half, Rat(1)}, {-half, Rat(1)}};
}

namespace {

long isqrt_floor(long n) { return static_cast<long>(std::sqrt(static_cast<double>(n))); }

struct HemiKey {
    Rat cu, cv, r2;
    bool operator<(const HemiKey& o) const {
        int c = cmp(cu, o.cu);
        if (c != 0) return c < 0;
        c = cmp(cv, o.cv);
        if (c != 0) return c < 0;
        return cmp(r2, o.r2) < 0;
    }
};

}  // namespace

std::vector<Hemisphere> enumerate_hemispheres(const RingDescriptor& ring, long norm_bound) {
    Poly2 para = translation_parallelogram(ring);
    Rat umin = para[0].x, umax = para[0].x, vmin = para[0].y, vmax = para[0].y;
    for (auto& p : para) {
        umin = std::min(umin, p.x);
        umax = std::max(umax, p.x);
        vmin = std::min(vmin, p.y);
        vmax = std::max(vmax, p.y);
    }

    std::map<HemiKey, Hemisphere> dedup;
    for (const QuadInt& lambda : quadints_with_norm_le(ring, Rat(norm_bound))) {
        if (lambda.is_zero()) continue;
        long n = lambda.norm().get_si();
        Rat margin_u(1, std::max(1L, isqrt_floor(n)));
        Rat margin_v(1, std::max(1L, isqrt_floor(n * ring.m)));
        Rat ulo = umin - margin_u, uhi = umax + margin_u;
        Rat vlo = vmin - margin_v, vhi = vmax + margin_v;
        // |mu|^2 <= norm(lambda) * max|center|^2 over the search box
        Rat cu = std::max(abs(ulo), abs(uhi)), cv = std::max(abs(vlo), abs(vhi));
        Rat r2_box = cu * cu + Rat(ring.m) * cv * cv;
        for (const QuadInt& mu : quadints_with_norm_le(ring, Rat(n) * r2_box + 1)) {
            QuadRat center = QuadRat(mu) / QuadRat(lambda);
            Rat pu = center.u(), pv = center.v();
            if (pu < ulo || pu > uhi || pv < vlo || pv > vhi) continue;
            if (ideal_norm(lambda, mu) != 1) continue;
            HemiKey key{pu, pv, Rat(1) / Rat(n)};
            if (dedup.find(key) == dedup.end()) dedup.emplace(key, Hemisphere(lambda, mu));
        }
    }
    std::vector<Hemisphere> out;
    out.reserve(dedup.size());
    for (auto& [k, h] : dedup) out.push_back(h);
    return out;
}

namespace {

struct FloorData {
    std::vector<Hemisphere> hems;  // hemispheres with a nonempty floor cell
    std::vector<Poly2> cells;      // matching polygons
    bool covered = false;          // cells tile the parallelogram, no negative vertex
    bool vertex_below_zero = false;
    Rat h_min_positive;            // minimal positive squared vertex height
    bool has_h_min = false;
};

// Exact test: hemisphere j lies below hemisphere i everywhere
// (d + r_j <= r_i as 3D balls, compared via rational squares).
bool dominated_by(const Hemisphere& hj, const Hemisphere& hi, long m) {
    if (hi.radius_sq < hj.radius_sq) return false;
    Rat du = hi.center.u() - hj.center.u();
    Rat dv = hi.center.v() - hj.center.v();
    Rat d2 = du * du + Rat(m) * dv * dv;
    Rat lhs = hi.radius_sq + hj.radius_sq - d2;
    if (lhs < 0) return false;
    return lhs * lhs >= 4 * hi.radius_sq * hj.radius_sq;
}

FloorData compute_floor(const RingDescriptor& ring, const std::vector<Hemisphere>& all_hems) {
    long m = ring.m;
    double sm = std::sqrt(static_cast<double>(m));
    Poly2 para = translation_parallelogram(ring);

    struct F {
        double x, y, r;
    };
    std::vector<F> fd(all_hems.size());
    for (size_t i = 0; i < all_hems.size(); ++i) {
        fd[i].x = all_hems[i].center.u().get_d();
        fd[i].y = all_hems[i].center.v().get_d() * sm;
        fd[i].r = std::sqrt(all_hems[i].radius_sq.get_d());
    }

    // coarse spatial grid on (x, y*sqrt(m)) for candidate generation
    const double g = 0.5;
    std::unordered_map<long long, std::vector<long>> grid;
    std::unordered_map<long long, double> grid_rmax;
    auto key_of = [&](double x, double y) {
        long long gx = static_cast<long long>(std::floor(x / g));
        long long gy = static_cast<long long>(std::floor(y / g));
        return gx * 1000003LL + gy;
    };
    for (size_t i = 0; i < all_hems.size(); ++i) {
        long long k = key_of(fd[i].x, fd[i].y);
        grid[k].push_back(static_cast<long>(i));
        grid_rmax[k] = std::max(grid_rmax[k], fd[i].r);
    }
    auto neighbours = [&](long i, double reach) {
        std::vector<long> out;
        long lox = static_cast<long>(std::floor((fd[i].x - reach) / g));
        long hix = static_cast<long>(std::floor((fd[i].x + reach) / g));
        long loy = static_cast<long>(std::floor((fd[i].y - reach) / g));
        long hiy = static_cast<long>(std::floor((fd[i].y + reach) / g));
        for (long gx = lox; gx <= hix; ++gx)
            for (long gy = loy; gy <= hiy; ++gy) {
                auto it = grid.find(gx * 1000003LL + gy);
                if (it == grid.end()) continue;
                for (long j : it->second)
                    if (j != i) out.push_back(j);
            }
        return out;
    };

    // drop hemispheres lying below a single other hemisphere
    std::vector<bool> dead(all_hems.size(), false);
    for (size_t i = 0; i < all_hems.size(); ++i) {
        for (long j : neighbours(static_cast<long>(i), fd[i].r + 1.0 + 1e-9)) {
            if (dead[j]) continue;
            double dx = fd[i].x - fd[j].x, dy = fd[i].y - fd[j].y;
            double d = std::sqrt(dx * dx + dy * dy);
            if (d + fd[i].r > fd[j].r + 1e-9) continue;
            if (dominated_by(all_hems[i], all_hems[j], m) &&
                !(all_hems[i].center == all_hems[j].center &&
                  all_hems[i].radius_sq == all_hems[j].radius_sq)) {
                dead[i] = true;
                break;
            }
        }
    }

    FloorData out;
    std::map<Vec2, Rat> vertex_heights;  // sanity: heights agree across cells
    Rat para_area = polygon_area_twice(para);
    Rat area_sum;
    out.covered = true;

    for (size_t i = 0; i < all_hems.size(); ++i) {
        if (dead[i]) continue;
        const Hemisphere& h = all_hems[i];
        long n = h.lambda.norm().get_si();
        // rational half-width of a bounding square containing the radius
        Rat w = make_rat(isqrt_floor(n) + 1, n);
        Rat cu = h.center.u(), cv = h.center.v();
        // v is measured in units of sqrt(m), so the v half-width is r/sqrt(m)
        Rat wv = make_rat(isqrt_floor(n * m) + 1, n * m);
        Poly2 poly = para;
        poly = clip_halfplane(poly, Rat(1), Rat(0), -(cu - w));
        poly = clip_halfplane(poly, Rat(-1), Rat(0), cu + w);
        poly = clip_halfplane(poly, Rat(0), Rat(1), -(cv - wv));
        poly = clip_halfplane(poly, Rat(0), Rat(-1), cv + wv);

        // clip by power bisectors, nearest competitors first; the cell starts
        // as a bounding square, so competitors up to sqrt(2)*w + r_j away can
        // still cut it
        auto cand = neighbours(static_cast<long>(i), 1.5 * fd[i].r + 2.6);
        std::sort(cand.begin(), cand.end(), [&](long a, long b) {
            double da = std::hypot(fd[a].x - fd[i].x, fd[a].y - fd[i].y) - fd[a].r;
            double db = std::hypot(fd[b].x - fd[i].x, fd[b].y - fd[i].y) - fd[b].r;
            return da < db;
        });
        for (long j : cand) {
            if (dead[j]) continue;
            if (poly.size() < 3) break;
            const Hemisphere& hj = all_hems[j];
            // height_i - height_j = A x + B y + C >= 0
            Rat A = 2 * (h.center.u() - hj.center.u());
            Rat B = 2 * Rat(m) * (h.center.v() - hj.center.v());
            Rat C = (h.radius_sq - h.center.u() * h.center.u() -
                     Rat(m) * h.center.v() * h.center.v()) -
                    (hj.radius_sq - hj.center.u() * hj.center.u() -
                     Rat(m) * hj.center.v() * hj.center.v());
            if (A == 0 && B == 0) continue;  // same power function
            poly = clip_halfplane(poly, A, B, C);
        }
        if (poly.size() < 3 || polygon_area_twice(poly) == 0) continue;

        for (const Vec2& p : poly) {
            Rat t2 = h.height_sq_at(p);
            if (t2 < 0) {
                out.vertex_below_zero = true;
                out.covered = false;
            } else if (t2 > 0) {
                if (!out.has_h_min || t2 < out.h_min_positive) {
                    out.h_min_positive = t2;
                    out.has_h_min = true;
                }
            }
            auto it = vertex_heights.find(p);
            if (it == vertex_heights.end())
                vertex_heights.emplace(p, t2);
            else
                assert(it->second == t2);
        }
        area_sum += polygon_area_twice(poly);
        out.hems.push_back(h);
        out.cells.push_back(std::move(poly));
    }
    if (area_sum != para_area) out.covered = false;
    return out;
}

Rat rat_floor(const Rat& x) {
    Int q;
    mpz_fdiv_q(q.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
    return Rat(q);
}

// lattice coordinates of a planar point w.r.t. the basis (1, omega)
std::pair<Rat, Rat> lattice_coords(const RingDescriptor& ring, const Rat& u, const Rat& v) {
    if (ring.half_integral) return {u - v, 2 * v};
    return {u, v};
}

// floor face: a convex polygon on one hemisphere
struct FaceRec {
    long hemi;
    Poly2 poly;
};

// units modulo sign: trivial except for m = 1 (i) and m = 3 (sixth roots)
std::vector<QuadInt> psl_units(const RingDescriptor& ring) {
    std::vector<QuadInt> units;
    for (const QuadInt& u : unit_group(ring)) {
        bool dup = false;
        for (const QuadInt& w : units)
            if (w == u || w == -u) dup = true;
        if (!dup) units.push_back(u);
    }
    return units;
}

// determinant-one completion (a b; lambda -mu): swaps the hemisphere with the floor
GroupElement hemisphere_swap(const RingDescriptor& ring, const Hemisphere& h) {
    QuadInt omega{Int(0), Int(1), ring};
    QuadInt cols[4] = {-h.mu, -(h.mu * omega), -h.lambda, -(h.lambda * omega)};
    IMat sys(2, 4);
    for (int j = 0; j < 4; ++j) {
        sys.at(0, j) = cols[j].a;
        sys.at(1, j) = cols[j].b;
    }
    std::vector<Int> rhs{Int(1), Int(0)}, sol;
    if (!solve_integer(sys, rhs, sol))
        throw UnpairedFace("hemisphere pair admits no determinant-one completion");
    return GroupElement(QuadInt{sol[0], sol[1], ring}, QuadInt{sol[2], sol[3], ring}, h.lambda,
                        -h.mu);
}

UhsPoint lift_to_hemisphere(const RingDescriptor& ring, const Hemisphere& h, const Vec2& p) {
    return {QuadRat::from_uv(ring, p.x, p.y), h.height_sq_at(p)};
}

Vec2 planar_image(const RingDescriptor& ring, const GroupElement& g, const Hemisphere& h,
                  const Vec2& p) {
    UhsPoint q = act(g, lift_to_hemisphere(ring, h, p));
    return {q.z.u(), q.z.v()};
}

// image of a face as a planar polygon, counterclockwise (face pairings lie on
// hemispheres, never vertical planes, so edges project to straight segments)
Poly2 image_polygon(const RingDescriptor& ring, const GroupElement& g, const Hemisphere& h,
                    const Poly2& poly) {
    Poly2 q;
    for (const Vec2& p : poly) q.push_back(planar_image(ring, g, h, p));
    if (polygon_area_twice(q) < 0) std::reverse(q.begin(), q.end());
    return q;
}

// inward halfplane of the counterclockwise edge a -> b
void edge_halfplane(const Vec2& a, const Vec2& b, Rat& A, Rat& B, Rat& C) {
    A = -(b.y - a.y);
    B = b.x - a.x;
    C = -(A * a.x + B * a.y);
}

Poly2 intersect_convex(const Poly2& p, const Poly2& q) {
    Poly2 r = p;
    for (size_t k = 0; k < q.size() && r.size() >= 3; ++k) {
        Rat A, B, C;
        edge_halfplane(q[k], q[(k + 1) % q.size()], A, B, C);
        r = clip_halfplane(r, A, B, C);
    }
    return r.size() >= 3 ? r : Poly2{};
}

// partition p into convex pieces: the parts beyond each edge of q, then p n q
std::vector<Poly2> split_convex(const Poly2& p, const Poly2& q) {
    std::vector<Poly2> out;
    Poly2 rem = p;
    for (size_t k = 0; k < q.size() && rem.size() >= 3; ++k) {
        Rat A, B, C;
        edge_halfplane(q[k], q[(k + 1) % q.size()], A, B, C);
        Poly2 outside = clip_halfplane(rem, -A, -B, -C);
        if (outside.size() >= 3 && polygon_area_twice(outside) > 0) out.push_back(outside);
        rem = clip_halfplane(rem, A, B, C);
    }
    if (rem.size() >= 3 && polygon_area_twice(rem) > 0) out.push_back(rem);
    return out;
}

// all elements T_delta * U * g0 whose image polygon can reach the parallelogram
std::vector<GroupElement> pairing_candidates(const RingDescriptor& ring,
                                             const std::vector<Hemisphere>& hems,
                                             const FaceRec& f) {
    std::vector<GroupElement> out;
    GroupElement g0 = hemisphere_swap(ring, hems[f.hemi]);
    for (const QuadInt& u : psl_units(ring)) {
        QuadInt zero{Int(0), Int(0), ring};
        GroupElement base = GroupElement(u, zero, zero, u.conj()) * g0;
        Poly2 q = image_polygon(ring, base, hems[f.hemi], f.poly);
        Rat xmin, xmax, ymin, ymax;
        for (size_t k = 0; k < q.size(); ++k) {
            auto [x, y] = lattice_coords(ring, q[k].x, q[k].y);
            if (k == 0) {
                xmin = xmax = x;
                ymin = ymax = y;
            } else {
                xmin = std::min(xmin, x);
                xmax = std::max(xmax, x);
                ymin = std::min(ymin, y);
                ymax = std::max(ymax, y);
            }
        }
        // need x + dx within [-1/2, 1/2] and y + dy within [0, 1] somewhere
        long dx_lo = static_cast<long>(rat_floor(Rat(-1, 2) - xmax).get_d());
        long dx_hi = static_cast<long>(rat_floor(Rat(1, 2) - xmin).get_d()) + 1;
        long dy_lo = static_cast<long>(rat_floor(-ymax).get_d());
        long dy_hi = static_cast<long>(rat_floor(1 - ymin).get_d()) + 1;
        for (long dx = dx_lo; dx <= dx_hi; ++dx)
            for (long dy = dy_lo; dy <= dy_hi; ++dy)
                out.push_back(GroupElement::translation(QuadInt{Int(dx), Int(dy), ring}) * base);
    }
    return out;
}

// floor height over p, with p first reduced into the fundamental parallelogram
Rat floor_height(const RingDescriptor& ring, const std::vector<Hemisphere>& hems,
                 const Vec2& p) {
    auto [x, y] = lattice_coords(ring, p.x, p.y);
    Rat dx = -rat_floor(x + Rat(1, 2)), dy = -rat_floor(y);
    QuadInt delta{Int(dx.get_num()), Int(dy.get_num()), ring};
    Vec2 q{p.x + delta.u(), p.y + delta.v()};
    Rat best(-1);
    for (const Hemisphere& h : hems) best = std::max(best, h.height_sq_at(q));
    return best;
}

// true when g carries every vertex of the face onto the floor surface; only
// such elements are genuine pairing pieces
bool image_on_floor(const RingDescriptor& ring, const std::vector<Hemisphere>& hems,
                    const GroupElement& g, const Hemisphere& h, const Poly2& poly) {
    for (const Vec2& p : poly) {
        UhsPoint q = act(g, lift_to_hemisphere(ring, h, p));
        if (floor_height(ring, hems, {q.z.u(), q.z.v()}) != q.t_sq) return false;
    }
    return true;
}

// Cut floor faces until every pairing maps each face onto whole faces. With a
// rectangular translation lattice the faces already match; with a slanted one
// (m = 3 mod 4) images straddle the walls and force genuine subdivisions.
void closure_subdivide(const RingDescriptor& ring, const std::vector<Hemisphere>& hems,
                       std::vector<FaceRec>& faces) {
    for (int guard = 0;; ++guard) {
        if (guard > 500)
            throw ResourceBudgetExceeded("floor subdivision did not stabilise");
        bool changed = false;
        for (size_t fi = 0; fi < faces.size() && !changed; ++fi) {
            auto cands = pairing_candidates(ring, hems, faces[fi]);
            for (const GroupElement& g : cands) {
                if (!image_on_floor(ring, hems, g, hems[faces[fi].hemi], faces[fi].poly))
                    continue;
                Poly2 q = image_polygon(ring, g, hems[faces[fi].hemi], faces[fi].poly);
                Rat area_q = polygon_area_twice(q);
                if (area_q == 0) continue;
                GroupElement ginv = g.inverse();
                auto pull_back = [&](const Poly2& region, long hemi_j) {
                    Poly2 pre;
                    for (const Vec2& corner : region)
                        pre.push_back(planar_image(ring, ginv, hems[hemi_j], corner));
                    if (polygon_area_twice(pre) < 0) std::reverse(pre.begin(), pre.end());
                    return pre;
                };
                for (size_t fj = 0; fj < faces.size(); ++fj) {
                    Poly2 overlap = intersect_convex(faces[fj].poly, q);
                    Rat area = polygon_area_twice(overlap);
                    if (area == 0) continue;
                    long hemi_i = faces[fi].hemi, hemi_j = faces[fj].hemi;

                    if (area == polygon_area_twice(faces[fj].poly)) {
                        if (area == area_q) continue;  // image is exactly this face
                        // image covers this face and more: split the source
                        // along the pulled-back face
                        std::vector<Poly2> pieces_i =
                            split_convex(faces[fi].poly, pull_back(overlap, hemi_j));
                        if (pieces_i.size() < 2) continue;
                        faces.erase(faces.begin() + fi);
                        for (auto& piece : pieces_i) faces.push_back({hemi_i, std::move(piece)});
                        changed = true;
                        break;
                    }

                    // proper overlap: cut the target along the image edges and
                    // the source along the pulled-back overlap
                    std::vector<Poly2> pieces_j = split_convex(faces[fj].poly, q);
                    Poly2 pre = pull_back(overlap, hemi_j);
                    std::vector<Poly2> pieces_i;
                    if (fi != fj) pieces_i = split_convex(faces[fi].poly, pre);

                    size_t lo = std::min(fi, fj), hi = std::max(fi, fj);
                    if (fi != fj) faces.erase(faces.begin() + hi);
                    faces.erase(faces.begin() + lo);
                    for (auto& piece : pieces_j) faces.push_back({hemi_j, std::move(piece)});
                    for (auto& piece : pieces_i) faces.push_back({hemi_i, std::move(piece)});
                    changed = true;
                    break;
                }
                if (changed) break;
            }
        }
        if (!changed) return;
    }
}

// p strictly between a and b on the segment a-b?
bool strictly_between_pts(const Vec2& a, const Vec2& b, const Vec2& p) {
    Rat dx = b.x - a.x, dy = b.y - a.y;
    Rat px = p.x - a.x, py = p.y - a.y;
    if (dx * py - dy * px != 0) return false;
    Rat t = px * dx + py * dy;  // parameter * |d|^2
    Rat len2 = dx * dx + dy * dy;
    return t > 0 && t < len2;
}

bool on_polygon_boundary(const Poly2& poly, const Vec2& p) {
    for (size_t k = 0; k < poly.size(); ++k) {
        const Vec2& a = poly[k];
        const Vec2& b = poly[(k + 1) % poly.size()];
        if (p == a || strictly_between_pts(a, b, p)) return true;
    }
    return false;
}

// The subdivision is stable as a set of polygons, but faces also have to agree
// about vertices interior to shared edges: a pairing must carry vertices to
// vertices. Transfer boundary vertices across all exact face matches until
// nothing new appears.
std::map<Vec2, Rat> stabilise_vertices(const RingDescriptor& ring,
                                       const std::vector<Hemisphere>& hems,
                                       const std::vector<FaceRec>& faces) {
    std::map<Vec2, Rat> verts;
    for (const FaceRec& fr : faces)
        for (const Vec2& p : fr.poly) verts.emplace(p, hems[fr.hemi].height_sq_at(p));

    struct Match {
        size_t fi, fj;
        GroupElement g;  // g(face fi) = face fj
    };
    std::vector<Match> matches;
    for (size_t fi = 0; fi < faces.size(); ++fi) {
        for (const GroupElement& g : pairing_candidates(ring, hems, faces[fi])) {
            if (!image_on_floor(ring, hems, g, hems[faces[fi].hemi], faces[fi].poly)) continue;
            Poly2 q = image_polygon(ring, g, hems[faces[fi].hemi], faces[fi].poly);
            Rat aq = polygon_area_twice(q);
            if (aq == 0) continue;
            for (size_t fj = 0; fj < faces.size(); ++fj) {
                if (polygon_area_twice(faces[fj].poly) != aq) continue;
                if (polygon_area_twice(intersect_convex(faces[fj].poly, q)) != aq) continue;
                matches.push_back({fi, fj, g});
                break;
            }
        }
    }

    for (int round = 0;; ++round) {
        if (round > 200) throw ResourceBudgetExceeded("vertex transfer did not stabilise");
        bool changed = false;
        for (const Match& mt : matches) {
            GroupElement ginv = mt.g.inverse();
            std::vector<std::pair<Vec2, Rat>> to_add;
            for (const auto& [v, h] : verts) {
                if (!on_polygon_boundary(faces[mt.fj].poly, v)) continue;
                Vec2 q = planar_image(ring, ginv, hems[faces[mt.fj].hemi], v);
                if (verts.count(q) || !on_polygon_boundary(faces[mt.fi].poly, q)) continue;
                to_add.push_back({q, hems[faces[mt.fi].hemi].height_sq_at(q)});
            }
            for (auto& [q, h] : to_add) {
                verts.emplace(q, h);
                changed = true;
            }
        }
        if (!changed) return verts;
    }
}

FundamentalPolyhedron build_polyhedron(const RingDescriptor& ring, long bound,
                                       const std::vector<Hemisphere>& hems,
                                       const std::vector<FaceRec>& faces);

}  // namespace

FundamentalPolyhedron floor_decomposition(const RingDescriptor& ring, long norm_cap) {
    long bound = 1;
    for (;;) {
        if (bound > norm_cap)
            throw ResourceBudgetExceeded("hemisphere norm bound exceeded cap " +
                                         std::to_string(norm_cap));
        std::vector<Hemisphere> hems = enumerate_hemispheres(ring, bound);
        FloorData floor = compute_floor(ring, hems);
        if (floor.covered && floor.has_h_min) {
            // Swan's criterion: a hemisphere of larger norm has squared radius
            // <= 1/(bound+1) and cannot rise strictly above any floor vertex
            // once (bound+1) * h_min >= 1. Heights are concave on each cell, so
            // vertex minima bound the whole floor.
            if (Rat(bound + 1) * floor.h_min_positive >= 1) {
                std::vector<FaceRec> faces;
                for (size_t i = 0; i < floor.hems.size(); ++i)
                    faces.push_back({static_cast<long>(i), floor.cells[i]});
                closure_subdivide(ring, floor.hems, faces);
                return build_polyhedron(ring, bound, floor.hems, faces);
            }
            // jump straight to the bound the lowest vertex demands
            Rat need = 1 / floor.h_min_positive;
            long next = static_cast<long>(need.get_d()) + 1;
            bound = std::max(bound + 1, next);
        } else {
            bound *= 2;
        }
    }
}

namespace {

struct VertexKey {
    Rat u, v, t2;
    bool operator<(const VertexKey& o) const {
        int c = cmp(u, o.u);
        if (c != 0) return c < 0;
        c = cmp(v, o.v);
        if (c != 0) return c < 0;
        return cmp(t2, o.t2) < 0;
    }
};

// p strictly between a and b on the segment a-b?
bool strictly_between(const Vec2& a, const Vec2& b, const Vec2& p) {
    Rat dx = b.x - a.x, dy = b.y - a.y;
    Rat px = p.x - a.x, py = p.y - a.y;
    if (dx * py - dy * px != 0) return false;
    Rat t = px * dx + py * dy;            // parameter * |d|^2
    Rat len2 = dx * dx + dy * dy;
    return t > 0 && t < len2;
}

FundamentalPolyhedron build_polyhedron(const RingDescriptor& ring, long bound,
                                       const std::vector<Hemisphere>& hems,
                                       const std::vector<FaceRec>& faces) {
    FundamentalPolyhedron P;
    P.ring = ring;
    P.norm_bound = bound;
    P.hemispheres = hems;
    P.cells_by_dim.assign(4, {});

    // --- vertex table (planar vertices, then infinity) ---
    std::map<Vec2, long> vid;
    std::vector<Vec2> vpos;
    std::vector<Rat> vheight;
    for (const auto& [p, h] : stabilise_vertices(ring, hems, faces)) {
        long id = static_cast<long>(vpos.size());
        vid[p] = id;
        vpos.push_back(p);
        vheight.push_back(h);
    }
    long nplanar = static_cast<long>(vpos.size());
    for (long i = 0; i < nplanar; ++i) {
        PolyVertex pv;
        pv.p = UhsPoint{QuadRat::from_uv(ring, vpos[i].x, vpos[i].y), vheight[i]};
        pv.cusp = (vheight[i] == 0);
        P.vertices.push_back(pv);
    }
    PolyVertex inf;
    inf.at_infinity = true;
    inf.cusp = true;
    P.infinity_vertex = nplanar;
    P.vertices.push_back(inf);

    // --- conforming refinement: insert vertices sitting inside cell edges ---
    std::vector<std::vector<long>> cyc(faces.size());
    for (size_t ci = 0; ci < faces.size(); ++ci) {
        const Poly2& poly = faces[ci].poly;
        size_t n = poly.size();
        for (size_t k = 0; k < n; ++k) {
            const Vec2& a = poly[k];
            const Vec2& b = poly[(k + 1) % n];
            cyc[ci].push_back(vid[a]);
            std::vector<std::pair<Rat, long>> inner;
            double lox = std::min(a.x.get_d(), b.x.get_d()) - 1e-9;
            double hix = std::max(a.x.get_d(), b.x.get_d()) + 1e-9;
            double loy = std::min(a.y.get_d(), b.y.get_d()) - 1e-9;
            double hiy = std::max(a.y.get_d(), b.y.get_d()) + 1e-9;
            for (long w = 0; w < nplanar; ++w) {
                double wx = vpos[w].x.get_d(), wy = vpos[w].y.get_d();
                if (wx < lox || wx > hix || wy < loy || wy > hiy) continue;
                if (strictly_between(a, b, vpos[w]))
                    inner.push_back({(vpos[w].x - a.x) * (b.x - a.x) +
                                         (vpos[w].y - a.y) * (b.y - a.y),
                                     w});
            }
            std::sort(inner.begin(), inner.end());
            for (auto& [t, w] : inner) cyc[ci].push_back(w);
        }
    }

    // --- 0-cells ---
    for (long i = 0; i < static_cast<long>(P.vertices.size()); ++i) {
        PolyCell c;
        c.dim = 0;
        c.vertices = {i};
        P.cells_by_dim[0].push_back(static_cast<long>(P.cells.size()));
        P.cells.push_back(std::move(c));
    }
    auto vertex_cell = [&](long v) { return P.cells_by_dim[0][v]; };

    // --- 1-cells: floor edges + corner verticals ---
    std::map<std::pair<long, long>, long> edge_id;  // (vmin,vmax) -> cell id
    auto get_edge = [&](long a, long b) {
        long lo = std::min(a, b), hi = std::max(a, b);
        auto it = edge_id.find({lo, hi});
        if (it != edge_id.end()) return it->second;
        PolyCell c;
        c.dim = 1;
        c.vertices = {lo, hi};
        c.boundary = {{vertex_cell(lo), -1}, {vertex_cell(hi), +1}};
        long id = static_cast<long>(P.cells.size());
        edge_id[{lo, hi}] = id;
        P.cells_by_dim[1].push_back(id);
        P.cells.push_back(std::move(c));
        return id;
    };
    for (auto& cy : cyc)
        for (size_t k = 0; k < cy.size(); ++k) get_edge(cy[k], cy[(k + 1) % cy.size()]);

    Poly2 para = translation_parallelogram(ring);
    std::vector<long> corner(4);
    for (int s = 0; s < 4; ++s) {
        auto it = vid.find(para[s]);
        if (it == vid.end()) throw BoundaryCheckFailed("parallelogram corner missing from floor");
        corner[s] = it->second;
        get_edge(corner[s], P.infinity_vertex);
    }

    // --- 2-cells ---
    auto make_face = [&](const std::vector<long>& cycle, long hemi, int wall) {
        PolyCell c;
        c.dim = 2;
        c.cycle = cycle;
        c.vertices = cycle;
        std::sort(c.vertices.begin(), c.vertices.end());
        c.vertices.erase(std::unique(c.vertices.begin(), c.vertices.end()), c.vertices.end());
        for (size_t k = 0; k < cycle.size(); ++k) {
            long a = cycle[k], b = cycle[(k + 1) % cycle.size()];
            if (a == P.infinity_vertex && b == P.infinity_vertex)
                throw BoundaryCheckFailed("edge at infinity");
            c.boundary.push_back({get_edge(a, b), a < b ? +1 : -1});
        }
        c.support_hemisphere = hemi;
        c.wall_side = wall;
        long id = static_cast<long>(P.cells.size());
        P.cells_by_dim[2].push_back(id);
        P.cells.push_back(std::move(c));
        return id;
    };

    for (size_t ci = 0; ci < cyc.size(); ++ci) make_face(cyc[ci], faces[ci].hemi, -1);

    // walls: vertices on side s ordered along the side, then infinity
    for (int s = 0; s < 4; ++s) {
        const Vec2& a = para[s];
        const Vec2& b = para[(s + 1) % 4];
        Rat dx = b.x - a.x, dy = b.y - a.y;
        std::vector<std::pair<Rat, long>> on_side;
        for (long w = 0; w < nplanar; ++w) {
            Rat px = vpos[w].x - a.x, py = vpos[w].y - a.y;
            if (dx * py - dy * px != 0) continue;
            Rat t = px * dx + py * dy;
            if (t < 0 || t > dx * dx + dy * dy) continue;
            on_side.push_back({t, w});
        }
        std::sort(on_side.begin(), on_side.end());
        std::vector<long> cycle;
        for (auto& [t, w] : on_side) cycle.push_back(w);
        if (cycle.front() != corner[s] || cycle.back() != corner[(s + 1) % 4])
            throw BoundaryCheckFailed("wall chain does not join the corners");
        cycle.push_back(P.infinity_vertex);
        make_face(cycle, -1, s);
    }

    // --- orientation propagation over the boundary sphere ---
    std::map<long, std::vector<std::pair<long, int>>> edge_faces;  // edge -> (face, traversal dir)
    for (long f : P.cells_by_dim[2]) {
        const auto& cycle = P.cells[f].cycle;
        for (size_t k = 0; k < cycle.size(); ++k) {
            long a = cycle[k], b = cycle[(k + 1) % cycle.size()];
            edge_faces[get_edge(a, b)].push_back({f, a < b ? +1 : -1});
        }
    }
    for (auto& [e, fs] : edge_faces)
        if (fs.size() != 2)
            throw BoundaryCheckFailed("boundary edge not shared by exactly two faces");
    std::map<long, int> fsign;
    std::vector<long> stack{P.cells_by_dim[2].front()};
    fsign[stack.back()] = 1;
    while (!stack.empty()) {
        long f = stack.back();
        stack.pop_back();
        for (auto& [e, d] : P.cells[f].boundary) {
            for (auto& [f2, d2] : edge_faces[e]) {
                if (f2 == f) continue;
                int want = -fsign[f] * d * d2;  // opposite traversal across shared edge
                auto it = fsign.find(f2);
                if (it == fsign.end()) {
                    fsign[f2] = want;
                    stack.push_back(f2);
                } else if (it->second != want) {
                    throw BoundaryCheckFailed("inconsistent face orientations");
                }
            }
        }
    }
    if (fsign.size() != P.cells_by_dim[2].size())
        throw BoundaryCheckFailed("boundary sphere not connected");

    PolyCell top;
    top.dim = 3;
    for (long i = 0; i < static_cast<long>(P.vertices.size()); ++i) top.vertices.push_back(i);
    for (long f : P.cells_by_dim[2]) top.boundary.push_back({f, fsign[f]});
    // boundary-of-boundary must cancel
    std::map<long, Int> dd;
    for (auto& [f, s2] : top.boundary)
        for (auto& [e, s1] : P.cells[f].boundary) dd[e] += s1 * s2;
    for (auto& [e, v] : dd)
        if (v != 0) throw BoundaryCheckFailed("d o d != 0 on the polyhedron");
    P.cells_by_dim[3].push_back(static_cast<long>(P.cells.size()));
    P.cells.push_back(std::move(top));
    return P;
}

}  // namespace

void face_pairings(FundamentalPolyhedron& P) {
    const RingDescriptor& ring = P.ring;

    std::map<VertexKey, long> vlookup;
    for (long i = 0; i < static_cast<long>(P.vertices.size()); ++i) {
        const PolyVertex& pv = P.vertices[i];
        if (pv.at_infinity) continue;
        vlookup[{pv.p.z.u(), pv.p.z.v(), pv.p.t_sq}] = i;
    }
    auto map_vertex = [&](const GroupElement& g, long v) -> long {
        const PolyVertex& pv = P.vertices[v];
        if (pv.at_infinity || pv.p.t_sq == 0) {
            BoundaryPoint in = pv.at_infinity ? BoundaryPoint::infinity()
                                              : BoundaryPoint::finite(pv.p.z);
            BoundaryPoint out = act_boundary(g, in);
            if (out.at_infinity) return P.infinity_vertex;
            auto it = vlookup.find({out.z.u(), out.z.v(), Rat(0)});
            return it == vlookup.end() ? -1 : it->second;
        }
        UhsPoint q = act(g, pv.p);
        auto it = vlookup.find({q.z.u(), q.z.v(), q.t_sq});
        return it == vlookup.end() ? -1 : it->second;
    };

    std::map<std::vector<long>, long> face_by_vertices;
    for (long f : P.cells_by_dim[2]) face_by_vertices[P.cells[f].vertices] = f;

    // image face of f under g, or -1 when some vertex leaves the polyhedron
    auto map_face = [&](const GroupElement& g, long f) -> long {
        std::vector<long> img;
        for (long v : P.cells[f].vertices) {
            long w = map_vertex(g, v);
            if (w < 0) return -1;
            img.push_back(w);
        }
        std::sort(img.begin(), img.end());
        img.erase(std::unique(img.begin(), img.end()), img.end());
        if (img.size() != P.cells[f].vertices.size()) return -1;
        auto it = face_by_vertices.find(img);
        return it == face_by_vertices.end() ? -1 : it->second;
    };

    P.pairings.clear();
    std::set<long> paired;
    auto record = [&](long fa, long fb, const GroupElement& g) {
        P.pairings.push_back({fa, fb, g});
        paired.insert(fa);
        paired.insert(fb);
    };

    // walls: side 3 -> side 1 by z+1, side 0 -> side 2 by z+omega
    std::map<int, long> wall_of_side;
    for (long f : P.cells_by_dim[2])
        if (P.cells[f].wall_side >= 0) wall_of_side[P.cells[f].wall_side] = f;
    QuadInt one{Int(1), Int(0), ring}, omega{Int(0), Int(1), ring};
    GroupElement t1 = GroupElement::translation(one);
    GroupElement tw = GroupElement::translation(omega);
    if (map_face(t1, wall_of_side[3]) != wall_of_side[1] ||
        map_face(tw, wall_of_side[0]) != wall_of_side[2])
        throw UnpairedFace("translation walls do not match");
    record(wall_of_side[3], wall_of_side[1], t1);
    record(wall_of_side[0], wall_of_side[2], tw);

    for (long f : P.cells_by_dim[2]) {
        const PolyCell& face = P.cells[f];
        if (face.wall_side >= 0 || paired.count(f)) continue;
        const Hemisphere& h = P.hemispheres[face.support_hemisphere];

        FaceRec fr{face.support_hemisphere, {}};
        for (long v : face.cycle)
            fr.poly.push_back({P.vertices[v].p.z.u(), P.vertices[v].p.z.v()});

        bool found = false;
        for (const GroupElement& cand : pairing_candidates(ring, P.hemispheres, fr)) {
            long f2 = map_face(cand, f);
            if (f2 >= 0) {
                record(f, f2, cand);
                found = true;
                break;
            }
        }
        if (!found)
            throw UnpairedFace("no pairing for floor face over hemisphere (" + h.lambda.str() +
                               ", " + h.mu.str() + ")");
    }
}

std::vector<BoundaryPoint> cusp_set(const RingDescriptor& ring) {
    std::vector<BoundaryPoint> cusps{BoundaryPoint::infinity()};
    long D = ring.discriminant;
    for (long a = 1; 3 * a * a <= -D; ++a) {
        for (long b = -a + 1; b <= a; ++b) {
            long t = b * b - D;
            if (t % (4 * a) != 0) continue;
            long c = t / (4 * a);
            if (c < a) continue;
            if (a == c && b < 0) continue;
            if (std::gcd(std::gcd(std::abs(a), std::abs(b)), std::abs(c)) != 1) continue;
            if (a == 1) continue;  // principal class is the cusp at infinity
            // root of a x^2 + b x + c in the upper half-plane
            Rat u = make_rat(-b, 2 * a);
            Rat v = ring.half_integral ? Rat(1, 2 * a) : Rat(1, a);
            cusps.push_back(BoundaryPoint::finite(QuadRat::from_uv(ring, u, v)));
        }
    }
    std::sort(cusps.begin() + 1, cusps.end());
    return cusps;
}

namespace {

nlohmann::ordered_json rat_json(const Rat& r) {
    return nlohmann::ordered_json::array({r.get_num().get_str(), r.get_den().get_str()});
}

}  // namespace

std::string polyhedron_to_json(const FundamentalPolyhedron& P) {
    nlohmann::ordered_json j;
    j["m"] = P.ring.m;
    j["norm_bound"] = P.norm_bound;
    j["hemispheres"] = nlohmann::ordered_json::array();
    for (const Hemisphere& h : P.hemispheres)
        j["hemispheres"].push_back({{"lambda", {h.lambda.a.get_str(), h.lambda.b.get_str()}},
                                    {"mu", {h.mu.a.get_str(), h.mu.b.get_str()}}});
    j["vertices"] = nlohmann::ordered_json::array();
    for (const PolyVertex& v : P.vertices) {
        nlohmann::ordered_json jv;
        jv["at_infinity"] = v.at_infinity;
        jv["cusp"] = v.cusp;
        if (!v.at_infinity) {
            jv["u"] = rat_json(v.p.z.u());
            jv["v"] = rat_json(v.p.z.v());
            jv["t_sq"] = rat_json(v.p.t_sq);
        }
        j["vertices"].push_back(jv);
    }
    j["cells"] = nlohmann::ordered_json::array();
    for (const PolyCell& c : P.cells) {
        nlohmann::ordered_json jc;
        jc["dim"] = c.dim;
        jc["vertices"] = c.vertices;
        nlohmann::ordered_json bd = nlohmann::ordered_json::array();
        for (auto& [cell, sign] : c.boundary) bd.push_back({cell, sign});
        jc["boundary"] = bd;
        if (c.support_hemisphere >= 0) jc["hemisphere"] = c.support_hemisphere;
        if (c.wall_side >= 0) jc["wall_side"] = c.wall_side;
        j["cells"].push_back(jc);
    }
    j["pairings"] = nlohmann::ordered_json::array();
    for (const FacePairing& p : P.pairings) {
        nlohmann::ordered_json jp;
        jp["faces"] = {p.face_a, p.face_b};
        jp["matrix"] = {{p.g.a.a.get_str(), p.g.a.b.get_str()},
                        {p.g.b.a.get_str(), p.g.b.b.get_str()},
                        {p.g.c.a.get_str(), p.g.c.b.get_str()},
                        {p.g.d.a.get_str(), p.g.d.b.get_str()}};
        j["pairings"].push_back(jp);
    }
    return j.dump(2);
}

std::string polyhedron_to_obj(const FundamentalPolyhedron& P) {
    std::ostringstream os;
    double sm = std::sqrt(static_cast<double>(P.ring.m));
    std::vector<long> obj_index(P.vertices.size(), -1);
    long next = 1;
    for (size_t i = 0; i < P.vertices.size(); ++i) {
        const PolyVertex& v = P.vertices[i];
        if (v.at_infinity) continue;
        os << "v " << v.p.z.u().get_d() << " " << v.p.z.v().get_d() * sm << " "
           << std::sqrt(v.p.t_sq.get_d()) << "\n";
        obj_index[i] = next++;
    }
    for (long f : P.cells_by_dim[2]) {
        const PolyCell& c = P.cells[f];
        if (c.wall_side >= 0) continue;
        os << "f";
        for (long v : c.cycle) os << " " << obj_index[v];
        os << "\n";
    }
    return os.str();
}

}  // namespace bianchi
