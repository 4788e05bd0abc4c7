#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "triplelink/config.hpp"
#include "triplelink/errors.hpp"
#include "triplelink/quat.hpp"
#include "triplelink/words.hpp"

namespace triplelink {

// Crossing-free toral diagrams of framed links in T^3: closed framed curves in
// T^2 plus signed marked points.  All incidence decisions go through exact
// integer predicates on coordinates snapped to a 2^-30 lattice.

namespace lattice {

using i64 = std::int64_t;
using i128 = __int128;

inline i64 period() {
  static const i64 S = llround(config::two_pi * config::snap_scale);
  return S;
}

inline i64 snap(double a) {
  i64 S = period();
  i64 v = llround(canon_angle(a) * config::snap_scale);
  if (v >= S) v -= S;
  if (v < 0) v += S;
  return v;
}

inline double unsnap(i64 v) { return v / config::snap_scale; }

// wrapped difference in (-S/2, S/2]
inline i64 wrap_delta(i64 d) {
  i64 S = period();
  d %= S;
  if (d <= -S / 2) d += S;
  if (d > S / 2) d -= S;
  return d;
}

struct Pt {
  i64 x = 0, y = 0;
};

struct Seg {
  Pt a;          // start, in [0,S)^2
  i64 dx, dy;    // lifted delta, |dx|,|dy| < S/2
};

inline int sgn(i128 v) { return v > 0 ? 1 : (v < 0 ? -1 : 0); }
inline i128 cross2(i64 ax, i64 ay, i64 bx, i64 by) {
  return static_cast<i128>(ax) * by - static_cast<i128>(ay) * bx;
}

enum class Hit { none, proper, touch };

// Proper/degenerate intersection of two lifted segments, with the second
// translated by (tx, ty).  Returns the crossing sign det(D, E) for proper hits.
inline Hit seg_intersect(const Seg& s1, const Seg& s2, i64 tx, i64 ty, int* sign_out) {
  i64 qx = s2.a.x + tx, qy = s2.a.y + ty;
  i128 d1 = cross2(s1.dx, s1.dy, qx - s1.a.x, qy - s1.a.y);
  i128 d2 = cross2(s1.dx, s1.dy, qx + s2.dx - s1.a.x, qy + s2.dy - s1.a.y);
  i128 d3 = cross2(s2.dx, s2.dy, s1.a.x - qx, s1.a.y - qy);
  i128 d4 = cross2(s2.dx, s2.dy, s1.a.x + s1.dx - qx, s1.a.y + s1.dy - qy);
  int s1a = sgn(d1), s1b = sgn(d2), s2a = sgn(d3), s2b = sgn(d4);
  if (s1a * s1b < 0 && s2a * s2b < 0) {
    if (sign_out) *sign_out = sgn(cross2(s1.dx, s1.dy, s2.dx, s2.dy));
    return Hit::proper;
  }
  // collinear or endpoint contact within the other's bounding span
  auto on_span = [](i64 ax, i64 ay, i64 dx, i64 dy, i64 px, i64 py) {
    if (cross2(dx, dy, px - ax, py - ay) != 0) return false;
    i128 t = static_cast<i128>(px - ax) * dx + static_cast<i128>(py - ay) * dy;
    i128 len2 = static_cast<i128>(dx) * dx + static_cast<i128>(dy) * dy;
    return t >= 0 && t <= len2;
  };
  if ((s1a == 0 && on_span(s1.a.x, s1.a.y, s1.dx, s1.dy, qx, qy)) ||
      (s1b == 0 && on_span(s1.a.x, s1.a.y, s1.dx, s1.dy, qx + s2.dx, qy + s2.dy)) ||
      (s2a == 0 && on_span(qx, qy, s2.dx, s2.dy, s1.a.x, s1.a.y)) ||
      (s2b == 0 && on_span(qx, qy, s2.dx, s2.dy, s1.a.x + s1.dx, s1.a.y + s1.dy)))
    return Hit::touch;
  return Hit::none;
}

inline Hit seg_intersect_torus(const Seg& s1, const Seg& s2, int* sign_out) {
  i64 S = period();
  for (int tx = -1; tx <= 1; ++tx)
    for (int ty = -1; ty <= 1; ++ty) {
      Hit h = seg_intersect(s1, s2, tx * S, ty * S, sign_out);
      if (h != Hit::none) return h;
    }
  return Hit::none;
}

// squared torus distance between a point and a segment (double arithmetic;
// used for clearance reports and basepoint selection only)
inline double point_seg_dist(double px, double py, const Seg& s) {
  double ax = unsnap(s.a.x), ay = unsnap(s.a.y);
  double dx = s.dx / config::snap_scale, dy = s.dy / config::snap_scale;
  double best = 1e300;
  for (int tx = -1; tx <= 1; ++tx)
    for (int ty = -1; ty <= 1; ++ty) {
      double qx = px + tx * config::two_pi - ax, qy = py + ty * config::two_pi - ay;
      double len2 = dx * dx + dy * dy;
      double t = len2 > 0 ? std::clamp((qx * dx + qy * dy) / len2, 0.0, 1.0) : 0.0;
      double ex = qx - t * dx, ey = qy - t * dy;
      best = std::min(best, ex * ex + ey * ey);
    }
  return std::sqrt(best);
}

} // namespace lattice

// Closed oriented polyline in [0,2pi)^2; consecutive deltas shorter than pi
// per axis so the wraparound is unambiguous.
struct TorusPolyline {
  std::vector<std::array<double, 2>> vertices;

  std::vector<lattice::Seg> segments() const {
    using namespace lattice;
    std::vector<Seg> out;
    size_t n = vertices.size();
    out.reserve(n);
    for (size_t i = 0; i < n; ++i) {
      Pt a{snap(vertices[i][0]), snap(vertices[i][1])};
      Pt b{snap(vertices[(i + 1) % n][0]), snap(vertices[(i + 1) % n][1])};
      i64 dx = wrap_delta(b.x - a.x), dy = wrap_delta(b.y - a.y);
      if (dx == 0 && dy == 0) continue;  // drop snapped-degenerate steps
      out.push_back({a, dx, dy});
    }
    return out;
  }

  // homology class (s-winding, t-winding); exact on the lattice
  std::array<long long, 2> homology() const {
    using namespace lattice;
    i64 sx = 0, sy = 0;
    for (const Seg& s : segments()) {
      sx += s.dx;
      sy += s.dy;
    }
    i64 S = period();
    if (sx % S != 0 || sy % S != 0)
      fail(errc::invalid_diagram, "TorusPolyline: deltas do not close up");
    return {sx / S, sy / S};
  }

  void validate() const {
    using namespace lattice;
    auto segs = segments();
    if (segs.size() < 3) fail(errc::invalid_diagram, "TorusPolyline: too few distinct vertices");
    i64 S = period();
    for (const Seg& s : segs)
      if (std::llabs(s.dx) >= S / 2 || std::llabs(s.dy) >= S / 2)
        fail(errc::invalid_diagram, "TorusPolyline: segment spans half the torus in one axis");
    size_t n = segs.size();
    for (size_t i = 0; i < n; ++i)
      for (size_t j = i + 1; j < n; ++j) {
        bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
        if (adjacent) continue;
        if (seg_intersect_torus(segs[i], segs[j], nullptr) != Hit::none)
          fail(errc::invalid_diagram, "TorusPolyline: self-intersection");
      }
  }
};

struct DiagramComponent {
  bool isolated = false;
  TorusPolyline curve;              // when !isolated
  std::array<double, 2> at{0, 0};   // when isolated
  int point_sign = +1;              // when isolated
  long long framing = 0;            // n_i
  long long vertical_winding = 0;   // r_i (equals point_sign for isolated points)
};

inline DiagramComponent make_curve(TorusPolyline poly, long long framing, long long winding) {
  DiagramComponent c;
  c.isolated = false;
  c.curve = std::move(poly);
  c.framing = framing;
  c.vertical_winding = winding;
  return c;
}

inline DiagramComponent make_point(double s, double t, int sign, long long framing) {
  DiagramComponent c;
  c.isolated = true;
  c.at = {s, t};
  c.point_sign = sign;
  c.framing = framing;
  c.vertical_winding = sign;
  return c;
}

struct ToralDiagram {
  std::vector<DiagramComponent> components;

  void validate() const {
    std::vector<std::vector<lattice::Seg>> segs;
    for (const auto& c : components) {
      if (c.isolated) {
        if (c.point_sign != 1 && c.point_sign != -1)
          fail(errc::invalid_diagram, "isolated point must have sign +-1");
        if (c.vertical_winding != c.point_sign)
          fail(errc::invalid_diagram, "isolated point winding must equal its sign");
        continue;
      }
      c.curve.validate();
      segs.push_back(c.curve.segments());
    }
    for (size_t a = 0; a < segs.size(); ++a)
      for (size_t b = a + 1; b < segs.size(); ++b)
        for (const auto& s1 : segs[a])
          for (const auto& s2 : segs[b])
            if (lattice::seg_intersect_torus(s1, s2, nullptr) != lattice::Hit::none)
              fail(errc::invalid_diagram, "ToralDiagram: curves are not pairwise disjoint");
  }

  double min_curve_distance() const {
    double best = 1e300;
    std::vector<std::vector<lattice::Seg>> segs;
    for (const auto& c : components)
      if (!c.isolated) segs.push_back(c.curve.segments());
    for (size_t a = 0; a < segs.size(); ++a)
      for (size_t b = a + 1; b < segs.size(); ++b)
        for (const auto& s1 : segs[a]) {
          double px = lattice::unsnap(s1.a.x), py = lattice::unsnap(s1.a.y);
          for (const auto& s2 : segs[b]) best = std::min(best, lattice::point_seg_dist(px, py, s2));
        }
    return segs.size() > 1 ? best : 1e300;
  }
};

struct WindingNumbers {
  long long p = 0, q = 0, r = 0;
};

// p, q: summed homology classes of the diagram curves; r: total vertical
// winding (marked-point signs included).
inline WindingNumbers winding_numbers(const ToralDiagram& d) {
  WindingNumbers w;
  for (const auto& c : d.components) {
    if (!c.isolated) {
      auto h = c.curve.homology();
      w.p += h[0];
      w.q += h[1];
    }
    w.r += c.vertical_winding;
  }
  return w;
}

namespace detail_diagram {

using namespace lattice;

// Splits a long leg into lattice sub-segments each shorter than pi/2 per axis.
inline void append_leg(std::vector<Seg>& out, Pt from, i64 dx, i64 dy) {
  i64 S = period();
  i64 span = std::max(std::llabs(dx), std::llabs(dy));
  int pieces = static_cast<int>(span / (S / 5)) + 1;
  Pt cur = from;
  i64 wx = 0, wy = 0;
  for (int i = 1; i <= pieces; ++i) {
    i64 nx = from.x + dx * i / pieces, ny = from.y + dy * i / pieces;
    Seg s{cur, nx - cur.x, ny - cur.y};
    // normalize the stored start into [0,S)
    s.a.x = ((s.a.x % S) + S) % S;
    s.a.y = ((s.a.y % S) + S) % S;
    if (s.dx != 0 || s.dy != 0) out.push_back(s);
    cur = {nx, ny};
    (void)wx;
    (void)wy;
  }
}

struct CountResult {
  long long signed_crossings = 0;
  bool generic = true;
};

inline CountResult count_crossings(const std::vector<Seg>& path,
                                   const std::vector<std::vector<Seg>>& curves,
                                   const std::vector<Pt>& marked) {
  CountResult res;
  for (const Seg& ps : path) {
    for (const auto& curve : curves)
      for (const Seg& cs : curve) {
        int sign = 0;
        Hit h = seg_intersect_torus(ps, cs, &sign);
        if (h == Hit::touch) {
          res.generic = false;
          return res;
        }
        if (h == Hit::proper) res.signed_crossings += sign;
      }
    // a path through a marked point is non-generic
    for (const Pt& m : marked) {
      i64 S = period();
      for (int tx = -1; tx <= 1; ++tx)
        for (int ty = -1; ty <= 1; ++ty) {
          i64 px = m.x + tx * S, py = m.y + ty * S;
          if (cross2(ps.dx, ps.dy, px - ps.a.x, py - ps.a.y) == 0) {
            i128 t = static_cast<i128>(px - ps.a.x) * ps.dx + static_cast<i128>(py - ps.a.y) * ps.dy;
            i128 len2 = static_cast<i128>(ps.dx) * ps.dx + static_cast<i128>(ps.dy) * ps.dy;
            if (t >= 0 && t <= len2) {
              res.generic = false;
              return res;
            }
          }
        }
    }
  }
  return res;
}

} // namespace detail_diagram

// Depth of component i along an explicit generic path.  The path runs from a
// point on the component (its first vertex) to the basepoint (its last); the
// result is twice the signed crossing count with the diagram curves, with the
// initial half-crossing for curve components.
inline long long depth(const ToralDiagram& d, size_t index,
                       const std::vector<std::array<double, 2>>& path) {
  using namespace lattice;
  using namespace detail_diagram;
  if (index >= d.components.size()) fail(errc::bad_input, "depth: no such component");
  if (path.size() < 2) fail(errc::bad_input, "depth: path needs at least two vertices");
  const DiagramComponent& comp = d.components[index];

  std::vector<std::vector<Seg>> curves;
  for (const auto& c : d.components)
    if (!c.isolated) curves.push_back(c.curve.segments());
  std::vector<Pt> marked;
  for (const auto& c : d.components)
    if (c.isolated) marked.push_back({snap(c.at[0]), snap(c.at[1])});

  // build the lifted path
  std::vector<Seg> psegs;
  Pt start{snap(path[0][0]), snap(path[0][1])};
  Pt cur = start;
  for (size_t i = 1; i < path.size(); ++i) {
    Pt nxt{snap(path[i][0]), snap(path[i][1])};
    i64 dx = wrap_delta(nxt.x - cur.x), dy = wrap_delta(nxt.y - cur.y);
    append_leg(psegs, cur, dx, dy);
    cur = nxt;
  }
  if (psegs.empty()) fail(errc::bad_input, "depth: empty path");

  int half = 0;
  if (!comp.isolated) {
    // locate the curve segment carrying the start point and take the
    // half-crossing with it; the first path piece is clipped so the exact
    // predicates never see the on-curve start.
    auto segs = comp.curve.segments();
    double px = path[0][0], py = path[0][1];
    double best = 1e300;
    size_t bi = 0;
    for (size_t i = 0; i < segs.size(); ++i) {
      double dd = point_seg_dist(px, py, segs[i]);
      if (dd < best) {
        best = dd;
        bi = i;
      }
    }
    if (best > 1e-6) fail(errc::bad_input, "depth: path must start on the component");
    int s = sgn(cross2(psegs.front().dx, psegs.front().dy, segs[bi].dx, segs[bi].dy));
    if (s == 0) fail(errc::non_generic_path, "depth: path leaves parallel to the curve");
    half = s;
    // clip a short stub off the path start
    Seg& first = psegs.front();
    i64 S = period();
    i64 stub = std::max<i64>(64, std::max(std::llabs(first.dx), std::llabs(first.dy)) / 4096);
    double len = std::hypot(double(first.dx), double(first.dy));
    i64 ox = llround(first.dx / len * stub), oy = llround(first.dy / len * stub);
    first.a.x = ((first.a.x + ox) % S + S) % S;
    first.a.y = ((first.a.y + oy) % S + S) % S;
    first.dx -= ox;
    first.dy -= oy;
  }

  auto res = detail_diagram::count_crossings(psegs, curves, marked);
  if (!res.generic)
    fail(errc::non_generic_path, "depth: path passes through a vertex, tangency or marked point");
  return half + 2 * res.signed_crossings;
}

struct NuReport {
  ResidueClass nu;
  WindingNumbers winding;
  long long total_framing = 0;
  std::vector<long long> depths;           // per component
  std::array<double, 2> basepoint{0, 0};
};

namespace detail_diagram {

inline std::array<double, 2> auto_basepoint(const ToralDiagram& d) {
  using namespace lattice;
  std::vector<Seg> all;
  std::vector<std::array<double, 2>> pts;
  for (const auto& c : d.components) {
    if (c.isolated)
      pts.push_back(c.at);
    else {
      auto s = c.curve.segments();
      all.insert(all.end(), s.begin(), s.end());
    }
  }
  int G = config::basepoint_scan;
  double best = -1;
  std::array<double, 2> bp{0, 0};
  for (int i = 0; i < G; ++i)
    for (int j = 0; j < G; ++j) {
      double x = config::two_pi * (i + 0.5) / G, y = config::two_pi * (j + 0.5) / G;
      double mind = 1e300;
      for (const Seg& s : all) mind = std::min(mind, point_seg_dist(x, y, s));
      for (const auto& p : pts) {
        double dx = angle_diff(x, p[0]), dy = angle_diff(y, p[1]);
        mind = std::min(mind, std::hypot(dx, dy));
      }
      if (mind > best + 1e-15) {
        best = mind;
        bp = {x, y};
      }
    }
  return bp;
}

} // namespace detail_diagram

// Absolute Pontryagin invariant from a crossing-free toral diagram:
//   nu = n + p q + sum_i d_i r_i  mod 2 gcd(p, q, r),
// with auto-chosen basepoint and rectilinear L-shaped paths (s-leg then
// t-leg).  The residue does not depend on those choices.
inline NuReport nu(const ToralDiagram& d, std::optional<std::array<double, 2>> basepoint = {}) {
  d.validate();
  NuReport rep;
  rep.winding = winding_numbers(d);
  for (const auto& c : d.components) rep.total_framing += c.framing;
  long long modulus = 2 * gcd3(rep.winding.p, rep.winding.q, rep.winding.r);

  std::array<double, 2> bp = basepoint ? *basepoint : detail_diagram::auto_basepoint(d);
  rep.basepoint = bp;

  long long acc = 0;
  for (size_t i = 0; i < d.components.size(); ++i) {
    const auto& comp = d.components[i];
    long long di = 0;
    bool ok = false;
    // deterministic retry ladder: start choice x basepoint jitter
    for (int attempt = 0; attempt < 24 && !ok; ++attempt) {
      int start_choice = attempt % 6, jitter = attempt / 6;
      std::array<double, 2> b = bp;
      b[0] = canon_angle(b[0] + jitter * 17.0 / config::snap_scale);
      b[1] = canon_angle(b[1] + jitter * 31.0 / config::snap_scale);
      std::array<double, 2> start;
      if (comp.isolated) {
        start = comp.at;
      } else {
        const auto& vs = comp.curve.vertices;
        size_t k = (start_choice * vs.size()) / 6;
        size_t k2 = (k + 1) % vs.size();
        double mx = vs[k][0] + 0.5 * angle_diff(vs[k2][0], vs[k][0]);
        double my = vs[k][1] + 0.5 * angle_diff(vs[k2][1], vs[k][1]);
        start = {canon_angle(mx), canon_angle(my)};
      }
      std::array<double, 2> corner{b[0], start[1]};
      try {
        di = depth(d, i, {start, corner, b});
        ok = true;
      } catch (const error& e) {
        if (e.code() != errc::non_generic_path) throw;
      }
    }
    if (!ok) fail(errc::non_generic_path, "nu: could not find a generic path to the basepoint");
    rep.depths.push_back(di);
    acc += di * comp.vertical_winding;
  }
  rep.nu = ResidueClass(rep.total_framing + rep.winding.p * rep.winding.q + acc, modulus);
  return rep;
}

// Trades an isolated marked point for a small null-homotopic circle carrying
// one internal marked point; nu is unchanged.  direction = +1 gives the
// counterclockwise circle (framing n - sign), -1 the clockwise one (n + sign).
inline ToralDiagram convert_isolated(const ToralDiagram& d, size_t index, int direction) {
  if (index >= d.components.size()) fail(errc::bad_input, "convert_isolated: no such component");
  const auto& comp = d.components[index];
  if (!comp.isolated) fail(errc::not_isolated, "convert_isolated: component is not a point");
  if (direction != 1 && direction != -1)
    fail(errc::bad_input, "convert_isolated: direction must be +-1");

  // clearance-limited radius
  double clearance = 1e300;
  for (size_t j = 0; j < d.components.size(); ++j) {
    if (j == index) continue;
    const auto& o = d.components[j];
    if (o.isolated) {
      clearance = std::min(clearance, std::hypot(angle_diff(comp.at[0], o.at[0]),
                                                 angle_diff(comp.at[1], o.at[1])));
    } else {
      for (const auto& s : o.curve.segments())
        clearance = std::min(clearance, lattice::point_seg_dist(comp.at[0], comp.at[1], s));
    }
  }
  double rad = std::min(0.05, clearance / 4.0);
  if (rad < 16.0 / config::snap_scale)
    fail(errc::invalid_diagram, "convert_isolated: no room for the replacement circle");

  TorusPolyline poly;
  const int V = 16;
  for (int k = 0; k < V; ++k) {
    double ang = config::two_pi * k / V * direction;
    poly.vertices.push_back(
        {canon_angle(comp.at[0] + rad * std::cos(ang)), canon_angle(comp.at[1] + rad * std::sin(ang))});
  }
  ToralDiagram out = d;
  out.components[index] =
      make_curve(poly, comp.framing - comp.point_sign * direction, comp.point_sign);
  out.validate();
  return out;
}

// Inverse of convert_isolated for a small null-homotopic circle with one unit
// of vertical winding.
inline ToralDiagram deconvert_isolated(const ToralDiagram& d, size_t index) {
  if (index >= d.components.size()) fail(errc::bad_input, "deconvert_isolated: no such component");
  const auto& comp = d.components[index];
  if (comp.isolated) fail(errc::bad_input, "deconvert_isolated: component is already a point");
  auto h = comp.curve.homology();
  if (h[0] != 0 || h[1] != 0 || std::llabs(comp.vertical_winding) != 1)
    fail(errc::bad_input, "deconvert_isolated: needs a null-homotopic unit-winding circle");
  // signed area sign gives the orientation
  using namespace lattice;
  auto segs = comp.curve.segments();
  i128 area2 = 0;
  i64 cx = segs[0].a.x, cy = segs[0].a.y;  // lift relative to the first vertex
  i64 px = 0, py = 0;
  for (const Seg& s : segs) {
    area2 += cross2(px, py, px + s.dx, py + s.dy);
    px += s.dx;
    py += s.dy;
  }
  int direction = area2 > 0 ? +1 : -1;
  int sign = static_cast<int>(comp.vertical_winding);
  // centroid via the lift
  double lx = unsnap(cx), ly = unsnap(cy), sx = 0, sy = 0, ax = lx, ay = ly;
  size_t n = segs.size();
  for (const Seg& s : segs) {
    sx += ax;
    sy += ay;
    ax += s.dx / config::snap_scale;
    ay += s.dy / config::snap_scale;
  }
  ToralDiagram out = d;
  out.components[index] = make_point(canon_angle(sx / n), canon_angle(sy / n), sign,
                                     comp.framing + sign * direction);
  return out;
}

} // namespace triplelink
