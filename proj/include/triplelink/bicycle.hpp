#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <optional>
#include <tuple>
#include <vector>

#include "triplelink/charfield.hpp"
#include "triplelink/config.hpp"
#include "triplelink/diagram.hpp"
#include "triplelink/errors.hpp"
#include "triplelink/link.hpp"

namespace triplelink {

// Component of the isogonal set {(s,t) : ell(x(s)) = ell(y(t))} in T^2,
// oriented by the preferred-orientation rule, with the shared page angle at
// each vertex.
struct IsogonalCurve {
  std::vector<std::array<double, 2>> vertices;
  std::vector<double> theta;
  double refine_tol = 0;
};

struct BicycleData {
  long long longitudinal = 0;  // ell_i: turns around the binding
  long long meridional = 0;    // m_i: spins within the pages
  double residual_l = 0, residual_m = 0;
};

namespace detail_bike {

inline double page_deriv(const TrigCurve& c, double s) { return detail::page_angle_deriv(c, s); }

// Sorted sample axis with a continuous lift of the page angle; extra samples
// are clustered around the critical parameters so folds of the isogonal set
// stay inside well-resolved cells.
struct AxisTable {
  const TrigCurve* curve = nullptr;
  std::vector<double> v;     // samples, v[0] = 0 .. v[n] = 2pi
  std::vector<double> page;  // wrapped page angle at samples
  std::vector<double> lift;  // continuous lift, lift[n] = lift[0] + 2pi*winding
  long long winding = 0;

  int cells() const { return static_cast<int>(v.size()) - 1; }

  double lift_at(double x, int i) const {
    return lift[i] + angle_diff(page_angle(curve->eval(x)), page[i]);
  }
};

inline AxisTable build_axis(const TrigCurve& curve, int grid, const std::vector<double>& criticals) {
  AxisTable ax;
  ax.curve = &curve;
  std::vector<double> pts;
  pts.reserve(grid + criticals.size() * 10 + 1);
  for (int i = 0; i < grid; ++i) pts.push_back(config::two_pi * i / grid);
  double cell = config::two_pi / grid;
  for (double c : criticals)
    for (double f : {0.5, 0.25, 0.125, 0.0625, 0.03125})
      for (int sgn : {-1, 1}) {
        double x = canon_angle(c + sgn * f * cell);
        pts.push_back(x);
      }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](double a, double b) { return std::abs(a - b) < 1e-12; }),
            pts.end());
  pts.push_back(config::two_pi);

  size_t n = pts.size();
  ax.v = std::move(pts);
  ax.page.resize(n);
  ax.lift.resize(n);
  for (size_t i = 0; i + 1 < n; ++i) ax.page[i] = page_angle(curve.eval(ax.v[i]));
  ax.page[n - 1] = ax.page[0];
  ax.lift[0] = ax.page[0];
  for (size_t i = 1; i < n; ++i)
    ax.lift[i] = ax.lift[i - 1] + angle_diff(ax.page[i], ax.page[i - 1]);
  double turns = (ax.lift[n - 1] - ax.lift[0]) / config::two_pi;
  ax.winding = llround(turns);
  if (std::abs(turns - ax.winding) > 0.01)
    fail(errc::resolution_failure, "trace: page-angle lift failed to close up");
  return ax;
}

struct EdgeRef {
  char type;  // 'H' (varying s, fixed t) or 'V' (fixed s, varying t)
  int i = 0, j = 0;
  long long L = 0;
  bool operator<(const EdgeRef& o) const {
    return std::tie(type, i, j, L) < std::tie(o.type, o.i, o.j, o.L);
  }
  bool operator==(const EdgeRef& o) const {
    return type == o.type && i == o.i && j == o.j && L == o.L;
  }
};

// +1 for f >= 0, -1 for f < 0 (symbolic perturbation of exact zeros)
inline int psgn(double f) { return f < 0 ? -1 : 1; }

struct Tracer {
  const Link3* link;
  AxisTable ax, ay;
  int ns, nt;

  // Corner values always go through the canonical representative so that a
  // boundary corner and its wrapped twin produce bitwise-identical signs.
  double F(int i, int j, long long L) const {
    if (i == ns) {
      i = 0;
      L -= ax.winding;
    }
    if (j == nt) {
      j = 0;
      L += ay.winding;
    }
    return ax.lift[i] - ay.lift[j] - config::two_pi * L;
  }

  EdgeRef canon(EdgeRef e) const {
    if (e.type == 'V' && e.i == ns) {
      e.i = 0;
      e.L -= ax.winding;
    }
    if (e.type == 'H' && e.j == nt) {
      e.j = 0;
      e.L += ay.winding;
    }
    return e;
  }

  // crossing test for a canonical edge
  bool crosses(const EdgeRef& e) const {
    if (e.type == 'H') return psgn(F(e.i, e.j, e.L)) != psgn(F(e.i + 1, e.j, e.L));
    return psgn(F(e.i, e.j, e.L)) != psgn(F(e.i, e.j + 1, e.L));
  }

  // bisection refinement of the crossing point on a canonical edge
  std::array<double, 2> refine(const EdgeRef& e) const {
    if (e.type == 'H') {
      double lo = ax.v[e.i], hi = ax.v[e.i + 1];
      double ref = ay.lift[e.j] + config::two_pi * e.L;
      int slo = psgn(F(e.i, e.j, e.L));
      for (int it = 0; it < 60 && hi - lo > config::trace_refine_tol; ++it) {
        double mid = 0.5 * (lo + hi);
        if (psgn(ax.lift_at(mid, e.i) - ref) == slo)
          lo = mid;
        else
          hi = mid;
      }
      return {canon_angle(0.5 * (lo + hi)), canon_angle(ay.v[e.j])};
    }
    double lo = ay.v[e.j], hi = ay.v[e.j + 1];
    double ref = ax.lift[e.i] - config::two_pi * e.L;
    int slo = psgn(F(e.i, e.j, e.L));
    for (int it = 0; it < 60 && hi - lo > config::trace_refine_tol; ++it) {
      double mid = 0.5 * (lo + hi);
      if (psgn(ref - ay.lift_at(mid, e.j)) == slo)
        lo = mid;
      else
        hi = mid;
    }
    return {canon_angle(ax.v[e.i]), canon_angle(0.5 * (lo + hi))};
  }

  // the four edges of cell (i,j) in canonical form
  std::array<EdgeRef, 4> cell_edges(int i, int j, long long L) const {
    return {canon({'H', i, j, L}), canon({'H', i, j + 1, L}), canon({'V', i, j, L}),
            canon({'V', i + 1, j, L})};
  }

  // exit edge given the entry edge for cell (i,j) at level L
  EdgeRef exit_edge(int i, int j, long long L, const EdgeRef& entry) const {
    std::array<EdgeRef, 4> e = cell_edges(i, j, L);
    bool cr[4];
    int count = 0;
    for (int k = 0; k < 4; ++k) {
      cr[k] = crosses(e[k]);
      if (cr[k]) ++count;
    }
    int entry_k = -1;
    for (int k = 0; k < 4; ++k)
      if (e[k] == entry) entry_k = k;
    if (entry_k < 0 || !cr[entry_k])
      fail(errc::resolution_failure, "trace: walk lost the contour");
    if (count == 2) {
      for (int k = 0; k < 4; ++k)
        if (cr[k] && k != entry_k) return e[k];
      fail(errc::resolution_failure, "trace: degenerate cell");
    }
    if (count != 4) fail(errc::resolution_failure, "trace: odd crossing pattern in a cell");
    // saddle: use the centre value to pair the edges
    double mids = 0.5 * (ax.v[i] + ax.v[i + 1]);
    double midt = 0.5 * (ay.v[j] + ay.v[j + 1]);
    double centre = ax.lift_at(mids, i) - ay.lift_at(midt, j) - config::two_pi * L;
    // pairing: centre sides with F(i,j) => {bottom,right},{left,top};
    // otherwise {bottom,left},{top,right}
    bool with00 = psgn(centre) == psgn(F(i, j, L));
    int partner[4];
    if (with00) {
      partner[0] = 3; partner[3] = 0;  // bottom <-> right
      partner[2] = 1; partner[1] = 2;  // left <-> top
    } else {
      partner[0] = 2; partner[2] = 0;  // bottom <-> left
      partner[1] = 3; partner[3] = 1;  // top <-> right
    }
    return e[partner[entry_k]];
  }

  // neighbouring cell across a canonical edge, given the cell we came from
  std::tuple<int, int, long long> other_cell(const EdgeRef& e, int ci, int cj,
                                             long long cL) const {
    if (e.type == 'H') {
      // incident cells: (i, j) at L  and  (i, j-1) at L  (or wrapped)
      int upper_i = e.i, upper_j = e.j;
      long long upper_L = e.L;
      int lower_i = e.i, lower_j = e.j - 1;
      long long lower_L = e.L;
      if (lower_j < 0) {
        lower_j = nt - 1;
        lower_L = e.L - ay.winding;
      }
      if (ci == upper_i && cj == upper_j && cL == upper_L)
        return {lower_i, lower_j, lower_L};
      return {upper_i, upper_j, upper_L};
    }
    int right_i = e.i, right_j = e.j;
    long long right_L = e.L;
    int left_i = e.i - 1, left_j = e.j;
    long long left_L = e.L;
    if (left_i < 0) {
      left_i = ns - 1;
      left_L = e.L + ax.winding;
    }
    if (ci == right_i && cj == right_j && cL == right_L) return {left_i, left_j, left_L};
    return {right_i, right_j, right_L};
  }
};

} // namespace detail_bike

struct TraceResult {
  std::vector<IsogonalCurve> curves;
  int grid_used = 0;
};

// Contour extraction of the isogonal set by marching squares on the lifted
// page-angle difference, followed by bisection refinement and the
// preferred-orientation rule; curves are closed, embedded and disjoint.
inline TraceResult trace_isogonal(const Link3& link, int grid = config::trace_grid) {
  using namespace detail_bike;
  GenericityReport rep = genericity_check(link);

  for (int G = grid; G <= config::trace_grid_max; G *= 2) {
    std::vector<double> critX, critY;
    for (const auto& c : rep.criticals)
      (c.component == 0 ? critX : critY).push_back(c.param);
    Tracer tr;
    tr.link = &link;
    tr.ax = build_axis(link.X, G, critX);
    tr.ay = build_axis(link.Y, G, critY);
    tr.ns = tr.ax.cells();
    tr.nt = tr.ay.cells();

    try {
      std::map<EdgeRef, char> visited;
      std::vector<IsogonalCurve> curves;
      const long long step_budget =
          40LL * (tr.ns + tr.nt) *
          (std::llabs(tr.ax.winding) + std::llabs(tr.ay.winding) + 2);

      for (int i = 0; i < tr.ns; ++i)
        for (int j = 0; j < tr.nt; ++j) {
          double c00 = tr.ax.lift[i] - tr.ay.lift[j];
          double c10 = tr.ax.lift[i + 1] - tr.ay.lift[j];
          double c01 = tr.ax.lift[i] - tr.ay.lift[j + 1];
          double c11 = tr.ax.lift[i + 1] - tr.ay.lift[j + 1];
          double lo = std::min(std::min(c00, c10), std::min(c01, c11));
          double hi = std::max(std::max(c00, c10), std::max(c01, c11));
          long long Llo = static_cast<long long>(std::ceil(lo / config::two_pi - 1e-9));
          long long Lhi = static_cast<long long>(std::floor(hi / config::two_pi + 1e-9));
          for (long long L = Llo; L <= Lhi; ++L) {
            for (const EdgeRef& e : tr.cell_edges(i, j, L)) {
              if (!tr.crosses(e) || visited.count(e)) continue;
              // walk the contour through this edge, starting into cell (i,j,L)
              IsogonalCurve curve;
              curve.refine_tol = config::trace_refine_tol;
              EdgeRef start = e;
              int ci = i, cj = j;
              long long cL = L;
              EdgeRef entry = start;
              long long steps = 0;
              while (true) {
                if (++steps > step_budget)
                  fail(errc::resolution_failure, "trace: walk exceeded its budget");
                if (visited.count(entry))
                  fail(errc::resolution_failure, "trace: contour collision");
                curve.vertices.push_back(tr.refine(entry));
                visited[entry] = 1;
                EdgeRef exit = tr.exit_edge(ci, cj, cL, entry);
                auto [ni, nj, nL] = tr.other_cell(exit, ci, cj, cL);
                ci = ni;
                cj = nj;
                cL = nL;
                entry = exit;
                if (entry == start) break;
              }
              if (curve.vertices.size() < 3)
                fail(errc::resolution_failure, "trace: contour too short");
              curves.push_back(std::move(curve));
            }
          }
        }

      // orient by the preferred-orientation rule: tangent ~ (theta'_Y(t), theta'_X(s))
      for (IsogonalCurve& c : curves) {
        size_t n = c.vertices.size();
        std::vector<ImVec3> pref(n);
        double maxT = 0;
        size_t best = 0;
        for (size_t k = 0; k < n; ++k) {
          double ts = page_deriv(link.Y, c.vertices[k][1]);
          double tt = page_deriv(link.X, c.vertices[k][0]);
          pref[k] = {ts, tt, 0};
          double m = std::hypot(ts, tt);
          if (m > maxT) {
            maxT = m;
            best = k;
          }
        }
        auto fwd = [&](size_t k) {
          const auto& a = c.vertices[(k + n - 1) % n];
          const auto& b = c.vertices[(k + 1) % n];
          return ImVec3{angle_diff(b[0], a[0]), angle_diff(b[1], a[1]), 0};
        };
        ImVec3 f = fwd(best);
        bool flip = f.x * pref[best].x + f.y * pref[best].y < 0;
        for (size_t k = 0; k < n; ++k) {
          double m = std::hypot(pref[k].x, pref[k].y);
          if (m < 0.05 * maxT) continue;
          ImVec3 g = fwd(k);
          double align = g.x * pref[k].x + g.y * pref[k].y;
          if (flip) align = -align;
          if (align <= 0)
            fail(errc::not_generic,
                 "trace: orientation rule is inconsistent along a traced curve");
        }
        if (flip) std::reverse(c.vertices.begin(), c.vertices.end());
        c.theta.resize(n);
        for (size_t k = 0; k < n; ++k)
          c.theta[k] = page_angle(link.X.eval(c.vertices[k][0]));
      }

      TraceResult out;
      out.curves = std::move(curves);
      out.grid_used = G;
      return out;
    } catch (const error& err) {
      if (err.code() != errc::resolution_failure || G * 2 > config::trace_grid_max) throw;
      // retry at doubled resolution
    }
  }
  fail(errc::resolution_failure, "trace: resolution ladder exhausted");
}

// Longitudinal and meridional degrees of the bicycle over one icycle:
// ell = winding of the page angle, m = winding of arg(m(y) - m(x)).
inline BicycleData bicycle_degrees(const Link3& link, const IsogonalCurve& curve) {
  size_t n = curve.vertices.size();
  if (n < 3) fail(errc::bad_input, "bicycle_degrees: degenerate curve");
  double lacc = 0, macc = 0;
  double prev_theta = 0, prev_arg = 0;
  for (size_t k = 0; k <= n; ++k) {
    size_t idx = k % n;
    double s = curve.vertices[idx][0], t = curve.vertices[idx][1];
    PageCoord px = book_coords(renormalized(link.X.eval(s)));
    PageCoord py = book_coords(renormalized(link.Y.eval(t)));
    double theta = px.theta;
    std::complex<double> diff = py.w - px.w;
    if (std::abs(diff) <= 0)
      fail(errc::not_generic, "bicycle_degrees: coincident meridional coordinates");
    double a = std::arg(diff);
    if (k > 0) {
      lacc += angle_diff(theta, prev_theta);
      macc += angle_diff(a, prev_arg);
    }
    prev_theta = theta;
    prev_arg = a;
  }
  BicycleData d;
  double lt = lacc / config::two_pi, mt = macc / config::two_pi;
  d.longitudinal = llround(lt);
  d.meridional = llround(mt);
  d.residual_l = std::abs(lt - d.longitudinal);
  d.residual_m = std::abs(mt - d.meridional);
  if (d.residual_l > config::winding_snap_tol || d.residual_m > config::winding_snap_tol)
    fail(errc::winding_residual, "bicycle_degrees: winding residual " +
                                     std::to_string(std::max(d.residual_l, d.residual_m)) +
                                     " exceeds 0.05 turns");
  return d;
}

// Pontryagin-link diagram of a generic link: icycles with framing -ell-m and
// vertical winding m.
struct BicycleCensusRow {
  IsogonalCurve curve;
  BicycleData degrees;
  long long framing = 0, vertical_winding = 0;
};

struct BicycleCensus {
  std::vector<BicycleCensusRow> rows;
  int grid_used = 0;
};

inline BicycleCensus bicycle_census(const Link3& link, int grid = config::trace_grid) {
  TraceResult tr = trace_isogonal(link, grid);
  BicycleCensus census;
  census.grid_used = tr.grid_used;
  for (IsogonalCurve& c : tr.curves) {
    BicycleCensusRow row;
    row.degrees = bicycle_degrees(link, c);
    row.framing = -row.degrees.longitudinal - row.degrees.meridional;
    row.vertical_winding = row.degrees.meridional;
    row.curve = std::move(c);
    census.rows.push_back(std::move(row));
  }
  return census;
}

inline ToralDiagram to_diagram(const Link3& link, int grid = config::trace_grid) {
  BicycleCensus census = bicycle_census(link, grid);
  for (int decimate_target = 2048;; decimate_target *= 4) {
    ToralDiagram d;
    for (const auto& row : census.rows) {
      TorusPolyline poly;
      size_t n = row.curve.vertices.size();
      size_t step = std::max<size_t>(1, n / decimate_target);
      for (size_t k = 0; k < n; k += step) poly.vertices.push_back(row.curve.vertices[k]);
      d.components.push_back(make_curve(std::move(poly), row.framing, row.vertical_winding));
    }
    try {
      d.validate();
      return d;
    } catch (const error& e) {
      if (e.code() != errc::invalid_diagram || decimate_target > (1 << 20)) throw;
      // decimation was too aggressive; retry with more vertices
    }
  }
}

// Twist-Lemma root: the unique z = cos a + k sin a on the binding for which
// the vector from x_z to y_z points straight up.  The in-page direction angle
// of that vector is strictly increasing in a, so bisection on its lift.
inline UnitQuat solve_tau(const UnitQuat& x, const UnitQuat& y) {
  double lx = page_angle(x), ly = page_angle(y);
  if (std::abs(angle_diff(lx, ly)) > config::isogonal_tol)
    fail(errc::not_isogonal, "solve_tau: x and y do not share a page");

  auto dir = [&](double a) {
    Quat z{std::cos(a), 0, 0, std::sin(a)};
    ImVec3 xz = h_L_point(x, z), yz = h_L_point(y, z);
    std::complex<double> mx = meridional_r3(xz), my = meridional_r3(yz);
    std::complex<double> d = my - mx;
    if (std::abs(d) <= 0) fail(errc::not_isogonal, "solve_tau: degenerate page vector");
    return std::arg(d);
  };

  // lift over one full turn and locate the bracket containing a multiple of 2pi
  const int samples = 64;
  std::vector<double> lift(samples + 1);
  AngleUnwinder unw;
  for (int i = 0; i <= samples; ++i) lift[i] = unw.feed(dir(config::two_pi * i / samples));
  double target = config::two_pi * std::ceil(lift[0] / config::two_pi - 1e-12);
  if (target < lift[0]) target += config::two_pi;
  int bracket = -1;
  for (int i = 0; i < samples; ++i)
    if (lift[i] <= target && target < lift[i + 1]) {
      bracket = i;
      break;
    }
  if (bracket < 0) fail(errc::no_convergence, "solve_tau: no bracket for the vertical direction");

  double lo = config::two_pi * bracket / samples, hi = config::two_pi * (bracket + 1) / samples;
  double flo = lift[bracket];
  double base = dir(lo);
  double acc = flo;
  for (int it = 0; it < config::tau_max_bisections && hi - lo > 1e-15; ++it) {
    double mid = 0.5 * (lo + hi);
    double fm = acc + angle_diff(dir(mid), base);
    if (fm < target) {
      acc = fm;
      base = dir(mid);
      lo = mid;
    } else {
      hi = mid;
    }
  }
  double root = 0.5 * (lo + hi);
  UnitQuat z = binding_point(root);
  ImVec3 v = h_L_point(y, z) - h_L_point(x, z);
  double vn = norm(v);
  if (std::abs(v.x) > 1e-8 * vn || std::abs(v.y) > 1e-8 * vn || v.z <= 0)
    fail(errc::no_convergence, "solve_tau: bisection did not reach a vertical vector");
  return z;
}

struct NuBicycleReport {
  ResidueClass nu;
  BicycleCensus census;
  NuReport diagram_report;
};

// Geometric pipeline: trace the icycles, decorate them by the bicycle
// degrees, and evaluate the diagram formula.
inline NuBicycleReport nu_via_bicycles(const Link3& link, int grid = config::trace_grid) {
  NuBicycleReport rep;
  rep.census = bicycle_census(link, grid);
  ToralDiagram d;
  {
    // rebuild the diagram from the census (same decimation logic as to_diagram)
    for (int decimate_target = 2048;; decimate_target *= 4) {
      ToralDiagram cand;
      for (const auto& row : rep.census.rows) {
        TorusPolyline poly;
        size_t n = row.curve.vertices.size();
        size_t step = std::max<size_t>(1, n / decimate_target);
        for (size_t k = 0; k < n; k += step) poly.vertices.push_back(row.curve.vertices[k]);
        cand.components.push_back(make_curve(std::move(poly), row.framing, row.vertical_winding));
      }
      try {
        cand.validate();
        d = std::move(cand);
        break;
      } catch (const error& e) {
        if (e.code() != errc::invalid_diagram || decimate_target > (1 << 20)) throw;
      }
    }
  }
  rep.diagram_report = nu(d);
  rep.nu = rep.diagram_report.nu;
  return rep;
}

} // namespace triplelink
