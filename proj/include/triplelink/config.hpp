#pragma once

// Central knobs for tolerances and grid defaults.  Everything numeric that a
// pipeline depends on lives here rather than inline at the call site, so that
// the thresholds can be audited (and overridden in the few places that take a
// config argument).

namespace triplelink::config {

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double two_pi = 2.0 * pi;

// quaternion geometry
inline constexpr double unit_norm_tol = 1e-9;       // ||q|| - 1 allowed at UnitQuat construction
inline constexpr double antipode_tol = 1e-12;       // 1 + Re(q) floor for stereographic projection
inline constexpr double degenerate_plane_tol = 1e-12; // |(a,b)+-| floor for the Grassmann projections
inline constexpr double binding_tol = 1e-10;        // |q1 + q2 i| floor for open-book coordinates

// link model
inline constexpr int curve_validate_samples = 4096;
inline constexpr double on_sphere_tol = 1e-8;
inline constexpr double immersion_tol = 1e-8;
inline constexpr int pair_distance_samples = 256;   // per axis, per component pair
inline constexpr double component_separation = 1e-6;
inline constexpr int max_harmonics = 64;            // cap when projecting sampled curves
inline constexpr int gauss_grid = 512;              // default N for the Gauss double integral
inline constexpr double gauss_residual_tol = 0.05;
inline constexpr double pole_clearance = 1e-3;

// spectral pipeline
inline constexpr double reality_tol = 1e-12;
inline constexpr double mean_zero_tol = 1e-12;      // Green's operator input
inline constexpr double exactness_c0_tol = 1e-10;   // alpha_min harmonic-part gate
inline constexpr double closedness_tol = 1e-6;      // alpha_min relative closedness gate
inline constexpr double degree_residual_tol = 0.02;
inline constexpr int mu2_max_grid = 16;             // formula (2) is an N^6 double sum

// open-book / bicycle pipeline
inline constexpr double open_book_tol = 1e-8;       // Z-vs-binding distance
inline constexpr double critical_second_deriv_tol = 1e-6;
inline constexpr double critical_value_gap = 1e-6;
inline constexpr double isogonal_tol = 1e-8;
inline constexpr int trace_grid = 512;
inline constexpr int trace_grid_max = 4096;
inline constexpr double trace_refine_tol = 1e-10;
inline constexpr double winding_snap_tol = 0.05;    // in turns
inline constexpr int tau_max_bisections = 200;

// toral diagrams
inline constexpr double snap_scale = 1073741824.0;  // 2^30 lattice for exact predicates
inline constexpr int basepoint_scan = 128;          // auto-basepoint grid per axis

} // namespace triplelink::config
