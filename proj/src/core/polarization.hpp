#pragma once

#include <complex>
#include <span>
#include <vector>

namespace hbtsim::polar {

using Complex = std::complex<double>;

// Conventions used throughout (this is the single place they are fixed):
//   * Jones basis is (x, y) linear components.
//   * Right circular R = (1, i)/sqrt(2), left circular L = (1, -i)/sqrt(2).
//   * Poincare map: s1 = |ax|^2-|ay|^2, s2 = 2 Re(ax* ay), s3 = 2 Im(ax* ay),
//     so R sits at the north pole (0,0,1) and a linear state at physical
//     angle a sits on the equator at azimuth 2a.
//   * pancharatnam_phase is arg of the ordered product of consecutive
//     inner products <psi_i|psi_{i+1}> around the cycle.
//   * geodesic_solid_angle is positive for vertex order with positive
//     triple product (the octant x->y->z comes out +pi/2).
// Under these choices the analyzer cycle R -> lin(a3) -> L -> lin(a4) -> R
// with phi34 = a3 - a4 has pancharatnam_phase = -2*phi34 (wrapped) and
// signed solid angle -4*phi34, i.e. twice the connection phase equals the
// signed solid angle. The coincidence fringe argument uses +2*phi34; see
// interferometer.hpp.

struct JonesVector {
  Complex x{0.0, 0.0};
  Complex y{0.0, 0.0};

  double norm_sq() const { return std::norm(x) + std::norm(y); }
  JonesVector normalized() const;
  bool is_normalized(double tol = 1e-12) const;
  /// Global phase is unphysical; compares |<a|b>|^2 against 1.
  bool equals_up_to_phase(const JonesVector& other, double tol = 1e-9) const;
};

/// <a|b> with the conjugate on the left argument.
Complex inner(const JonesVector& a, const JonesVector& b);

struct JonesMatrix {
  // Row-major 2x2: m[0] m[1] / m[2] m[3].
  Complex m[4]{};

  JonesVector apply(const JonesVector& v) const;
  JonesMatrix adjoint() const;
  JonesMatrix operator*(const JonesMatrix& rhs) const;
  bool is_hermitian(double tol = 1e-12) const;
  bool is_unitary(double tol = 1e-12) const;
  bool is_projector(double tol = 1e-12) const;
};

struct StokesPoint {
  double s1{0.0};
  double s2{0.0};
  double s3{0.0};
};

enum class Handedness { Right, Left };

/// Projector onto linear polarization at `angle` from the x axis.
JonesMatrix linear_polarizer(double angle);

/// Half-wave plate with fast axis at `axis_angle`.
JonesMatrix half_wave_plate(double axis_angle);

/// Quarter-wave plate with fast axis at `axis_angle`.
JonesMatrix quarter_wave_plate(double axis_angle);

JonesVector circular_state(Handedness h);

JonesVector linear_state(double angle);

/// Amplitude passed by a linear analyzer at `analyzer_angle`:
/// <lin(analyzer_angle)|state>. For R this is e^{+i a}/sqrt(2), for L
/// e^{-i a}/sqrt(2).
Complex project_amplitude(const JonesVector& state, double analyzer_angle);

StokesPoint stokes_of(const JonesVector& state);

/// Tolerance below which consecutive states count as orthogonal and the
/// Pancharatnam connection is undefined.
inline constexpr double kOrthogonalityTol = 1e-9;

/// Geometric phase of a closed cycle of states, in (-pi, pi].
/// Throws Error(bad_argument) if fewer than 3 states or if consecutive
/// states are orthogonal within kOrthogonalityTol.
double pancharatnam_phase(std::span<const JonesVector> cycle);

/// Signed solid angle of the geodesic polygon through `vertices`, in
/// (-2*pi, 2*pi]. Computed from the Gauss-Bonnet turning-angle sum, so
/// vertices lying on the geodesic through their neighbours contribute a
/// zero turn. Throws Error(bad_argument) for <3 vertices or consecutive
/// (anti)parallel vertices where the geodesic is ambiguous.
double geodesic_solid_angle(std::span<const StokesPoint> vertices);

/// The Fig.-2-style analyzer cycle R -> lin(a3) -> L -> lin(a4) -> R.
std::vector<JonesVector> analyzer_cycle(double analyzer3_angle, double analyzer4_angle);

}  // namespace hbtsim::polar
