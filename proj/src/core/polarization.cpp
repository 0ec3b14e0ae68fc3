#include "core/polarization.hpp"

#include <algorithm>
#include <cmath>

#include "core/errors.hpp"

namespace hbtsim::polar {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kInvSqrt2 = 0.70710678118654752440;

struct Vec3 {
  double x, y, z;
};

Vec3 to_vec(const StokesPoint& p) { return {p.s1, p.s2, p.s3}; }
double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
Vec3 sub(const Vec3& a, const Vec3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
Vec3 scale(const Vec3& a, double s) { return {a.x * s, a.y * s, a.z * s}; }
double length(const Vec3& a) { return std::sqrt(dot(a, a)); }

/// Unit tangent at `at` of the geodesic towards `to`.
Vec3 geodesic_tangent(const Vec3& at, const Vec3& to) {
  Vec3 t = sub(to, scale(at, dot(to, at)));
  double len = length(t);
  require(len > 1e-12, ErrorCode::bad_argument,
          "geodesic_solid_angle: consecutive vertices parallel or antipodal, geodesic ambiguous");
  return scale(t, 1.0 / len);
}

}  // namespace

JonesVector JonesVector::normalized() const {
  double n = std::sqrt(norm_sq());
  require(n > 0.0, ErrorCode::bad_argument, "cannot normalize a zero Jones vector");
  return {x / n, y / n};
}

bool JonesVector::is_normalized(double tol) const { return std::abs(norm_sq() - 1.0) <= tol; }

bool JonesVector::equals_up_to_phase(const JonesVector& other, double tol) const {
  double overlap = std::norm(inner(*this, other));
  return std::abs(overlap - norm_sq() * other.norm_sq()) <= tol;
}

Complex inner(const JonesVector& a, const JonesVector& b) {
  return std::conj(a.x) * b.x + std::conj(a.y) * b.y;
}

JonesVector JonesMatrix::apply(const JonesVector& v) const {
  return {m[0] * v.x + m[1] * v.y, m[2] * v.x + m[3] * v.y};
}

JonesMatrix JonesMatrix::adjoint() const {
  return {{std::conj(m[0]), std::conj(m[2]), std::conj(m[1]), std::conj(m[3])}};
}

JonesMatrix JonesMatrix::operator*(const JonesMatrix& r) const {
  return {{m[0] * r.m[0] + m[1] * r.m[2], m[0] * r.m[1] + m[1] * r.m[3],
           m[2] * r.m[0] + m[3] * r.m[2], m[2] * r.m[1] + m[3] * r.m[3]}};
}

namespace {
double max_abs_diff(const JonesMatrix& a, const JonesMatrix& b) {
  double worst = 0.0;
  for (int i = 0; i < 4; ++i) worst = std::max(worst, std::abs(a.m[i] - b.m[i]));
  return worst;
}
}  // namespace

bool JonesMatrix::is_hermitian(double tol) const { return max_abs_diff(*this, adjoint()) <= tol; }

bool JonesMatrix::is_unitary(double tol) const {
  JonesMatrix p = adjoint() * (*this);
  JonesMatrix id{{1.0, 0.0, 0.0, 1.0}};
  return max_abs_diff(p, id) <= tol;
}

bool JonesMatrix::is_projector(double tol) const {
  return is_hermitian(tol) && max_abs_diff((*this) * (*this), *this) <= tol;
}

JonesMatrix linear_polarizer(double angle) {
  require(std::isfinite(angle), ErrorCode::bad_argument, "linear_polarizer: angle must be finite");
  const double c = std::cos(angle), s = std::sin(angle);
  return {{Complex(c * c), Complex(c * s), Complex(s * c), Complex(s * s)}};
}

namespace {
/// Retarder with phase delay `delta` between fast and slow axes, fast axis
/// at `axis_angle`, with an overall phase split symmetrically.
JonesMatrix retarder(double delta, double axis_angle) {
  const double c = std::cos(axis_angle), s = std::sin(axis_angle);
  const Complex ef = std::polar(1.0, -delta / 2.0);
  const Complex es = std::polar(1.0, +delta / 2.0);
  return {{ef * c * c + es * s * s, (ef - es) * c * s, (ef - es) * c * s,
           ef * s * s + es * c * c}};
}
}  // namespace

JonesMatrix half_wave_plate(double axis_angle) { return retarder(kPi, axis_angle); }

JonesMatrix quarter_wave_plate(double axis_angle) { return retarder(kPi / 2.0, axis_angle); }

JonesVector circular_state(Handedness h) {
  if (h == Handedness::Right) return {Complex(kInvSqrt2, 0.0), Complex(0.0, kInvSqrt2)};
  return {Complex(kInvSqrt2, 0.0), Complex(0.0, -kInvSqrt2)};
}

JonesVector linear_state(double angle) {
  return {Complex(std::cos(angle), 0.0), Complex(std::sin(angle), 0.0)};
}

Complex project_amplitude(const JonesVector& state, double analyzer_angle) {
  return inner(linear_state(analyzer_angle), state);
}

StokesPoint stokes_of(const JonesVector& state) {
  const Complex c = std::conj(state.x) * state.y;
  return {std::norm(state.x) - std::norm(state.y), 2.0 * c.real(), 2.0 * c.imag()};
}

double pancharatnam_phase(std::span<const JonesVector> cycle) {
  require(cycle.size() >= 3, ErrorCode::bad_argument,
          "pancharatnam_phase: need at least 3 states");
  Complex prod{1.0, 0.0};
  for (size_t i = 0; i < cycle.size(); ++i) {
    const Complex ov = inner(cycle[i], cycle[(i + 1) % cycle.size()]);
    require(std::abs(ov) > kOrthogonalityTol, ErrorCode::bad_argument,
            "pancharatnam_phase: consecutive states orthogonal, phase undefined");
    prod *= ov;
  }
  return std::arg(prod);
}

double geodesic_solid_angle(std::span<const StokesPoint> vertices) {
  const size_t n = vertices.size();
  require(n >= 3, ErrorCode::bad_argument, "geodesic_solid_angle: need at least 3 vertices");
  double turn_sum = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const Vec3 prev = to_vec(vertices[(i + n - 1) % n]);
    const Vec3 here = to_vec(vertices[i]);
    const Vec3 next = to_vec(vertices[(i + 1) % n]);
    // Direction of travel arriving at `here` is minus the tangent back
    // towards `prev`.
    const Vec3 t_in = scale(geodesic_tangent(here, prev), -1.0);
    const Vec3 t_out = geodesic_tangent(here, next);
    turn_sum += std::atan2(dot(cross(t_in, t_out), here), dot(t_in, t_out));
  }
  double area = 2.0 * kPi - turn_sum;  // Gauss-Bonnet, K = 1
  if (area > 2.0 * kPi) area -= 4.0 * kPi;
  if (area <= -2.0 * kPi) area += 4.0 * kPi;
  return area;
}

std::vector<JonesVector> analyzer_cycle(double analyzer3_angle, double analyzer4_angle) {
  return {circular_state(Handedness::Right), linear_state(analyzer3_angle),
          circular_state(Handedness::Left), linear_state(analyzer4_angle)};
}

}  // namespace hbtsim::polar
