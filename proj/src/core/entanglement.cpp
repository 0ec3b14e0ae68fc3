#include "core/entanglement.hpp"

#include <cmath>

#include "core/errors.hpp"

namespace hbtsim::ent {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kInvSqrt2 = 0.70710678118654752440;
}  // namespace

TimeBinQubit TimeBinQubit::normalized() const {
  double n = std::sqrt(norm_sq());
  require(n > 0.0, ErrorCode::bad_argument, "cannot normalize a zero time-bin qubit");
  return {amp_s / n, amp_l / n};
}

TimeBinQubit short_bin() { return {1.0, 0.0}; }
TimeBinQubit long_bin() { return {0.0, 1.0}; }
TimeBinQubit superposition_bin(double phase) {
  return {Complex(kInvSqrt2, 0.0), std::polar(kInvSqrt2, phase)};
}

double TwoPhotonState::norm_sq() const {
  double n = 0.0;
  for (const auto& a : amp) n += std::norm(a);
  return n;
}

TwoPhotonState TwoPhotonState::normalized() const {
  double n = std::sqrt(norm_sq());
  require(n > 0.0, ErrorCode::bad_argument, "cannot normalize a zero two-photon state");
  TwoPhotonState out;
  for (size_t i = 0; i < 4; ++i) out.amp[i] = amp[i] / n;
  return out;
}

double TwoPhotonState::fidelity(const TwoPhotonState& other) const {
  return std::norm(inner(*this, other));
}

Complex inner(const TwoPhotonState& a, const TwoPhotonState& b) {
  Complex s{0.0, 0.0};
  for (size_t i = 0; i < 4; ++i) s += std::conj(a.amp[i]) * b.amp[i];
  return s;
}

TwoPhotonState bell_phi_plus() { return {{Complex(kInvSqrt2), 0.0, 0.0, Complex(kInvSqrt2)}}; }
TwoPhotonState bell_phi_minus() { return {{Complex(kInvSqrt2), 0.0, 0.0, Complex(-kInvSqrt2)}}; }
TwoPhotonState bell_psi_plus() { return {{0.0, Complex(kInvSqrt2), Complex(kInvSqrt2), 0.0}}; }
TwoPhotonState bell_psi_minus() { return {{0.0, Complex(kInvSqrt2), Complex(-kInvSqrt2), 0.0}}; }

TwoPhotonState phi_family(double chi) {
  return {{Complex(kInvSqrt2), 0.0, 0.0, std::polar(kInvSqrt2, chi)}};
}

OutputState output_state(const TimeBinQubit& a, const TimeBinQubit& b, double phase) {
  require(std::abs(a.norm_sq() - 1.0) <= 1e-9 && std::abs(b.norm_sq() - 1.0) <= 1e-9,
          ErrorCode::bad_argument, "output_state: input qubits must be normalized");
  const Complex ph = std::polar(1.0, phase);
  TwoPhotonState raw{{a.amp_s * b.amp_s + ph * b.amp_s * a.amp_s,
                      a.amp_s * b.amp_l + ph * b.amp_s * a.amp_l,
                      a.amp_l * b.amp_s + ph * b.amp_l * a.amp_s,
                      a.amp_l * b.amp_l + ph * b.amp_l * a.amp_l}};
  for (auto& c : raw.amp) c *= kInvSqrt2;
  const double norm = std::sqrt(raw.norm_sq());
  require(norm >= 1e-9, ErrorCode::bad_argument,
          "output_state: superposition cancels (identical inputs with phase pi)");
  TwoPhotonState out;
  for (size_t i = 0; i < 4; ++i) out.amp[i] = raw.amp[i] / norm;
  return {out, norm};
}

TwoPhotonState tunable_bell_state(double phi, double phi1) {
  const double c = std::cos(phi / 2.0), s = std::sin(phi / 2.0);
  const TwoPhotonState phi_part = phi_family(kPi + 2.0 * phi1);
  const TwoPhotonState psi_part = bell_psi_minus();
  const Complex sin_coeff = std::polar(s, (phi + kPi + 2.0 * phi1) / 2.0);
  TwoPhotonState out;
  for (size_t i = 0; i < 4; ++i)
    out.amp[i] = c * phi_part.amp[i] + sin_coeff * psi_part.amp[i];

  // Consistency with the exchange construction on the matching orthogonal
  // superposition inputs: identical |cos|, |sin| weights on the same
  // (Phi(pi+2 phi1), Psi-) pair and nothing elsewhere.
  const OutputState direct =
      output_state(superposition_bin(phi1), superposition_bin(kPi + phi1), phi);
  const BellCoefficients d = bell_decomposition(direct.state);
  const double phi_w = std::abs(inner(phi_part, direct.state));
  const bool ok = std::abs(phi_w - std::abs(c)) <= 1e-10 &&
                  std::abs(std::abs(d.psi_minus) - std::abs(s)) <= 1e-10 &&
                  std::abs(d.psi_plus) <= 1e-10;
  require(ok, ErrorCode::check_failed,
          "tunable_bell_state: weight structure disagrees with the exchange construction");
  return out;
}

BellCoefficients bell_decomposition(const TwoPhotonState& st) {
  return {inner(bell_phi_plus(), st), inner(bell_phi_minus(), st), inner(bell_psi_plus(), st),
          inner(bell_psi_minus(), st)};
}

TwoPhotonState from_bell(const BellCoefficients& c) {
  TwoPhotonState out;
  const TwoPhotonState basis[4] = {bell_phi_plus(), bell_phi_minus(), bell_psi_plus(),
                                   bell_psi_minus()};
  const Complex coeff[4] = {c.phi_plus, c.phi_minus, c.psi_plus, c.psi_minus};
  for (int b = 0; b < 4; ++b)
    for (size_t i = 0; i < 4; ++i) out.amp[i] += coeff[b] * basis[b].amp[i];
  return out;
}

double concurrence(const TwoPhotonState& st) {
  return 2.0 * std::abs(st.amp[0] * st.amp[3] - st.amp[1] * st.amp[2]);
}

double entanglement_entropy(const TwoPhotonState& st) {
  // Reduced density matrix of photon 3: rho = A A^dagger with A the 2x2
  // amplitude matrix (rows = photon 3 basis, columns = photon 4 basis).
  const Complex a = st.amp[0], b = st.amp[1], c = st.amp[2], d = st.amp[3];
  const double r00 = std::norm(a) + std::norm(b);
  const double r11 = std::norm(c) + std::norm(d);
  const Complex r01 = a * std::conj(c) + b * std::conj(d);
  const double tr = r00 + r11;
  const double det = r00 * r11 - std::norm(r01);
  double disc = tr * tr - 4.0 * det;
  if (disc < 0.0) disc = 0.0;
  const double root = std::sqrt(disc);
  const double lam1 = 0.5 * (tr + root);
  const double lam2 = 0.5 * (tr - root);
  auto term = [](double lam) { return lam > 1e-15 ? -lam * std::log2(lam) : 0.0; };
  return term(lam1) + term(lam2);
}

EntropyScanRow entropy_scan_point(ScanFamily family, double phi, double phi1) {
  TwoPhotonState st;
  if (family == ScanFamily::Orthogonal) {
    st = output_state(short_bin(), long_bin(), phi).state;
  } else {
    st = tunable_bell_state(phi, phi1);
  }
  return {phi, phi1, concurrence(st), entanglement_entropy(st), bell_decomposition(st)};
}

}  // namespace hbtsim::ent
