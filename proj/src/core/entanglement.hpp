#pragma once

#include <array>
#include <complex>

namespace hbtsim::ent {

using Complex = std::complex<double>;

/// Time-bin qubit over the {|s>, |l>} (short/long path) basis.
struct TimeBinQubit {
  Complex amp_s{1.0, 0.0};
  Complex amp_l{0.0, 0.0};

  double norm_sq() const { return std::norm(amp_s) + std::norm(amp_l); }
  TimeBinQubit normalized() const;
};

TimeBinQubit short_bin();
TimeBinQubit long_bin();
/// (|s> + e^{i phase}|l>)/sqrt(2).
TimeBinQubit superposition_bin(double phase);

/// Two-photon state over the ordered basis {ss, sl, ls, ll} (first slot is
/// the photon heading to detector 3, second to detector 4).
struct TwoPhotonState {
  std::array<Complex, 4> amp{};  // ss, sl, ls, ll

  double norm_sq() const;
  TwoPhotonState normalized() const;
  /// |<a|b>|^2; equality up to global phase is fidelity ~ 1.
  double fidelity(const TwoPhotonState& other) const;
};

Complex inner(const TwoPhotonState& a, const TwoPhotonState& b);

TwoPhotonState bell_phi_plus();
TwoPhotonState bell_phi_minus();
TwoPhotonState bell_psi_plus();
TwoPhotonState bell_psi_minus();
/// (|ss> + e^{i chi}|ll>)/sqrt(2), the one-parameter Phi family.
TwoPhotonState phi_family(double chi);

struct OutputState {
  TwoPhotonState state;
  /// Norm of the unnormalized superposition; 1 exactly when the two input
  /// qubits are orthogonal, smaller/larger otherwise.
  double norm_factor;
};

/// Two-photon output of the exchange interferometer:
/// (|a>_3|b>_4 + e^{i phase}|b>_3|a>_4)/sqrt(2), renormalized.
/// `phase` is the tunable geometric (plus propagation) phase of the
/// exchange amplitude. Throws Error(bad_argument) when the superposition
/// destructively cancels (identical inputs at phase = pi).
OutputState output_state(const TimeBinQubit& a, const TimeBinQubit& b, double phase);

/// The tunable Phi/Psi-minus superposition family
///   cos(phi/2) |Phi(pi + 2 phi1)> + e^{i(phi + pi + 2 phi1)/2} sin(phi/2) |Psi->.
/// Its Bell-coefficient magnitudes (and the zero Psi+ component) coincide
/// with output_state on the superposition inputs (|s> + e^{i phi1}|l>)/sqrt2
/// and (|s> + e^{i(pi+phi1)}|l>)/sqrt2 for every (phi, phi1); that magnitude
/// structure is verified internally on every call. Unlike the exchange
/// output (which stays maximally entangled for those orthogonal inputs),
/// the relative Phi/Psi- phase here is fixed so the family sweeps through
/// partially entangled states as phi varies.
TwoPhotonState tunable_bell_state(double phi, double phi1);

struct BellCoefficients {
  Complex phi_plus, phi_minus, psi_plus, psi_minus;
};

/// Coefficients on {Phi+, Phi-, Psi+, Psi-}; unitary change of basis.
BellCoefficients bell_decomposition(const TwoPhotonState& state);
TwoPhotonState from_bell(const BellCoefficients& c);

/// 2|a_ss a_ll - a_sl a_ls|, in [0,1] for normalized pure states.
double concurrence(const TwoPhotonState& state);

/// Von Neumann entropy (bits) of the reduced state of photon 3, from the
/// eigenvalues of the traced-out 2x2 density matrix.
double entanglement_entropy(const TwoPhotonState& state);

struct EntropyScanRow {
  double phi;
  double phi1;
  double concurrence;
  double entropy_bits;
  BellCoefficients bell;
};

enum class ScanFamily {
  Orthogonal,  // output_state(|s>, |l>, phi): stays maximally entangled
  Tunable,     // tunable_bell_state(phi, phi1): entanglement varies with phi
};

EntropyScanRow entropy_scan_point(ScanFamily family, double phi, double phi1);

}  // namespace hbtsim::ent
