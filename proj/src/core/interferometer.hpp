#pragma once

#include <complex>

#include "core/polarization.hpp"

namespace hbtsim::interf {

using Complex = std::complex<double>;

/// Four-path beamsplitter network: two polarized sources, two detectors
/// behind linear analyzers. Route i->j carries amplitude factor
/// split_ij * exp(i k r_ij) * <analyzer_j | pol_i>.
struct InterferometerGeometry {
  double r13 = 0.0, r14 = 0.0, r23 = 0.0, r24 = 0.0;  // optical path lengths, m
  double wavelength = 852e-9;                          // m
  polar::JonesVector source1_pol = polar::circular_state(polar::Handedness::Right);
  polar::JonesVector source2_pol = polar::circular_state(polar::Handedness::Left);
  double analyzer3_angle = 0.0;  // rad
  double analyzer4_angle = 0.0;  // rad
  double split13 = 0.5, split14 = 0.5, split23 = 0.5, split24 = 0.5;

  double wavenumber() const { return 2.0 * 3.14159265358979323846 / wavelength; }
  double phi34() const { return analyzer3_angle - analyzer4_angle; }
  void validate() const;  // throws Error(invalid_config)
};

/// Propagation phase Delta = k[(r13 - r14) - (r23 - r24)], unwrapped.
double propagation_phase(const InterferometerGeometry& geom);

/// Post-analyzer complex route factors; E3 = a1 E1 + a2 E2, E4 = b1 E1 + b2 E2.
struct RouteAmplitudes {
  Complex a1, a2, b1, b2;
};

RouteAmplitudes route_amplitudes(const InterferometerGeometry& geom);

/// Scalar post-analyzer fields at D3 and D4 for instantaneous source fields.
std::pair<Complex, Complex> fields_at_detectors(Complex e1, Complex e2,
                                                const InterferometerGeometry& geom);

/// Closed-form coincidence C = 3/2 + 1/2 cos(Delta + 2*phi34) for the ideal
/// configuration: balanced splitting, R/L source polarizations, equal mean
/// intensities. 2*phi34 is half the (unsigned) solid angle 4*phi34 swept on
/// the Poincare sphere by the analyzer cycle; the polarization module's
/// signed connection phase for that cycle is -2*phi34 (see polarization.hpp).
/// Throws Error(bad_argument) if the geometry violates those preconditions.
double analytic_coincidence(const InterferometerGeometry& geom);

enum class DetectorMode {
  Analyzed,  // linear analyzer at the configured angle
  Open,      // analyzer removed; detector sums both polarization components
};

/// Gaussian-moment oracle for arbitrary splitting/intensities:
/// G2_34(0) = 1 + sum_pq |<m3_p m4_q*>|^2 / (<I3><I4>), from the fourth-moment
/// factorization of circular Gaussian fields. Reduces exactly to
/// analytic_coincidence in the ideal configuration. Throws
/// Error(bad_argument) when a detector sees zero mean intensity.
double analytic_coincidence_general(const InterferometerGeometry& geom, double intensity1,
                                    double intensity2,
                                    DetectorMode mode3 = DetectorMode::Analyzed,
                                    DetectorMode mode4 = DetectorMode::Analyzed);

/// Mean intensities at the two detectors for given source intensities.
std::pair<double, double> mean_detector_intensities(const InterferometerGeometry& geom,
                                                    double intensity1, double intensity2);

}  // namespace hbtsim::interf
