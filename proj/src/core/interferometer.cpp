#include "core/interferometer.hpp"

#include <array>
#include <cmath>

#include "core/errors.hpp"

namespace hbtsim::interf {

void InterferometerGeometry::validate() const {
  require(wavelength > 0.0 && std::isfinite(wavelength), ErrorCode::invalid_config,
          "geometry: wavelength must be positive");
  for (double r : {r13, r14, r23, r24})
    require(r >= 0.0 && std::isfinite(r), ErrorCode::invalid_config,
            "geometry: path lengths must be >= 0");
  for (double s : {split13, split14, split23, split24})
    require(s >= 0.0 && s <= 1.0, ErrorCode::invalid_config,
            "geometry: splitting factors must be in [0,1]");
  require(std::isfinite(analyzer3_angle) && std::isfinite(analyzer4_angle),
          ErrorCode::invalid_config, "geometry: analyzer angles must be finite");
  require(source1_pol.is_normalized(1e-9) && source2_pol.is_normalized(1e-9),
          ErrorCode::invalid_config, "geometry: source polarizations must be normalized");
}

double propagation_phase(const InterferometerGeometry& geom) {
  return geom.wavenumber() * ((geom.r13 - geom.r14) - (geom.r23 - geom.r24));
}

RouteAmplitudes route_amplitudes(const InterferometerGeometry& geom) {
  const double k = geom.wavenumber();
  return {
      geom.split13 * std::polar(1.0, k * geom.r13) *
          polar::project_amplitude(geom.source1_pol, geom.analyzer3_angle),
      geom.split23 * std::polar(1.0, k * geom.r23) *
          polar::project_amplitude(geom.source2_pol, geom.analyzer3_angle),
      geom.split14 * std::polar(1.0, k * geom.r14) *
          polar::project_amplitude(geom.source1_pol, geom.analyzer4_angle),
      geom.split24 * std::polar(1.0, k * geom.r24) *
          polar::project_amplitude(geom.source2_pol, geom.analyzer4_angle),
  };
}

std::pair<Complex, Complex> fields_at_detectors(Complex e1, Complex e2,
                                                const InterferometerGeometry& geom) {
  const RouteAmplitudes r = route_amplitudes(geom);
  return {r.a1 * e1 + r.a2 * e2, r.b1 * e1 + r.b2 * e2};
}

double analytic_coincidence(const InterferometerGeometry& geom) {
  geom.validate();
  const double s = geom.split13;
  require(std::abs(geom.split14 - s) <= 1e-12 && std::abs(geom.split23 - s) <= 1e-12 &&
              std::abs(geom.split24 - s) <= 1e-12 && s > 0.0,
          ErrorCode::bad_argument,
          "analytic_coincidence: requires balanced splitting; use the general oracle");
  require(geom.source1_pol.equals_up_to_phase(polar::circular_state(polar::Handedness::Right)) &&
              geom.source2_pol.equals_up_to_phase(polar::circular_state(polar::Handedness::Left)),
          ErrorCode::bad_argument,
          "analytic_coincidence: requires R/L source polarizations; use the general oracle");
  return 1.5 + 0.5 * std::cos(propagation_phase(geom) + 2.0 * geom.phi34());
}

namespace {

/// Per-detector mode coefficients: mode amplitude = sum_i coeff[i] * E_i.
using ModeRow = std::array<Complex, 2>;

void detector_modes(const InterferometerGeometry& geom, int which, DetectorMode mode,
                    std::vector<ModeRow>& rows) {
  const double k = geom.wavenumber();
  const double split_1 = (which == 3) ? geom.split13 : geom.split14;
  const double split_2 = (which == 3) ? geom.split23 : geom.split24;
  const double path_1 = (which == 3) ? geom.r13 : geom.r14;
  const double path_2 = (which == 3) ? geom.r23 : geom.r24;
  const double angle = (which == 3) ? geom.analyzer3_angle : geom.analyzer4_angle;
  const Complex route1 = split_1 * std::polar(1.0, k * path_1);
  const Complex route2 = split_2 * std::polar(1.0, k * path_2);
  if (mode == DetectorMode::Analyzed) {
    rows.push_back({route1 * polar::project_amplitude(geom.source1_pol, angle),
                    route2 * polar::project_amplitude(geom.source2_pol, angle)});
  } else {
    rows.push_back({route1 * geom.source1_pol.x, route2 * geom.source2_pol.x});
    rows.push_back({route1 * geom.source1_pol.y, route2 * geom.source2_pol.y});
  }
}

}  // namespace

double analytic_coincidence_general(const InterferometerGeometry& geom, double intensity1,
                                    double intensity2, DetectorMode mode3, DetectorMode mode4) {
  geom.validate();
  require(intensity1 >= 0.0 && intensity2 >= 0.0 && (intensity1 > 0.0 || intensity2 > 0.0),
          ErrorCode::bad_argument, "general oracle: source intensities must be >= 0, not both 0");

  std::vector<ModeRow> modes3, modes4;
  detector_modes(geom, 3, mode3, modes3);
  detector_modes(geom, 4, mode4, modes4);
  const double in[2] = {intensity1, intensity2};

  double mean3 = 0.0, mean4 = 0.0;
  for (const ModeRow& p : modes3)
    for (int i = 0; i < 2; ++i) mean3 += std::norm(p[i]) * in[i];
  for (const ModeRow& q : modes4)
    for (int i = 0; i < 2; ++i) mean4 += std::norm(q[i]) * in[i];
  require(mean3 > 0.0 && mean4 > 0.0, ErrorCode::bad_argument,
          "general oracle: zero mean intensity at a detector");

  // <I3 I4> = <I3><I4> + sum_pq |<m3_p m4_q*>|^2 for circular Gaussian inputs.
  double cross = 0.0;
  for (const ModeRow& p : modes3) {
    for (const ModeRow& q : modes4) {
      Complex corr{0.0, 0.0};
      for (int i = 0; i < 2; ++i) corr += p[i] * std::conj(q[i]) * in[i];
      cross += std::norm(corr);
    }
  }
  return 1.0 + cross / (mean3 * mean4);
}

std::pair<double, double> mean_detector_intensities(const InterferometerGeometry& geom,
                                                    double intensity1, double intensity2) {
  const RouteAmplitudes r = route_amplitudes(geom);
  return {std::norm(r.a1) * intensity1 + std::norm(r.a2) * intensity2,
          std::norm(r.b1) * intensity1 + std::norm(r.b2) * intensity2};
}

}  // namespace hbtsim::interf
