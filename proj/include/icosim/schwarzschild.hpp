#pragma once

#include <optional>

#include "icosim/errors.hpp"

namespace icosim {

/// Exterior Schwarzschild geometry, fixed by the horizon radius. Angular
/// directions are carried by the metric but stay inert here: every photon
/// and observer in this toolkit moves radially.
struct SchwarzschildGeometry {
  double schwarzschild_radius;  // R_S > 0, length units

  explicit SchwarzschildGeometry(double schwarzschild_radius_);
};

/// Observer held at fixed areal radius outside the horizon.
struct StationaryObserver {
  double radius;
};

/// Near-horizon match between a stationary observer and a Rindler observer.
/// rho is the proper distance from the horizon in the near-horizon form,
/// alpha = 1/rho by construction, and validity = |a rho - 1| measures how
/// far the full geometry is from the flat-wedge approximation.
struct CorrespondenceReport {
  double rho;
  double alpha;
  double epsilon_ratio;    // (r - R_S) / R_S
  double validity;         // |proper_acceleration(r) * rho - 1|
  double eta_per_unit_t;   // Rindler time per Schwarzschild time, 1 / (2 R_S)
};

/// Two stationary laboratories crossed by one radially falling photon at
/// equal proper time.
struct FallPair {
  double r1;
  double r2;        // R_S < r1 < r2 < emission radius
  double tau;       // the common proper time
  double residual;  // |tau(r1) - tau(r2)| / tau(r1)
};

/// Lapse f(r) = 1 - R_S / r, in (0, 1) outside the horizon.
double lapse(const SchwarzschildGeometry& g, double r);

/// Proper acceleration a = R_S / (2 r^2 sqrt(f)) needed to hover at r.
double proper_acceleration(const SchwarzschildGeometry& g, double r);

/// Proper radial distance from the horizon to r, the integral of dr/sqrt(f):
///   rho = sqrt(r (r - R_S)) + R_S asinh(sqrt(r/R_S - 1)).
/// Both terms are nonnegative, so the form stays accurate arbitrarily close
/// to the horizon.
double proper_distance(const SchwarzschildGeometry& g, double r);

/// Near-horizon Rindler data for a stationary observer.
CorrespondenceReport rindler_correspondence(const SchwarzschildGeometry& g,
                                            const StationaryObserver& obs);

/// Schwarzschild coordinate time for a radially infalling photon emitted at
/// emission_radius to reach r:
///   t = R0 - r + R_S ln((R0 - R_S) / (r - R_S)).
double photon_fall_time(const SchwarzschildGeometry& g, double emission_radius, double r);

/// Proper time shown by the laboratory at r when the photon passes:
/// sqrt(f(r)) * photon_fall_time. Vanishes at both ends of (R_S, R0) with a
/// single interior maximum.
double lab_proper_time_at_passage(const SchwarzschildGeometry& g, double emission_radius,
                                  double r);

/// Finds laboratories r1 < r2 whose photon passages happen at equal proper
/// time. When r1_hint is given, r1 is pinned there and r2 is solved on the
/// other monotone branch of tau(r); otherwise r1 defaults to the smaller of
/// 10 R_S and the geometric midpoint of the near branch. The search requires
/// R_S / emission_radius <= ratio_threshold.
FallPair find_equal_proper_time_pair(const SchwarzschildGeometry& g, double emission_radius,
                                     std::optional<double> r1_hint, double tol,
                                     double ratio_threshold = 1e-4);

}  // namespace icosim
