#pragma once

#include <optional>
#include <vector>

#include "icosim/errors.hpp"

namespace icosim {

/// Spacetime event in 1+1-dimensional Minkowski coordinates, c = 1.
/// Both components carry length units.
struct Event {
  double t = 0.0;
  double x = 0.0;
};

/// The two spacelike-separated Rindler wedges of the light cone at the origin.
enum class Wedge { Right, Left };

enum class LightDirection { PlusX, MinusX };

/// Worldline of a uniformly accelerated observer,
///   t(tau) = sinh(alpha tau) / alpha,   x(tau) = +-cosh(alpha tau) / alpha,
/// a hyperbola t^2 - x^2 = -1/alpha^2 confined to one wedge.
struct RindlerWorldline {
  double alpha;  // proper acceleration magnitude, 1/length, > 0
  Wedge wedge;

  RindlerWorldline(double alpha_, Wedge wedge_);
};

/// Future-directed null ray from an emission event.
struct PhotonWorldline {
  Event emission;
  LightDirection direction;

  PhotonWorldline(Event emission_, LightDirection direction_);
};

/// A photon/observer crossing: the event and the observer's proper time there.
struct Intersection {
  Event event;
  double tau;
};

/// Solution classes of Y = X^(Y/X), the reduced equal-proper-time condition.
/// X < 1 admits only the trivial root Y = X; 1 < X < e adds one root above X;
/// X > e adds one root below X; at X = 1 and X = e the roots coalesce.
enum class RootRegime { TrivialOnly, NontrivialAbove, NontrivialBelow, Boundary };

struct RootClassification {
  double x = 0.0;  // X = alpha1 * x0
  RootRegime regime = RootRegime::TrivialOnly;
  std::vector<double> roots;  // always contains Y = X; nontrivial root appended when present
};

/// Wedge assignment of the two observers in one superposition branch.
struct BranchWedges {
  Wedge observer_a;
  Wedge observer_b;
};

/// Connectivity class of a pair of branches: same-wedge observers can
/// communicate, opposite-wedge observers cannot.
enum class ConfigurationClass {
  BothConnected,
  BothDisconnected,
  OnlyFirstConnected,
  OnlySecondConnected,
};

struct ConfigurationReport {
  bool branch1_connected;
  bool branch2_connected;
  ConfigurationClass configuration;
};

/// Event on the worldline at proper time tau.
Event rindler_event(const RindlerWorldline& w, double tau);

/// Event on the null ray at coordinate time t >= emission time.
Event photon_event(const PhotonWorldline& p, double t);

/// Proper time at which a right-wedge observer of acceleration alpha receives
/// a left-moving photon emitted at (t = 0, x = x0 > 0):
///   tau = ln(alpha x0) / alpha.
/// Evaluates for any alpha x0 > 0; the result is negative when alpha x0 < 1
/// (the geometric crossing lies below t = 0).
double reception_proper_time(double alpha, double x0);

/// Crossing of the future-directed ray with the hyperbola, solved in closed
/// form from the linear-in-e^(alpha tau) reduction of the null condition.
/// Returns nullopt when the ray never reaches the worldline (wrong side of
/// the horizon, or the crossing lies behind the emission event).
std::optional<Intersection> intersect(const PhotonWorldline& p, const RindlerWorldline& w);

/// All roots Y of Y = X^(Y/X) for X = alpha1 * x0, with their regime.
/// The nontrivial root fixes the second acceleration alpha2 = Y / x0 for
/// which both observers meet the photon at equal proper time.
RootClassification solve_equal_tau_acceleration(double alpha1, double x0);

/// True iff the future light cone of e meets the worldline. For a right-wedge
/// observer this is the region x > t bounded by the horizon t = x.
bool can_signal(const Event& e, const RindlerWorldline& w);

/// Per-branch communication verdicts and the joint configuration class.
ConfigurationReport classify_configuration(const BranchWedges& branch1, const BranchWedges& branch2);

}  // namespace icosim
