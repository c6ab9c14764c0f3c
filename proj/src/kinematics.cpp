#include "icosim/kinematics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace icosim {

namespace {

void require_finite(double v, const char* name) {
  if (!std::isfinite(v)) {
    throw ValidationError(std::string(name) + " must be finite");
  }
}

double wedge_sign(Wedge w) { return w == Wedge::Right ? 1.0 : -1.0; }

double direction_sign(LightDirection d) { return d == LightDirection::PlusX ? 1.0 : -1.0; }

// g(Y) = Y - X^(Y/X), the residual of the reduced equal-proper-time condition.
double root_residual(double y, double x) { return y - std::exp(y / x * std::log(x)); }

// Solves g(Y) = 0 on a sign-changing bracket by bisection, then polishes with
// damped Newton steps on h(Y) = ln Y - (Y/X) ln X, which stays well
// conditioned when the upper root is large.
double bisect_root(double lo, double hi, double x) {
  double flo = root_residual(lo, x);
  for (int i = 0; i < 200 && hi - lo > 1e-15 * std::max(1.0, hi); ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fmid = root_residual(mid, x);
    if ((flo <= 0.0) == (fmid <= 0.0)) {
      lo = mid;
      flo = fmid;
    } else {
      hi = mid;
    }
  }
  const double k = std::log(x) / x;
  double y = 0.5 * (lo + hi);
  for (int i = 0; i < 60; ++i) {
    const double h = std::log(y) - k * y;
    const double dh = 1.0 / y - k;
    if (dh == 0.0) break;
    double step = h / dh;
    // Keep Newton inside the bracket; halve until it lands there.
    while (y - step <= lo || y - step >= hi) step *= 0.5;
    const double next = y - step;
    if (next == y) break;
    y = next;
    if (std::abs(step) < 1e-16 * y) break;
  }
  return y;
}

}  // namespace

RindlerWorldline::RindlerWorldline(double alpha_, Wedge wedge_) : alpha(alpha_), wedge(wedge_) {
  require_finite(alpha, "alpha");
  if (alpha <= 0.0) throw ValidationError("proper acceleration must be positive");
}

PhotonWorldline::PhotonWorldline(Event emission_, LightDirection direction_)
    : emission(emission_), direction(direction_) {
  require_finite(emission.t, "emission.t");
  require_finite(emission.x, "emission.x");
}

Event rindler_event(const RindlerWorldline& w, double tau) {
  require_finite(tau, "tau");
  const double phase = w.alpha * tau;
  return Event{std::sinh(phase) / w.alpha, wedge_sign(w.wedge) * std::cosh(phase) / w.alpha};
}

Event photon_event(const PhotonWorldline& p, double t) {
  require_finite(t, "t");
  if (t < p.emission.t) throw ValidationError("photon_event: t precedes the emission event");
  return Event{t, p.emission.x + direction_sign(p.direction) * (t - p.emission.t)};
}

double reception_proper_time(double alpha, double x0) {
  require_finite(alpha, "alpha");
  require_finite(x0, "x0");
  if (alpha <= 0.0) throw ValidationError("reception_proper_time: alpha must be positive");
  if (x0 <= 0.0) throw ValidationError("reception_proper_time: x0 must be positive");
  return std::log(alpha * x0) / alpha;
}

std::optional<Intersection> intersect(const PhotonWorldline& p, const RindlerWorldline& w) {
  // Mirror a left-wedge observer onto the right wedge: x -> -x flips the
  // photon direction and leaves t alone, so one set of formulas suffices.
  const bool mirrored = w.wedge == Wedge::Left;
  const double xe = mirrored ? -p.emission.x : p.emission.x;
  const double te = p.emission.t;
  double s = direction_sign(p.direction);
  if (mirrored) s = -s;

  // Null rays have one conserved light-cone coordinate; equating it with the
  // hyperbola's exponential form gives e^(alpha tau) directly:
  //   left-moving  (s = -1): x + t conserved, e^(alpha tau) = alpha (xe + te)
  //   right-moving (s = +1): x - t conserved, e^(alpha tau) = 1 / (alpha (xe - te))
  const double c = w.alpha * (xe - s * te);
  if (c <= 0.0) return std::nullopt;
  const double u = s < 0.0 ? c : 1.0 / c;
  const double tau = std::log(u) / w.alpha;

  const Event on_hyperbola = rindler_event(RindlerWorldline(w.alpha, Wedge::Right), tau);
  const double t_cross = on_hyperbola.t;
  // Only the future-directed half of the ray counts.
  if (t_cross < te - 1e-12 * std::max(1.0, std::abs(te))) return std::nullopt;

  Event ev{t_cross, mirrored ? -on_hyperbola.x : on_hyperbola.x};
  return Intersection{ev, tau};
}

RootClassification solve_equal_tau_acceleration(double alpha1, double x0) {
  require_finite(alpha1, "alpha1");
  require_finite(x0, "x0");
  if (alpha1 <= 0.0 || x0 <= 0.0) {
    throw ValidationError("solve_equal_tau_acceleration: alpha1 and x0 must be positive");
  }

  RootClassification out;
  const double x = alpha1 * x0;
  out.x = x;
  out.roots.push_back(x);  // Y = X solves the equation for every X

  if (x <= 1.0) {
    // ln X <= 0 makes X^(Y/X) nonincreasing in Y: the trivial root is the
    // only crossing. X = 1 is the boundary of the two-root region.
    out.regime = x == 1.0 ? RootRegime::Boundary : RootRegime::TrivialOnly;
    return out;
  }

  constexpr double kSeparation = 1e-6;   // relative offset of the bracket from Y = X
  constexpr double kDedup = 1e-8;        // roots this close to Y = X count as trivial
  constexpr double kBracketCap = 1e15;   // upper root grows without bound as X -> 1+

  double nontrivial = std::numeric_limits<double>::quiet_NaN();
  if (std::log(x) < 1.0) {  // 1 < X < e: second root above X
    double lo = x * (1.0 + kSeparation);
    if (root_residual(lo, x) > 0.0) {
      double hi = std::max(2.0 * x, 4.0);
      while (hi < kBracketCap && root_residual(hi, x) > 0.0) hi *= 2.0;
      if (root_residual(hi, x) <= 0.0) nontrivial = bisect_root(lo, hi, x);
    }
  } else if (std::log(x) > 1.0) {  // X > e: second root below X
    double lo = std::numeric_limits<double>::min();
    double hi = x * (1.0 - kSeparation);
    if (root_residual(hi, x) > 0.0) nontrivial = bisect_root(lo, hi, x);
  }

  if (!std::isfinite(nontrivial) || std::abs(nontrivial - x) <= kDedup * x) {
    out.regime = RootRegime::Boundary;
    return out;
  }
  out.regime = nontrivial > x ? RootRegime::NontrivialAbove : RootRegime::NontrivialBelow;
  out.roots.push_back(nontrivial);
  return out;
}

bool can_signal(const Event& e, const RindlerWorldline& w) {
  require_finite(e.t, "event.t");
  require_finite(e.x, "event.x");
  // The causal past of the right-wedge hyperbola is everything beyond the
  // horizon t = x; the mirrored statement covers the left wedge.
  return w.wedge == Wedge::Right ? e.x > e.t : e.x + e.t < 0.0;
}

ConfigurationReport classify_configuration(const BranchWedges& branch1, const BranchWedges& branch2) {
  const bool c1 = branch1.observer_a == branch1.observer_b;
  const bool c2 = branch2.observer_a == branch2.observer_b;
  ConfigurationClass cls;
  if (c1 && c2) {
    cls = ConfigurationClass::BothConnected;
  } else if (!c1 && !c2) {
    cls = ConfigurationClass::BothDisconnected;
  } else if (c1) {
    cls = ConfigurationClass::OnlyFirstConnected;
  } else {
    cls = ConfigurationClass::OnlySecondConnected;
  }
  return ConfigurationReport{c1, c2, cls};
}

}  // namespace icosim
