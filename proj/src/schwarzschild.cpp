#include "icosim/schwarzschild.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace icosim {

namespace {

void check_exterior(const SchwarzschildGeometry& g, double r, const char* where) {
  if (!std::isfinite(r)) throw ValidationError(std::string(where) + ": r must be finite");
  if (r <= g.schwarzschild_radius) {
    throw ValidationError(std::string(where) + ": r must lie outside the horizon");
  }
}

// Golden-section refinement of a bracketed interior maximum.
double refine_max(const std::vector<double>& grid, std::size_t peak,
                  double (*eval)(const void*, double), const void* ctx) {
  constexpr double kInvPhi = 0.6180339887498949;
  double a = grid[peak == 0 ? 0 : peak - 1];
  double b = grid[std::min(peak + 1, grid.size() - 1)];
  double x1 = b - kInvPhi * (b - a);
  double x2 = a + kInvPhi * (b - a);
  double f1 = eval(ctx, x1);
  double f2 = eval(ctx, x2);
  for (int i = 0; i < 200 && (b - a) > 1e-14 * std::max(1.0, std::abs(b)); ++i) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (b - a);
      f2 = eval(ctx, x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInvPhi * (b - a);
      f1 = eval(ctx, x1);
    }
  }
  return 0.5 * (a + b);
}

struct TauContext {
  const SchwarzschildGeometry* g;
  double r0;
};

double tau_eval(const void* ctx, double r) {
  const auto* c = static_cast<const TauContext*>(ctx);
  return lab_proper_time_at_passage(*c->g, c->r0, r);
}

}  // namespace

SchwarzschildGeometry::SchwarzschildGeometry(double schwarzschild_radius_)
    : schwarzschild_radius(schwarzschild_radius_) {
  if (!std::isfinite(schwarzschild_radius) || schwarzschild_radius <= 0.0) {
    throw ValidationError("Schwarzschild radius must be positive and finite");
  }
}

double lapse(const SchwarzschildGeometry& g, double r) {
  check_exterior(g, r, "lapse");
  return (r - g.schwarzschild_radius) / r;
}

double proper_acceleration(const SchwarzschildGeometry& g, double r) {
  check_exterior(g, r, "proper_acceleration");
  return g.schwarzschild_radius / (2.0 * r * r * std::sqrt(lapse(g, r)));
}

double proper_distance(const SchwarzschildGeometry& g, double r) {
  const double rs = g.schwarzschild_radius;
  if (!std::isfinite(r) || r < rs) {
    throw ValidationError("proper_distance: r must satisfy r >= R_S");
  }
  const double u = r - rs;
  return std::sqrt(r * u) + rs * std::asinh(std::sqrt(u / rs));
}

CorrespondenceReport rindler_correspondence(const SchwarzschildGeometry& g,
                                            const StationaryObserver& obs) {
  const double rs = g.schwarzschild_radius;
  check_exterior(g, obs.radius, "rindler_correspondence");
  CorrespondenceReport rep;
  rep.epsilon_ratio = (obs.radius - rs) / rs;
  rep.rho = 2.0 * std::sqrt(rs * (obs.radius - rs));
  rep.alpha = 1.0 / rep.rho;
  rep.validity = std::abs(proper_acceleration(g, obs.radius) * rep.rho - 1.0);
  rep.eta_per_unit_t = 1.0 / (2.0 * rs);
  return rep;
}

double photon_fall_time(const SchwarzschildGeometry& g, double emission_radius, double r) {
  const double rs = g.schwarzschild_radius;
  check_exterior(g, emission_radius, "photon_fall_time");
  if (!std::isfinite(r) || r <= rs || r > emission_radius) {
    throw ValidationError("photon_fall_time: r must lie in (R_S, emission_radius]");
  }
  return emission_radius - r + rs * std::log((emission_radius - rs) / (r - rs));
}

double lab_proper_time_at_passage(const SchwarzschildGeometry& g, double emission_radius,
                                  double r) {
  return std::sqrt(lapse(g, r)) * photon_fall_time(g, emission_radius, r);
}

FallPair find_equal_proper_time_pair(const SchwarzschildGeometry& g, double emission_radius,
                                     std::optional<double> r1_hint, double tol,
                                     double ratio_threshold) {
  const double rs = g.schwarzschild_radius;
  check_exterior(g, emission_radius, "find_equal_proper_time_pair");
  if (!(tol > 0.0)) throw ValidationError("find_equal_proper_time_pair: tol must be positive");
  const double ratio = rs / emission_radius;
  if (ratio > ratio_threshold) {
    throw SolverError("find_equal_proper_time_pair: R_S/R0 = " + std::to_string(ratio) +
                      " exceeds the solvable-ratio threshold " + std::to_string(ratio_threshold));
  }

  TauContext ctx{&g, emission_radius};

  // Log-spaced scan in r - R_S. tau vanishes at both ends, so the maximum is
  // interior; the scan also verifies the assumed single-peak shape.
  constexpr std::size_t kGridSize = 2048;
  const double u_lo = std::max(1e-9 * rs, 1e-300);
  const double u_hi = (emission_radius - rs) * (1.0 - 1e-9);
  std::vector<double> grid(kGridSize);
  std::vector<double> val(kGridSize);
  const double step = std::log(u_hi / u_lo) / static_cast<double>(kGridSize - 1);
  std::size_t peak = 0;
  for (std::size_t i = 0; i < kGridSize; ++i) {
    grid[i] = rs + u_lo * std::exp(step * static_cast<double>(i));
    val[i] = tau_eval(&ctx, grid[i]);
    if (val[i] > val[peak]) peak = i;
  }

  // Single-peak check: the sign of the finite difference may flip + -> - once.
  bool unimodal = true;
  int sign = 0;
  for (std::size_t i = 0; i + 1 < kGridSize; ++i) {
    const double d = val[i + 1] - val[i];
    if (d == 0.0) continue;
    const int s = d > 0.0 ? 1 : -1;
    if (sign == -1 && s == 1) {
      unimodal = false;
      break;
    }
    sign = s;
  }

  const double r_peak = refine_max(grid, peak, &tau_eval, &ctx);
  const double tau_peak = tau_eval(&ctx, r_peak);

  double r1 = r1_hint.value_or(std::min(10.0 * rs, std::sqrt(rs * r_peak)));
  if (r1 <= rs || r1 >= emission_radius) {
    throw ValidationError("find_equal_proper_time_pair: r1 must lie in (R_S, emission_radius)");
  }
  const double tau_target = tau_eval(&ctx, r1);
  if (tau_target >= tau_peak * (1.0 - 1e-12)) {
    throw SolverError(
        "find_equal_proper_time_pair: r1 sits at the proper-time maximum; the pair degenerates");
  }

  // Bracket the matching radius on the opposite monotone branch.
  double lo, hi;
  if (unimodal) {
    if (r1 < r_peak) {
      lo = r_peak;
      hi = emission_radius * (1.0 - 1e-13);
    } else {
      lo = rs + u_lo;
      hi = r_peak;
    }
    if ((tau_eval(&ctx, lo) - tau_target) * (tau_eval(&ctx, hi) - tau_target) > 0.0) {
      throw SolverError("find_equal_proper_time_pair: no sign change brackets the matching radius");
    }
  } else {
    // Multiple peaks detected: fall back to scanning every level crossing
    // away from r1 and take the nearest bracket.
    lo = hi = 0.0;
    bool found = false;
    for (std::size_t i = 0; i + 1 < kGridSize; ++i) {
      if (grid[i] <= r1 && r1 <= grid[i + 1]) continue;
      const double a = val[i] - tau_target;
      const double b = val[i + 1] - tau_target;
      if (a == 0.0 || (a < 0.0) != (b < 0.0)) {
        lo = grid[i];
        hi = grid[i + 1];
        found = true;
        if (grid[i] > r1) break;  // nearest bracket past r1 wins
      }
    }
    if (!found) {
      throw SolverError("find_equal_proper_time_pair: no sign change found on the scan grid");
    }
  }

  double flo = tau_eval(&ctx, lo) - tau_target;
  for (int i = 0; i < 200 && hi - lo > 1e-15 * std::max(1.0, hi); ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fmid = tau_eval(&ctx, mid) - tau_target;
    if ((flo <= 0.0) == (fmid <= 0.0)) {
      lo = mid;
      flo = fmid;
    } else {
      hi = mid;
    }
  }
  const double r2 = 0.5 * (lo + hi);

  FallPair pair;
  pair.r1 = std::min(r1, r2);
  pair.r2 = std::max(r1, r2);
  pair.tau = tau_eval(&ctx, pair.r1);
  pair.residual = std::abs(pair.tau - tau_eval(&ctx, pair.r2)) / pair.tau;
  if (pair.residual > tol) {
    throw SolverError("find_equal_proper_time_pair: residual " + std::to_string(pair.residual) +
                      " exceeds tolerance");
  }
  return pair;
}

}  // namespace icosim
