#include "icosim/protocols.hpp"

#include <cmath>

#include "icosim/constants.hpp"

namespace icosim {

namespace {

constexpr std::array<MeasSign, 2> kSigns = {MeasSign::M, MeasSign::MPerp};

void check_norm1(const Eigen::VectorXcd& v, const char* name) {
  if (std::abs(v.norm() - 1.0) > 1e-9) {
    throw ValidationError(std::string(name) + " must be normalized");
  }
}

void check_qubit_unitary(const Unitary& u, const char* name) {
  if (u.dimension() != 2) {
    throw ValidationError(std::string(name) + " must act on a single qubit");
  }
}

void check_visibility(double v) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw ValidationError("visibility must lie in [0, 1]");
  }
}

struct Timing {
  double x0;
  double alpha1;
  double alpha2;
  double tau_star;
  double t1;
  double t2;
};

double crossing_time(double alpha, double tau) { return std::sinh(alpha * tau) / alpha; }

// Derives the larger acceleration from the equal-proper-time condition, or
// verifies a supplied one against it.
Timing resolve_timing(double x0, double alpha1, std::optional<double> alpha2_opt) {
  if (!(std::isfinite(x0) && x0 > 0.0) || !(std::isfinite(alpha1) && alpha1 > 0.0)) {
    throw ValidationError("x0 and alpha1 must be positive and finite");
  }
  const double x = alpha1 * x0;
  if (!(x > 1.0)) {
    throw ValidationError("scenario requires alpha1 * x0 > 1");
  }

  Timing tm{};
  tm.x0 = x0;
  tm.alpha1 = alpha1;
  tm.tau_star = reception_proper_time(alpha1, x0);
  if (alpha2_opt) {
    tm.alpha2 = *alpha2_opt;
    if (!(std::isfinite(tm.alpha2) && tm.alpha2 > alpha1)) {
      throw ValidationError("scenario requires alpha2 > alpha1");
    }
    const double tau2 = reception_proper_time(tm.alpha2, x0);
    if (std::abs(tau2 - tm.tau_star) > 1e-9 * std::max(1.0, tm.tau_star)) {
      throw ValidationError("supplied alpha2 does not meet the photon at equal proper time");
    }
  } else {
    const RootClassification roots = solve_equal_tau_acceleration(alpha1, x0);
    if (roots.regime != RootRegime::NontrivialAbove) {
      throw SolverError(
          "no alpha2 > alpha1 satisfies the equal-proper-time condition: alpha1 * x0 must lie "
          "in (1, e)");
    }
    tm.alpha2 = roots.roots[1] / x0;
  }
  tm.t1 = crossing_time(alpha1, tm.tau_star);
  tm.t2 = crossing_time(tm.alpha2, tm.tau_star);
  return tm;
}

Ket single_qubit_ket(const Eigen::Vector2cd& v) {
  return Ket(CompositeSpace({QubitFactor{}}), v);
}

Ket two_qubit_ket(const Eigen::Vector4cd& v) {
  return Ket(CompositeSpace({QubitFactor{}, QubitFactor{}}), v);
}

Eigen::Vector4cd kron2(const Eigen::Vector2cd& a, const Eigen::Vector2cd& b) {
  Eigen::Vector4cd out;
  out << a(0) * b(0), a(0) * b(1), a(1) * b(0), a(1) * b(1);
  return out;
}

Ket meas_vector(const Factor& clock, MeasSign s) {
  Eigen::VectorXcd a(2);
  a << kInvSqrt2, meas_sign_value(s) * kInvSqrt2;
  return Ket(CompositeSpace({clock}), std::move(a));
}

// Post-selects every lab factor in the m / m_perp basis, peeling factors off
// the front until only photons remain. Returns the joint probability and the
// photon state.
MeasurementOutcome cascade_measure(const Ket& state, std::span<const MeasSign> signs) {
  Ket current = state;
  double probability = 1.0;
  bool valid = true;
  for (const MeasSign s : signs) {
    const MeasurementOutcome step = project_factor(current, 0, meas_vector(current.space.factor(0), s));
    if (!step.post_state_valid) {
      probability = 0.0;
      valid = false;
      current = step.post_state;
      break;
    }
    probability *= step.probability;
    current = step.post_state;
  }
  MeasurementOutcome out;
  out.probability = probability;
  out.post_state = current;
  out.post_state_valid = valid;
  return out;
}

// Post-selected output for one interference sign: probability share and the
// photon mixture with branch cross terms scaled by v.
struct SignClass {
  double probability = 0.0;  // per single outcome
  Mixture photons;
  bool valid = false;
};

SignClass mixed_sign_class(const Eigen::Vector2cd& amps, const Eigen::VectorXcd& chi1,
                           const Eigen::VectorXcd& chi2, int sign, double v, int outcome_count,
                           const CompositeSpace& photon_space) {
  const Complex c1 = amps(0);
  const Complex c2 = amps(1);
  const double w1 = std::norm(c1);
  const double w2 = std::norm(c2);
  const double overlap = (std::conj(c1) * c2 * chi1.dot(chi2)).real();
  const double denom = static_cast<double>(outcome_count) * 2.0;

  SignClass cls;
  cls.probability = std::max(0.0, (w1 + w2 + 2.0 * sign * v * overlap) / denom);
  if (cls.probability <= kVanishingProbability) return cls;
  cls.valid = true;

  const Eigen::VectorXcd combo = c1 * chi1 + static_cast<double>(sign) * c2 * chi2;
  const double combo_sq = combo.squaredNorm();
  const double scale = denom * cls.probability;
  if (v > 0.0 && combo_sq > kVanishingProbability) {
    cls.photons.components.emplace_back(v * combo_sq / scale,
                                        Ket(photon_space, combo / std::sqrt(combo_sq)));
  }
  if (v < 1.0) {
    if (w1 > 0.0) {
      cls.photons.components.emplace_back((1.0 - v) * w1 / scale, Ket(photon_space, chi1 / std::sqrt(w1) * std::abs(c1)));
    }
    if (w2 > 0.0) {
      cls.photons.components.emplace_back((1.0 - v) * w2 / scale, Ket(photon_space, chi2 / std::sqrt(w2) * std::abs(c2)));
    }
  }
  return cls;
}

std::array<SwitchOutcome, 4> switch_outcomes_coherent(const Ket& state_at_tm) {
  std::array<SwitchOutcome, 4> outcomes;
  int idx = 0;
  for (const MeasSign s1 : kSigns) {
    for (const MeasSign s2 : kSigns) {
      const MeasSign signs[] = {s1, s2};
      const MeasurementOutcome m = cascade_measure(state_at_tm, signs);
      SwitchOutcome& o = outcomes[idx++];
      o.lab1 = s1;
      o.lab2 = s2;
      o.probability = m.probability;
      o.photon_valid = m.post_state_valid;
      o.photon = Mixture::pure(m.post_state);
    }
  }
  return outcomes;
}

std::array<SwitchOutcome, 4> switch_outcomes_mixed(const Eigen::Vector2cd& amps,
                                                   const Eigen::Vector2cd& chi1,
                                                   const Eigen::Vector2cd& chi2, double v) {
  const CompositeSpace photon_space({QubitFactor{}});
  std::array<SwitchOutcome, 4> outcomes;
  int idx = 0;
  for (const MeasSign s1 : kSigns) {
    for (const MeasSign s2 : kSigns) {
      const int sign = meas_sign_value(s1) * meas_sign_value(s2);
      const SignClass cls = mixed_sign_class(amps, chi1, chi2, sign, v, 4, photon_space);
      SwitchOutcome& o = outcomes[idx++];
      o.lab1 = s1;
      o.lab2 = s2;
      o.probability = cls.probability;
      o.photon_valid = cls.valid;
      o.photon = cls.valid ? cls.photons : Mixture::pure(single_qubit_ket(Eigen::Vector2cd(1, 0)));
    }
  }
  return outcomes;
}

}  // namespace

SwitchResult run_switch(const SwitchScenario& sc) {
  check_qubit_unitary(sc.u_a, "U_A");
  check_qubit_unitary(sc.u_b, "U_B");
  check_norm1(sc.psi, "psi");
  check_norm1(sc.branch_amplitudes, "branch_amplitudes");
  check_visibility(sc.visibility);
  const Timing tm = resolve_timing(sc.x0, sc.alpha1, sc.alpha2);
  if (!(std::isfinite(sc.t_m) && sc.t_m >= tm.t2)) {
    throw ValidationError("t_m must not precede the later photon crossing");
  }

  SwitchResult res;
  res.x0 = tm.x0;
  res.alpha1 = tm.alpha1;
  res.alpha2 = tm.alpha2;
  res.tau_star = tm.tau_star;
  res.t1 = tm.t1;
  res.t2 = tm.t2;
  res.t_m = sc.t_m;
  res.visibility = sc.visibility;
  res.branch_amplitudes = sc.branch_amplitudes;
  res.photon_after_ab = sc.u_b.matrix * (sc.u_a.matrix * sc.psi);
  res.photon_after_ba = sc.u_a.matrix * (sc.u_b.matrix * sc.psi);

  // State at t = 0: colors entangled across the two worldlines, photon in psi.
  const auto colors_at_rest = [](double alpha) {
    return ClockFactor{{ClockLabel{0.0, Color::Amber, 0.0, alpha},
                        ClockLabel{0.0, Color::Blue, 0.0, alpha}}};
  };
  const CompositeSpace space0(
      {colors_at_rest(tm.alpha1), colors_at_rest(tm.alpha2), QubitFactor{}});
  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(space0.dimension());
  for (int q = 0; q < 2; ++q) {
    amps((0 * 2 + 1) * 2 + q) = sc.branch_amplitudes(0) * sc.psi(q);  // |A>|B>
    amps((1 * 2 + 0) * 2 + q) = sc.branch_amplitudes(1) * sc.psi(q);  // |B>|A>
  }
  Ket state(space0, std::move(amps));

  // Photon crossings in time order; each lab acts according to its color.
  state = apply_controlled(sc.u_a, 2, state, 0, 0);
  state = apply_controlled(sc.u_b, 2, state, 0, 1);
  state = apply_controlled(sc.u_a, 2, state, 1, 0);
  state = apply_controlled(sc.u_b, 2, state, 1, 1);

  // Labs come to rest at their crossing and tick inertially until t_m.
  const auto frozen = [&](double alpha, double t_cross) {
    return std::vector<ClockLabel>{
        ClockLabel{tm.tau_star, Color::Amber, sc.t_m - t_cross, alpha},
        ClockLabel{tm.tau_star, Color::Blue, sc.t_m - t_cross, alpha}};
  };
  state = relabel_clock_factor(state, 0, frozen(tm.alpha1, tm.t1));
  state = relabel_clock_factor(state, 1, frozen(tm.alpha2, tm.t2));
  res.state_after_passage = state;

  const CompositeSpace lab1_space({state.space.factor(0)});
  const CompositeSpace lab2_space({state.space.factor(1)});
  res.branch_states[0] = tensor(basis_ket(lab1_space, 0), basis_ket(lab2_space, 1),
                                single_qubit_ket(res.photon_after_ab));
  res.branch_states[1] = tensor(basis_ket(lab1_space, 1), basis_ket(lab2_space, 0),
                                single_qubit_ket(res.photon_after_ba));

  res.outcomes = sc.visibility == 1.0
                     ? switch_outcomes_coherent(state)
                     : switch_outcomes_mixed(sc.branch_amplitudes, res.photon_after_ab,
                                             res.photon_after_ba, sc.visibility);
  return res;
}

SwitchResult apply_visibility(const SwitchResult& result, double v) {
  check_visibility(v);
  SwitchResult out = result;
  out.visibility = v;
  out.outcomes = v == 1.0 ? switch_outcomes_coherent(result.state_after_passage)
                          : switch_outcomes_mixed(result.branch_amplitudes,
                                                  result.photon_after_ab,
                                                  result.photon_after_ba, v);
  return out;
}

namespace {

void fill_bell_class(BellOutputClass& cls, const SignClass& sign_class, double visibility,
                     const std::optional<ChshSettings>& settings, std::uint64_t seed) {
  cls.probability = 4.0 * sign_class.probability;
  cls.valid = sign_class.valid;
  if (!cls.valid) return;
  cls.photons = sign_class.photons;
  if (visibility == 1.0 && cls.photons.is_pure()) {
    cls.entropy_bits = schmidt_entropy(cls.photons.components.front().second);
  }
  if (settings) {
    cls.chsh = chsh_value(cls.photons, *settings);
    cls.chsh_settings = *settings;
  } else {
    const ChshOptimum opt = chsh_max(cls.photons, seed);
    cls.chsh = opt.value;
    cls.chsh_settings = opt.settings;
  }
}

void bell_outcomes_and_classes(BellResult& res, double v) {
  const CompositeSpace photon_space({QubitFactor{}, QubitFactor{}});
  // Coherent route: measure the stored state factor by factor.
  std::array<MeasurementOutcome, 8> measured;
  if (v == 1.0) {
    int idx = 0;
    for (const MeasSign sa : kSigns) {
      for (const MeasSign sc : kSigns) {
        for (const MeasSign sb : kSigns) {
          const MeasSign signs[] = {sa, sc, sb};
          measured[idx++] = cascade_measure(res.state_after_passage, signs);
        }
      }
    }
  }

  SignClass plus_class, minus_class;
  if (v == 1.0) {
    // Class data comes from any representative outcome of the sign.
    plus_class.probability = measured[0].probability;
    plus_class.valid = measured[0].post_state_valid;
    if (plus_class.valid) plus_class.photons = Mixture::pure(measured[0].post_state);
    minus_class.probability = measured[1].probability;
    minus_class.valid = measured[1].post_state_valid;
    if (minus_class.valid) minus_class.photons = Mixture::pure(measured[1].post_state);
  } else {
    plus_class = mixed_sign_class(res.branch_amplitudes, res.photon_branch_1,
                                  res.photon_branch_2, +1, v, 8, photon_space);
    minus_class = mixed_sign_class(res.branch_amplitudes, res.photon_branch_1,
                                   res.photon_branch_2, -1, v, 8, photon_space);
  }

  int idx = 0;
  for (const MeasSign sa : kSigns) {
    for (const MeasSign sc : kSigns) {
      for (const MeasSign sb : kSigns) {
        BellOutcome& o = res.outcomes[idx];
        o.lab_a = sa;
        o.lab_c = sc;
        o.lab_b = sb;
        o.sign = meas_sign_value(sa) * meas_sign_value(sc) * meas_sign_value(sb);
        o.probability = v == 1.0 ? measured[idx].probability
                                 : (o.sign > 0 ? plus_class : minus_class).probability;
        ++idx;
      }
    }
  }

  res.visibility = v;
  res.plus = BellOutputClass{};
  res.minus = BellOutputClass{};
  fill_bell_class(res.plus, plus_class, v, res.requested_settings, res.chsh_seed);
  fill_bell_class(res.minus, minus_class, v, res.requested_settings, res.chsh_seed);
}

}  // namespace

BellResult run_bell(const BellScenario& sc) {
  check_qubit_unitary(sc.u_a, "U_A");
  check_qubit_unitary(sc.u_b, "U_B");
  check_qubit_unitary(sc.u_c, "U_C");
  check_norm1(sc.psi_l, "psi_L");
  check_norm1(sc.psi_r, "psi_R");
  check_norm1(sc.branch_amplitudes, "branch_amplitudes");
  check_visibility(sc.visibility);
  if (!(std::isfinite(sc.alpha1) && sc.alpha1 > 0.0)) {
    throw ValidationError("alpha1 must be positive and finite");
  }

  // Close the timing: with both accelerations fixed there is exactly one
  // source position giving equal proper times,
  //   ln x0 = (alpha2 ln alpha1 - alpha1 ln alpha2) / (alpha1 - alpha2),
  // and it always lands in the solvable regime 1 < alpha1 x0 < e.
  double x0;
  if (sc.x0) {
    x0 = *sc.x0;
  } else if (sc.alpha2) {
    const double a1 = sc.alpha1;
    const double a2 = *sc.alpha2;
    if (!(std::isfinite(a2) && a2 > a1)) {
      throw ValidationError("scenario requires alpha2 > alpha1");
    }
    x0 = std::exp((a2 * std::log(a1) - a1 * std::log(a2)) / (a1 - a2));
  } else {
    throw ValidationError("Bell scenario needs alpha2 or x0 to fix the timing");
  }
  const Timing tm = resolve_timing(x0, sc.alpha1, sc.alpha2);
  const double t_m = sc.t_m.value_or(2.0 * tm.t2);
  if (!(std::isfinite(t_m) && t_m >= tm.t2)) {
    throw ValidationError("t_m must not precede the later photon crossing");
  }

  BellResult res;
  res.x0 = tm.x0;
  res.alpha1 = tm.alpha1;
  res.alpha2 = tm.alpha2;
  res.tau_star = tm.tau_star;
  res.t1 = tm.t1;
  res.t2 = tm.t2;
  res.t_m = t_m;
  res.branch_amplitudes = sc.branch_amplitudes;
  res.requested_settings = sc.settings;
  res.chsh_seed = sc.chsh_seed;

  const double a1 = tm.alpha1;
  const double a2 = tm.alpha2;

  // Factor order follows the initial-state convention: A, C, B, photon L,
  // photon R. Label index 0 is branch 1 (A at -alpha2, C at +alpha2, B at
  // +alpha1), index 1 is branch 2 (A at -alpha1, C at -alpha2, B at +alpha2).
  const ClockFactor lab_a0{{ClockLabel{0.0, Color::Amber, 0.0, -a2},
                            ClockLabel{0.0, Color::Amber, 0.0, -a1}}};
  const ClockFactor lab_c0{{ClockLabel{0.0, Color::Cyan, 0.0, a2},
                            ClockLabel{0.0, Color::Cyan, 0.0, -a2}}};
  const ClockFactor lab_b0{{ClockLabel{0.0, Color::Blue, 0.0, a1},
                            ClockLabel{0.0, Color::Blue, 0.0, a2}}};
  const CompositeSpace space0({lab_a0, lab_c0, lab_b0, QubitFactor{}, QubitFactor{}});

  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(space0.dimension());
  const Eigen::Vector4cd photons0 = kron2(sc.psi_l, sc.psi_r);
  for (int p = 0; p < 4; ++p) {
    amps(0 * 16 + p) = sc.branch_amplitudes(0) * photons0(p);   // labs |000>
    amps(7 * 4 + p) = sc.branch_amplitudes(1) * photons0(p);    // labs |111>
  }
  Ket state(space0, std::move(amps));

  // Crossings at t1: B meets photon R in branch 1, A meets photon L in
  // branch 2. Crossings at t2: C meets photon R (branch 1), A and C meet
  // photon L (branches 1 and 2), B meets photon R (branch 2).
  state = apply_controlled(sc.u_b, 4, state, 2, 0);
  state = apply_controlled(sc.u_a, 3, state, 0, 1);
  state = apply_controlled(sc.u_c, 4, state, 1, 0);
  state = apply_controlled(sc.u_a, 3, state, 0, 0);
  state = apply_controlled(sc.u_c, 3, state, 1, 1);
  state = apply_controlled(sc.u_b, 4, state, 2, 1);

  // Freeze at the branch's own crossing time, then drift to t_m.
  const auto frozen = [&](Color color, double alpha_b1, double t_b1, double alpha_b2,
                          double t_b2) {
    return std::vector<ClockLabel>{ClockLabel{tm.tau_star, color, t_m - t_b1, alpha_b1},
                                   ClockLabel{tm.tau_star, color, t_m - t_b2, alpha_b2}};
  };
  state = relabel_clock_factor(state, 0, frozen(Color::Amber, -a2, tm.t2, -a1, tm.t1));
  state = relabel_clock_factor(state, 1, frozen(Color::Cyan, a2, tm.t2, -a2, tm.t2));
  state = relabel_clock_factor(state, 2, frozen(Color::Blue, a1, tm.t1, a2, tm.t2));
  res.state_after_passage = state;

  res.photon_branch_1 = kron2(sc.u_a.matrix * sc.psi_l, sc.u_c.matrix * (sc.u_b.matrix * sc.psi_r));
  res.photon_branch_2 = kron2(sc.u_c.matrix * (sc.u_a.matrix * sc.psi_l), sc.u_b.matrix * sc.psi_r);

  bell_outcomes_and_classes(res, sc.visibility);
  return res;
}

BellResult apply_visibility(const BellResult& result, double v) {
  check_visibility(v);
  BellResult out = result;
  bell_outcomes_and_classes(out, v);
  return out;
}

double unruh_temperature(double alpha_si) {
  if (!(std::isfinite(alpha_si) && alpha_si >= 0.0)) {
    throw ValidationError("unruh_temperature: acceleration must be nonnegative");
  }
  return codata::hbar * alpha_si /
         (2.0 * std::numbers::pi * codata::boltzmann * codata::light_speed);
}

VisibilityModel exp_visibility_model(double t0_kelvin) {
  if (!(std::isfinite(t0_kelvin) && t0_kelvin > 0.0)) {
    throw ValidationError("visibility model scale T0 must be positive");
  }
  VisibilityModel model;
  model.id = "exp(-T/T0), T0=" + std::to_string(t0_kelvin) + " K";
  model.visibility_of_alpha = [t0_kelvin](double alpha_si) {
    return std::exp(-unruh_temperature(alpha_si) / t0_kelvin);
  };
  return model;
}

BellScenario reference_bell_scenario() {
  BellScenario sc;
  sc.alpha1 = 1.0;
  sc.alpha2 = 2.0;
  sc.u_a = Unitary::hadamard();
  sc.u_b = Unitary::pauli_z();
  sc.u_c = Unitary::pauli_x();
  sc.psi_l = Eigen::Vector2cd(kInvSqrt2, kInvSqrt2);
  sc.psi_r = Eigen::Vector2cd(1.0, 0.0);
  return sc;
}

std::vector<NegligibilityRow> negligibility_sweep(std::span<const double> alphas_si,
                                                  const VisibilityModel& model,
                                                  std::uint64_t chsh_seed) {
  if (!model.visibility_of_alpha) {
    throw ValidationError("negligibility_sweep: model has no visibility map");
  }
  if (std::abs(model.visibility_of_alpha(0.0) - 1.0) > 1e-12) {
    throw ValidationError("negligibility_sweep: model must satisfy v(0) = 1");
  }

  BellScenario base = reference_bell_scenario();
  base.chsh_seed = chsh_seed;
  const BellResult coherent = run_bell(base);

  std::vector<NegligibilityRow> rows;
  rows.reserve(alphas_si.size());
  double prev_alpha = 0.0;
  double prev_v = 1.0;
  bool have_prev = false;
  for (const double alpha : alphas_si) {
    NegligibilityRow row;
    row.alpha_si = alpha;
    row.temperature = unruh_temperature(alpha);
    row.visibility = model.visibility_of_alpha(alpha);
    if (!(row.visibility >= 0.0 && row.visibility <= 1.0)) {
      throw ValidationError("negligibility_sweep: model visibility left [0, 1]");
    }
    if (have_prev && ((alpha > prev_alpha && row.visibility > prev_v + 1e-12) ||
                      (alpha < prev_alpha && row.visibility < prev_v - 1e-12))) {
      throw ValidationError("negligibility_sweep: model visibility is not monotone");
    }
    prev_alpha = alpha;
    prev_v = row.visibility;
    have_prev = true;

    const BellResult at_v = apply_visibility(coherent, row.visibility);
    if (!at_v.plus.valid || !at_v.plus.chsh) {
      throw SolverError("negligibility_sweep: reference output vanished");
    }
    row.chsh_max = *at_v.plus.chsh;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace icosim
