#pragma once

#include <Eigen/Dense>
#include <array>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "icosim/chsh.hpp"
#include "icosim/kinematics.hpp"
#include "icosim/quantum.hpp"

namespace icosim {

/// m / m_perp: projection onto the symmetric or antisymmetric combination of
/// a laboratory's two possible clock labels.
enum class MeasSign { M, MPerp };

inline int meas_sign_value(MeasSign s) { return s == MeasSign::M ? 1 : -1; }

/// Quantum-switch configuration: a photon source at x0, two right-wedge
/// observers whose accelerations are entangled with their color labels, and
/// one polarization qubit. alpha2 may be left unset to be derived from the
/// equal-proper-time condition.
struct SwitchScenario {
  double x0 = 0.0;
  double alpha1 = 0.0;
  std::optional<double> alpha2;
  Unitary u_a;
  Unitary u_b;
  Eigen::Vector2cd psi = Eigen::Vector2cd(1.0, 0.0);
  double t_m = 0.0;
  double visibility = 1.0;
  // Control amplitudes of the two branches (A-first, B-first); zero one of
  // them to run a definite causal order.
  Eigen::Vector2cd branch_amplitudes = Eigen::Vector2cd(kInvSqrt2, kInvSqrt2);
};

struct SwitchOutcome {
  MeasSign lab1 = MeasSign::M;  // observer on the alpha1 worldline
  MeasSign lab2 = MeasSign::M;  // observer on the alpha2 worldline
  double probability = 0.0;
  Mixture photon;               // single component when fully coherent
  bool photon_valid = false;
};

struct SwitchResult {
  double x0 = 0.0;
  double alpha1 = 0.0;
  double alpha2 = 0.0;
  double tau_star = 0.0;
  double t1 = 0.0;
  double t2 = 0.0;
  double t_m = 0.0;
  double visibility = 1.0;
  Eigen::Vector2cd branch_amplitudes;
  Eigen::Vector2cd photon_after_ab;  // U_B U_A psi (A acted first)
  Eigen::Vector2cd photon_after_ba;  // U_A U_B psi (B acted first)
  Ket state_after_passage;           // full lab x lab x photon state at t_m
  std::array<Ket, 2> branch_states;  // its two normalized summands
  std::array<SwitchOutcome, 4> outcomes;  // (m,m),(m,mp),(mp,m),(mp,mp)
};

/// Bell-for-temporal-order configuration: labs A (left wedge), B (right
/// wedge), C (superposed across wedges), two photons sent into the two
/// wedges. The branch structure is fixed: branch 1 puts A at -alpha2, C at
/// +alpha2, B at +alpha1; branch 2 puts A at -alpha1, C at -alpha2, B at
/// +alpha2.
struct BellScenario {
  double alpha1 = 0.0;
  std::optional<double> alpha2;  // derived from (alpha1, x0) when unset
  std::optional<double> x0;      // derived from (alpha1, alpha2) when unset
  Unitary u_a;
  Unitary u_b;
  Unitary u_c;
  Eigen::Vector2cd psi_l = Eigen::Vector2cd(kInvSqrt2, kInvSqrt2);
  Eigen::Vector2cd psi_r = Eigen::Vector2cd(1.0, 0.0);
  std::optional<double> t_m;     // defaults to twice the later crossing time
  double visibility = 1.0;
  std::optional<ChshSettings> settings;  // unset: optimize
  Eigen::Vector2cd branch_amplitudes = Eigen::Vector2cd(kInvSqrt2, kInvSqrt2);
  std::uint64_t chsh_seed = kDefaultChshSeed;
};

struct BellOutcome {
  MeasSign lab_a = MeasSign::M;
  MeasSign lab_c = MeasSign::M;
  MeasSign lab_b = MeasSign::M;
  int sign = 1;  // product of the three measurement signs
  double probability = 0.0;
};

/// Post-selected two-photon output for one sign class of outcomes.
struct BellOutputClass {
  double probability = 0.0;  // summed over the four outcomes of this sign
  bool valid = false;
  Mixture photons;
  std::optional<double> entropy_bits;      // set when the output is pure
  std::optional<double> chsh;              // value at given settings, or optimized
  std::optional<ChshSettings> chsh_settings;
};

struct BellResult {
  double x0 = 0.0;
  double alpha1 = 0.0;
  double alpha2 = 0.0;
  double tau_star = 0.0;
  double t1 = 0.0;
  double t2 = 0.0;
  double t_m = 0.0;
  double visibility = 1.0;
  Eigen::Vector2cd branch_amplitudes;
  Eigen::Vector4cd photon_branch_1;  // (U_A psi_L) x (U_C U_B psi_R)
  Eigen::Vector4cd photon_branch_2;  // (U_C U_A psi_L) x (U_B psi_R)
  Ket state_after_passage;           // labs x photons state at t_m
  std::array<BellOutcome, 8> outcomes;
  BellOutputClass plus;
  BellOutputClass minus;
  std::optional<ChshSettings> requested_settings;
  std::uint64_t chsh_seed = kDefaultChshSeed;
};

SwitchResult run_switch(const SwitchScenario& sc);
BellResult run_bell(const BellScenario& sc);

/// Rescales the interference terms between the two control branches by v and
/// redoes the post-selection. v = 1 reproduces the coherent result exactly;
/// v = 0 leaves the classical mixture of the two definite orders.
SwitchResult apply_visibility(const SwitchResult& result, double v);
BellResult apply_visibility(const BellResult& result, double v);

/// Unruh temperature T = hbar alpha / (2 pi k_B c) for an SI acceleration.
double unruh_temperature(double alpha_si);

/// Maps acceleration to an interference visibility. The mapping is a model
/// choice, not derived physics, so its identifier travels with every report.
struct VisibilityModel {
  std::string id;
  std::function<double(double)> visibility_of_alpha;
};

/// v(alpha) = exp(-T(alpha) / T0).
VisibilityModel exp_visibility_model(double t0_kelvin);

struct UnruhReport {
  double alpha_si = 0.0;
  double temperature = 0.0;
  std::string visibility_model;
  double visibility = 1.0;
};

struct NegligibilityRow {
  double alpha_si = 0.0;
  double temperature = 0.0;
  double visibility = 1.0;
  double chsh_max = 0.0;
};

/// The explicit state/operation choice that makes the Bell output maximally
/// entangled: psi_L = |+>, psi_R = |0>, U_A = H, U_B = Z, U_C = X, with
/// alpha1 = 1, alpha2 = 2 (equal proper times at x0 = 2).
BellScenario reference_bell_scenario();

/// One row per acceleration: temperature, model visibility, and the CHSH
/// maximum of the reference Bell output at that visibility.
std::vector<NegligibilityRow> negligibility_sweep(std::span<const double> alphas_si,
                                                  const VisibilityModel& model,
                                                  std::uint64_t chsh_seed = kDefaultChshSeed);

}  // namespace icosim
