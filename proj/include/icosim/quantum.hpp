#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <span>
#include <utility>
#include <variant>
#include <vector>

#include "icosim/errors.hpp"

namespace icosim {

using Complex = std::complex<double>;

inline constexpr double kInvSqrt2 = 0.70710678118654752440;

/// Observable clock readings closer than this name the same basis vector.
inline constexpr double kTauTol = 1e-9;

/// Outcome probabilities below this are treated as vanished branches: the
/// outcome is still reported, but its post-state carries no information.
inline constexpr double kVanishingProbability = 1e-24;

enum class Color { Amber, Blue, Cyan };

/// Basis label of a laboratory's internal clock state. The label abstracts
/// the lab's entire physical state: the proper-time reading accumulated on
/// its accelerated segment, the color tag identifying the observer, the
/// inertial time accumulated after the lab comes to rest, and the signed
/// proper acceleration of the worldline it rode (which fixes the wedge and
/// keeps equal readings on different worldlines orthogonal).
struct ClockLabel {
  double tau = 0.0;
  Color color = Color::Amber;
  double rest_epoch = 0.0;
  double worldline_alpha = 0.0;
};

bool same_label(const ClockLabel& a, const ClockLabel& b);

struct QubitFactor {};

struct ClockFactor {
  std::vector<ClockLabel> labels;  // pairwise distinct, order fixes the basis
};

using Factor = std::variant<QubitFactor, ClockFactor>;

int factor_dimension(const Factor& f);
bool same_factor(const Factor& a, const Factor& b);

/// Ordered tensor product of qubit and clock factors. The flat basis index
/// runs row-major with factor 0 slowest.
class CompositeSpace {
 public:
  CompositeSpace() = default;
  explicit CompositeSpace(std::vector<Factor> factors);

  int dimension() const { return dim_; }
  int factor_count() const { return static_cast<int>(factors_.size()); }
  const Factor& factor(int k) const;
  int factor_dim(int k) const;
  CompositeSpace without_factor(int k) const;
  CompositeSpace with_factor(int k, Factor replacement) const;

 private:
  std::vector<Factor> factors_;
  int dim_ = 1;
};

bool same_space(const CompositeSpace& a, const CompositeSpace& b);

/// Pure state over a composite space.
struct Ket {
  CompositeSpace space;
  Eigen::VectorXcd amplitudes;

  Ket() = default;
  Ket(CompositeSpace space_, Eigen::VectorXcd amplitudes_);

  double norm() const { return amplitudes.norm(); }
  Ket normalized() const;
};

/// <a|b> with matching spaces.
Complex inner(const Ket& a, const Ket& b);

struct Unitary {
  Eigen::MatrixXcd matrix;

  Unitary() : matrix(Eigen::Matrix2cd::Identity()) {}
  explicit Unitary(Eigen::MatrixXcd m);

  int dimension() const { return static_cast<int>(matrix.rows()); }

  static Unitary identity(int n);
  static Unitary pauli_x();
  static Unitary pauli_y();
  static Unitary pauli_z();
  static Unitary hadamard();
};

struct MeasurementOutcome {
  double probability = 0.0;
  Ket post_state;
  bool post_state_valid = false;
};

/// Convex combination of pure states; weights are nonnegative and sum to 1.
/// Coherent results are single-component mixtures.
struct Mixture {
  std::vector<std::pair<double, Ket>> components;

  static Mixture pure(Ket k);
  bool is_pure() const { return components.size() == 1; }
};

/// Kronecker product of states; factors concatenate, norms multiply.
Ket tensor(std::span<const Ket> kets);
Ket tensor(const Ket& a, const Ket& b);
Ket tensor(const Ket& a, const Ket& b, const Ket& c);

/// Basis vector of the space by flat index.
Ket basis_ket(const CompositeSpace& space, int flat_index);

/// (I x ... x U x ... x I) s with U acting on factor k.
Ket apply_on_factor(const Unitary& u, int k, const Ket& s);

/// Applies u on the target factor only where the control factor is in basis
/// state control_index; acts as identity elsewhere.
Ket apply_controlled(const Unitary& u, int target, const Ket& s, int control, int control_index);

/// Renames the basis of clock factor k without touching amplitudes. Clock
/// evolution between interactions is exactly this bookkeeping.
Ket relabel_clock_factor(const Ket& s, int k, std::vector<ClockLabel> new_labels);

/// Projective measurement onto a normalized vector of the same space.
MeasurementOutcome project(const Ket& s, const Ket& onto);

/// Partial projection of factor k onto a single-factor state; the post-state
/// lives on the remaining factors and the probability is the squared norm of
/// the partial inner product.
MeasurementOutcome project_factor(const Ket& s, int k, const Ket& factor_state);

/// Von Neumann entropy (bits) of either side of the cut after the first
/// `leading_factors` factors. 1 bit iff a two-qubit state is maximally
/// entangled.
double schmidt_entropy(const Ket& s, int leading_factors = 1);

}  // namespace icosim
