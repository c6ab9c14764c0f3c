#include "icosim/quantum.hpp"

#include <cmath>
#include <numeric>

namespace icosim {

namespace {

std::vector<int> dims_of(const CompositeSpace& space) {
  std::vector<int> dims(space.factor_count());
  for (int k = 0; k < space.factor_count(); ++k) dims[k] = space.factor_dim(k);
  return dims;
}

// Number of flat-index steps one increment of factor k takes.
int stride_of(const std::vector<int>& dims, int k) {
  int s = 1;
  for (std::size_t j = k + 1; j < dims.size(); ++j) s *= dims[j];
  return s;
}

void check_factor_index(const CompositeSpace& space, int k, const char* where) {
  if (k < 0 || k >= space.factor_count()) {
    throw ValidationError(std::string(where) + ": factor index out of range");
  }
}

using RowMajorMatrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

}  // namespace

bool same_label(const ClockLabel& a, const ClockLabel& b) {
  return a.color == b.color && std::abs(a.tau - b.tau) <= kTauTol &&
         std::abs(a.rest_epoch - b.rest_epoch) <= kTauTol &&
         std::abs(a.worldline_alpha - b.worldline_alpha) <= kTauTol;
}

int factor_dimension(const Factor& f) {
  if (std::holds_alternative<QubitFactor>(f)) return 2;
  return static_cast<int>(std::get<ClockFactor>(f).labels.size());
}

bool same_factor(const Factor& a, const Factor& b) {
  if (a.index() != b.index()) return false;
  if (std::holds_alternative<QubitFactor>(a)) return true;
  const auto& la = std::get<ClockFactor>(a).labels;
  const auto& lb = std::get<ClockFactor>(b).labels;
  if (la.size() != lb.size()) return false;
  for (std::size_t i = 0; i < la.size(); ++i) {
    if (!same_label(la[i], lb[i])) return false;
  }
  return true;
}

CompositeSpace::CompositeSpace(std::vector<Factor> factors) : factors_(std::move(factors)) {
  dim_ = 1;
  for (const auto& f : factors_) {
    if (const auto* clock = std::get_if<ClockFactor>(&f)) {
      if (clock->labels.empty()) throw ValidationError("clock factor needs at least one label");
      for (std::size_t i = 0; i < clock->labels.size(); ++i) {
        for (std::size_t j = i + 1; j < clock->labels.size(); ++j) {
          if (same_label(clock->labels[i], clock->labels[j])) {
            throw ValidationError("clock factor labels must be pairwise distinct");
          }
        }
      }
    }
    dim_ *= factor_dimension(f);
  }
}

const Factor& CompositeSpace::factor(int k) const {
  check_factor_index(*this, k, "CompositeSpace::factor");
  return factors_[k];
}

int CompositeSpace::factor_dim(int k) const { return factor_dimension(factor(k)); }

CompositeSpace CompositeSpace::without_factor(int k) const {
  check_factor_index(*this, k, "CompositeSpace::without_factor");
  std::vector<Factor> rest;
  rest.reserve(factors_.size() - 1);
  for (int j = 0; j < factor_count(); ++j) {
    if (j != k) rest.push_back(factors_[j]);
  }
  return CompositeSpace(std::move(rest));
}

CompositeSpace CompositeSpace::with_factor(int k, Factor replacement) const {
  check_factor_index(*this, k, "CompositeSpace::with_factor");
  if (factor_dimension(replacement) != factor_dim(k)) {
    throw ValidationError("with_factor: replacement changes the factor dimension");
  }
  std::vector<Factor> updated = factors_;
  updated[k] = std::move(replacement);
  return CompositeSpace(std::move(updated));
}

bool same_space(const CompositeSpace& a, const CompositeSpace& b) {
  if (a.factor_count() != b.factor_count()) return false;
  for (int k = 0; k < a.factor_count(); ++k) {
    if (!same_factor(a.factor(k), b.factor(k))) return false;
  }
  return true;
}

Ket::Ket(CompositeSpace space_, Eigen::VectorXcd amplitudes_)
    : space(std::move(space_)), amplitudes(std::move(amplitudes_)) {
  if (amplitudes.size() != space.dimension()) {
    throw ValidationError("Ket: amplitude count does not match the space dimension");
  }
}

Ket Ket::normalized() const {
  const double n = norm();
  if (n <= 0.0) throw ValidationError("cannot normalize a zero vector");
  return Ket(space, amplitudes / n);
}

Complex inner(const Ket& a, const Ket& b) {
  if (!same_space(a.space, b.space)) throw ValidationError("inner: spaces differ");
  return a.amplitudes.dot(b.amplitudes);
}

Unitary::Unitary(Eigen::MatrixXcd m) : matrix(std::move(m)) {
  if (matrix.rows() != matrix.cols() || matrix.rows() == 0) {
    throw ValidationError("Unitary: matrix must be square");
  }
  const Eigen::MatrixXcd gram = matrix.adjoint() * matrix;
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(matrix.rows(), matrix.cols());
  if (((gram - id).cwiseAbs().maxCoeff()) > 1e-12) {
    throw ValidationError("Unitary: U^dagger U deviates from identity beyond 1e-12");
  }
}

Unitary Unitary::identity(int n) { return Unitary(Eigen::MatrixXcd::Identity(n, n)); }

Unitary Unitary::pauli_x() {
  Eigen::Matrix2cd m;
  m << 0, 1, 1, 0;
  return Unitary(m);
}

Unitary Unitary::pauli_y() {
  Eigen::Matrix2cd m;
  m << 0, Complex(0, -1), Complex(0, 1), 0;
  return Unitary(m);
}

Unitary Unitary::pauli_z() {
  Eigen::Matrix2cd m;
  m << 1, 0, 0, -1;
  return Unitary(m);
}

Unitary Unitary::hadamard() {
  Eigen::Matrix2cd m;
  m << kInvSqrt2, kInvSqrt2, kInvSqrt2, -kInvSqrt2;
  return Unitary(m);
}

Mixture Mixture::pure(Ket k) {
  Mixture m;
  m.components.emplace_back(1.0, std::move(k));
  return m;
}

Ket tensor(std::span<const Ket> kets) {
  if (kets.empty()) throw ValidationError("tensor: need at least one state");
  std::vector<Factor> factors;
  Eigen::VectorXcd amps = kets.front().amplitudes;
  for (int k = 0; k < kets.front().space.factor_count(); ++k) {
    factors.push_back(kets.front().space.factor(k));
  }
  for (std::size_t i = 1; i < kets.size(); ++i) {
    const auto& next = kets[i];
    Eigen::VectorXcd combined(amps.size() * next.amplitudes.size());
    for (Eigen::Index j = 0; j < amps.size(); ++j) {
      combined.segment(j * next.amplitudes.size(), next.amplitudes.size()) =
          amps(j) * next.amplitudes;
    }
    amps = std::move(combined);
    for (int k = 0; k < next.space.factor_count(); ++k) factors.push_back(next.space.factor(k));
  }
  return Ket(CompositeSpace(std::move(factors)), std::move(amps));
}

Ket tensor(const Ket& a, const Ket& b) {
  const Ket list[] = {a, b};
  return tensor(std::span<const Ket>(list));
}

Ket tensor(const Ket& a, const Ket& b, const Ket& c) {
  const Ket list[] = {a, b, c};
  return tensor(std::span<const Ket>(list));
}

Ket basis_ket(const CompositeSpace& space, int flat_index) {
  if (flat_index < 0 || flat_index >= space.dimension()) {
    throw ValidationError("basis_ket: index out of range");
  }
  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(space.dimension());
  amps(flat_index) = 1.0;
  return Ket(space, std::move(amps));
}

Ket apply_on_factor(const Unitary& u, int k, const Ket& s) {
  check_factor_index(s.space, k, "apply_on_factor");
  const auto dims = dims_of(s.space);
  if (u.dimension() != dims[k]) {
    throw ValidationError("apply_on_factor: unitary dimension does not match the factor");
  }
  const int d_k = dims[k];
  const int d_post = stride_of(dims, k);
  const int block = d_k * d_post;
  const int d_pre = s.space.dimension() / block;

  Eigen::VectorXcd out(s.amplitudes.size());
  for (int a = 0; a < d_pre; ++a) {
    Eigen::Map<const RowMajorMatrix> in_block(s.amplitudes.data() + a * block, d_k, d_post);
    Eigen::Map<RowMajorMatrix> out_block(out.data() + a * block, d_k, d_post);
    out_block = u.matrix * in_block;
  }
  return Ket(s.space, std::move(out));
}

Ket apply_controlled(const Unitary& u, int target, const Ket& s, int control, int control_index) {
  check_factor_index(s.space, target, "apply_controlled");
  check_factor_index(s.space, control, "apply_controlled");
  if (target == control) throw ValidationError("apply_controlled: control and target coincide");
  const auto dims = dims_of(s.space);
  if (u.dimension() != dims[target]) {
    throw ValidationError("apply_controlled: unitary dimension does not match the target");
  }
  if (control_index < 0 || control_index >= dims[control]) {
    throw ValidationError("apply_controlled: control index out of range");
  }

  const int stride_t = stride_of(dims, target);
  const int stride_c = stride_of(dims, control);
  const int d_t = dims[target];
  const int n = s.space.dimension();

  Eigen::VectorXcd out = s.amplitudes;
  Eigen::VectorXcd scratch(d_t);
  for (int i = 0; i < n; ++i) {
    if ((i / stride_t) % d_t != 0) continue;                    // target slice representative
    if ((i / stride_c) % dims[control] != control_index) continue;
    for (int j = 0; j < d_t; ++j) scratch(j) = s.amplitudes(i + j * stride_t);
    scratch = (u.matrix * scratch).eval();
    for (int j = 0; j < d_t; ++j) out(i + j * stride_t) = scratch(j);
  }
  return Ket(s.space, std::move(out));
}

Ket relabel_clock_factor(const Ket& s, int k, std::vector<ClockLabel> new_labels) {
  check_factor_index(s.space, k, "relabel_clock_factor");
  if (!std::holds_alternative<ClockFactor>(s.space.factor(k))) {
    throw ValidationError("relabel_clock_factor: factor is not a clock");
  }
  return Ket(s.space.with_factor(k, ClockFactor{std::move(new_labels)}), s.amplitudes);
}

MeasurementOutcome project(const Ket& s, const Ket& onto) {
  if (!same_space(s.space, onto.space)) throw ValidationError("project: spaces differ");
  if (onto.norm() <= 0.0) throw ValidationError("project: cannot project onto the zero vector");
  const Complex amp = inner(onto, s);
  MeasurementOutcome out;
  out.probability = std::norm(amp);
  if (out.probability > kVanishingProbability) {
    out.post_state = Ket(onto.space, onto.amplitudes * (amp / std::abs(amp)));
    out.post_state_valid = true;
  } else {
    out.post_state = onto;
  }
  return out;
}

MeasurementOutcome project_factor(const Ket& s, int k, const Ket& factor_state) {
  check_factor_index(s.space, k, "project_factor");
  if (factor_state.space.factor_count() != 1 ||
      !same_factor(factor_state.space.factor(0), s.space.factor(k))) {
    throw ValidationError("project_factor: projector must live on exactly the chosen factor");
  }
  if (factor_state.norm() <= 0.0) {
    throw ValidationError("project_factor: cannot project onto the zero vector");
  }

  const auto dims = dims_of(s.space);
  const int d_k = dims[k];
  const int d_post = stride_of(dims, k);
  const int block = d_k * d_post;
  const int d_pre = s.space.dimension() / block;

  Eigen::VectorXcd reduced(d_pre * d_post);
  for (int a = 0; a < d_pre; ++a) {
    Eigen::Map<const RowMajorMatrix> in_block(s.amplitudes.data() + a * block, d_k, d_post);
    reduced.segment(a * d_post, d_post) = in_block.transpose() * factor_state.amplitudes.conjugate();
  }

  MeasurementOutcome out;
  out.probability = reduced.squaredNorm();
  const CompositeSpace rest = s.space.without_factor(k);
  if (out.probability > kVanishingProbability) {
    out.post_state = Ket(rest, reduced / std::sqrt(out.probability));
    out.post_state_valid = true;
  } else {
    out.post_state = basis_ket(rest, 0);
  }
  return out;
}

double schmidt_entropy(const Ket& s, int leading_factors) {
  if (leading_factors < 1 || leading_factors >= s.space.factor_count()) {
    throw ValidationError("schmidt_entropy: cut must leave factors on both sides");
  }
  const auto dims = dims_of(s.space);
  int d_a = 1;
  for (int k = 0; k < leading_factors; ++k) d_a *= dims[k];
  const int d_b = s.space.dimension() / d_a;

  Eigen::Map<const RowMajorMatrix> m(s.amplitudes.data(), d_a, d_b);
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  double bits = 0.0;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) {
    const double p = std::min(1.0, svd.singularValues()(i) * svd.singularValues()(i));
    if (p > 1e-300) bits -= p * std::log2(p);
  }
  return bits;
}

}  // namespace icosim
