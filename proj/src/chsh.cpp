#include "icosim/chsh.hpp"

#include <array>
#include <cmath>

namespace icosim {

namespace {

// Deterministic, toolchain-independent RNG for optimizer starts.
struct SplitMix64 {
  std::uint64_t state;

  std::uint64_t next() {
    state += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  Eigen::Vector3d unit_vector() {
    // Box-Muller: three standard normals, normalized.
    for (;;) {
      const double u1 = uniform();
      const double u2 = uniform();
      const double u3 = uniform();
      const double u4 = uniform();
      if (u1 <= 0.0 || u3 <= 0.0) continue;
      const double r1 = std::sqrt(-2.0 * std::log(u1));
      const double r2 = std::sqrt(-2.0 * std::log(u3));
      Eigen::Vector3d v(r1 * std::cos(2.0 * M_PI * u2), r1 * std::sin(2.0 * M_PI * u2),
                        r2 * std::cos(2.0 * M_PI * u4));
      const double n = v.norm();
      if (n > 1e-12) return v / n;
    }
  }
};

void check_unit(const Eigen::Vector3d& v, const char* name) {
  if (std::abs(v.norm() - 1.0) > 1e-9) {
    throw ValidationError(std::string("chsh: ") + name + " must be a unit Bloch direction");
  }
}

void check_two_qubit(const CompositeSpace& space) {
  if (space.factor_count() != 2 || space.factor_dim(0) != 2 || space.factor_dim(1) != 2 ||
      !std::holds_alternative<QubitFactor>(space.factor(0)) ||
      !std::holds_alternative<QubitFactor>(space.factor(1))) {
    throw ValidationError("chsh: state must live on two qubit factors");
  }
}

const std::array<Eigen::Matrix2cd, 3>& paulis() {
  static const std::array<Eigen::Matrix2cd, 3> p = [] {
    std::array<Eigen::Matrix2cd, 3> m;
    m[0] << 0, 1, 1, 0;
    m[1] << 0, Complex(0, -1), Complex(0, 1), 0;
    m[2] << 1, 0, 0, -1;
    return m;
  }();
  return p;
}

Eigen::Vector3d safe_direction(const Eigen::Vector3d& v, const Eigen::Vector3d& fallback) {
  const double n = v.norm();
  return n > 1e-300 ? Eigen::Vector3d(v / n) : fallback;
}

}  // namespace

Eigen::Matrix3d correlation_matrix(const Ket& s) {
  check_two_qubit(s.space);
  const auto& sigma = paulis();
  Eigen::Matrix3d t;
  Eigen::Vector4cd psi = s.amplitudes;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      Eigen::Matrix4cd op;
      for (int r = 0; r < 2; ++r) {
        for (int c = 0; c < 2; ++c) {
          op.block<2, 2>(2 * r, 2 * c) = sigma[i](r, c) * sigma[j];
        }
      }
      t(i, j) = psi.dot(op * psi).real();
    }
  }
  return t;
}

Eigen::Matrix3d correlation_matrix(const Mixture& m) {
  if (m.components.empty()) throw ValidationError("chsh: empty mixture");
  Eigen::Matrix3d t = Eigen::Matrix3d::Zero();
  for (const auto& [w, ket] : m.components) t += w * correlation_matrix(ket);
  return t;
}

double chsh_value(const Eigen::Matrix3d& t, const ChshSettings& settings) {
  check_unit(settings.a0, "a0");
  check_unit(settings.a1, "a1");
  check_unit(settings.b0, "b0");
  check_unit(settings.b1, "b1");
  return settings.a0.dot(t * (settings.b0 + settings.b1)) +
         settings.a1.dot(t * (settings.b0 - settings.b1));
}

double chsh_value(const Ket& s, const ChshSettings& settings) {
  return chsh_value(correlation_matrix(s), settings);
}

double chsh_value(const Mixture& m, const ChshSettings& settings) {
  return chsh_value(correlation_matrix(m), settings);
}

ChshOptimum chsh_max(const Eigen::Matrix3d& t, std::uint64_t seed) {
  SplitMix64 rng{seed};

  // Canonical axis starts plus random ones; 16 total.
  std::array<std::pair<Eigen::Vector3d, Eigen::Vector3d>, 16> starts;
  starts[0] = {Eigen::Vector3d::UnitX(), Eigen::Vector3d::UnitZ()};
  starts[1] = {Eigen::Vector3d::UnitZ(), Eigen::Vector3d::UnitX()};
  starts[2] = {Eigen::Vector3d::UnitY(), Eigen::Vector3d::UnitZ()};
  starts[3] = {Eigen::Vector3d::UnitX(), Eigen::Vector3d::UnitY()};
  for (std::size_t i = 4; i < starts.size(); ++i) {
    starts[i] = {rng.unit_vector(), rng.unit_vector()};
  }

  ChshOptimum best;
  best.value = -std::numeric_limits<double>::infinity();
  for (const auto& [b0_init, b1_init] : starts) {
    Eigen::Vector3d b0 = b0_init;
    Eigen::Vector3d b1 = b1_init;
    Eigen::Vector3d a0 = Eigen::Vector3d::UnitZ();
    Eigen::Vector3d a1 = Eigen::Vector3d::UnitX();
    double prev = -std::numeric_limits<double>::infinity();
    for (int iter = 0; iter < 2000; ++iter) {
      a0 = safe_direction(t * (b0 + b1), a0);
      a1 = safe_direction(t * (b0 - b1), a1);
      b0 = safe_direction(t.transpose() * (a0 + a1), b0);
      b1 = safe_direction(t.transpose() * (a0 - a1), b1);
      const double s = a0.dot(t * (b0 + b1)) + a1.dot(t * (b0 - b1));
      if (std::abs(s - prev) < 1e-13 * std::max(1.0, std::abs(s))) {
        prev = s;
        break;
      }
      prev = s;
    }
    if (prev > best.value) {
      best.value = prev;
      best.settings = ChshSettings{a0, a1, b0, b1};
    }
  }
  // Report the value the returned settings actually achieve.
  best.value = chsh_value(t, best.settings);
  return best;
}

ChshOptimum chsh_max(const Ket& s, std::uint64_t seed) {
  return chsh_max(correlation_matrix(s), seed);
}

ChshOptimum chsh_max(const Mixture& m, std::uint64_t seed) {
  return chsh_max(correlation_matrix(m), seed);
}

double chsh_max_from_correlations(const Eigen::Matrix3d& t) {
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(t);
  const auto& s = svd.singularValues();
  return 2.0 * std::sqrt(s(0) * s(0) + s(1) * s(1));
}

double chsh_max_from_correlations(const Ket& s) {
  return chsh_max_from_correlations(correlation_matrix(s));
}

double chsh_max_from_correlations(const Mixture& m) {
  return chsh_max_from_correlations(correlation_matrix(m));
}

}  // namespace icosim
