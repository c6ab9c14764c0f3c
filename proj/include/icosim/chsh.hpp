#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "icosim/quantum.hpp"

namespace icosim {

/// Measurement directions for the four CHSH correlators
///   S = E(a0,b0) + E(a0,b1) + E(a1,b0) - E(a1,b1).
struct ChshSettings {
  Eigen::Vector3d a0;
  Eigen::Vector3d a1;
  Eigen::Vector3d b0;
  Eigen::Vector3d b1;
};

struct ChshOptimum {
  double value = 0.0;
  ChshSettings settings;
};

inline constexpr std::uint64_t kDefaultChshSeed = 0x5eed001d;

/// Two-qubit correlation matrix T(i,j) = <sigma_i x sigma_j>.
Eigen::Matrix3d correlation_matrix(const Ket& s);
Eigen::Matrix3d correlation_matrix(const Mixture& m);

double chsh_value(const Eigen::Matrix3d& t, const ChshSettings& settings);
double chsh_value(const Ket& s, const ChshSettings& settings);
double chsh_value(const Mixture& m, const ChshSettings& settings);

/// Maximum of chsh_value over measurement directions, by multi-start
/// alternating ascent: with one side fixed the optimal other side is closed
/// form, so each sweep is an exact block update. Deterministic for a fixed
/// seed.
ChshOptimum chsh_max(const Eigen::Matrix3d& t, std::uint64_t seed = kDefaultChshSeed);
ChshOptimum chsh_max(const Ket& s, std::uint64_t seed = kDefaultChshSeed);
ChshOptimum chsh_max(const Mixture& m, std::uint64_t seed = kDefaultChshSeed);

/// Closed-form maximum 2 sqrt(s1^2 + s2^2) from the two largest singular
/// values of the correlation matrix; the independent check for chsh_max.
double chsh_max_from_correlations(const Eigen::Matrix3d& t);
double chsh_max_from_correlations(const Ket& s);
double chsh_max_from_correlations(const Mixture& m);

}  // namespace icosim
