#ifndef HCBAND_TYPES_HPP
#define HCBAND_TYPES_HPP

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace hcband {

using Real = double;
using Complex = std::complex<double>;

using Vec3 = Eigen::Vector3d;
using Vec3i = Eigen::Vector3i;
using CVec3 = Eigen::Vector3cd;
using Mat = Eigen::MatrixXcd;
using Mat3 = Eigen::Matrix3cd;
using CVec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;

inline constexpr const char* version_string = "hcband 1.0.0";

// Error taxonomy mirrored by the CLI exit codes: configuration problems
// including invalid geometry (2), invalid selections such as an
// out-of-range eigenvalue group (3), unsupported parameter combinations
// (4), and numerical failures such as eigensolver residuals out of
// contract (5).
struct config_error : std::runtime_error {
  explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

struct geometry_error : std::runtime_error {
  explicit geometry_error(const std::string& what) : std::runtime_error(what) {}
};

struct selection_error : std::runtime_error {
  explicit selection_error(const std::string& what) : std::runtime_error(what) {}
};

struct unsupported_error : std::runtime_error {
  explicit unsupported_error(const std::string& what) : std::runtime_error(what) {}
};

struct numerical_error : std::runtime_error {
  explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace hcband

#endif  // HCBAND_TYPES_HPP
