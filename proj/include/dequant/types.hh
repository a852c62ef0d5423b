#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace dequant {

using Index = std::int64_t;
using Complex = std::complex<double>;

using Vec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXcd;
using RealVec = Eigen::VectorXd;

// Explicit probability distribution over {0, ..., n-1}.
using Distribution = std::vector<double>;

using QueryFn = std::function<Complex(Index)>;

// Inner product convention used throughout the library:
//   (u, v) = sum_i u(i) * conj(v(i)).
inline Complex inner(const Vec& u, const Vec& v) { return (u.array() * v.array().conjugate()).sum(); }

}  // namespace dequant
