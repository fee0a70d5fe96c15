#pragma once

#include <cmath>
#include <cstdint>

#include <Eigen/Dense>

#include "sgep/core.hpp"
#include "sgep/random.hpp"

namespace sgep::testing {

using Mat = DenseMatrix<double>;
using Vec = DenseVector<double>;
using Pair = MatrixPair<double>;

inline Mat diag(std::initializer_list<double> d) {
  Vec v(static_cast<Index>(d.size()));
  Index k = 0;
  for (double x : d) v(k++) = x;
  return v.asDiagonal();
}

inline Vec vec(std::initializer_list<double> d) {
  Vec v(static_cast<Index>(d.size()));
  Index k = 0;
  for (double x : d) v(k++) = x;
  return v;
}

inline Mat gaussian(Index rows, Index cols, Rng& rng) {
  Mat g(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) g(i, j) = rng.normal();
  return g;
}

// G G' / k with k >= n columns: PSD, almost surely PD.
inline Mat random_psd(Index n, Index k, Rng& rng) {
  const Mat g = gaussian(n, k, rng);
  Mat a = g * g.transpose() / static_cast<double>(k);
  return 0.5 * (a + a.transpose());
}

inline Mat random_spd(Index n, Rng& rng) {
  Mat b = random_psd(n, n + 2, rng);
  b.diagonal().array() += 0.1;
  return b;
}

inline Pair random_pair(Index n, Rng& rng) { return Pair(random_psd(n, n, rng), random_spd(n, rng)); }

// Plain quotient without the library's clamps.
inline double quotient(const Mat& a, const Mat& b, const Vec& x) {
  return x.dot(a * x) / x.dot(b * x);
}

inline bool close(double x, double y, double rel) {
  return std::abs(x - y) <= rel * std::max(1.0, std::max(std::abs(x), std::abs(y)));
}

}  // namespace sgep::testing
