#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <complex>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace hs {

using cd = std::complex<double>;

// Runtime dimension n <= 3; the fixed upper bound keeps all small vectors
// and matrices on the stack.
inline constexpr int kMaxDim = 3;

using CVec = Eigen::Matrix<cd, Eigen::Dynamic, 1, 0, kMaxDim, 1>;
using CMat = Eigen::Matrix<cd, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxDim, kMaxDim>;
using RVec = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 2 * kMaxDim + 1, 1>;
using RMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 2 * kMaxDim + 1,
                           2 * kMaxDim + 1>;

inline constexpr double kPi = 3.14159265358979323846;

/// Raised when a numerical routine cannot produce a trustworthy value
/// (non-finite data, failed iteration, singular kernel).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised for caller mistakes: bad parameters, unmet preconditions.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// <a, b> = sum_j a_j b_j (no conjugation), the pairing of a (1,0)-covector
/// with a vector.
inline cd pair(const CVec& a, const CVec& b) { return (a.array() * b.array()).sum(); }

/// C^n -> R^{2n} with ordering (x1, y1, x2, y2, ...).
inline RVec to_real(const CVec& z) {
  RVec r(2 * z.size());
  for (Eigen::Index j = 0; j < z.size(); ++j) {
    r(2 * j) = z(j).real();
    r(2 * j + 1) = z(j).imag();
  }
  return r;
}

inline CVec to_complex(const RVec& r) {
  CVec z(r.size() / 2);
  for (Eigen::Index j = 0; j < z.size(); ++j) z(j) = cd(r(2 * j), r(2 * j + 1));
  return z;
}

/// Euclidean inner product of C^n viewed as R^{2n}.
inline double real_dot(const CVec& a, const CVec& b) {
  return (a.array() * b.array().conjugate()).sum().real();
}

std::string format_point(const CVec& z);

bool all_finite(const CVec& z);

/// Number of worker threads: HARDYSOB_THREADS if set, else hardware
/// concurrency.
unsigned thread_count();

/// Runs body(i) for i in [0, count) across threads; body must only write to
/// slot i of its output.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

inline constexpr std::size_t kReduceChunk = 1024;

/// Deterministic parallel sum of body(i) over [0, count). The index range is
/// cut into fixed chunks whose partial sums are combined in chunk order, so
/// the result does not depend on the number of threads.
template <class T, class F>
T parallel_sum(std::size_t count, F&& body, T zero) {
  const std::size_t chunks = (count + kReduceChunk - 1) / kReduceChunk;
  std::vector<T> partial(chunks, zero);
  parallel_for(chunks, [&](std::size_t c) {
    T acc = zero;
    const std::size_t end = std::min(count, (c + 1) * kReduceChunk);
    for (std::size_t i = c * kReduceChunk; i < end; ++i) acc += body(i);
    partial[c] = acc;
  });
  T total = zero;
  for (const T& v : partial) total += v;
  return total;
}

}  // namespace hs
