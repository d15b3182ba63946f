// SPDX-License-Identifier: Apache-2.0
//
// Shared numeric types, error hierarchy, deterministic RNG and the worker pool.

#pragma once

#include <Eigen/Core>

#include <complex>
#include <cstdint>
#include <functional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace awsp {

using cplx = std::complex<double>;

using ComplexMatrix = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using RealMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ComplexVector = Eigen::VectorXcd;

// Slow-time rows x fast-time columns.
using PulseMatrix = ComplexMatrix;

inline constexpr double kSpeedOfLight = 299792458.0;
inline constexpr double kPi = 3.14159265358979323846;

// Invalid physical or algorithmic parameter.
class ParameterError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

// Shapes or lengths that do not line up.
class DimensionError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

// Inconsistent configuration (files, protocols, filter choices).
class ConfigError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

// NaN/Inf or divergence during computation.
class NumericError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// splitmix64 finalizer, used to derive independent stream seeds.
std::uint64_t mix_seed(std::uint64_t x);
std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> tags);

// mt19937_64 with hand-written distributions so draws match across standard libraries.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform();                       // [0, 1)
    double uniform(double lo, double hi);   // [lo, hi)
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi); // inclusive
    double normal();
    cplx complex_normal();                  // E|z|^2 = 1
    std::uint64_t next() { return engine_(); }

  private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

// Worker count: AWSP_THREADS if set and positive, otherwise hardware concurrency.
unsigned worker_count();

// Runs fn(i) for i in [0, n). Each index is executed exactly once; callers write to
// index-owned slots so results never depend on scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

bool all_finite(const ComplexMatrix& m);
bool all_finite(const RealMatrix& m);

} // namespace awsp
