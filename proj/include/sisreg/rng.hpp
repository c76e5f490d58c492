#pragma once

#include <Eigen/Dense>
#include <cstdint>

namespace sisreg {

/// Stream purposes keep draws for different parts of one instance
/// independent of each other and of the draw order.
enum class StreamPurpose : std::uint64_t {
  Design = 1,
  Noise = 2,
  Coefficients = 3,
  Positions = 4,
  Factor = 5,
  SpdMatrix = 6,
  Labels = 7,
  Generic = 8,
};

/// Counter-based generator: output k is a fixed 64-bit mix of
/// (key, k), so streams derived from (seed, replicate, purpose) are
/// reproducible and order-independent across threads.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t replicate,
            StreamPurpose purpose);

  std::uint64_t next_u64();
  /// Uniform on [0, 1).
  double next_uniform();
  /// Uniform on {0, ..., bound-1}, bound >= 1, by rejection (unbiased).
  std::uint64_t next_below(std::uint64_t bound);
  /// Standard normal via Box-Muller; second value of each pair is cached.
  double next_normal();

  /// Column-major fill with standard normals.
  template <class Derived>
  void fill_normal(Eigen::DenseBase<Derived>& out) {
    for (Eigen::Index j = 0; j < out.cols(); ++j)
      for (Eigen::Index i = 0; i < out.rows(); ++i)
        out(i, j) = next_normal();
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  bool has_cached_ = false;
  double cached_ = 0.0;
};

}  // namespace sisreg
