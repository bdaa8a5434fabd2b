#pragma once

// Deterministic low-discrepancy point sets.

#include <cstdint>
#include <vector>

#include "potlayer/vec.hpp"

namespace potlayer {

/// Radical inverse of `index` in the given prime base.
double radical_inverse(std::uint64_t index, unsigned base);

/// Halton sequence in [0,1)^dim (dim <= 3), starting at index seed + 1.
class HaltonSequence {
 public:
  HaltonSequence(int dim, std::uint64_t seed);
  Vec3 next();

 private:
  int dim_;
  std::uint64_t index_;
};

/// `count` Halton points of the ball B_radius(center) in dimension n, from
/// rejection of the enclosing cube. The result is a deterministic function of
/// (n, center, radius, count, seed).
std::vector<Vec3> halton_ball(int n, const Vec3& center, double radius, int count, std::uint64_t seed);

}  // namespace potlayer
