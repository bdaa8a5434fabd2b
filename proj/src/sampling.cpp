#include "potlayer/sampling.hpp"

#include "potlayer/errors.hpp"

namespace potlayer {

double radical_inverse(std::uint64_t index, unsigned base) {
  double inv = 1.0 / base, f = inv, r = 0.0;
  while (index > 0) {
    r += f * static_cast<double>(index % base);
    index /= base;
    f *= inv;
  }
  return r;
}

HaltonSequence::HaltonSequence(int dim, std::uint64_t seed) : dim_(dim), index_(seed + 1) {
  if (dim < 1 || dim > 3) throw ArgumentError("Halton sequence dimension must lie in [1, 3]");
}

Vec3 HaltonSequence::next() {
  static constexpr unsigned primes[3] = {2, 3, 5};
  Vec3 p{0.0, 0.0, 0.0};
  for (int i = 0; i < dim_; ++i) p[i] = radical_inverse(index_, primes[i]);
  ++index_;
  return p;
}

std::vector<Vec3> halton_ball(int n, const Vec3& center, double radius, int count, std::uint64_t seed) {
  if (n != 2 && n != 3) throw ArgumentError("dimension must be 2 or 3");
  if (!(radius > 0.0)) throw ArgumentError("sampling radius must be positive");
  std::vector<Vec3> out;
  out.reserve(count);
  HaltonSequence seq(n, seed);
  while (static_cast<int>(out.size()) < count) {
    const Vec3 u = seq.next();
    Vec3 p{0.0, 0.0, 0.0};
    for (int i = 0; i < n; ++i) p[i] = 2.0 * u[i] - 1.0;
    if (norm2(p) >= 1.0) continue;
    out.push_back(center + radius * p);
  }
  return out;
}

}  // namespace potlayer
