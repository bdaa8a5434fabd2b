#include "potlayer/quadrature.hpp"

namespace potlayer {

QuadResult graph_patch_integral(const InterfaceGraph& gamma, const std::function<double(const Vec2&)>& f,
                                const PatchDomain& dom, const std::optional<NearPoint>& near,
                                const QuadratureSpec& spec) {
  auto r = graph_patch_integral_n<1>(
      gamma, [&](const SurfacePoint& sp) { return std::array<double, 1>{f(sp.yp)}; }, dom, near, spec);
  return {r.value[0], r.est_error, r.panels, r.converged};
}

QuadResult sphere_integral(int n, double s, const std::function<double(const Vec3&)>& f,
                           const QuadratureSpec& spec, const std::optional<SphereNear>& near) {
  auto r = sphere_integral_n<1>(n, s, [&](const Vec3& y) { return std::array<double, 1>{f(y)}; }, near, spec);
  return {r.value[0], r.est_error, r.panels, r.converged};
}

}  // namespace potlayer
