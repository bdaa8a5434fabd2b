#pragma once

// Gauss-Legendre rules and the panel-adaptive integration engines shared by
// every surface and line integral in the library.
//
// Each panel is integrated with a tensor Gauss rule of order p and of order 2p.
// The difference between the two is the panel's error estimate; the panel with
// the largest estimate is bisected until the summed estimate drops below the
// target tolerance or no splittable panel remains. Final sums run over panels
// in creation order so the result does not depend on the queue history.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <queue>
#include <span>
#include <vector>

#include "potlayer/errors.hpp"

namespace potlayer {

struct QuadratureSpec {
  double target_tol = 1e-6;
  int max_depth = 12;
  int base_order = 8;
  /// Panels within this many near-distances of the foot point are refined to
  /// size below half the distance.
  double singular_split_radius = 5.0;
  /// Hard cap on the number of panels created by one integral.
  int max_panels = 40000;

  void validate() const;
};

struct QuadResult {
  double value = 0.0;
  double est_error = 0.0;
  int panels = 0;
  bool converged = true;
};

template <std::size_t N>
struct QuadResultN {
  std::array<double, N> value{};
  double est_error = 0.0;
  int panels = 0;
  bool converged = true;
};

struct GaussRule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;
};

/// Gauss-Legendre rule with `order` points; cached, safe for concurrent use.
const GaussRule& gauss_legendre(int order);

namespace detail {

template <std::size_t N>
using Val = std::array<double, N>;

template <std::size_t N>
inline double max_abs_diff(const Val<N>& a, const Val<N>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < N; ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

struct Panel1 {
  double a, b;
  int depth;
};

struct Panel2 {
  double u0, u1, v0, v1;
  int depth;
};

template <std::size_t N>
struct Scored {
  Val<N> value{};
  double err = 0.0;
  bool split_u = true;
};

// Largest error first; ties broken by creation index.
struct QueueEntry {
  double err;
  std::size_t id;
  bool operator<(const QueueEntry& o) const {
    return err < o.err || (err == o.err && id > o.id);
  }
};

template <std::size_t N>
inline Val<N> sum_in_order(const std::vector<Val<N>>& values, const std::vector<char>& live) {
  // Neumaier compensated summation in creation order.
  Val<N> s{}, c{};
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (!live[k]) continue;
    for (std::size_t i = 0; i < N; ++i) {
      const double t = s[i] + values[k][i];
      if (std::abs(s[i]) >= std::abs(values[k][i]))
        c[i] += (s[i] - t) + values[k][i];
      else
        c[i] += (values[k][i] - t) + s[i];
      s[i] = t;
    }
  }
  for (std::size_t i = 0; i < N; ++i) s[i] += c[i];
  return s;
}

inline std::vector<double> clean_breaks(std::span<const double> breaks) {
  std::vector<double> b(breaks.begin(), breaks.end());
  std::sort(b.begin(), b.end());
  b.erase(std::unique(b.begin(), b.end(), [](double x, double y) { return !(y - x > 1e-15 * std::max(1.0, std::abs(x))); }),
          b.end());
  if (b.size() < 2) throw ArgumentError("integration needs at least two distinct breakpoints");
  return b;
}

}  // namespace detail

/// Adaptive integral of a vector-valued f over [breaks.front(), breaks.back()],
/// starting from the panels delimited by `breaks`.
template <std::size_t N, class F>
QuadResultN<N> adaptive_1d_n(F&& f, std::span<const double> breaks, const QuadratureSpec& spec) {
  using detail::Val;
  const auto b = detail::clean_breaks(breaks);
  const GaussRule& lo = gauss_legendre(spec.base_order);
  const GaussRule& hi = gauss_legendre(2 * spec.base_order);

  auto rule = [&](const GaussRule& g, double a, double c) {
    Val<N> s{};
    const double half = 0.5 * (c - a), mid = 0.5 * (c + a);
    for (std::size_t q = 0; q < g.nodes.size(); ++q) {
      const Val<N> v = f(mid + half * g.nodes[q]);
      for (std::size_t i = 0; i < N; ++i) s[i] += g.weights[q] * half * v[i];
    }
    return s;
  };

  std::vector<detail::Panel1> panels;
  std::vector<Val<N>> values;
  std::vector<double> errs;
  std::vector<char> live;
  std::priority_queue<detail::QueueEntry> queue;
  double total_err = 0.0;

  auto add = [&](double a, double c, int depth) {
    const Val<N> qh = rule(hi, a, c);
    const Val<N> ql = rule(lo, a, c);
    const double e = detail::max_abs_diff<N>(qh, ql);
    panels.push_back({a, c, depth});
    values.push_back(qh);
    errs.push_back(e);
    live.push_back(1);
    total_err += e;
    queue.push({e, panels.size() - 1});
  };

  for (std::size_t k = 0; k + 1 < b.size(); ++k) add(b[k], b[k + 1], 0);

  while (total_err > spec.target_tol && !queue.empty() && static_cast<int>(panels.size()) < spec.max_panels) {
    const auto top = queue.top();
    queue.pop();
    const auto p = panels[top.id];
    if (p.depth >= spec.max_depth) continue;  // frozen: keeps its value and error
    live[top.id] = 0;
    total_err -= errs[top.id];
    const double m = 0.5 * (p.a + p.b);
    add(p.a, m, p.depth + 1);
    add(m, p.b, p.depth + 1);
  }

  // Recompute the error sum from scratch to shed cancellation drift.
  double err = 0.0;
  int count = 0;
  for (std::size_t k = 0; k < panels.size(); ++k)
    if (live[k]) {
      err += errs[k];
      ++count;
    }
  QuadResultN<N> out;
  out.value = detail::sum_in_order<N>(values, live);
  out.est_error = err;
  out.panels = count;
  out.converged = err <= spec.target_tol;
  return out;
}

template <class F>
QuadResult adaptive_1d(F&& f, std::span<const double> breaks, const QuadratureSpec& spec) {
  auto r = adaptive_1d_n<1>([&](double t) { return std::array<double, 1>{f(t)}; }, breaks, spec);
  return {r.value[0], r.est_error, r.panels, r.converged};
}

/// Adaptive integral over the rectangle spanned by `u_breaks` x `v_breaks`.
///
/// `column(v)` returns a callable `u -> std::array<double, N>`; it is invoked
/// once per v-node of each panel so per-v work (boundary radii, rotations) is
/// shared by all u-nodes of that column.
template <std::size_t N, class Column>
QuadResultN<N> adaptive_2d_n(Column&& column, std::span<const double> u_breaks, std::span<const double> v_breaks,
                             const QuadratureSpec& spec) {
  using detail::Val;
  const auto ub = detail::clean_breaks(u_breaks);
  const auto vb = detail::clean_breaks(v_breaks);
  const GaussRule& lo = gauss_legendre(spec.base_order);
  const GaussRule& hi = gauss_legendre(2 * spec.base_order);

  // Q[a][b]: order a in u, order b in v (0 = low, 1 = high).
  auto score = [&](const detail::Panel2& p) {
    const double hu = 0.5 * (p.u1 - p.u0), mu = 0.5 * (p.u1 + p.u0);
    const double hv = 0.5 * (p.v1 - p.v0), mv = 0.5 * (p.v1 + p.v0);
    Val<N> q11{}, q01{}, q10{};
    for (std::size_t j = 0; j < hi.nodes.size(); ++j) {
      auto col = column(mv + hv * hi.nodes[j]);
      const double wv = hi.weights[j] * hv;
      for (std::size_t i = 0; i < hi.nodes.size(); ++i) {
        const Val<N> val = col(mu + hu * hi.nodes[i]);
        const double w = wv * hi.weights[i] * hu;
        for (std::size_t c = 0; c < N; ++c) q11[c] += w * val[c];
      }
      for (std::size_t i = 0; i < lo.nodes.size(); ++i) {
        const Val<N> val = col(mu + hu * lo.nodes[i]);
        const double w = wv * lo.weights[i] * hu;
        for (std::size_t c = 0; c < N; ++c) q01[c] += w * val[c];
      }
    }
    for (std::size_t j = 0; j < lo.nodes.size(); ++j) {
      auto col = column(mv + hv * lo.nodes[j]);
      const double wv = lo.weights[j] * hv;
      for (std::size_t i = 0; i < hi.nodes.size(); ++i) {
        const Val<N> val = col(mu + hu * hi.nodes[i]);
        const double w = wv * hi.weights[i] * hu;
        for (std::size_t c = 0; c < N; ++c) q10[c] += w * val[c];
      }
    }
    detail::Scored<N> s;
    s.value = q11;
    const double eu = detail::max_abs_diff<N>(q11, q01);
    const double ev = detail::max_abs_diff<N>(q11, q10);
    s.err = eu + ev;
    s.split_u = eu >= ev;
    return s;
  };

  std::vector<detail::Panel2> panels;
  std::vector<detail::Scored<N>> scores;
  std::vector<Val<N>> values;
  std::vector<char> live;
  std::priority_queue<detail::QueueEntry> queue;
  double total_err = 0.0;

  auto add = [&](const detail::Panel2& p) {
    auto s = score(p);
    panels.push_back(p);
    values.push_back(s.value);
    total_err += s.err;
    queue.push({s.err, panels.size() - 1});
    scores.push_back(s);
    live.push_back(1);
  };

  for (std::size_t j = 0; j + 1 < vb.size(); ++j)
    for (std::size_t i = 0; i + 1 < ub.size(); ++i) add({ub[i], ub[i + 1], vb[j], vb[j + 1], 0});

  while (total_err > spec.target_tol && !queue.empty() && static_cast<int>(panels.size()) < spec.max_panels) {
    const auto top = queue.top();
    queue.pop();
    const auto p = panels[top.id];
    if (p.depth >= spec.max_depth) continue;
    live[top.id] = 0;
    total_err -= scores[top.id].err;
    if (scores[top.id].split_u) {
      const double m = 0.5 * (p.u0 + p.u1);
      add({p.u0, m, p.v0, p.v1, p.depth + 1});
      add({m, p.u1, p.v0, p.v1, p.depth + 1});
    } else {
      const double m = 0.5 * (p.v0 + p.v1);
      add({p.u0, p.u1, p.v0, m, p.depth + 1});
      add({p.u0, p.u1, m, p.v1, p.depth + 1});
    }
  }

  double err = 0.0;
  int count = 0;
  for (std::size_t k = 0; k < panels.size(); ++k)
    if (live[k]) {
      err += scores[k].err;
      ++count;
    }
  QuadResultN<N> out;
  out.value = detail::sum_in_order<N>(values, live);
  out.est_error = err;
  out.panels = count;
  out.converged = err <= spec.target_tol;
  return out;
}

/// Geometric breakpoints 0, lo, 2 lo, 4 lo, ..., hi (lo < hi).
std::vector<double> geometric_breaks(double lo, double hi);

}  // namespace potlayer
