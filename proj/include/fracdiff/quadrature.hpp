#pragma once

#include <vector>

namespace fracdiff {

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Cached n-point Gauss-Legendre rule. Rules are built once under a lock and
/// are immutable afterwards, so the returned reference is safe to share.
const GaussRule& gauss_legendre(int n);

/// Integrates f over [a, b] with the given rule mapped affinely.
template <class F>
double integrate_panel(const F& f, double a, double b, const GaussRule& rule) {
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (b + a);
  double acc = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    acc += rule.weights[i] * f(mid + half * rule.nodes[i]);
  }
  return acc * half;
}

}  // namespace fracdiff
