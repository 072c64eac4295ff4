#include "mtsim/frechet.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace mtsim {

double weight_ratio(double p, double q) {
  if (!(p > 0.0) || p > 1.0 || !(q > 0.0) || q > 1.0) {
    throw ValidationError("weight_ratio: proportions must lie in (0, 1]");
  }
  return p >= q ? p / q : q / p;
}

namespace {

struct PairGrid {
  std::size_t p, q;
  std::vector<double> cost;  // p*q weighted pair distances, row-major

  double at(std::size_t i, std::size_t j) const { return cost[i * q + j]; }
};

PairGrid make_grid(const AleCurve& a, const AleCurve& b, bool normalize_knot_axis) {
  if (a.size() == 0 || b.size() == 0) throw ValidationError("frechet: empty curve");
  std::vector<double> ax(a.knots());
  std::vector<double> bx(b.knots());
  if (normalize_knot_axis) {
    const double lo = std::min(ax.front(), bx.front());
    const double hi = std::max(ax.back(), bx.back());
    const double range = hi - lo;
    for (double& x : ax) x = range > 0.0 ? (x - lo) / range : 0.0;
    for (double& x : bx) x = range > 0.0 ? (x - lo) / range : 0.0;
  }
  PairGrid g{a.size(), b.size(), std::vector<double>(a.size() * b.size())};
  for (std::size_t i = 0; i < g.p; ++i) {
    for (std::size_t j = 0; j < g.q; ++j) {
      const double w = weight_ratio(a.proportions()[i], b.proportions()[j]);
      const double dx = ax[i] - bx[j];
      const double dy = a.values()[i] - b.values()[j];
      g.cost[i * g.q + j] = w * std::sqrt(dx * dx + dy * dy);
    }
  }
  return g;
}

}  // namespace

double weighted_frechet(const AleCurve& a, const AleCurve& b, bool normalize_knot_axis) {
  const PairGrid g = make_grid(a, b, normalize_knot_axis);
  std::vector<double> dp(g.p * g.q);
  for (std::size_t i = 0; i < g.p; ++i) {
    for (std::size_t j = 0; j < g.q; ++j) {
      double best = 0.0;
      if (i > 0 && j > 0) {
        best = std::min({dp[(i - 1) * g.q + j], dp[i * g.q + (j - 1)],
                         dp[(i - 1) * g.q + (j - 1)]});
      } else if (i > 0) {
        best = dp[(i - 1) * g.q + j];
      } else if (j > 0) {
        best = dp[i * g.q + (j - 1)];
      }
      dp[i * g.q + j] = best + g.at(i, j);
    }
  }
  return dp[(g.p - 1) * g.q + (g.q - 1)];
}

double frechet_min_variant(const AleCurve& a, const AleCurve& b, bool normalize_knot_axis) {
  const PairGrid g = make_grid(a, b, normalize_knot_axis);
  std::vector<double> dp(g.p * g.q);
  for (std::size_t i = 0; i < g.p; ++i) {
    for (std::size_t j = 0; j < g.q; ++j) {
      double best = -std::numeric_limits<double>::infinity();
      if (i > 0 && j > 0) {
        best = std::min({dp[(i - 1) * g.q + j], dp[i * g.q + (j - 1)],
                         dp[(i - 1) * g.q + (j - 1)]});
      } else if (i > 0) {
        best = dp[(i - 1) * g.q + j];
      } else if (j > 0) {
        best = dp[i * g.q + (j - 1)];
      }
      dp[i * g.q + j] = std::max(best, g.at(i, j));
    }
  }
  return dp[(g.p - 1) * g.q + (g.q - 1)];
}

namespace {

void enumerate_couplings(const PairGrid& g, std::size_t i, std::size_t j, double acc,
                         double& best) {
  acc += g.at(i, j);
  if (i + 1 == g.p && j + 1 == g.q) {
    best = std::min(best, acc);
    return;
  }
  if (i + 1 < g.p) enumerate_couplings(g, i + 1, j, acc, best);
  if (j + 1 < g.q) enumerate_couplings(g, i, j + 1, acc, best);
  if (i + 1 < g.p && j + 1 < g.q) enumerate_couplings(g, i + 1, j + 1, acc, best);
}

}  // namespace

double brute_force_frechet(const AleCurve& a, const AleCurve& b) {
  if (a.size() > 7 || b.size() > 7) {
    throw ValidationError("brute_force_frechet: curves must have at most 7 points");
  }
  const PairGrid g = make_grid(a, b, false);
  double best = std::numeric_limits<double>::infinity();
  enumerate_couplings(g, 0, 0, 0.0, best);
  return best;
}

}  // namespace mtsim
