#pragma once

#include "mtsim/core.hpp"

namespace mtsim {

/// Support-mismatch weight for a pair of bin proportions: max/min, symmetric,
/// always >= 1. Both arguments must lie in (0, 1].
double weight_ratio(double p, double q);

/// Weighted discrete Frechet distance (sum variant): the minimum over
/// monotone couplings of the sum of weight_ratio-weighted Euclidean distances
/// between (knot, value) vertices, computed by an O(p*q) dynamic program.
/// With normalize_knot_axis, both curves' knots are min-max scaled to [0, 1]
/// over their combined range before distances are taken (off by default).
double weighted_frechet(const AleCurve& a, const AleCurve& b, bool normalize_knot_axis = false);

/// Classic max-cost formulation over the same weighted pair distances. Kept
/// for comparing against the sum variant; the similarity measure uses the sum.
double frechet_min_variant(const AleCurve& a, const AleCurve& b,
                           bool normalize_knot_axis = false);

/// Test oracle: exhaustively enumerates every monotone coupling and returns
/// the minimum summed weighted cost. Limited to curves with at most 7 points.
double brute_force_frechet(const AleCurve& a, const AleCurve& b);

}  // namespace mtsim
