#pragma once

#include <optional>
#include <span>
#include <vector>

#include "seg/grid.hpp"
#include "seg/verifier.hpp"

namespace seg {

struct RateSample {
  double epsilon = 0.0;
  double distance = 0.0;
};

struct RateFit {
  std::vector<RateSample> samples;   ///< used in the fit, decreasing epsilon
  std::vector<RateSample> excluded;  ///< zero distances, left out of the log fit
  std::optional<RateSample> dropped; ///< largest-epsilon sample trimmed for a poor fit
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

/// Least-squares fit of log(distance) against log(epsilon).
///
/// Needs at least three positive distances. If r^2 < 0.98 and at least four
/// samples remain, the largest-epsilon sample is dropped once and the fit redone.
RateFit fit_rate(std::vector<RateSample> samples);

struct LadderRung {
  double epsilon = 0.0;
  const DensityTuple* u = nullptr;
};

struct RateStudy {
  std::vector<RateFit> species;
  /// Fit of the per-rung maximum distance over species.
  RateFit worst;
};

/// H^1 distance of each rung to `reference`, fitted per species.
RateStudy rate_study(const Grid& g, std::span<const LadderRung> ladder, const DensityTuple& reference);

struct Comparison {
  std::vector<double> max_norm;
  std::vector<double> h1;
  PQReport pq;
  double headline = 0.0;  ///< max over species of the nodal max-norm distance
};

/// Distances and P/Q between two limits sharing grid, species count and boundary data.
Comparison compare_limits(const Grid& g, const DensityTuple& a, const DensityTuple& b);

}  // namespace seg
