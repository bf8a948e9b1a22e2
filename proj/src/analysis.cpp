#include "seg/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace seg {

namespace {

void least_squares(RateFit& fit) {
  const double n = static_cast<double>(fit.samples.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (const auto& s : fit.samples) {
    const double x = std::log(s.epsilon);
    const double y = std::log(s.distance);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    syy += y * y;
  }
  const double vx = sxx - sx * sx / n;
  const double vy = syy - sy * sy / n;
  const double cxy = sxy - sx * sy / n;
  if (!(vx > 0.0)) throw std::invalid_argument("rate fit needs distinct epsilon values");
  fit.slope = cxy / vx;
  fit.intercept = (sy - fit.slope * sx) / n;
  fit.r_squared = vy > 0.0 ? (cxy * cxy) / (vx * vy) : 1.0;
}

}  // namespace

RateFit fit_rate(std::vector<RateSample> samples) {
  std::sort(samples.begin(), samples.end(),
            [](const RateSample& a, const RateSample& b) { return a.epsilon > b.epsilon; });
  RateFit fit;
  for (const auto& s : samples) {
    if (!(s.epsilon > 0.0)) throw std::invalid_argument("rate samples need positive epsilon");
    if (s.distance < 0.0) throw std::invalid_argument("negative distance in rate samples");
    (s.distance > 0.0 ? fit.samples : fit.excluded).push_back(s);
  }
  if (fit.samples.size() < 3) throw std::invalid_argument("rate fit needs at least 3 positive samples");
  least_squares(fit);
  if (fit.r_squared < 0.98 && fit.samples.size() >= 5) {
    RateFit trimmed = fit;
    trimmed.dropped = trimmed.samples.front();
    trimmed.samples.erase(trimmed.samples.begin());
    least_squares(trimmed);
    return trimmed;
  }
  return fit;
}

RateStudy rate_study(const Grid& g, std::span<const LadderRung> ladder, const DensityTuple& reference) {
  RateStudy study;
  const std::size_t m = reference.m();
  std::vector<std::vector<RateSample>> per_species(m);
  std::vector<RateSample> worst;
  for (const auto& rung : ladder) {
    if (rung.u == nullptr || rung.u->m() != m) throw std::invalid_argument("ladder rung does not match reference");
    double w = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double d = discrete_h1_norm(g, difference((*rung.u)[i], reference[i]));
      per_species[i].push_back({rung.epsilon, d});
      w = std::max(w, d);
    }
    worst.push_back({rung.epsilon, w});
  }
  for (auto& samples : per_species) study.species.push_back(fit_rate(std::move(samples)));
  study.worst = fit_rate(std::move(worst));
  return study;
}

Comparison compare_limits(const Grid& g, const DensityTuple& a, const DensityTuple& b) {
  if (a.m() != b.m()) throw std::invalid_argument("limits have different species counts");
  for (std::size_t i = 0; i < a.m(); ++i) {
    if (a[i].size() != g.size() || b[i].size() != g.size()) {
      throw std::invalid_argument("limit does not match grid");
    }
    for (std::size_t node : g.boundary_nodes()) {
      if (a[i][node] != b[i][node]) throw std::invalid_argument("limits have different boundary data");
    }
  }
  Comparison c;
  for (std::size_t i = 0; i < a.m(); ++i) {
    double mx = 0.0;
    for (std::size_t node : g.active_nodes()) mx = std::max(mx, std::abs(a[i][node] - b[i][node]));
    c.max_norm.push_back(mx);
    c.h1.push_back(discrete_h1_norm(g, difference(a[i], b[i])));
    c.headline = std::max(c.headline, mx);
  }
  c.pq = compute_pq(g, a, b);
  return c;
}

}  // namespace seg
