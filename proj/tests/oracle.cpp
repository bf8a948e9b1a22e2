#include "oracle.hpp"

#include <algorithm>
#include <cmath>

namespace oracle {

namespace {

double bisect(double left, double right, double q, double eps, double h2) {
  // (left + right - 2x)/h^2 - x q / eps is strictly decreasing in x.
  double lo = 0.0;
  double hi = 0.5 * (left + right);
  for (int k = 0; k < 200; ++k) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double f = (left + right - 2.0 * mid) / h2 - mid * q / eps;
    if (f > 0.0) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

double residual(const std::vector<std::vector<double>>& u, double eps, double h2) {
  const std::size_t n = u.front().size();
  double r = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    for (std::size_t k = 1; k + 1 < n; ++k) {
      double q = 0.0;
      for (std::size_t j = 0; j < u.size(); ++j) {
        if (j != i) q += u[j][k];
      }
      const double lap = (u[i][k - 1] + u[i][k + 1] - 2.0 * u[i][k]) / h2;
      r = std::max(r, std::abs(lap - u[i][k] * q / eps));
    }
  }
  return r;
}

Solution1D sweep_until(std::vector<std::vector<double>> u, double eps, double tol, long max_sweeps) {
  const std::size_t n = u.front().size();
  const double h = 1.0 / static_cast<double>(n - 1);
  const double h2 = h * h;
  const std::size_t m = u.size();
  Solution1D s;
  s.u = std::move(u);
  for (long sweep = 1; sweep <= max_sweeps; ++sweep) {
    for (std::size_t k = 1; k + 1 < n; ++k) {
      for (std::size_t i = 0; i < m; ++i) {
        double q = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
          if (j != i) q += s.u[j][k];
        }
        s.u[i][k] = bisect(s.u[i][k - 1], s.u[i][k + 1], q, eps, h2);
      }
    }
    s.sweeps = sweep;
    if (sweep % 100 == 0) {
      s.residual = residual(s.u, eps, h2);
      if (s.residual <= tol) {
        s.converged = true;
        return s;
      }
    }
  }
  s.residual = residual(s.u, eps, h2);
  s.converged = s.residual <= tol;
  return s;
}

}  // namespace

Solution1D bisection_gauss_seidel_1d(int n, const std::vector<std::pair<double, double>>& ends, double eps,
                                     double tol, long max_sweeps) {
  // Coarse-to-fine: 2^k + 1 node levels, each started from the previous one.
  std::vector<int> levels{n};
  while ((levels.back() - 1) % 2 == 0 && (levels.back() - 1) / 2 >= 8) levels.push_back((levels.back() - 1) / 2 + 1);
  std::reverse(levels.begin(), levels.end());

  std::vector<std::vector<double>> u;
  const int n0 = levels.front();
  for (const auto& [a, b] : ends) {
    std::vector<double> f(static_cast<std::size_t>(n0));
    for (int k = 0; k < n0; ++k) f[static_cast<std::size_t>(k)] = a + (b - a) * k / (n0 - 1.0);
    f.front() = a;
    f.back() = b;
    u.push_back(std::move(f));
  }
  Solution1D s;
  long total = 0;
  for (std::size_t level = 0; level < levels.size(); ++level) {
    if (level > 0) {
      const auto nf = static_cast<std::size_t>(levels[level]);
      for (auto& f : u) {
        std::vector<double> fine(nf);
        for (std::size_t k = 0; k < nf; ++k) {
          fine[k] = (k % 2 == 0) ? f[k / 2] : 0.5 * (f[k / 2] + f[k / 2 + 1]);
        }
        f = std::move(fine);
      }
    }
    s = sweep_until(std::move(u), eps, tol, max_sweeps);
    total += s.sweeps;
    u = s.u;
  }
  s.sweeps = total;
  return s;
}

}  // namespace oracle
