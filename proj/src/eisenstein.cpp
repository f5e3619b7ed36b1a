#include "weylzeta/eisenstein.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <vector>

#include "weylzeta/errors.hpp"
#include "weylzeta/parallel.hpp"

namespace weylzeta {

namespace {

constexpr double kPi = std::numbers::pi;

cd cpow(double base, cd e) { return std::exp(e * std::log(base)); }

// sigma_w(n) = sum_{d | n} d^w
cd divisor_sigma(cd w, int n) {
  cd acc(0, 0);
  for (int d = 1; d * d <= n; ++d) {
    if (n % d) continue;
    acc += cpow(d, w);
    int q = n / d;
    if (q != d) acc += cpow(q, w);
  }
  return acc;
}

// Gauss-Legendre nodes/weights on [0,1], by Newton iteration on P_n.
struct GaussRule {
  std::vector<double> x, w;
};

const GaussRule& gauss_rule(int n) {
  static std::map<int, GaussRule> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  GaussRule r;
  r.x.resize(n);
  r.w.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      double dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    double dp = n * (x * p1 - p0) / (x * x - 1.0);
    r.x[i] = 0.5 * (x + 1.0);
    r.w[i] = 1.0 / ((1.0 - x * x) * dp * dp);
  }
  cache[n] = std::move(r);
  return cache.at(n);
}

}  // namespace

cd epstein_direct(const UpperHalfPoint& z, cd s) {
  if (!(s.real() > 1.0))
    throw RangeError("epstein_direct: requires Re s > 1 (use epstein_fourier)");
  const double x = z.x, y = z.y;

  // m = 0 row: 2 zeta(2s). For m >= 1 the inner n-sum is summed directly to
  // N with an Euler-Maclaurin tail (integral + 1/2 f + B2/2! f'), and the
  // m-tail beyond M is the n-integral approximation
  //   sum_{m>M} F(m) = c_s y^{1-2s} (zeta(2s-1) - sum_{m<=M} m^{1-2s})
  // up to the Poisson remainder O(e^{-2 pi M y}), which fixes M.
  cd total = 2.0 * zeta_complex(2.0 * s);

  const int m_cut = static_cast<int>(std::ceil(5.0 / y)) + 5;
  cd tail_zeta = zeta_complex(2.0 * s - 1.0);
  for (int m = 1; m <= m_cut; ++m) tail_zeta -= cpow(m, 1.0 - 2.0 * s);
  const cd c_s = std::exp(0.5 * std::log(kPi) + log_gamma(s - 0.5) -
                          log_gamma(s));
  total += 2.0 * c_s * cpow(y, cd(1.0, 0.0) - 2.0 * s) * tail_zeta;

  auto inner_sum = [&](int m) -> cd {
    const double a = m * x;
    const double b = m * y;
    const double b2 = b * b;
    auto g = [&](double u) -> cd { return std::exp(-s * std::log(u * u + b2)); };
    // direct block wide enough that the EM remainder (third derivative
    // term and beyond) is far below 1e-12 relative
    const double half_width = 30.0 + 3.0 * b;
    const long long lo = std::llround(std::floor(-a - half_width));
    const long long hi = std::llround(std::ceil(-a + half_width));
    cd acc(0, 0);
    for (long long n = lo; n <= hi; ++n) acc += g(n + a);
    // tails: sum_{u >= U} g = int_U^inf g + g(U)/2 - g'(U)/12 + ...
    for (int dir = 0; dir < 2; ++dir) {
      const double u0 = dir == 0 ? (hi + 1 + a) : (-(lo - 1) - a);
      const auto& rule = gauss_rule(32);
      cd integral(0, 0);
      // map [u0, inf) -> [0,1) via u = u0 / (1 - v)
      for (int i = 0; i < 32; ++i) {
        double v = rule.x[i];
        double u = u0 / (1.0 - v);
        double jac = u0 / ((1.0 - v) * (1.0 - v));
        integral += rule.w[i] * jac * g(u);
      }
      cd gu = g(u0);
      const cd q = std::exp(-(s + 1.0) * std::log(u0 * u0 + b2));
      cd gpu = -2.0 * s * u0 * q;
      cd gppp = 12.0 * s * (s + 1.0) * u0 * q / (u0 * u0 + b2) -
                8.0 * s * (s + 1.0) * (s + 2.0) * u0 * u0 * u0 * q /
                    ((u0 * u0 + b2) * (u0 * u0 + b2));
      acc += integral + 0.5 * gu - gpu / 12.0 + gppp / 720.0;
    }
    return acc;
  };

  std::vector<cd> rows(m_cut);
  parallel_for(static_cast<std::size_t>(m_cut),
               [&](std::size_t i) { rows[i] = inner_sum(static_cast<int>(i + 1)); });
  total += 2.0 * pairwise_sum(rows);

  // Completed normalization matching the Fourier side and the
  // Rankin-Selberg closed form: xi(2s) E(z,s), i.e. half the full sum.
  return 0.5 * std::exp(-s * std::log(kPi) + log_gamma(s)) * cpow(y, s) * total;
}

cd epstein_fourier(const UpperHalfPoint& z, cd s, int n_max) {
  const double x = z.x, y = z.y;
  if (y < 0.4)
    throw RangeError("epstein_fourier: expansion used for y >= 1/2");
  for (cd bad : {2.0 * s, 2.0 - 2.0 * s, 2.0 * s - 1.0})
    if (std::abs(bad) < 1e-12 || std::abs(bad - cd(1, 0)) < 1e-12)
      throw PoleError("epstein_fourier: xi argument at a pole (s in {0,1/2,1})");
  if (n_max <= 0) {
    // |K_s(2 pi n y)| <= e^{-pi n y} K_{Re s}(2) for 2 pi n y > 4, so the
    // cutoff comes from e^{-pi n y} < 1e-16.
    n_max = static_cast<int>(std::ceil(40.0 / (kPi * y))) + 3;
    n_max = std::min(n_max, 200);
  }
  cd a0 = completed_xi(2.0 * s) * cpow(y, s) +
          completed_xi(2.0 - 2.0 * s) * cpow(y, 1.0 - s);
  std::vector<cd> terms(n_max);
  parallel_for(static_cast<std::size_t>(n_max), [&](std::size_t i) {
    int n = static_cast<int>(i + 1);
    cd an = 2.0 * cpow(n, s - 0.5) * divisor_sigma(1.0 - 2.0 * s, n) *
            std::sqrt(y) * bessel_k(s - 0.5, 2.0 * kPi * n * y);
    terms[i] = an * 2.0 * std::cos(2.0 * kPi * n * x);
  });
  return a0 + pairwise_sum(terms);
}

cd truncated_integral_geo(cd s, double t_cut, double tol) {
  if (t_cut < 1.0)
    throw RangeError("truncated_integral_geo: requires T >= 1");
  // Integrand through the Fourier expansion (valid for every s off the xi
  // poles); region split at the unit circle, tensor Gauss-Legendre panels,
  // refined until two successive levels agree.
  auto integrand = [&](double x, double y) -> cd {
    return epstein_fourier({x, y}, s) / (y * y);
  };

  auto integrate = [&](int panels) -> cd {
    const auto& rule = gauss_rule(12);
    const int nx = panels;
    struct Cell {
      double x0, x1;
      int region;  // 0: curved bottom, 1+: unit slab index in y
      double y0, y1;
    };
    std::vector<Cell> cells;
    for (int ix = 0; ix < nx; ++ix) {
      double x0 = -0.5 + ix * 1.0 / nx;
      double x1 = x0 + 1.0 / nx;
      cells.push_back({x0, x1, 0, 0.0, 0.0});
    }
    if (t_cut > 1.0) {
      int slabs = static_cast<int>(std::ceil((t_cut - 1.0))) * panels / 2 + 1;
      for (int kslab = 0; kslab < slabs; ++kslab) {
        double y0 = 1.0 + (t_cut - 1.0) * kslab / slabs;
        double y1 = 1.0 + (t_cut - 1.0) * (kslab + 1) / slabs;
        for (int ix = 0; ix < nx; ++ix) {
          double x0 = -0.5 + ix * 1.0 / nx;
          cells.push_back({x0, x0 + 1.0 / nx, 1, y0, y1});
        }
      }
    }
    std::vector<cd> vals(cells.size());
    parallel_for(cells.size(), [&](std::size_t ci) {
      const Cell& c = cells[ci];
      cd acc(0, 0);
      for (std::size_t i = 0; i < rule.x.size(); ++i) {
        double x = c.x0 + (c.x1 - c.x0) * rule.x[i];
        double wx = (c.x1 - c.x0) * rule.w[i];
        double ylo = c.region == 0 ? std::sqrt(1.0 - x * x) : c.y0;
        double yhi = c.region == 0 ? 1.0 : c.y1;
        if (yhi <= ylo) continue;
        for (std::size_t j = 0; j < rule.x.size(); ++j) {
          double y = ylo + (yhi - ylo) * rule.x[j];
          double wy = (yhi - ylo) * rule.w[j];
          acc += wx * wy * integrand(x, y);
        }
      }
      vals[ci] = acc;
    });
    return pairwise_sum(vals);
  };

  cd prev = integrate(2);
  for (int panels = 4; panels <= 16; panels *= 2) {
    cd cur = integrate(panels);
    if (std::abs(cur - prev) <= 0.5 * tol) return cur;
    prev = cur;
  }
  throw QuadratureError(
      "truncated_integral_geo: refinement stalled, achieved ~" +
      std::to_string(std::abs(prev.real())) + " level only");
}

cd truncated_integral_closed(cd s, double t_cut) {
  for (cd bad : {s, s - 1.0})
    if (std::abs(bad) < 1e-12)
      throw PoleError("truncated_integral_closed: pole at s in {0,1}");
  for (cd bad : {2.0 * s, 2.0 * s - 1.0})
    if (std::abs(bad) < 1e-12 || std::abs(bad - cd(1, 0)) < 1e-12)
      throw PoleError("truncated_integral_closed: xi argument at a pole");
  return completed_xi(2.0 * s) * cpow(t_cut, s - 1.0) / (s - 1.0) -
         completed_xi(2.0 * s - 1.0) * cpow(t_cut, -s) / s;
}

cd rank2_zeta(cd sigma) {
  if (std::abs(sigma) < 1e-12 || std::abs(sigma - cd(1, 0)) < 1e-12)
    throw PoleError("rank2_zeta: pole at sigma in {0,1}");
  if (std::abs(2.0 * sigma - cd(1, 0)) < 2e-3) {
    // the xi(2 sigma) and xi(2 sigma - 1) poles cancel at sigma = 1/2;
    // average on a small circle to keep full accuracy near the cancellation
    const double r = 4e-3;
    cd acc(0, 0);
    for (int k = 0; k < 4; ++k) {
      cd p = sigma + std::polar(r, kPi * (0.25 + 0.5 * k));
      acc += completed_xi(2.0 * p) / (p - 1.0) -
             completed_xi(2.0 * p - 1.0) / p;
    }
    return 0.25 * acc;
  }
  return completed_xi(2.0 * sigma) / (sigma - 1.0) -
         completed_xi(2.0 * sigma - 1.0) / sigma;
}

}  // namespace weylzeta
