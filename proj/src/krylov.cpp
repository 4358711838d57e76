#include "nonloc/krylov.hpp"

#include <cmath>

#include <fmt/format.h>

#include "nonloc/errors.hpp"

namespace nonloc {
namespace {

using C = std::complex<double>;

C dot(const CVec& a, const CVec& b) {
  C s{};
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

double norm(const CVec& a) {
  double s = 0.0;
  for (const auto& v : a) s += std::norm(v);
  return std::sqrt(s);
}

CVec residual(const LinearOperator& apply, const CVec& b, const CVec& x) {
  CVec r = apply(x);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = b[i] - r[i];
  return r;
}

}  // namespace

SolveStats bicgstab(const LinearOperator& apply, const CVec& b, CVec& x, double tol,
                    int max_iterations) {
  SolveStats stats;
  const double bnorm = norm(b);
  if (bnorm == 0.0) {
    std::fill(x.begin(), x.end(), C{});
    stats.converged = true;
    return stats;
  }
  CVec r = residual(apply, b, x);
  double rel = norm(r) / bnorm;
  if (rel <= tol) {
    stats.relative_residual = rel;
    stats.converged = true;
    return stats;
  }
  CVec r_hat = r;
  CVec p(r.size(), C{}), v(r.size(), C{}), s(r.size());
  C rho{1.0}, alpha{1.0}, omega{1.0};

  for (int it = 1; it <= max_iterations; ++it) {
    const C rho_new = dot(r_hat, r);
    if (std::abs(rho_new) < 1e-300) {
      // Shadow residual became orthogonal: restart from the current residual.
      r = residual(apply, b, x);
      r_hat = r;
      std::fill(p.begin(), p.end(), C{});
      std::fill(v.begin(), v.end(), C{});
      rho = alpha = omega = C{1.0};
      continue;
    }
    const C beta = (rho_new / rho) * (alpha / omega);
    rho = rho_new;
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = r[i] + beta * (p[i] - omega * v[i]);
    v = apply(p);
    alpha = rho / dot(r_hat, v);
    for (std::size_t i = 0; i < s.size(); ++i) s[i] = r[i] - alpha * v[i];
    if (norm(s) / bnorm <= tol) {
      for (std::size_t i = 0; i < x.size(); ++i) x[i] += alpha * p[i];
      stats.iterations = it;
      break;
    }
    const CVec t = apply(s);
    const double tt = std::norm(dot(t, t)) > 0.0 ? dot(t, t).real() : 0.0;
    omega = tt > 0.0 ? dot(t, s) / tt : C{};
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += alpha * p[i] + omega * s[i];
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = s[i] - omega * t[i];
    stats.iterations = it;
    if (norm(r) / bnorm <= tol) break;
  }
  // Recursively updated residuals drift; confirm with a true residual.
  stats.relative_residual = norm(residual(apply, b, x)) / bnorm;
  stats.converged = stats.relative_residual <= tol * 10.0;
  if (!stats.converged)
    throw IterationError(fmt::format("BiCGSTAB did not converge in {} iterations (relative residual {:.3e}, tol {:.1e})",
                                     stats.iterations, stats.relative_residual, tol),
                         stats.iterations, stats.relative_residual);
  return stats;
}

SolveStats conjugate_gradient(const RealOperator& apply, const std::vector<double>& b,
                              std::vector<double>& x, double tol, int max_iterations) {
  auto rdot = [](const std::vector<double>& a, const std::vector<double>& c) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * c[i];
    return s;
  };
  SolveStats stats;
  const double bnorm = std::sqrt(rdot(b, b));
  if (bnorm == 0.0) {
    std::fill(x.begin(), x.end(), 0.0);
    stats.converged = true;
    return stats;
  }
  // The recursive residual drifts from the true one near machine precision,
  // so restart from the current iterate until the true residual is small.
  for (int restart = 0; restart < 5; ++restart) {
    std::vector<double> r = apply(x);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = b[i] - r[i];
    double rr = rdot(r, r);
    stats.relative_residual = std::sqrt(rr) / bnorm;
    if (stats.relative_residual <= tol || stats.iterations >= max_iterations) break;
    std::vector<double> p = r;
    while (stats.iterations < max_iterations && std::sqrt(rr) / bnorm > tol) {
      const auto ap = apply(p);
      const double alpha = rr / rdot(p, ap);
      for (std::size_t i = 0; i < x.size(); ++i) {
        x[i] += alpha * p[i];
        r[i] -= alpha * ap[i];
      }
      const double rr_new = rdot(r, r);
      for (std::size_t i = 0; i < p.size(); ++i) p[i] = r[i] + (rr_new / rr) * p[i];
      rr = rr_new;
      ++stats.iterations;
    }
  }
  auto true_r = apply(x);
  double res = 0.0;
  for (std::size_t i = 0; i < b.size(); ++i) res += (b[i] - true_r[i]) * (b[i] - true_r[i]);
  stats.relative_residual = std::sqrt(res) / bnorm;
  stats.converged = stats.relative_residual <= tol * 10.0;
  if (!stats.converged)
    throw IterationError(fmt::format("CG did not converge in {} iterations (relative residual {:.3e}, tol {:.1e})",
                                     stats.iterations, stats.relative_residual, tol),
                         stats.iterations, stats.relative_residual);
  return stats;
}

}  // namespace nonloc
