#pragma once

#include <complex>
#include <functional>
#include <vector>

namespace nonloc {

using CVec = std::vector<std::complex<double>>;
using LinearOperator = std::function<CVec(const CVec&)>;

struct SolveStats {
  int iterations = 0;
  double relative_residual = 0.0;
  bool converged = false;
};

/// Matrix-free BiCGSTAB for A x = b. `x` holds the initial guess on entry.
/// Stops when ||b - A x|| <= tol ||b||. Throws IterationError on failure.
SolveStats bicgstab(const LinearOperator& apply, const CVec& b, CVec& x, double tol,
                    int max_iterations);

/// Conjugate gradients for a symmetric positive definite real operator.
using RealOperator = std::function<std::vector<double>(const std::vector<double>&)>;
SolveStats conjugate_gradient(const RealOperator& apply, const std::vector<double>& b,
                              std::vector<double>& x, double tol, int max_iterations);

}  // namespace nonloc
