#pragma once

#include <vector>

#include "nonloc/field.hpp"

namespace nonloc {

// Derivatives are spectral on periodic grids (the Nyquist bin of odd
// derivatives is dropped) and second-order central differences with zero
// walls on dirichlet-zero grids.

ComplexField gradient(const ComplexField& f, int axis);
RealField gradient(const RealField& f, int axis);

/// All partial derivatives at once; on periodic grids this shares one
/// forward transform.
std::vector<ComplexField> gradients(const ComplexField& f);
VectorField gradients(const RealField& f);

/// On dirichlet-zero grids the outermost points use one-sided differences:
/// a vector field (a current, a Poisson gradient) need not vanish at the wall.
RealField divergence(const VectorField& v);

ComplexField laplacian(const ComplexField& f);
RealField laplacian(const RealField& f);

/// Unitary DFT (1/sqrt(N) both ways) on periodic grids. Bin i along an axis
/// corresponds to Grid::wavenumber(axis, i).
ComplexField to_momentum(const ComplexField& f);
ComplexField from_momentum(const ComplexField& f);

/// Multiplies the spectrum by m(k) and transforms back. `multiplier` receives
/// the wavevector of each bin.
ComplexField apply_momentum_multiplier(const ComplexField& f,
                                       const std::function<Complex(const Point&)>& multiplier);

/// Riemann sum times cell volume. On dirichlet-zero grids this is the
/// trapezoid rule, since the omitted wall samples are zero. Summation order
/// is fixed (flat index order).
double integrate(const RealField& f);
Complex integrate(const ComplexField& f);

/// <a, b> = integral of conj(a) b.
Complex inner_product(const ComplexField& a, const ComplexField& b);
double norm_squared(const ComplexField& f);
/// sqrt(integral f^2).
double l2_norm(const RealField& f);
double l2_norm(const ComplexField& f);
double max_abs(const RealField& f);
double max_abs(const ComplexField& f);

}  // namespace nonloc
