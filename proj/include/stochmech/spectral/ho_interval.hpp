#pragma once

#include "stochmech/core/grid.hpp"

#include <cstddef>
#include <vector>

namespace stochmech {

enum class Parity { any, even, odd };

/// Eigenvalues mu of -G'' + (xi^2/4 - n - 1/2) G = mu G on an inter-node
/// interval of the n-th oscillator state (oscillator units), with G = 0 at the
/// nodes and decay at infinity, from the even/odd Weber solutions
///   y1 = e^{-xi^2/4} M(-(mu+n)/2, 1/2, xi^2/2),
///   y2 = xi e^{-xi^2/4} M(-(mu+n-1)/2, 3/2, xi^2/2).
/// Truncated ends are treated as infinite. Parity selects a sector on
/// intervals symmetric about 0.
std::vector<double> ho_interval_eigenvalues(int n, const Interval& interval, std::size_t count,
                                            Parity parity = Parity::any);

/// The boundary determinant whose zeros are the eigenvalues.
double ho_interval_determinant(int n, const Interval& interval, double mu, Parity parity = Parity::any);

}  // namespace stochmech
