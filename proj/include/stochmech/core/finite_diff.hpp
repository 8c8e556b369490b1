#pragma once

#include "stochmech/core/grid.hpp"

#include <span>
#include <vector>

namespace stochmech::fd {

/// First derivative of uniformly spaced samples: central in the interior,
/// one-sided second order at both ends.
std::vector<double> first(std::span<const double> f, double h);

/// Second derivative, same stencil policy.
std::vector<double> second(std::span<const double> f, double h);

/// Segment-wise derivatives of a grid function.
GridFunction first(const GridFunction& g);
GridFunction second(const GridFunction& g);

/// Central difference in time from three frames spaced dt apart.
GridFunction time_derivative(const GridFunction& before, const GridFunction& after, double dt);

}  // namespace stochmech::fd
