#pragma once

namespace stochmech {

/// Kummer's confluent hypergeometric function M(a, b; z) for z >= 0.
///
/// Power series for moderate z; beyond that (or when the series cancels badly)
/// the value is carried outward by local Taylor steps of Kummer's equation.
double confluent_M(double a, double b, double z);

}  // namespace stochmech
