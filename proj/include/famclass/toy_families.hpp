#pragma once

// Built-in toy sections addressable by name from the CLI.

#include <string>
#include <vector>

#include "famclass/vnengine.hpp"

namespace famclass::vn::toys {

/// s(x) = x on [-1, 1].
ToyFredholmFamily line_identity();
/// s(x) = x^3 - x on [-2, 2]; zeros -1, 0, 1 with signs +, -, +.
ToyFredholmFamily line_cubic();
/// s(x) = x^2 on [-1, 1]; one degenerate zero.
ToyFredholmFamily line_square();
/// s(x) = x^2 + 1; no zeros.
ToyFredholmFamily line_positive();
/// z -> z^2 on [-2, 2]^2 as a real map R^2 -> R^2.
ToyFredholmFamily planar_z2();
/// Over T^1: fiber R, target R^2, s(b, x) = (x, cos(pi b)), glued by x -> -x
/// on the fiber and -1 on the target.
ToyFredholmFamily moebius();
/// Over T^1: s(b, x) = (x, 1) with identity gluing.
ToyFredholmFamily untwisted();
/// Product of n copies of the Moebius family over T^n, index -n.
ToyFredholmFamily moebius_product(int n);
/// Over T^1: fiber R, target C, z = p(x) e^{2 pi i b} + 2 (1 - p(x)) with p a
/// smoothstep from 0 at x = -1 to 1 at x = 1. One positive zero (b = 1/2).
ToyFredholmFamily winding();

/// "line-identity", "line-cubic", "line-square", "line-positive", "planar-z2",
/// "moebius-1", "untwisted-1", "winding-1", "moebius-prod-<n>".
ToyFredholmFamily builtin(const std::string& name);
std::vector<std::string> builtin_names();

}  // namespace famclass::vn::toys
