#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "rydmeas/atomic_data.hpp"

namespace rydmeas {

using Point2 = std::array<double, 2>;  // um

/// Ancilla at the origin, k measuring atoms around it. Planar.
struct Layout {
  int k = 0;
  double r_am = 0.0;  // um; nominal radius (0 for explicit layouts)
  std::vector<Point2> positions;  // measuring atoms only
  std::optional<std::uint64_t> jitter_seed;
  double jitter_sigma = 0.0;  // um, per axis
};

/// k atoms equally spaced on a circle of radius r_am, first at angle 0.
/// Throws DomainError for k < 1 or r_am <= 0.
Layout ring_layout(int k, double r_am_um);

/// Layout from explicit measuring-atom coordinates.
Layout explicit_layout(std::vector<Point2> positions);

/// Returns a copy with every coordinate displaced by an independent
/// N(0, sigma^2) draw from a generator seeded with `seed`.
Layout jitter(const Layout& layout, double sigma_um, std::uint64_t seed);

double distance(const Point2& a, const Point2& b);

/// Interaction strengths in rad/us. b0[j]: ancilla to measuring atom j;
/// b[i][j]: measuring atoms i and j (symmetric, zero diagonal).
struct InteractionMatrix {
  std::vector<double> b0;
  std::vector<std::vector<double>> b;

  int k() const { return static_cast<int>(b0.size()); }
};

/// Throws DomainError when any two atoms (including the ancilla) coincide.
InteractionMatrix interaction_matrix(const Layout& layout, const PairCoefficients& inter,
                                     const PairCoefficients& intra);

}  // namespace rydmeas
