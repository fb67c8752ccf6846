#include "rydmeas/geometry.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "rydmeas/errors.hpp"

namespace rydmeas {

Layout ring_layout(int k, double r_am_um) {
  if (k < 1) throw DomainError("ring_layout: k must be >= 1");
  if (!(r_am_um > 0.0)) throw DomainError("ring_layout: r_am must be positive");
  Layout l;
  l.k = k;
  l.r_am = r_am_um;
  l.positions.reserve(k);
  for (int j = 0; j < k; ++j) {
    const double phi = 2.0 * std::numbers::pi * j / k;
    l.positions.push_back({r_am_um * std::cos(phi), r_am_um * std::sin(phi)});
  }
  return l;
}

Layout explicit_layout(std::vector<Point2> positions) {
  if (positions.empty()) throw DomainError("explicit_layout: at least one measuring atom required");
  Layout l;
  l.k = static_cast<int>(positions.size());
  l.positions = std::move(positions);
  return l;
}

Layout jitter(const Layout& layout, double sigma_um, std::uint64_t seed) {
  if (sigma_um < 0.0) throw DomainError("jitter: sigma must be non-negative");
  Layout out = layout;
  out.jitter_seed = seed;
  out.jitter_sigma = sigma_um;
  if (sigma_um == 0.0) return out;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, sigma_um);
  for (auto& p : out.positions) {
    p[0] += normal(rng);
    p[1] += normal(rng);
  }
  return out;
}

double distance(const Point2& a, const Point2& b) { return std::hypot(a[0] - b[0], a[1] - b[1]); }

InteractionMatrix interaction_matrix(const Layout& layout, const PairCoefficients& inter,
                                     const PairCoefficients& intra) {
  const int k = static_cast<int>(layout.positions.size());
  if (k < 1) throw DomainError("interaction_matrix: empty layout");
  constexpr Point2 origin{0.0, 0.0};
  constexpr double kMinSeparation = 1e-9;  // um

  InteractionMatrix m;
  m.b0.resize(k);
  m.b.assign(k, std::vector<double>(k, 0.0));
  for (int j = 0; j < k; ++j) {
    const double r = distance(layout.positions[j], origin);
    if (r < kMinSeparation) throw DomainError("interaction_matrix: measuring atom coincides with the ancilla");
    m.b0[j] = pair_potential_angular(inter, r);
  }
  for (int i = 0; i < k; ++i) {
    for (int j = i + 1; j < k; ++j) {
      const double r = distance(layout.positions[i], layout.positions[j]);
      if (r < kMinSeparation) throw DomainError("interaction_matrix: coincident measuring atoms");
      m.b[i][j] = m.b[j][i] = pair_potential_angular(intra, r);
    }
  }
  return m;
}

}  // namespace rydmeas
