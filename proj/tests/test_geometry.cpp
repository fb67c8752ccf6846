#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "rydmeas/errors.hpp"
#include "rydmeas/geometry.hpp"
#include "rydmeas/units.hpp"

using namespace rydmeas;

namespace {

const AtomicTables& T() { return AtomicTables::builtin(); }

double mhz(double angular) { return units::angular_to_mhz(angular); }

InteractionMatrix ring60(int k) {
  return interaction_matrix(ring_layout(k, 4.0), T().pair("Rb60s-Cs64s:RbCs"), T().pair("Rb60s-Cs64s:RbRb"));
}

}  // namespace

TEST(Ring, FiveAtomNeighbourDistance) {
  const Layout l = ring_layout(5, 2.5);
  EXPECT_NEAR(distance(l.positions[0], l.positions[1]), 2.94, 0.005);
}

TEST(Ring, SingleAtom) {
  const Layout l = ring_layout(1, 2.5);
  ASSERT_EQ(l.positions.size(), 1u);
  EXPECT_DOUBLE_EQ(l.positions[0][0], 2.5);
  EXPECT_DOUBLE_EQ(l.positions[0][1], 0.0);
}

TEST(Ring, FourAtomChords) {
  const Layout l = ring_layout(4, 4.0);
  EXPECT_NEAR(distance(l.positions[0], l.positions[1]), 5.657, 5e-4);
  EXPECT_NEAR(distance(l.positions[0], l.positions[2]), 8.0, 1e-12);
}

TEST(Ring, AllChordsMatchClosedForm) {
  for (int k = 1; k <= 6; ++k) {
    const Layout l = ring_layout(k, 3.3);
    for (int i = 0; i < k; ++i) {
      EXPECT_NEAR(std::hypot(l.positions[i][0], l.positions[i][1]), 3.3, 1e-9);
      for (int j = 0; j < k; ++j) {
        EXPECT_NEAR(distance(l.positions[i], l.positions[j]), oracle::chord(i, j, k, 3.3), 1e-12);
      }
    }
  }
}

TEST(Ring, RejectsBadInput) {
  EXPECT_THROW(ring_layout(0, 2.5), DomainError);
  EXPECT_THROW(ring_layout(3, 0.0), DomainError);
}

TEST(Interactions, FiveAtomAnchors) {
  const auto m = interaction_matrix(ring_layout(5, 2.5), T().pair("Rb46s-Cs48s:RbCs"), T().pair("Rb46s-Cs48s:RbRb"));
  for (double b0 : m.b0) EXPECT_NEAR(mhz(b0), 156.0, 156.0 * 0.01);
  EXPECT_NEAR(mhz(m.b[0][1]), 9.0, 9.0 * 0.1);
  EXPECT_NEAR(mhz(m.b[0][2]), 0.49, 0.49 * 0.05);  // next-nearest, 4.76 um
}

TEST(Interactions, RingAnchorsAtFourMicrons) {
  EXPECT_NEAR(mhz(ring60(4).b[0][1]), 4.7, 4.7 * 0.05);
  EXPECT_NEAR(mhz(ring60(2).b[0][1]), 0.8, 0.8 * 0.05);
  const auto m3 = ring60(3);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      if (i != j) {
        EXPECT_NEAR(mhz(m3.b[i][j]), 1.6, 1.6 * 0.05);
      }
    }
  }
  for (double b0 : ring60(4).b0) EXPECT_NEAR(mhz(b0), 110.0, 110.0 * 0.01);
}

TEST(Interactions, SingleAtomHasZeroIntraMatrix) {
  const auto m = ring60(1);
  ASSERT_EQ(m.b.size(), 1u);
  ASSERT_EQ(m.b[0].size(), 1u);
  EXPECT_EQ(m.b[0][0], 0.0);
}

TEST(Interactions, SymmetricNonNegativeCirculant) {
  for (int k = 2; k <= 6; ++k) {
    const auto m = ring60(k);
    for (int i = 0; i < k; ++i) {
      EXPECT_NEAR(m.b0[i], m.b0[0], 1e-9 * m.b0[0]);
      EXPECT_EQ(m.b[i][i], 0.0);
      for (int j = 0; j < k; ++j) {
        EXPECT_GE(m.b[i][j], 0.0);
        EXPECT_EQ(m.b[i][j], m.b[j][i]);
        // cyclic relabelling i -> i+1
        EXPECT_NEAR(m.b[(i + 1) % k][(j + 1) % k], m.b[i][j], 1e-9 * m.b[0][1]);
      }
    }
  }
}

TEST(Interactions, CoincidentAtomsRejected) {
  const auto inter = T().pair("Rb60s-Cs64s:RbCs");
  const auto intra = T().pair("Rb60s-Cs64s:RbRb");
  EXPECT_THROW(interaction_matrix(explicit_layout({{1.0, 0.0}, {1.0, 0.0}}), inter, intra), DomainError);
  EXPECT_THROW(interaction_matrix(explicit_layout({{0.0, 0.0}}), inter, intra), DomainError);
}

TEST(Jitter, DeterministicAndSeeded) {
  const Layout base = ring_layout(5, 2.5);
  const Layout a = jitter(base, 0.04, 11);
  const Layout b = jitter(base, 0.04, 11);
  const Layout c = jitter(base, 0.04, 12);
  EXPECT_EQ(a.positions, b.positions);
  EXPECT_NE(a.positions, c.positions);
  EXPECT_EQ(a.jitter_seed, std::optional<std::uint64_t>(11));
  for (int i = 0; i < 5; ++i) {
    EXPECT_LT(distance(a.positions[i], base.positions[i]), 0.04 * 6);
  }
  EXPECT_EQ(jitter(base, 0.0, 3).positions, base.positions);
}

TEST(Jitter, SpreadMatchesSigma) {
  const Layout base = ring_layout(1, 2.5);
  double sum2 = 0.0;
  const int n = 20000;
  for (int s = 0; s < n; ++s) {
    const Layout l = jitter(base, 0.04, static_cast<std::uint64_t>(s));
    sum2 += std::pow(l.positions[0][1], 2);
  }
  EXPECT_NEAR(std::sqrt(sum2 / n), 0.04, 0.04 * 0.03);
}
