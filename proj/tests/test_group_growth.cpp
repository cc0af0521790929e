#include <gtest/gtest.h>

#include <cmath>
#include <cstdint>
#include <set>
#include <sstream>
#include <tuple>
#include <vector>

#include "slowvol/errors.hpp"
#include "slowvol/group_growth.hpp"

using namespace slowvol;

namespace {

// |B(m)| for Z^d with standard generators, counted by brute force.
std::uint64_t lattice_ball(int d, int m) {
  std::uint64_t n = 0;
  std::vector<int> v(static_cast<std::size_t>(d), -m);
  while (true) {
    int l1 = 0;
    for (int c : v) l1 += std::abs(c);
    if (l1 <= m) ++n;
    std::size_t i = 0;
    while (i < v.size() && v[i] == m) v[i++] = -m;
    if (i == v.size()) break;
    ++v[i];
  }
  return n;
}

// Heisenberg ball sizes by BFS on triples with the group law
// (a,b,c)(a',b',c') = (a+a', b+b', c+c'+ab').
std::vector<std::uint64_t> heisenberg_oracle(int m_max) {
  using T = std::tuple<long, long, long>;
  auto mul = [](const T& g, const T& h) {
    auto [a, b, c] = g;
    auto [x, y, z] = h;
    return T{a + x, b + y, c + z + a * y};
  };
  const std::vector<T> gens{{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}};
  std::set<T> seen{{0, 0, 0}};
  std::vector<T> frontier{{0, 0, 0}};
  std::vector<std::uint64_t> out{1};
  for (int m = 1; m <= m_max; ++m) {
    std::vector<T> next;
    for (const auto& g : frontier)
      for (const auto& s : gens) {
        T h = mul(g, s);
        if (seen.insert(h).second) next.push_back(h);
      }
    frontier = std::move(next);
    out.push_back(seen.size());
  }
  return out;
}

}  // namespace

TEST(IntMatrix, InverseAndDeterminant) {
  IntMatrix a{{1, 2, 3}, {0, 1, 4}, {0, 0, 1}};
  EXPECT_EQ(determinant(a), 1);
  EXPECT_TRUE((a * inverse(a)).is_identity());
  EXPECT_TRUE(a.is_unitriangular());
  IntMatrix b{{2, 1}, {1, 1}};
  EXPECT_EQ(determinant(b), 1);
  EXPECT_FALSE(b.is_unitriangular());
  EXPECT_TRUE((inverse(b) * b).is_identity());
  EXPECT_THROW(inverse(IntMatrix{{2, 0}, {0, 1}}), NonInvertibleGenerator);
}

TEST(IntMatrix, OverflowIsReported) {
  IntMatrix big{{1, INT64_MAX / 2 + 1}, {0, 1}};
  EXPECT_THROW(big * big, ArithmeticOverflow);
}

TEST(GroupGrowth, TrivialGroup) {
  GeneratorSet empty(3);
  EXPECT_EQ(ball_counts(empty, 5, 100).counts, (std::vector<std::uint64_t>{1, 1, 1, 1, 1, 1}));
  GeneratorSet id(2, {IntMatrix::identity(2)});
  EXPECT_TRUE(malcev_lcs_ranks(id).ranks.empty());
}

TEST(GroupGrowth, FreeAbelianMatchesLatticeCount) {
  for (int d : {1, 2, 3}) {
    const auto s = ball_counts(catalog::free_abelian(static_cast<std::size_t>(d)), 8, 1000000);
    for (int m = 0; m <= 8; ++m) EXPECT_EQ(s.counts[static_cast<std::size_t>(m)], lattice_ball(d, m));
  }
}

TEST(GroupGrowth, HeisenbergMatchesTripleLaw) {
  const auto s = ball_counts(catalog::heisenberg(), 10, 1000000);
  const auto oracle = heisenberg_oracle(10);
  EXPECT_EQ(s.counts, oracle);
  EXPECT_EQ(oracle, (std::vector<std::uint64_t>{1, 5, 17, 53, 135, 299, 593, 1069, 1793, 2845, 4309}));
}

TEST(GroupGrowth, HeisenbergDegreeIsFour) {
  const auto s = ball_counts(catalog::heisenberg(), 40, 20000000);
  const auto fit = slow_growth_exponent(s, default_group_fit_options());
  EXPECT_EQ(fit.classification, GrowthClass::polynomial);
  EXPECT_NEAR(fit.exponent, 4.0, 0.15);
}

TEST(GroupGrowth, SanovIsFree) {
  const auto s = ball_counts(catalog::sanov_free_group(), 7, 1000000);
  for (std::size_t m = 0; m <= 7; ++m)
    EXPECT_EQ(s.counts[m], 2 * static_cast<std::uint64_t>(std::pow(3, m)) - 1);
}

TEST(GroupGrowth, FreeGroupSeriesIsExponential) {
  GrowthSeries s;
  for (int m = 0; m <= 14; ++m) s.counts.push_back(2 * static_cast<std::uint64_t>(std::pow(3, m)) - 1);
  EXPECT_EQ(slow_growth_exponent(s, default_group_fit_options()).classification,
            GrowthClass::exponential);
}

TEST(GroupGrowth, ExponentIndependentOfGenerators) {
  const auto a = slow_growth_exponent(ball_counts(catalog::free_abelian(2), 40, 10000000), 0.5);
  const auto b =
      slow_growth_exponent(ball_counts(catalog::free_abelian2_redundant(), 40, 10000000), 0.5);
  EXPECT_NEAR(a.exponent, 2.0, 0.05);
  EXPECT_NEAR(a.exponent, b.exponent, 0.1);
}

TEST(GroupGrowth, BudgetExceeded) {
  try {
    ball_counts(catalog::sanov_free_group(), 30, 1000);
    FAIL() << "expected budget exhaustion";
  } catch (const BudgetExceeded& e) {
    EXPECT_EQ(e.kind(), ErrorKind::budget_exceeded);
    EXPECT_GE(e.size(), 1000u);
    EXPECT_GE(e.reached(), 5.0);
  }
}

TEST(GroupGrowth, ConstructionValidates) {
  EXPECT_THROW(GeneratorSet(2, {IntMatrix{{2, 0}, {0, 1}}}), NonInvertibleGenerator);
  EXPECT_THROW(GeneratorSet(3, {IntMatrix::identity(2)}), InvalidArgument);
  GeneratorSet mixed(2, {IntMatrix{{1, 1}, {0, 1}}, IntMatrix{{0, 1}, {1, 0}}});
  EXPECT_FALSE(mixed.unitriangular());
  EXPECT_THROW(malcev_lcs_ranks(mixed), NotUnitriangular);
}

TEST(GroupGrowth, FileRoundTrip) {
  const auto h = load_generator_set(SLOWVOL_TEST_DATA "/heisenberg.txt");
  EXPECT_EQ(h.fingerprint(), catalog::heisenberg().fingerprint());
  std::stringstream buf;
  write_generator_set(buf, catalog::unitriangular(4));
  const auto back = parse_generator_set(buf);
  EXPECT_EQ(back.generators(), catalog::unitriangular(4).generators());
  EXPECT_THROW(load_generator_set(SLOWVOL_TEST_DATA "/singular.txt"), NonInvertibleGenerator);
  EXPECT_THROW(load_generator_set(SLOWVOL_TEST_DATA "/truncated.txt"), ParseError);
  EXPECT_THROW(load_generator_set(SLOWVOL_TEST_DATA "/missing.txt"), Error);
}

TEST(GroupGrowth, FingerprintDistinguishes) {
  EXPECT_NE(catalog::heisenberg().fingerprint(), catalog::free_abelian(2).fingerprint());
  EXPECT_EQ(catalog::heisenberg().fingerprint().size(), 16u);
  EXPECT_EQ(ball_counts(catalog::heisenberg(), 2, 100).generator_fingerprint,
            catalog::heisenberg().fingerprint());
}

TEST(GroupGrowth, CsvFormat) {
  std::ostringstream out;
  write_growth_csv(out, ball_counts(catalog::free_abelian(1), 2, 100));
  EXPECT_EQ(out.str(), "m,count\n0,1\n1,3\n2,5\n");
}

TEST(Malcev, KnownRanks) {
  EXPECT_EQ(malcev_lcs_ranks(catalog::heisenberg()).ranks, (std::vector<std::uint64_t>{2, 1}));
  EXPECT_EQ(malcev_lcs_ranks(catalog::free_abelian(3)).ranks, (std::vector<std::uint64_t>{3}));
  const auto ut4 = malcev_lcs_ranks(catalog::unitriangular(4));
  EXPECT_EQ(ut4.ranks, (std::vector<std::uint64_t>{3, 2, 1}));
  EXPECT_EQ(bass_guivarch(ut4), 10u);
  EXPECT_EQ(malcev_lcs_ranks(catalog::unitriangular_superdiagonal(4)), ut4);
  EXPECT_EQ(malcev_lcs_ranks(catalog::higher_heisenberg(2)).ranks, (std::vector<std::uint64_t>{4, 1}));
  EXPECT_EQ(bass_guivarch(malcev_lcs_ranks(catalog::higher_heisenberg(2))), 6u);
}

TEST(Malcev, DegreeWithinHirschBound) {
  for (const auto& g : {catalog::heisenberg(), catalog::unitriangular(3), catalog::unitriangular(4),
                        catalog::unitriangular(5), catalog::higher_heisenberg(3),
                        catalog::free_abelian(4)}) {
    const auto r = malcev_lcs_ranks(g);
    EXPECT_LE(bass_guivarch(r), hirsch_degree_bound(r));
  }
  LcsRanks h{{2, 1}};
  EXPECT_EQ(hirsch_length(h), 3u);
  EXPECT_EQ(hirsch_degree_bound(h), 4u);
}
