#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "slowvol/exponent_fit.hpp"
#include "slowvol/int_matrix.hpp"

namespace slowvol {

// Finite generating set S of a matrix group. The group is <S>; balls are
// taken with respect to S and its inverses.
class GeneratorSet {
 public:
  // The trivial group {e} in dimension n.
  explicit GeneratorSet(std::size_t dimension);
  // Validates that every generator is n x n with determinant +-1 and records
  // whether all of them are unitriangular.
  GeneratorSet(std::size_t dimension, std::vector<IntMatrix> generators);

  std::size_t dimension() const noexcept { return dimension_; }
  const std::vector<IntMatrix>& generators() const noexcept { return generators_; }
  bool unitriangular() const noexcept { return unitriangular_; }

  // Stable FNV-1a hash over dimension and entries, as 16 hex digits.
  std::string fingerprint() const;

 private:
  std::size_t dimension_;
  std::vector<IntMatrix> generators_;
  bool unitriangular_ = true;
};

// Plain-text format: "n k" followed by k blocks of n rows of n integers.
GeneratorSet parse_generator_set(std::istream& in);
GeneratorSet load_generator_set(const std::string& path);
void write_generator_set(std::ostream& out, const GeneratorSet& gens);

namespace catalog {
// Integer Heisenberg group H_1 generated by the elementary matrices X, Y.
GeneratorSet heisenberg();
// Z^d as the commuting unitriangular matrices I + E_{0,j}, j = 1..d.
GeneratorSet free_abelian(std::size_t d);
// Z^2 with the redundant generating set {e1, e2, e1 + e2}.
GeneratorSet free_abelian2_redundant();
// Full unitriangular group UT_n(Z) generated by all I + E_{ij}, i < j.
GeneratorSet unitriangular(std::size_t n);
// UT_n(Z) generated by the superdiagonal elementary matrices only.
GeneratorSet unitriangular_superdiagonal(std::size_t n);
// Higher Heisenberg group of dimension 2k+1 inside (k+2) x (k+2) matrices.
GeneratorSet higher_heisenberg(std::size_t k);
// Sanov subgroup <[[1,2],[0,1]], [[1,0],[2,1]]>, free of rank 2.
GeneratorSet sanov_free_group();
}  // namespace catalog

struct GrowthSeries {
  // counts[m] = number of distinct elements that are words of length <= m.
  std::vector<std::uint64_t> counts;
  std::string generator_fingerprint;

  std::size_t m_max() const noexcept { return counts.empty() ? 0 : counts.size() - 1; }
};

// Breadth-first enumeration of the Cayley ball, deduplicated on exact
// entries. Throws BudgetExceeded once more than element_budget distinct
// elements have been found.
GrowthSeries ball_counts(const GeneratorSet& gens, std::size_t m_max,
                         std::size_t element_budget);

void write_growth_csv(std::ostream& out, const GrowthSeries& series);

using SlowGrowthFit = ScalingFit;

// Word-length growth default: trailing half, with the 1/m correction term.
FitOptions default_group_fit_options();

SlowGrowthFit slow_growth_exponent(const GrowthSeries& series, const FitOptions& options);
SlowGrowthFit slow_growth_exponent(const GrowthSeries& series, double window_fraction);

// Torsion-free ranks r_1..r_c of the lower central series quotients. Empty for
// a finite group; the last entry is positive otherwise.
struct LcsRanks {
  std::vector<std::uint64_t> ranks;

  friend bool operator==(const LcsRanks&, const LcsRanks&) = default;
};

// Growth degree sum_k k * r_k.
std::uint64_t bass_guivarch(const LcsRanks& ranks);
// sum_k r_k.
std::uint64_t hirsch_length(const LcsRanks& ranks);
// 1 + (h-1)h/2 for h = hirsch_length.
std::uint64_t hirsch_degree_bound(const LcsRanks& ranks);

// Ranks of the rational Mal'cev Lie algebra spanned by the matrix logarithms
// of the generators, computed with exact rational arithmetic. Requires a
// unitriangular generator set (throws NotUnitriangular otherwise).
LcsRanks malcev_lcs_ranks(const GeneratorSet& gens);

}  // namespace slowvol
