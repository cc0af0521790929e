#include "slowvol/group_growth.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_set>

#include "slowvol/errors.hpp"

namespace slowvol {

GeneratorSet::GeneratorSet(std::size_t dimension) : dimension_(dimension) {
  if (dimension == 0) throw InvalidArgument("matrix dimension must be positive");
}

GeneratorSet::GeneratorSet(std::size_t dimension, std::vector<IntMatrix> generators)
    : dimension_(dimension), generators_(std::move(generators)) {
  if (dimension == 0) throw InvalidArgument("matrix dimension must be positive");
  for (std::size_t i = 0; i < generators_.size(); ++i) {
    const IntMatrix& g = generators_[i];
    if (g.size() != dimension_) {
      throw InvalidArgument("generator " + std::to_string(i) + " has wrong size");
    }
    const std::int64_t det = determinant(g);
    if (det != 1 && det != -1) {
      throw NonInvertibleGenerator("generator " + std::to_string(i) + " has determinant " +
                                   std::to_string(det));
    }
    unitriangular_ = unitriangular_ && g.is_unitriangular();
  }
}

std::string GeneratorSet::fingerprint() const {
  std::uint64_t h = 14695981039346656037ULL;
  auto mix = [&h](std::uint64_t v) {
    for (int byte = 0; byte < 8; ++byte) {
      h ^= (v >> (8 * byte)) & 0xffU;
      h *= 1099511628211ULL;
    }
  };
  mix(dimension_);
  mix(generators_.size());
  for (const auto& g : generators_) {
    for (const std::int64_t v : g.entries()) mix(static_cast<std::uint64_t>(v));
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

GeneratorSet parse_generator_set(std::istream& in) {
  long long n = 0;
  long long k = 0;
  if (!(in >> n >> k)) throw ParseError("generator file: expected header \"n k\"");
  if (n <= 0 || k < 0) throw ParseError("generator file: n must be positive and k non-negative");
  std::vector<IntMatrix> gens;
  gens.reserve(static_cast<std::size_t>(k));
  for (long long g = 0; g < k; ++g) {
    std::vector<std::int64_t> entries(static_cast<std::size_t>(n * n));
    for (auto& e : entries) {
      if (!(in >> e)) {
        throw ParseError("generator file: generator " + std::to_string(g) +
                         " has fewer than n*n integer entries");
      }
    }
    gens.emplace_back(static_cast<std::size_t>(n), std::move(entries));
  }
  std::string trailing;
  if (in >> trailing) throw ParseError("generator file: unexpected trailing token '" + trailing + "'");
  return GeneratorSet(static_cast<std::size_t>(n), std::move(gens));
}

GeneratorSet load_generator_set(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open generator file '" + path + "'");
  return parse_generator_set(in);
}

void write_generator_set(std::ostream& out, const GeneratorSet& gens) {
  out << gens.dimension() << ' ' << gens.generators().size() << '\n';
  for (const auto& g : gens.generators()) out << g;
}

namespace catalog {

GeneratorSet heisenberg() {
  return GeneratorSet(3, {IntMatrix::elementary(3, 0, 1), IntMatrix::elementary(3, 1, 2)});
}

GeneratorSet free_abelian(std::size_t d) {
  std::vector<IntMatrix> gens;
  for (std::size_t j = 1; j <= d; ++j) gens.push_back(IntMatrix::elementary(d + 1, 0, j));
  return GeneratorSet(d + 1, std::move(gens));
}

GeneratorSet free_abelian2_redundant() {
  IntMatrix sum = IntMatrix::identity(3);
  sum(0, 1) = 1;
  sum(0, 2) = 1;
  return GeneratorSet(3, {IntMatrix::elementary(3, 0, 1), IntMatrix::elementary(3, 0, 2), sum});
}

GeneratorSet unitriangular(std::size_t n) {
  std::vector<IntMatrix> gens;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) gens.push_back(IntMatrix::elementary(n, i, j));
  }
  return GeneratorSet(n, std::move(gens));
}

GeneratorSet unitriangular_superdiagonal(std::size_t n) {
  std::vector<IntMatrix> gens;
  for (std::size_t i = 0; i + 1 < n; ++i) gens.push_back(IntMatrix::elementary(n, i, i + 1));
  return GeneratorSet(n, std::move(gens));
}

GeneratorSet higher_heisenberg(std::size_t k) {
  // Rows/cols: 0, 1..k, k+1. Generators x_i = E_{0,i}, y_i = E_{i,k+1}.
  const std::size_t n = k + 2;
  std::vector<IntMatrix> gens;
  for (std::size_t i = 1; i <= k; ++i) gens.push_back(IntMatrix::elementary(n, 0, i));
  for (std::size_t i = 1; i <= k; ++i) gens.push_back(IntMatrix::elementary(n, i, k + 1));
  return GeneratorSet(n, std::move(gens));
}

GeneratorSet sanov_free_group() {
  return GeneratorSet(2, {IntMatrix{{1, 2}, {0, 1}}, IntMatrix{{1, 0}, {2, 1}}});
}

}  // namespace catalog

GrowthSeries ball_counts(const GeneratorSet& gens, std::size_t m_max,
                         std::size_t element_budget) {
  if (m_max < 1) throw InvalidArgument("m_max must be at least 1");
  if (element_budget < 1) throw InvalidArgument("element_budget must be positive");

  // S u S^-1 without duplicates and without the identity.
  std::vector<IntMatrix> letters;
  for (const auto& g : gens.generators()) {
    for (IntMatrix letter : {g, inverse(g)}) {
      if (letter.is_identity()) continue;
      if (std::find(letters.begin(), letters.end(), letter) == letters.end()) {
        letters.push_back(std::move(letter));
      }
    }
  }

  GrowthSeries series;
  series.generator_fingerprint = gens.fingerprint();
  series.counts.reserve(m_max + 1);

  std::unordered_set<IntMatrix, IntMatrixHash> seen;
  std::vector<IntMatrix> frontier{IntMatrix::identity(gens.dimension())};
  seen.insert(frontier.front());
  series.counts.push_back(1);

  for (std::size_t m = 1; m <= m_max; ++m) {
    std::vector<IntMatrix> next;
    for (const auto& element : frontier) {
      for (const auto& letter : letters) {
        IntMatrix product = element * letter;
        if (seen.insert(product).second) {
          if (seen.size() > element_budget) {
            throw BudgetExceeded("ball of radius " + std::to_string(m) + " exceeds " +
                                     std::to_string(element_budget) + " elements",
                                 static_cast<double>(m), seen.size());
          }
          next.push_back(std::move(product));
        }
      }
    }
    frontier = std::move(next);
    series.counts.push_back(seen.size());
  }
  return series;
}

void write_growth_csv(std::ostream& out, const GrowthSeries& series) {
  out << "m,count\n";
  for (std::size_t m = 0; m < series.counts.size(); ++m) {
    out << m << ',' << series.counts[m] << '\n';
  }
}

FitOptions default_group_fit_options() {
  FitOptions options;
  options.window_fraction = 0.5;
  options.finite_size_correction = true;
  return options;
}

SlowGrowthFit slow_growth_exponent(const GrowthSeries& series, const FitOptions& options) {
  std::vector<double> m(series.counts.size());
  std::vector<double> c(series.counts.size());
  for (std::size_t i = 0; i < series.counts.size(); ++i) {
    m[i] = static_cast<double>(i);
    c[i] = static_cast<double>(series.counts[i]);
  }
  return fit_scaling_exponent(m, c, options);
}

SlowGrowthFit slow_growth_exponent(const GrowthSeries& series, double window_fraction) {
  FitOptions options = default_group_fit_options();
  options.window_fraction = window_fraction;
  return slow_growth_exponent(series, options);
}

std::uint64_t bass_guivarch(const LcsRanks& ranks) {
  std::uint64_t degree = 0;
  for (std::size_t k = 0; k < ranks.ranks.size(); ++k) degree += (k + 1) * ranks.ranks[k];
  return degree;
}

std::uint64_t hirsch_length(const LcsRanks& ranks) {
  std::uint64_t h = 0;
  for (const auto r : ranks.ranks) h += r;
  return h;
}

std::uint64_t hirsch_degree_bound(const LcsRanks& ranks) {
  const std::uint64_t h = hirsch_length(ranks);
  if (h == 0) return 1;
  return 1 + (h - 1) * h / 2;
}

}  // namespace slowvol
