#include "slowvol/gamma_catalog.hpp"

#include <cctype>
#include <ostream>
#include <utility>

#include "slowvol/errors.hpp"

namespace slowvol {

ExtendedNat operator+(ExtendedNat a, ExtendedNat b) {
  if (a.infinite || b.infinite) return ExtendedNat::infinity();
  return ExtendedNat::finite(a.value + b.value);
}

ExtendedNat predecessor(ExtendedNat a) {
  if (a.infinite) return a;
  if (a.value == 0) throw InvalidArgument("predecessor of 0");
  return ExtendedNat::finite(a.value - 1);
}

std::string to_string(ExtendedNat a) { return a.infinite ? "inf" : std::to_string(a.value); }

std::ostream& operator<<(std::ostream& out, ExtendedNat a) { return out << to_string(a); }

namespace {

struct AtomInfo {
  AtomKind kind;
  const char* name;
  int min_params;
  int max_params;
};

// Longer names first so that prefix matching picks S2xR over S.
constexpr AtomInfo kAtoms[] = {
    {AtomKind::circle, "Circle", 0, 0},
    {AtomKind::s2xr_quotient, "S2xR", 1, 1},
    {AtomKind::s3_quotient, "S3Q", 0, 0},
    {AtomKind::t3_finite_quotient, "T3Q", 0, 0},
    {AtomKind::orientable_surface, "Sigma", 1, 1},
    {AtomKind::cayley_plane, "OP2", 0, 0},
    {AtomKind::nil_circle_bundle, "Nil", 1, 1},
    {AtomKind::fast, "Fast", 1, 2},
    {AtomKind::circle, "S1", 0, 0},
    {AtomKind::real_projective, "RP", 1, 1},
    {AtomKind::complex_projective, "CP", 1, 1},
    {AtomKind::quaternionic_projective, "HP", 1, 1},
    {AtomKind::sphere, "S", 1, 1},
    {AtomKind::torus, "T", 1, 1},
    {AtomKind::klein_bottle, "K", 0, 0},
};

const char* canonical_name(AtomKind kind) {
  switch (kind) {
    case AtomKind::circle: return "S1";
    case AtomKind::sphere: return "S";
    case AtomKind::real_projective: return "RP";
    case AtomKind::complex_projective: return "CP";
    case AtomKind::quaternionic_projective: return "HP";
    case AtomKind::cayley_plane: return "OP2";
    case AtomKind::torus: return "T";
    case AtomKind::klein_bottle: return "K";
    case AtomKind::orientable_surface: return "Sigma";
    case AtomKind::nil_circle_bundle: return "Nil";
    case AtomKind::s2xr_quotient: return "S2xR";
    case AtomKind::t3_finite_quotient: return "T3Q";
    case AtomKind::s3_quotient: return "S3Q";
    case AtomKind::fast: return "Fast";
  }
  return "?";
}

const AtomInfo& info(AtomKind kind) {
  for (const auto& a : kAtoms) {
    if (a.kind == kind && (kind != AtomKind::circle || std::string_view(a.name) == "S1")) return a;
  }
  throw InternalError("unknown atom kind");
}

void check_params(AtomKind kind, const std::vector<long long>& p) {
  const AtomInfo& a = info(kind);
  const auto n = static_cast<int>(p.size());
  if (n < a.min_params || n > a.max_params) {
    throw MalformedDescriptor(std::string(a.name) + " takes " + std::to_string(a.min_params) +
                              (a.max_params != a.min_params ? "-" + std::to_string(a.max_params) : "") +
                              " parameter(s), got " + std::to_string(n));
  }
  auto require = [&](bool ok, const char* what) {
    if (!ok) throw MalformedDescriptor(std::string(a.name) + ": " + what);
  };
  switch (kind) {
    case AtomKind::sphere:
    case AtomKind::real_projective: require(p[0] >= 2, "dimension must be at least 2"); break;
    case AtomKind::complex_projective:
    case AtomKind::quaternionic_projective: require(p[0] >= 1, "n must be at least 1"); break;
    case AtomKind::torus: require(p[0] >= 1 && p[0] <= 64, "dimension must lie in 1..64"); break;
    case AtomKind::orientable_surface: require(p[0] >= 0, "genus must be non-negative"); break;
    case AtomKind::nil_circle_bundle: require(p[0] != 0, "Euler number must be non-zero"); break;
    case AtomKind::s2xr_quotient: require(p[0] >= 1 && p[0] <= 4, "index must lie in 1..4"); break;
    case AtomKind::fast:
      require(p[0] >= 1, "dimension must be at least 1");
      if (n == 2) require(p[1] >= 0, "pi_1 growth must be non-negative");
      break;
    default: break;
  }
  if (kind == AtomKind::sphere || kind == AtomKind::real_projective || kind == AtomKind::fast ||
      kind == AtomKind::complex_projective || kind == AtomKind::quaternionic_projective) {
    require(p[0] <= 4096, "parameter too large");
  }
}

int atom_dimension(AtomKind kind, const std::vector<long long>& p) {
  switch (kind) {
    case AtomKind::circle: return 1;
    case AtomKind::sphere:
    case AtomKind::real_projective:
    case AtomKind::torus:
    case AtomKind::fast: return static_cast<int>(p[0]);
    case AtomKind::complex_projective: return static_cast<int>(2 * p[0]);
    case AtomKind::quaternionic_projective: return static_cast<int>(4 * p[0]);
    case AtomKind::cayley_plane: return 16;
    case AtomKind::klein_bottle:
    case AtomKind::orientable_surface: return 2;
    case AtomKind::nil_circle_bundle:
    case AtomKind::s2xr_quotient:
    case AtomKind::t3_finite_quotient:
    case AtomKind::s3_quotient: return 3;
  }
  return 0;
}

std::pair<ExtendedNat, ExtendedNat> atom_gamma(AtomKind kind, const std::vector<long long>& p) {
  using E = ExtendedNat;
  switch (kind) {
    case AtomKind::circle: return {E::finite(1), E::finite(0)};
    case AtomKind::sphere:
    case AtomKind::real_projective:
    case AtomKind::complex_projective:
    case AtomKind::quaternionic_projective:
    case AtomKind::cayley_plane:
    case AtomKind::s3_quotient: return {E::finite(0), E::finite(1)};
    case AtomKind::torus: return {E::finite(static_cast<std::uint64_t>(p[0])), E::finite(0)};
    case AtomKind::t3_finite_quotient: return {E::finite(3), E::finite(0)};
    case AtomKind::klein_bottle: return {E::finite(2), E::finite(0)};
    case AtomKind::orientable_surface:
      if (p[0] == 0) return {E::finite(0), E::finite(1)};
      if (p[0] == 1) return {E::finite(2), E::finite(0)};
      return {E::infinity(), E::finite(0)};
    case AtomKind::nil_circle_bundle: return {E::finite(4), E::finite(0)};
    case AtomKind::s2xr_quotient: return {E::finite(1), E::finite(1)};
    case AtomKind::fast:
      return {E::finite(p.size() > 1 ? static_cast<std::uint64_t>(p[1]) : 0), E::infinity()};
  }
  throw InternalError("unknown atom kind");
}

GammaResult evaluate(const ManifoldDescriptor& d) {
  GammaResult r;
  switch (d.node()) {
    case ManifoldDescriptor::Node::atom: {
      const auto [pi1, loop] = atom_gamma(d.atom_kind(), d.params());
      r.gamma_pi1 = pi1;
      r.gamma_loop = loop;
      break;
    }
    case ManifoldDescriptor::Node::product: {
      const GammaResult a = evaluate(*d.left());
      const GammaResult b = evaluate(*d.right());
      r.gamma_pi1 = a.gamma_pi1 + b.gamma_pi1;
      r.gamma_loop = a.gamma_loop + b.gamma_loop;
      break;
    }
    case ManifoldDescriptor::Node::finite_cover: {
      const GammaResult c = evaluate(*d.child());
      r.gamma_pi1 = c.gamma_pi1;
      r.gamma_loop = c.gamma_loop;
      break;
    }
  }
  r.gamma_total = r.gamma_pi1 + r.gamma_loop;
  r.theorem_bound = predecessor(r.gamma_total);
  r.dimension = d.dimension();
  r.slow = !r.gamma_total.infinite;
  return r;
}

bool within_dimension_bound(const GammaResult& r) {
  return !r.slow || r.gamma_total.value <= dimension_bound(r.dimension);
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  ManifoldDescriptor::Ptr parse() {
    auto e = expr();
    skip_space();
    if (pos_ != text_.size()) fail("'x' or end of input");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& expected) const {
    std::string found = pos_ < text_.size() ? "'" + std::string(1, text_[pos_]) + "'" : "end of input";
    throw MalformedDescriptor("at position " + std::to_string(pos_) + ": expected " + expected +
                              ", found " + found + " in \"" + std::string(text_) + "\"");
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(std::string_view token) {
    skip_space();
    if (text_.substr(pos_, token.size()) == token) {
      pos_ += token.size();
      return true;
    }
    return false;
  }

  ManifoldDescriptor::Ptr expr() {
    auto left = term();
    while (accept("x")) left = ManifoldDescriptor::product(left, term());
    return left;
  }

  ManifoldDescriptor::Ptr term() {
    if (accept("cover:")) return ManifoldDescriptor::finite_cover(term());
    if (accept("(")) {
      auto e = expr();
      if (!accept(")")) fail("')'");
      return e;
    }
    return atom();
  }

  ManifoldDescriptor::Ptr atom() {
    skip_space();
    const AtomInfo* match = nullptr;
    for (const auto& a : kAtoms) {
      if (text_.substr(pos_, std::string_view(a.name).size()) == a.name) {
        match = &a;
        break;
      }
    }
    if (!match) fail("atom name (S1, S, RP, CP, HP, OP2, T, K, Sigma, Nil, S2xR, T3Q, S3Q, Fast), '(' or 'cover:'");
    const std::size_t start = pos_;
    pos_ += std::string_view(match->name).size();
    std::vector<long long> params;
    if (match->max_params > 0) {
      if (!accept("(")) fail("'(' after " + std::string(match->name));
      params.push_back(integer());
      while (accept(",")) params.push_back(integer());
      if (!accept(")")) fail("',' or ')'");
    }
    try {
      return ManifoldDescriptor::atom(match->kind, std::move(params));
    } catch (const MalformedDescriptor& e) {
      throw MalformedDescriptor("at position " + std::to_string(start) + ": " + e.message());
    }
  }

  long long integer() {
    skip_space();
    const std::size_t start = pos_;
    if (pos_ < text_.size() && (text_[pos_] == '-' || text_[pos_] == '+')) ++pos_;
    const std::size_t digits = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (pos_ == digits || pos_ - digits > 9) {
      pos_ = start;
      fail("integer");
    }
    return std::stoll(std::string(text_.substr(start, pos_ - start)));
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

ManifoldDescriptor::Ptr ManifoldDescriptor::atom(AtomKind kind, std::vector<long long> params) {
  check_params(kind, params);
  auto d = std::shared_ptr<ManifoldDescriptor>(new ManifoldDescriptor());
  d->node_ = Node::atom;
  d->kind_ = kind;
  d->params_ = std::move(params);
  return d;
}

ManifoldDescriptor::Ptr ManifoldDescriptor::product(Ptr left, Ptr right) {
  if (!left || !right) throw MalformedDescriptor("product of an empty descriptor");
  auto d = std::shared_ptr<ManifoldDescriptor>(new ManifoldDescriptor());
  d->node_ = Node::product;
  d->left_ = std::move(left);
  d->right_ = std::move(right);
  return d;
}

ManifoldDescriptor::Ptr ManifoldDescriptor::finite_cover(Ptr child) {
  if (!child) throw MalformedDescriptor("cover of an empty descriptor");
  auto d = std::shared_ptr<ManifoldDescriptor>(new ManifoldDescriptor());
  d->node_ = Node::finite_cover;
  d->left_ = std::move(child);
  return d;
}

int ManifoldDescriptor::dimension() const {
  switch (node_) {
    case Node::atom: return atom_dimension(kind_, params_);
    case Node::product: return left_->dimension() + right_->dimension();
    case Node::finite_cover: return left_->dimension();
  }
  return 0;
}

std::string ManifoldDescriptor::to_string() const {
  switch (node_) {
    case Node::atom: {
      std::string s = canonical_name(kind_);
      if (!params_.empty()) {
        s += '(';
        for (std::size_t i = 0; i < params_.size(); ++i) {
          if (i) s += ',';
          s += std::to_string(params_[i]);
        }
        s += ')';
      }
      return s;
    }
    case Node::product: {
      auto wrap = [](const Ptr& p) {
        return p->node() == Node::product ? "(" + p->to_string() + ")" : p->to_string();
      };
      // Products associate to the left when parsed.
      return left_->to_string() + " x " + wrap(right_);
    }
    case Node::finite_cover: {
      const std::string inner = left_->to_string();
      return "cover:" + (left_->node() == Node::product ? "(" + inner + ")" : inner);
    }
  }
  return {};
}

ManifoldDescriptor::Ptr parse_descriptor(std::string_view text) { return Parser(text).parse(); }

std::uint64_t dimension_bound(int dimension) {
  const auto d = static_cast<std::uint64_t>(dimension);
  return d * (d - 1) / 2 + 1;
}

GammaResult gamma(const ManifoldDescriptor& descriptor) {
  GammaResult r = evaluate(descriptor);
  if (!within_dimension_bound(r)) {
    throw InternalError(descriptor.to_string() + ": gamma " + to_string(r.gamma_total) +
                        " exceeds the dimension bound " +
                        std::to_string(dimension_bound(r.dimension)));
  }
  return r;
}

GammaResult gamma(std::string_view descriptor) { return gamma(*parse_descriptor(descriptor)); }

ExtendedNat theorem_bound(const ManifoldDescriptor& descriptor) {
  return gamma(descriptor).theorem_bound;
}

bool cross_check_dimension_bound(const ManifoldDescriptor& descriptor) {
  return within_dimension_bound(evaluate(descriptor));
}

bool is_single_generator(const ManifoldDescriptor& descriptor) {
  const ManifoldDescriptor* d = &descriptor;
  while (d->node() == ManifoldDescriptor::Node::finite_cover) d = d->child().get();
  if (d->node() != ManifoldDescriptor::Node::atom) return false;
  switch (d->atom_kind()) {
    case AtomKind::circle:
    case AtomKind::sphere:
    case AtomKind::real_projective:
    case AtomKind::complex_projective:
    case AtomKind::quaternionic_projective:
    case AtomKind::cayley_plane:
    case AtomKind::s3_quotient: return true;
    case AtomKind::torus: return d->params()[0] == 1;
    case AtomKind::orientable_surface: return d->params()[0] == 0;
    default: return false;
  }
}

std::vector<ManifoldDescriptor::Ptr> catalog_atoms() {
  using D = ManifoldDescriptor;
  std::vector<D::Ptr> out;
  out.push_back(D::atom(AtomKind::circle));
  for (long long d = 2; d <= 6; ++d) out.push_back(D::atom(AtomKind::sphere, {d}));
  for (long long d = 2; d <= 4; ++d) out.push_back(D::atom(AtomKind::real_projective, {d}));
  for (long long n = 1; n <= 3; ++n) out.push_back(D::atom(AtomKind::complex_projective, {n}));
  for (long long n = 1; n <= 2; ++n) out.push_back(D::atom(AtomKind::quaternionic_projective, {n}));
  out.push_back(D::atom(AtomKind::cayley_plane));
  for (long long d = 1; d <= 6; ++d) out.push_back(D::atom(AtomKind::torus, {d}));
  out.push_back(D::atom(AtomKind::klein_bottle));
  for (long long g = 0; g <= 3; ++g) out.push_back(D::atom(AtomKind::orientable_surface, {g}));
  for (long long e : {1LL, 2LL, -3LL}) out.push_back(D::atom(AtomKind::nil_circle_bundle, {e}));
  for (long long i = 1; i <= 4; ++i) out.push_back(D::atom(AtomKind::s2xr_quotient, {i}));
  out.push_back(D::atom(AtomKind::t3_finite_quotient));
  out.push_back(D::atom(AtomKind::s3_quotient));
  out.push_back(D::atom(AtomKind::fast, {4}));
  return out;
}

}  // namespace slowvol
