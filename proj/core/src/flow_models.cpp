#include "slowvol/flow_models.hpp"

#include <cmath>
#include <complex>
#include <numbers>

#include "slowvol/errors.hpp"

namespace slowvol {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

Coords zeros(int n) { return Coords::Zero(n); }

double wrap_unit(double v) {
  double r = v - std::floor(v);
  return r >= 1.0 ? 0.0 : r;
}

// (e^s - 1) / s and (e^s - 1 - s) / s^2, entire in s.
std::complex<double> phi1(std::complex<double> s) {
  if (std::abs(s) < 0.5) {
    std::complex<double> term = 1.0;
    std::complex<double> sum = 0.0;
    for (int k = 1; k <= 24; ++k) {
      sum += term;
      term *= s / static_cast<double>(k + 1);
    }
    return sum;
  }
  return (std::exp(s) - 1.0) / s;
}

std::complex<double> phi2(std::complex<double> s) {
  if (std::abs(s) < 0.5) {
    std::complex<double> term = 0.5;
    std::complex<double> sum = 0.0;
    for (int k = 0; k <= 24; ++k) {
      sum += term;
      term *= s / static_cast<double>(k + 3);
    }
    return sum;
  }
  return (std::exp(s) - 1.0 - s) / (s * s);
}

struct RadiusEval {
  double rho = 0.0;
  double drho_dq1 = 0.0;
  double drho_dq2 = 0.0;
  double drho_dtheta = 0.0;
};

RadiusEval eval_radius(const StarshapedTorus2& m, double q1, double q2, double theta) {
  RadiusEval out;
  for (const auto& t : m.terms) {
    const double phase = kTwoPi * (t.k1 * q1 + t.k2 * q2) + t.m * theta;
    const double c = std::cos(phase);
    const double s = std::sin(phase);
    out.rho += t.cos_coeff * c + t.sin_coeff * s;
    const double dphase = -t.cos_coeff * s + t.sin_coeff * c;
    out.drho_dq1 += dphase * kTwoPi * t.k1;
    out.drho_dq2 += dphase * kTwoPi * t.k2;
    out.drho_dtheta += dphase * t.m;
  }
  return out;
}

// Left translation of Nil by the lattice element (i, j, k):
// (x, y, z) -> (x + i, y + j, z + k + i y), p_y -> p_y - i p_z.
PhasePoint nil_translate(const PhasePoint& x, double i, double j, double k) {
  PhasePoint out = x;
  out.q(0) = x.q(0) + i;
  out.q(1) = x.q(1) + j;
  out.q(2) = x.q(2) + k + i * x.q(1);
  out.p(1) = x.p(1) - i * x.p(2);
  return out;
}

void require_nonzero(const Coords& p, const char* model) {
  if (p.squaredNorm() == 0.0) {
    throw ZeroCovector(std::string(model) + " Hamiltonian is not smooth at p = 0");
  }
}

}  // namespace

PhaseVector PhasePoint::stacked() const {
  const auto n = q.size();
  PhaseVector x(2 * n);
  x.head(n) = q;
  x.tail(n) = p;
  return x;
}

PhasePoint PhasePoint::from_stacked(const PhaseVector& x) {
  const auto n = x.size() / 2;
  return PhasePoint{x.head(n), x.tail(n)};
}

PhasePoint make_point(std::initializer_list<double> q, std::initializer_list<double> p) {
  if (q.size() != p.size() || q.size() == 0 || q.size() > kMaxConfigDim) {
    throw InvalidArgument("q and p must have equal length between 1 and 3");
  }
  PhasePoint x{Coords(static_cast<Eigen::Index>(q.size())), Coords(static_cast<Eigen::Index>(p.size()))};
  Eigen::Index i = 0;
  for (double v : q) x.q(i++) = v;
  i = 0;
  for (double v : p) x.p(i++) = v;
  return x;
}

HamiltonianModel HamiltonianModel::flat_torus(const Eigen::MatrixXd& metric) {
  if (metric.rows() != metric.cols() || metric.rows() < 1 || metric.rows() > kMaxConfigDim) {
    throw InvalidArgument("flat torus metric must be square of size 1..3");
  }
  if (!metric.isApprox(metric.transpose(), 1e-14)) {
    throw InvalidArgument("flat torus metric must be symmetric");
  }
  Eigen::LLT<Eigen::MatrixXd> llt(metric);
  if (llt.info() != Eigen::Success) {
    throw InvalidArgument("flat torus metric must be positive definite");
  }
  return HamiltonianModel(FlatTorus{metric});
}

HamiltonianModel HamiltonianModel::flat_torus(int dimension) {
  if (dimension < 1 || dimension > kMaxConfigDim) {
    throw InvalidArgument("flat torus dimension must be 1..3");
  }
  return flat_torus(Eigen::MatrixXd::Identity(dimension, dimension));
}

HamiltonianModel HamiltonianModel::round_sphere2() { return HamiltonianModel(RoundSphere2{}); }
HamiltonianModel HamiltonianModel::nil3() { return HamiltonianModel(Nil3{}); }
HamiltonianModel HamiltonianModel::sol3() { return HamiltonianModel(Sol3{}); }

HamiltonianModel HamiltonianModel::randers_torus2(const Eigen::Vector2d& drift) {
  if (!(drift.norm() < 1.0)) throw InvalidArgument("Randers drift must have norm < 1");
  return HamiltonianModel(RandersTorus2{drift});
}

HamiltonianModel HamiltonianModel::starshaped_torus2(std::vector<FourierTerm> terms) {
  if (terms.empty()) throw InvalidArgument("starshaped profile needs at least one term");
  StarshapedTorus2 m{std::move(terms), 0.0};
  constexpr int kGrid = 16;  // 16^3 = 4096 samples
  double min_rho = std::numeric_limits<double>::infinity();
  for (int a = 0; a < kGrid; ++a) {
    for (int b = 0; b < kGrid; ++b) {
      for (int c = 0; c < kGrid; ++c) {
        const double rho = eval_radius(m, static_cast<double>(a) / kGrid,
                                       static_cast<double>(b) / kGrid, kTwoPi * c / kGrid)
                               .rho;
        min_rho = std::min(min_rho, rho);
      }
    }
  }
  if (!(min_rho > 0.0)) {
    throw NonPositiveH("starshaped profile has sampled radius " + std::to_string(min_rho));
  }
  m.min_sampled_radius = min_rho;
  return HamiltonianModel(std::move(m));
}

ModelTag HamiltonianModel::tag() const {
  return std::visit(Overloaded{
                        [](const FlatTorus&) { return ModelTag::flat_torus; },
                        [](const RoundSphere2&) { return ModelTag::round_sphere2; },
                        [](const Nil3&) { return ModelTag::nil3; },
                        [](const Sol3&) { return ModelTag::sol3; },
                        [](const RandersTorus2&) { return ModelTag::randers_torus2; },
                        [](const StarshapedTorus2&) { return ModelTag::starshaped_torus2; },
                    },
                    model_);
}

std::string HamiltonianModel::name() const {
  return std::visit(Overloaded{
                        [](const FlatTorus& m) {
                          return "flat_torus(" + std::to_string(m.metric.rows()) + ")";
                        },
                        [](const RoundSphere2&) { return std::string("round_sphere2"); },
                        [](const Nil3&) { return std::string("nil3"); },
                        [](const Sol3&) { return std::string("sol3"); },
                        [](const RandersTorus2&) { return std::string("randers_torus2"); },
                        [](const StarshapedTorus2&) { return std::string("starshaped_torus2"); },
                    },
                    model_);
}

int HamiltonianModel::dimension() const {
  return std::visit(Overloaded{
                        [](const FlatTorus& m) { return static_cast<int>(m.metric.rows()); },
                        [](const RoundSphere2&) { return 3; },
                        [](const Nil3&) { return 3; },
                        [](const Sol3&) { return 3; },
                        [](const RandersTorus2&) { return 2; },
                        [](const StarshapedTorus2&) { return 2; },
                    },
                    model_);
}

int HamiltonianModel::fiber_dimension() const {
  return tag() == ModelTag::round_sphere2 ? 2 : dimension();
}

double HamiltonianModel::hamiltonian(const PhasePoint& x) const {
  if (x.q.size() != dimension() || x.p.size() != dimension()) {
    throw InvalidArgument("phase point has wrong dimension for " + name());
  }
  return std::visit(
      Overloaded{
          [&](const FlatTorus& m) { return x.p.dot(m.metric * x.p); },
          [&](const RoundSphere2&) {
            const double qp = x.q.dot(x.p);
            return x.q.squaredNorm() * x.p.squaredNorm() - qp * qp;
          },
          [&](const Nil3&) {
            const double w = x.p(1) + x.q(0) * x.p(2);
            return x.p(0) * x.p(0) + w * w + x.p(2) * x.p(2);
          },
          [&](const Sol3&) {
            const double z = x.q(2);
            return std::exp(-2.0 * z) * x.p(0) * x.p(0) + std::exp(2.0 * z) * x.p(1) * x.p(1) +
                   x.p(2) * x.p(2);
          },
          [&](const RandersTorus2& m) {
            require_nonzero(x.p, "Randers");
            const double f = x.p.norm() + m.drift.dot(x.p);
            return f * f;
          },
          [&](const StarshapedTorus2& m) {
            require_nonzero(x.p, "starshaped");
            const double theta = std::atan2(x.p(1), x.p(0));
            const double rho = eval_radius(m, x.q(0), x.q(1), theta).rho;
            return x.p.squaredNorm() / (rho * rho);
          },
      },
      model_);
}

Gradient HamiltonianModel::gradient(const PhasePoint& x) const {
  const int n = dimension();
  if (x.q.size() != n || x.p.size() != n) {
    throw InvalidArgument("phase point has wrong dimension for " + name());
  }
  Gradient g{zeros(n), zeros(n)};
  std::visit(Overloaded{
                 [&](const FlatTorus& m) { g.dp = 2.0 * m.metric * x.p; },
                 [&](const RoundSphere2&) {
                   const double qp = x.q.dot(x.p);
                   g.dq = 2.0 * x.p.squaredNorm() * x.q - 2.0 * qp * x.p;
                   g.dp = 2.0 * x.q.squaredNorm() * x.p - 2.0 * qp * x.q;
                 },
                 [&](const Nil3&) {
                   const double w = x.p(1) + x.q(0) * x.p(2);
                   g.dq(0) = 2.0 * w * x.p(2);
                   g.dp(0) = 2.0 * x.p(0);
                   g.dp(1) = 2.0 * w;
                   g.dp(2) = 2.0 * w * x.q(0) + 2.0 * x.p(2);
                 },
                 [&](const Sol3&) {
                   const double em = std::exp(-2.0 * x.q(2));
                   const double ep = std::exp(2.0 * x.q(2));
                   g.dq(2) = -2.0 * em * x.p(0) * x.p(0) + 2.0 * ep * x.p(1) * x.p(1);
                   g.dp(0) = 2.0 * em * x.p(0);
                   g.dp(1) = 2.0 * ep * x.p(1);
                   g.dp(2) = 2.0 * x.p(2);
                 },
                 [&](const RandersTorus2& m) {
                   require_nonzero(x.p, "Randers");
                   const double norm = x.p.norm();
                   const double f = norm + m.drift.dot(x.p);
                   g.dp = 2.0 * f * (x.p / norm + m.drift);
                 },
                 [&](const StarshapedTorus2& m) {
                   require_nonzero(x.p, "starshaped");
                   const double theta = std::atan2(x.p(1), x.p(0));
                   const RadiusEval r = eval_radius(m, x.q(0), x.q(1), theta);
                   const double p2 = x.p.squaredNorm();
                   const double rho3 = r.rho * r.rho * r.rho;
                   g.dq(0) = -2.0 * p2 * r.drho_dq1 / rho3;
                   g.dq(1) = -2.0 * p2 * r.drho_dq2 / rho3;
                   g.dp(0) = 2.0 * x.p(0) / (r.rho * r.rho) + 2.0 * r.drho_dtheta * x.p(1) / rho3;
                   g.dp(1) = 2.0 * x.p(1) / (r.rho * r.rho) - 2.0 * r.drho_dtheta * x.p(0) / rho3;
                 },
             },
             model_);
  return g;
}

PhaseVector HamiltonianModel::vector_field(const PhaseVector& x) const {
  const Gradient g = gradient(PhasePoint::from_stacked(x));
  const auto n = g.dq.size();
  PhaseVector out(2 * n);
  out.head(n) = g.dp;
  out.tail(n) = -g.dq;
  return out;
}

bool HamiltonianModel::has_closed_form_flow() const {
  switch (tag()) {
    case ModelTag::flat_torus:
    case ModelTag::round_sphere2:
    case ModelTag::nil3:
    case ModelTag::randers_torus2:
      return true;
    default:
      return false;
  }
}

PhasePoint HamiltonianModel::closed_form_flow(const PhasePoint& x, double t) const {
  return std::visit(
      Overloaded{
          [&](const FlatTorus& m) {
            return PhasePoint{x.q + 2.0 * t * m.metric * x.p, x.p};
          },
          [&](const RandersTorus2& m) {
            const double norm = x.p.norm();
            if (norm == 0.0) return x;
            const double f = norm + m.drift.dot(x.p);
            const Coords velocity = 2.0 * f * (x.p / norm + m.drift);
            return PhasePoint{x.q + t * velocity, x.p};
          },
          [&](const RoundSphere2&) {
            // Great circle traversed at angular speed 2|p|.
            const double speed = x.p.norm();
            if (speed == 0.0) return x;
            const double angle = 2.0 * speed * t;
            const double c = std::cos(angle);
            const double s = std::sin(angle);
            return PhasePoint{c * x.q + (s / speed) * x.p, -speed * s * x.q + c * x.p};
          },
          [&](const Nil3&) {
            // With c = p_z and w = p_y + x p_z, the pair Z = p_x + i w rotates:
            // Z(t) = Z0 e^{i omega t}, omega = 2c. Positions follow by
            // integrating x' = 2 p_x, y' = 2 w, z' = 2 x w + 2 c; the integrals
            // are written with phi1, phi2 so that c -> 0 is regular.
            using C = std::complex<double>;
            const double x0 = x.q(0);
            const double c = x.p(2);
            const C z0(x.p(0), x.p(1) + x0 * c);
            const C s(0.0, 2.0 * c * t);
            const C rot = std::exp(s);
            const C int_u = t * phi1(s);             // int_0^t e^{i omega u} du
            const C int_u1 = t * t * phi2(s);        // int_0^t (e^{i omega u}-1)/(i omega) du
            const C int_u2 = 2.0 * t * t * phi2(2.0 * s);
            const C zt = z0 * rot;
            PhasePoint out = x;
            out.q(0) = x0 + 2.0 * std::real(z0 * int_u);
            out.q(1) = x.q(1) + 2.0 * std::imag(z0 * int_u);
            out.q(2) = x.q(2) + 2.0 * c * t +
                       2.0 * (x0 * std::imag(z0 * int_u) +
                              std::imag(z0 * z0 * (int_u2 - int_u1) + std::norm(z0) * int_u1));
            out.p(0) = std::real(zt);
            out.p(1) = std::imag(zt) - out.q(0) * c;
            out.p(2) = c;
            return out;
          },
          [&](const auto&) -> PhasePoint {
            throw InvalidArgument(name() + " has no closed-form flow");
          },
      },
      model_);
}

bool HamiltonianModel::satisfies_constraint(const PhasePoint& x, double tolerance) const {
  if (tag() != ModelTag::round_sphere2) return true;
  return std::abs(x.q.norm() - 1.0) <= tolerance &&
         std::abs(x.q.dot(x.p)) <= tolerance * (1.0 + x.p.norm());
}

PhasePoint HamiltonianModel::project_to_constraint(const PhasePoint& x) const {
  if (tag() != ModelTag::round_sphere2) return x;
  PhasePoint out = x;
  out.q /= x.q.norm();
  out.p -= out.q.dot(out.p) * out.q;
  return out;
}

bool HamiltonianModel::has_periodic_chart() const {
  switch (tag()) {
    case ModelTag::flat_torus:
    case ModelTag::randers_torus2:
    case ModelTag::starshaped_torus2:
    case ModelTag::nil3:
      return true;
    default:
      return false;
  }
}

PhasePoint HamiltonianModel::reduce(const PhasePoint& x) const {
  switch (tag()) {
    case ModelTag::flat_torus:
    case ModelTag::randers_torus2:
    case ModelTag::starshaped_torus2: {
      PhasePoint out = x;
      for (Eigen::Index i = 0; i < out.q.size(); ++i) out.q(i) = wrap_unit(out.q(i));
      return out;
    }
    case ModelTag::nil3: {
      const double i = -std::floor(x.q(0));
      const double j = -std::floor(x.q(1));
      const double k = -std::floor(x.q(2) + i * x.q(1));
      PhasePoint out = nil_translate(x, i, j, k);
      out.q(0) = wrap_unit(out.q(0));
      out.q(1) = wrap_unit(out.q(1));
      out.q(2) = wrap_unit(out.q(2));
      return out;
    }
    default:
      return x;
  }
}

PhaseVector HamiltonianModel::chart_tangent(const PhasePoint& lifted_base,
                                            const PhaseVector& v) const {
  if (tag() != ModelTag::nil3) return v;
  const double i = -std::floor(lifted_base.q(0));
  PhaseVector out = v;
  out(2) += i * v(1);
  out(4) -= i * v(5);
  return out;
}

PhaseVector HamiltonianModel::invariant_tangent(const PhasePoint& lifted_base,
                                                const PhaseVector& v) const {
  if (tag() != ModelTag::nil3) return v;
  const double x = lifted_base.q(0);
  const double pz = lifted_base.p(2);
  PhaseVector out = v;
  out(2) = v(2) - x * v(1);
  out(4) = v(4) + x * v(5) + pz * v(0);
  return out;
}

PhaseVector HamiltonianModel::chart_displacement(const PhasePoint& from,
                                                 const PhasePoint& to) const {
  switch (tag()) {
    case ModelTag::flat_torus:
    case ModelTag::randers_torus2:
    case ModelTag::starshaped_torus2: {
      PhaseVector d = to.stacked() - from.stacked();
      for (Eigen::Index i = 0; i < from.q.size(); ++i) d(i) = std::remainder(d(i), 1.0);
      return d;
    }
    case ModelTag::nil3: {
      const PhasePoint a = reduce(from);
      const PhasePoint b = reduce(to);
      PhaseVector best;
      double best_norm = std::numeric_limits<double>::infinity();
      for (int i = -1; i <= 1; ++i) {
        for (int j = -1; j <= 1; ++j) {
          const double k = std::round(a.q(2) - b.q(2) - i * b.q(1));
          const PhaseVector d = nil_translate(b, i, j, k).stacked() - a.stacked();
          const double norm = d.head(3).norm();
          if (norm < best_norm) {
            best_norm = norm;
            best = d;
          }
        }
      }
      return best;
    }
    default:
      return to.stacked() - from.stacked();
  }
}

Eigen::MatrixXd HamiltonianModel::fiber_frame(const Coords& q) const {
  if (tag() != ModelTag::round_sphere2) {
    return Eigen::MatrixXd::Identity(dimension(), dimension());
  }
  const Eigen::Vector3d n = Eigen::Vector3d(q(0), q(1), q(2)).normalized();
  Eigen::Index axis = 0;
  n.cwiseAbs().minCoeff(&axis);
  Eigen::Vector3d e1 = Eigen::Vector3d::Unit(axis);
  e1 = (e1 - e1.dot(n) * n).normalized();
  const Eigen::Vector3d e2 = n.cross(e1);
  Eigen::MatrixXd frame(3, 2);
  frame.col(0) = e1;
  frame.col(1) = e2;
  return frame;
}

double hamiltonian(const HamiltonianModel& model, const PhasePoint& x) {
  return model.hamiltonian(x);
}

}  // namespace slowvol
