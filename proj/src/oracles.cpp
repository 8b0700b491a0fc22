#include "splitcert/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "splitcert/errors.hpp"

namespace splitcert {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Relative slack when checking a declared Lipschitz bound or ball membership;
// covers rounding in norms of exactly-saturating vectors such as sign(x).
constexpr double kBoundSlack = 1e-12;

double sign_or_zero(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }


}  // namespace

FunctionOracle::FunctionOracle(std::size_t dim, bool has_prox, std::optional<double> lipschitz,
                               std::optional<double> smoothness)
    : dim_(dim), has_prox_(has_prox), lipschitz_(lipschitz), smoothness_(smoothness) {
  if (dim == 0) throw ContractError("FunctionOracle: dimension must be >= 1");
}

double FunctionOracle::value(const Point& x) const {
  if (x.dim() != dim_) throw ContractError("value: dimension mismatch for " + describe());
  return do_value(x);
}

Point FunctionOracle::subgradient(const Point& x) const {
  if (x.dim() != dim_) throw ContractError("subgradient: dimension mismatch for " + describe());
  Point g = do_subgradient(x);
  if (lipschitz_) {
    const double n = norm(g);
    if (n > *lipschitz_ * (1.0 + kBoundSlack)) {
      std::ostringstream msg;
      msg << describe() << ": subgradient norm " << n << " exceeds declared bound "
          << *lipschitz_;
      throw ContractError(msg.str());
    }
  }
  return g;
}

Point FunctionOracle::prox(double lambda, const Point& x) const {
  if (!has_prox_) throw ConfigError(describe() + " has no proximity operator");
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw ContractError("prox: step must be finite and > 0");
  }
  if (x.dim() != dim_) throw ContractError("prox: dimension mismatch for " + describe());
  return do_prox(lambda, x);
}

Point FunctionOracle::do_prox(double, const Point&) const {
  throw ConfigError(describe() + " has no proximity operator");
}

// ---- free operators --------------------------------------------------------

Point prox_l1(double lambda, double weight, const Point& x) {
  if (!(lambda > 0.0)) throw ContractError("prox_l1: lambda must be > 0");
  if (!(weight >= 0.0)) throw ContractError("prox_l1: weight must be >= 0");
  const double thr = lambda * weight;
  std::vector<double> out(x.dim());
  for (std::size_t i = 0; i < x.dim(); ++i) {
    const double a = std::abs(x[i]) - thr;
    out[i] = a > 0.0 ? std::copysign(a, x[i]) : 0.0;
  }
  return Point(std::move(out));
}

Point project_box(std::span<const double> lo, std::span<const double> hi, const Point& x) {
  if (lo.size() != x.dim() || hi.size() != x.dim()) {
    throw ContractError("project_box: bound length does not match dimension");
  }
  std::vector<double> out(x.dim());
  for (std::size_t i = 0; i < x.dim(); ++i) {
    if (lo[i] > hi[i]) throw ContractError("project_box: infeasible box (lo > hi)");
    out[i] = std::clamp(x[i], lo[i], hi[i]);
  }
  return Point(std::move(out));
}

Point project_ball(double radius, const Point& center, const Point& x) {
  if (!(radius > 0.0)) throw ContractError("project_ball: radius must be > 0");
  const Point d = x - center;
  const double n = norm(d);
  if (n <= radius) return x;
  return axpy(center, radius / n, d);
}

Point prox_quadratic(double lambda, const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                     const Point& x) {
  if (!(lambda > 0.0)) throw ContractError("prox_quadratic: lambda must be > 0");
  if (A.cols() != static_cast<Eigen::Index>(x.dim()) || A.rows() != b.size()) {
    throw ContractError("prox_quadratic: A, b and x have incompatible shapes");
  }
  const Eigen::Index n = A.cols();
  Eigen::MatrixXd system = Eigen::MatrixXd::Identity(n, n);
  system.noalias() += lambda * (A.transpose() * A);
  Eigen::VectorXd rhs = x.as_eigen();
  rhs.noalias() += lambda * (A.transpose() * b);
  return Point::from_eigen(system.llt().solve(rhs));
}

EpsSubgradient eps_subgradient_at_shifted_point(const FunctionOracle& f, const Point& x,
                                                const Point& y) {
  const double fx = f.value(x);
  const double fy = f.value(y);
  if (!std::isfinite(fx) || !std::isfinite(fy)) {
    throw DomainError("eps_subgradient_at_shifted_point: point outside dom " + f.describe());
  }
  Point g = f.subgradient(y);
  const double eps = fx - fy - inner(g, x - y);
  return {std::move(g), std::max(eps, 0.0)};
}

// ---- catalog ----------------------------------------------------------------

namespace {

class ZeroFunction final : public FunctionOracle {
 public:
  explicit ZeroFunction(std::size_t dim) : FunctionOracle(dim, true, 0.0, 0.0) {}
  std::string describe() const override { return "zero"; }

 protected:
  double do_value(const Point&) const override { return 0.0; }
  Point do_subgradient(const Point& x) const override { return Point::zeros(x.dim()); }
  Point do_prox(double, const Point& x) const override { return x; }
};

class L1Norm final : public FunctionOracle {
 public:
  L1Norm(std::size_t dim, double weight)
      : FunctionOracle(dim, true, weight * std::sqrt(static_cast<double>(dim)), std::nullopt),
        weight_(weight) {
    if (!(weight >= 0.0)) throw ContractError("l1: weight must be >= 0");
  }
  std::string describe() const override {
    std::ostringstream s;
    s << "l1(weight=" << weight_ << ")";
    return s.str();
  }

 protected:
  double do_value(const Point& x) const override {
    double acc = 0.0;
    for (double v : x.coords()) acc += std::abs(v);
    return weight_ * acc;
  }
  Point do_subgradient(const Point& x) const override {
    std::vector<double> g(x.dim());
    for (std::size_t i = 0; i < x.dim(); ++i) g[i] = weight_ * sign_or_zero(x[i]);
    return Point(std::move(g));
  }
  Point do_prox(double lambda, const Point& x) const override {
    return prox_l1(lambda, weight_, x);
  }

 private:
  double weight_;
};

class ShiftedL1 final : public FunctionOracle {
 public:
  explicit ShiftedL1(const Point& center)
      : FunctionOracle(center.dim(), true, std::sqrt(static_cast<double>(center.dim())),
                       std::nullopt),
        center_(center) {}
  std::string describe() const override { return "shifted_l1"; }

 protected:
  double do_value(const Point& x) const override {
    double acc = 0.0;
    for (std::size_t i = 0; i < x.dim(); ++i) acc += std::abs(x[i] - center_[i]);
    return acc;
  }
  Point do_subgradient(const Point& x) const override {
    std::vector<double> g(x.dim());
    for (std::size_t i = 0; i < x.dim(); ++i) g[i] = sign_or_zero(x[i] - center_[i]);
    return Point(std::move(g));
  }
  Point do_prox(double lambda, const Point& x) const override {
    return center_ + prox_l1(lambda, 1.0, x - center_);
  }

 private:
  Point center_;
};

double largest_eigenvalue_of_gram(const Eigen::MatrixXd& A) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A.transpose() * A, Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff();
}

class LeastSquares final : public FunctionOracle {
 public:
  LeastSquares(Eigen::MatrixXd A, Eigen::VectorXd b)
      : FunctionOracle(static_cast<std::size_t>(A.cols()), true, std::nullopt,
                       largest_eigenvalue_of_gram(A)),
        A_(std::move(A)),
        b_(std::move(b)) {
    if (A_.rows() != b_.size()) throw ContractError("least_squares: A rows != len(b)");
  }
  std::string describe() const override { return "least_squares"; }

 protected:
  double do_value(const Point& x) const override {
    const Eigen::VectorXd r = A_ * x.as_eigen() - b_;
    return 0.5 * r.squaredNorm();
  }
  Point do_subgradient(const Point& x) const override {
    const Eigen::VectorXd r = A_ * x.as_eigen() - b_;
    return Point::from_eigen(A_.transpose() * r);
  }
  Point do_prox(double lambda, const Point& x) const override {
    return prox_quadratic(lambda, A_, b_, x);
  }

 private:
  Eigen::MatrixXd A_;
  Eigen::VectorXd b_;
};

class SquaredNorm final : public FunctionOracle {
 public:
  SquaredNorm(std::size_t dim, double coef)
      : FunctionOracle(dim, true, std::nullopt, coef), coef_(coef) {
    if (!(coef >= 0.0)) throw ContractError("squared_norm: coefficient must be >= 0");
  }
  std::string describe() const override { return "squared_norm"; }

 protected:
  double do_value(const Point& x) const override { return 0.5 * coef_ * norm_sq(x); }
  Point do_subgradient(const Point& x) const override { return coef_ * x; }
  Point do_prox(double lambda, const Point& x) const override {
    return (1.0 / (1.0 + lambda * coef_)) * x;
  }

 private:
  double coef_;
};

class Linear final : public FunctionOracle {
 public:
  explicit Linear(const Point& c) : FunctionOracle(c.dim(), true, norm(c), 0.0), c_(c) {}
  std::string describe() const override { return "linear"; }

 protected:
  double do_value(const Point& x) const override { return inner(c_, x); }
  Point do_subgradient(const Point&) const override { return c_; }
  Point do_prox(double lambda, const Point& x) const override { return axpy(x, -lambda, c_); }

 private:
  Point c_;
};

class BoxIndicator final : public FunctionOracle {
 public:
  BoxIndicator(std::vector<double> lo, std::vector<double> hi)
      : FunctionOracle(lo.size(), true, std::nullopt, std::nullopt),
        lo_(std::move(lo)),
        hi_(std::move(hi)) {
    if (lo_.size() != hi_.size()) throw ContractError("box: lo/hi length mismatch");
    for (std::size_t i = 0; i < lo_.size(); ++i) {
      if (lo_[i] > hi_[i]) throw ContractError("box: infeasible (lo > hi)");
    }
  }
  bool is_indicator() const noexcept override { return true; }
  std::string describe() const override { return "box_indicator"; }

 protected:
  double do_value(const Point& x) const override {
    for (std::size_t i = 0; i < x.dim(); ++i) {
      if (x[i] < lo_[i] || x[i] > hi_[i]) return kInf;
    }
    return 0.0;
  }
  Point do_subgradient(const Point& x) const override {
    if (do_value(x) != 0.0) throw DomainError("box_indicator: subgradient outside the box");
    return Point::zeros(x.dim());
  }
  Point do_prox(double, const Point& x) const override { return project_box(lo_, hi_, x); }

 private:
  std::vector<double> lo_, hi_;
};

class BallIndicator final : public FunctionOracle {
 public:
  BallIndicator(const Point& center, double radius)
      : FunctionOracle(center.dim(), true, std::nullopt, std::nullopt),
        center_(center),
        radius_(radius) {
    if (!(radius > 0.0)) throw ContractError("ball: radius must be > 0");
  }
  bool is_indicator() const noexcept override { return true; }
  std::string describe() const override { return "ball_indicator"; }

 protected:
  double do_value(const Point& x) const override {
    return norm(x - center_) <= radius_ * (1.0 + kBoundSlack) ? 0.0 : kInf;
  }
  Point do_subgradient(const Point& x) const override {
    if (do_value(x) != 0.0) throw DomainError("ball_indicator: subgradient outside the ball");
    return Point::zeros(x.dim());
  }
  Point do_prox(double, const Point& x) const override {
    return project_ball(radius_, center_, x);
  }

 private:
  Point center_;
  double radius_;
};

class HingeBlock final : public FunctionOracle {
 public:
  HingeBlock(Eigen::MatrixXd features, Eigen::VectorXd labels)
      : FunctionOracle(static_cast<std::size_t>(features.cols()), false,
                       bound(features, labels), std::nullopt),
        features_(std::move(features)),
        labels_(std::move(labels)) {}
  std::string describe() const override { return "hinge_block"; }

 protected:
  double do_value(const Point& x) const override {
    const Eigen::VectorXd margins = labels_.cwiseProduct(features_ * x.as_eigen());
    double acc = 0.0;
    for (Eigen::Index j = 0; j < margins.size(); ++j) acc += std::max(0.0, 1.0 - margins[j]);
    return acc;
  }
  Point do_subgradient(const Point& x) const override {
    const Eigen::VectorXd margins = labels_.cwiseProduct(features_ * x.as_eigen());
    Eigen::VectorXd g = Eigen::VectorXd::Zero(features_.cols());
    // At margin == 1 the term's subdifferential contains 0; pick it.
    for (Eigen::Index j = 0; j < margins.size(); ++j) {
      if (margins[j] < 1.0) g -= labels_[j] * features_.row(j).transpose();
    }
    return Point::from_eigen(g);
  }

 private:
  static double bound(const Eigen::MatrixXd& features, const Eigen::VectorXd& labels) {
    if (features.rows() != labels.size()) throw ContractError("hinge: rows != len(labels)");
    double acc = 0.0;
    for (Eigen::Index j = 0; j < features.rows(); ++j) {
      acc += std::abs(labels[j]) * features.row(j).norm();
    }
    return acc;
  }

  Eigen::MatrixXd features_;
  Eigen::VectorXd labels_;
};

}  // namespace

OraclePtr make_zero(std::size_t dim) { return std::make_shared<ZeroFunction>(dim); }
OraclePtr make_l1(std::size_t dim, double weight) {
  return std::make_shared<L1Norm>(dim, weight);
}
OraclePtr make_shifted_l1(const Point& center) { return std::make_shared<ShiftedL1>(center); }
OraclePtr make_least_squares(Eigen::MatrixXd A, Eigen::VectorXd b) {
  return std::make_shared<LeastSquares>(std::move(A), std::move(b));
}
OraclePtr make_squared_norm(std::size_t dim, double coef) {
  return std::make_shared<SquaredNorm>(dim, coef);
}
OraclePtr make_linear(const Point& c) { return std::make_shared<Linear>(c); }
OraclePtr make_box_indicator(std::vector<double> lo, std::vector<double> hi) {
  return std::make_shared<BoxIndicator>(std::move(lo), std::move(hi));
}
OraclePtr make_ball_indicator(const Point& center, double radius) {
  return std::make_shared<BallIndicator>(center, radius);
}
OraclePtr make_hinge_block(Eigen::MatrixXd features, Eigen::VectorXd labels) {
  return std::make_shared<HingeBlock>(std::move(features), std::move(labels));
}

}  // namespace splitcert
