#include <cmath>

#include "epf/error.h"
#include "epf/regressors.h"

namespace epf {

namespace {

struct Centered {
  Eigen::MatrixXd x;  // column-major for the QR
  Vector y;
  Eigen::RowVectorXd x_mean;
  double y_mean;
};

Centered Center(const Matrix& x, const Vector& y) {
  if (x.rows() != y.size()) {
    throw Error(ErrorCode::kLengthMismatch, "X and y row counts differ");
  }
  if (x.rows() == 0) {
    throw Error(ErrorCode::kEmptyTrainingSet, "no training rows");
  }
  if (!x.allFinite() || !y.allFinite()) {
    throw Error(ErrorCode::kInvalidArgument, "training data must be finite");
  }
  Centered c;
  c.x_mean = x.colwise().mean();
  c.y_mean = y.mean();
  c.x = x.rowwise() - c.x_mean;
  c.y = y.array() - c.y_mean;
  return c;
}

constexpr double kRankThreshold = 1e-10;

}  // namespace

FittedModel FitLinear(const Matrix& x, const Vector& y) {
  const Centered c = Center(x, y);
  const Eigen::Index d = x.cols();
  if (x.rows() < d + 1) {
    throw Error(ErrorCode::kRankDeficient,
                "need at least d + 1 = " + std::to_string(d + 1) + " rows, have " +
                    std::to_string(x.rows()));
  }
  LinearState state;
  if (d == 0) {
    state.coefficients = Vector();
  } else {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(c.x);
    qr.setThreshold(kRankThreshold);
    if (qr.rank() < d) {
      throw Error(ErrorCode::kRankDeficient,
                  "design matrix has rank " + std::to_string(qr.rank()) +
                      " < " + std::to_string(d) + " (collinear features)");
    }
    state.coefficients = qr.solve(c.y);
  }
  state.intercept = c.y_mean - c.x_mean.dot(state.coefficients);
  RegressorSpec spec{LinearParams{}};
  return FittedModel(spec, std::move(state), DefaultFeatureNames(x.cols()));
}

FittedModel FitRidge(const Matrix& x, const Vector& y, double alpha) {
  RegressorSpec spec{RidgeParams{alpha}};
  spec.Validate();
  const Centered c = Center(x, y);
  const Eigen::Index n = x.rows();
  const Eigen::Index d = x.cols();
  LinearState state;
  if (d == 0) {
    state.coefficients = Vector();
  } else {
    // [Xc; sqrt(alpha) I] w = [yc; 0]
    Eigen::MatrixXd a(n + d, d);
    a.topRows(n) = c.x;
    a.bottomRows(d) = std::sqrt(alpha) * Eigen::MatrixXd::Identity(d, d);
    Vector b = Vector::Zero(n + d);
    b.head(n) = c.y;
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
    qr.setThreshold(kRankThreshold);
    state.coefficients = qr.solve(b);
  }
  state.intercept = c.y_mean - c.x_mean.dot(state.coefficients);
  return FittedModel(spec, std::move(state), DefaultFeatureNames(x.cols()));
}

}  // namespace epf
