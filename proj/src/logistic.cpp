#include <cmath>

#include "pdsr/errors.hpp"
#include "pdsr/fusion.hpp"

namespace pdsr {

namespace {

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// log(1 + exp(z)) without overflow.
double softplus(double z) {
  return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z)));
}

}  // namespace

double LogisticModel::predict(const FeatureVector& x) const {
  double z = bias;
  for (int j = 0; j < kFeatureCount; ++j) {
    z += weights[j] * (x.feature(j) - feature_means[j]) / feature_scales[j];
  }
  return sigmoid(z);
}

double logistic_loss(const Eigen::Vector4d& w, double b,
                     const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
  const Eigen::VectorXd z =
      (X * w).array() + b;
  double loss = 0.0;
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    loss += softplus(z[i]) - y[i] * z[i];
  }
  return loss / static_cast<double>(z.size());
}

LogisticGradient logistic_gradient(const Eigen::Vector4d& w, double b,
                                   const Eigen::MatrixXd& X,
                                   const Eigen::VectorXd& y) {
  const Eigen::VectorXd z = (X * w).array() + b;
  Eigen::VectorXd r(z.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    r[i] = sigmoid(z[i]) - y[i];
  }
  const double n = static_cast<double>(z.size());
  return LogisticGradient{X.transpose() * r / n, r.sum() / n};
}

LogisticModel train_logistic(const std::vector<FeatureVector>& rows,
                             const LrHyper& hyper) {
  if (rows.empty()) throw DomainError("cannot train on an empty dataset");
  long long positives = 0;
  for (const FeatureVector& f : rows) positives += f.label;
  if (positives == 0 || positives == static_cast<long long>(rows.size())) {
    throw DomainError("logistic regression needs both classes present");
  }

  const auto n = static_cast<Eigen::Index>(rows.size());
  LogisticModel model;
  Eigen::MatrixXd raw(n, kFeatureCount);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (int j = 0; j < kFeatureCount; ++j) {
      raw(i, j) = rows[static_cast<std::size_t>(i)].feature(j);
    }
    y[i] = rows[static_cast<std::size_t>(i)].label;
  }

  for (int j = 0; j < kFeatureCount; ++j) {
    model.feature_means[j] = raw.col(j).mean();
    const double var =
        (raw.col(j).array() - model.feature_means[j]).square().mean();
    const double sd = std::sqrt(var);
    model.feature_scales[j] = sd > 0.0 ? sd : 1.0;
  }

  Eigen::MatrixXd X(n, kFeatureCount);
  for (int j = 0; j < kFeatureCount; ++j) {
    X.col(j) =
        (raw.col(j).array() - model.feature_means[j]) / model.feature_scales[j];
  }

  for (int epoch = 0; epoch < hyper.epochs; ++epoch) {
    const LogisticGradient g =
        logistic_gradient(model.weights, model.bias, X, y);
    model.weights -= hyper.learning_rate * g.dw;
    model.bias -= hyper.learning_rate * g.db;
  }
  return model;
}

}  // namespace pdsr
