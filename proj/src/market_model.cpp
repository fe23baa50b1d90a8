#include "kycvar/market_model.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <cstdio>

#include "kycvar/errors.hpp"
#include "kycvar/text.hpp"

namespace kycvar {

namespace {

std::string cell(std::size_t i, std::size_t j) {
  return "rho[" + std::to_string(i + 1) + "][" + std::to_string(j + 1) + "]";
}

}  // namespace

double min_eigenvalue(const Mat5& symmetric) {
  Eigen::Matrix<double, 5, 5> m;
  for (std::size_t i = 0; i < kBuckets; ++i)
    for (std::size_t j = 0; j < kBuckets; ++j) m(i, j) = symmetric[i][j];
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix<double, 5, 5>> solver(m, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

void validate_correlation(const Mat5& rho) {
  for (std::size_t i = 0; i < kBuckets; ++i) {
    for (std::size_t j = 0; j < kBuckets; ++j) {
      const double v = rho[i][j];
      if (!std::isfinite(v) || std::abs(v) > 1.0 + kSymmetryTolerance) {
        throw SchemaError(cell(i, j) + " = " + text::shortest(v) + " outside [-1, 1]", "rho");
      }
      if (std::abs(v - rho[j][i]) > kSymmetryTolerance) {
        throw SchemaError("rho is not symmetric at " + cell(i, j), "rho");
      }
    }
    if (std::abs(rho[i][i] - 1.0) > kSymmetryTolerance) {
      throw SchemaError(cell(i, i) + " must be 1", "rho");
    }
  }
  const double lambda = min_eigenvalue(rho);
  if (lambda < -kPsdSlack) {
    throw ModelValidationError(
        "rho is not positive semidefinite: minimum eigenvalue " + text::shortest(lambda), lambda);
  }
}

Mat5 build_covariance(const Vec5& sigma, const Mat5& rho) {
  for (std::size_t i = 0; i < kBuckets; ++i) {
    if (!std::isfinite(sigma[i]) || sigma[i] < 0.0) {
      throw SchemaError("sigma[" + std::to_string(i + 1) + "] must be nonnegative", "sigma");
    }
  }
  validate_correlation(rho);
  Mat5 cov{};
  for (std::size_t i = 0; i < kBuckets; ++i) {
    for (std::size_t j = i; j < kBuckets; ++j) {
      const double v = sigma[i] * rho[i][j] * sigma[j];
      cov[i][j] = v;
      cov[j][i] = v;
    }
  }
  return cov;
}

BucketMarketModel::BucketMarketModel(const Vec5& mu, const Vec5& sigma, const Mat5& rho)
    : mu_(mu), sigma_(sigma), rho_(rho), covariance_(build_covariance(sigma, rho)) {
  for (std::size_t i = 0; i < kBuckets; ++i) {
    if (!std::isfinite(mu_[i])) throw SchemaError("mu must be finite", "mu");
  }
}

BucketMarketModel BucketMarketModel::reference() {
  static const BucketMarketModel model(
      {0.52, 1.97, 2.21, 2.93, 4.23}, {0.13, 5.53, 6.48, 9.68, 15.22},
      Mat5{{{1, -0.22, -0.16, -0.23, 0.07},
            {-0.22, 1, 0.79, 0.59, 0.12},
            {-0.16, 0.79, 1, 0.78, 0.31},
            {-0.23, 0.59, 0.78, 1, 0.06},
            {0.07, 0.12, 0.31, 0.06, 1}}});
  return model;
}

std::string ModelConfig::canonical() const {
  std::string out;
  auto list = [&out](const char* key, const Vec5& v) {
    out += key;
    out += '=';
    for (std::size_t i = 0; i < kBuckets; ++i) {
      if (i) out += ',';
      out += text::shortest(v[i]);
    }
    out += ';';
  };
  list("mu", model.mu());
  list("sigma", model.sigma());
  for (std::size_t i = 0; i < kBuckets; ++i) list("rho", model.rho()[i]);
  out += "alpha=" + text::shortest(alpha) + ';';
  return out;
}

std::string ModelConfig::fingerprint() const {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(text::fnv1a64(canonical())));
  return buf;
}

}  // namespace kycvar
