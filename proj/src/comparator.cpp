#include "mrc/comparator.hpp"

#include <cmath>

#include <Eigen/Dense>

#include "mrc/error.hpp"

namespace mrc {

std::vector<double> IpwFit::free_coef() const {
  const std::size_t skip = intercept ? 2 : 1;
  return {coef.begin() + static_cast<std::ptrdiff_t>(skip), coef.end()};
}

IpwFit ipw_least_squares(const Dataset& data, const SamplingScheme& scheme, bool intercept) {
  const auto n = static_cast<Eigen::Index>(data.n());
  const auto d = static_cast<Eigen::Index>(data.d());
  const Eigen::Index offset = intercept ? 1 : 0;
  const Eigen::Index p = offset + 1 + d;

  IpwFit fit;
  fit.intercept = intercept;
  fit.weights_used.resize(data.n());
  Eigen::VectorXd w(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double pi = scheme.acceptance(data.y()[static_cast<std::size_t>(i)]);
    if (!(pi > 0.0))
      throw InvalidWeight("sampling probability is zero at row " + std::to_string(i) + " (y = " +
                          std::to_string(data.y()[static_cast<std::size_t>(i)]) + ")");
    w(i) = 1.0 / pi;
    fit.weights_used[static_cast<std::size_t>(i)] = w(i);
  }

  Eigen::MatrixXd design(n, p);
  if (intercept) design.col(0).setOnes();
  design.col(offset) = Eigen::Map<const Eigen::VectorXd>(data.z().data(), n);
  design.rightCols(d) = data.x();
  const Eigen::VectorXd y = Eigen::Map<const Eigen::VectorXd>(data.y().data(), n);

  const Eigen::MatrixXd gram = design.transpose() * w.asDiagonal() * design;
  const Eigen::VectorXd rhs = design.transpose() * w.cwiseProduct(y);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram, Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  if (!(lo > hi * 1e-14))
    throw RankDeficient("weighted Gram matrix is singular (eigenvalues " + std::to_string(lo) + ", " +
                        std::to_string(hi) + ")");
  if (hi / lo > 1e10) fit.warnings.push_back("weighted Gram matrix is ill-conditioned");

  const Eigen::LLT<Eigen::MatrixXd> llt(gram);
  if (llt.info() != Eigen::Success) throw RankDeficient("weighted Gram matrix is not positive definite");
  const Eigen::VectorXd beta = llt.solve(rhs);
  fit.coef.assign(beta.data(), beta.data() + beta.size());
  return fit;
}

}  // namespace mrc
