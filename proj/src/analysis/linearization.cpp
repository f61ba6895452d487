#include "analysis/linearization.hpp"

#include <algorithm>
#include <array>
#include <limits>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "common/error.hpp"
#include "geometry/geometry.hpp"

namespace tiltobs
{

Eigen::Matrix<double, 6, 6> buildA1(const Gains & k)
{
  const Matrix3 i3 = Matrix3::Identity();
  Eigen::Matrix<double, 6, 6> a = Eigen::Matrix<double, 6, 6>::Zero();
  a.block<3, 3>(0, 0) = -k.alpha1 * i3;
  a.block<3, 3>(0, 3) = -k.alpha2 * i3;
  a.block<3, 3>(3, 0) = i3;
  return a;
}

Eigen::Matrix<double, 9, 9> buildA2(const Gains & k, GravityConstant g0)
{
  const double g = g0.value();
  const Matrix3 i3 = Matrix3::Identity();
  const Matrix3 sz = skew(Vector3::UnitZ());
  const Matrix3 sz2 = sz * sz;
  Eigen::Matrix<double, 9, 9> a = Eigen::Matrix<double, 9, 9>::Zero();
  a.block<3, 3>(0, 0) = -k.alpha1 * i3;
  a.block<3, 3>(0, 3) = -g * i3;
  a.block<3, 3>(3, 0) = (k.alpha2 / g) * i3;
  a.block<3, 3>(6, 3) = -k.gamma * sz2;
  a.block<3, 3>(6, 6) = -k.gamma * sz2;
  return a;
}

Eigen::Matrix<double, 8, 8> buildA3(const Gains & k, GravityConstant g0)
{
  const double g = g0.value();
  const Matrix3 i3 = Matrix3::Identity();
  Eigen::Matrix<double, 2, 3> horizontal = Eigen::Matrix<double, 2, 3>::Zero();
  horizontal(0, 0) = 1.0;
  horizontal(1, 1) = 1.0;

  Eigen::Matrix<double, 8, 8> a = Eigen::Matrix<double, 8, 8>::Zero();
  a.block<3, 3>(0, 0) = -k.alpha1 * i3;
  a.block<3, 3>(0, 3) = -g * i3;
  a.block<3, 3>(3, 0) = (k.alpha2 / g) * i3;
  a.block<2, 3>(6, 3) = k.gamma * horizontal;
  a.block<2, 2>(6, 6) = -k.gamma * Eigen::Matrix2d::Identity();
  return a;
}

Complex charPolyA2(const Gains & k, GravityConstant, Complex lambda)
{
  const Complex quadratic = lambda * lambda + k.alpha1 * lambda + k.alpha2;
  const Complex shifted = lambda - k.gamma;
  return quadratic * quadratic * quadratic * lambda * shifted * shifted;
}

Complex characteristicDeterminant(const Eigen::MatrixXd & m, Complex lambda)
{
  const Eigen::Index n = m.rows();
  const Eigen::MatrixXcd shifted = lambda * Eigen::MatrixXcd::Identity(n, n) - m.cast<Complex>();
  return shifted.partialPivLu().determinant();
}

std::vector<Complex> eigenvalues(const Eigen::MatrixXd & m)
{
  Eigen::EigenSolver<Eigen::MatrixXd> solver(m, false);
  if(solver.info() != Eigen::Success)
  {
    throw Error(ErrorCode::Degenerate, "eigenvalue iteration did not converge");
  }
  const Eigen::VectorXcd values = solver.eigenvalues();
  return std::vector<Complex>(values.data(), values.data() + values.size());
}

std::string toString(LinearizationId id)
{
  switch(id)
  {
    case LinearizationId::A1:
      return "A1";
    case LinearizationId::A2:
      return "A2";
    case LinearizationId::A3:
      return "A3";
  }
  return "?";
}

std::vector<Complex> closedFormEigenvalues(LinearizationId id, const Gains & k)
{
  // roots of lambda^2 + alpha1 lambda + alpha2, written to avoid cancellation
  const Complex disc = std::sqrt(Complex(k.alpha1 * k.alpha1 - 4.0 * k.alpha2, 0.0));
  const Complex large = (-k.alpha1 - disc) / 2.0;
  const Complex small = Complex(k.alpha2, 0.0) / large;

  std::vector<Complex> roots;
  for(int i = 0; i < 3; ++i)
  {
    roots.push_back(small);
    roots.push_back(large);
  }
  switch(id)
  {
    case LinearizationId::A1:
      break;
    case LinearizationId::A2:
      roots.push_back(0.0);
      roots.push_back(k.gamma);
      roots.push_back(k.gamma);
      break;
    case LinearizationId::A3:
      roots.push_back(-k.gamma);
      roots.push_back(-k.gamma);
      break;
  }
  return roots;
}

double matchSpectra(const std::vector<Complex> & a, const std::vector<Complex> & b)
{
  if(a.size() != b.size())
  {
    throw Error(ErrorCode::InvalidArgument, "spectra have different sizes");
  }
  std::vector<bool> used(b.size(), false);
  double worst = 0.0;
  for(const Complex & x : a)
  {
    double best = std::numeric_limits<double>::infinity();
    std::size_t bestIndex = 0;
    for(std::size_t j = 0; j < b.size(); ++j)
    {
      if(!used[j] && std::abs(x - b[j]) < best)
      {
        best = std::abs(x - b[j]);
        bestIndex = j;
      }
    }
    used[bestIndex] = true;
    worst = std::max(worst, best);
  }
  return worst;
}

LinearizationReport analyzeLinearization(LinearizationId id, const Gains & k, GravityConstant g0)
{
  k.validate();
  Eigen::MatrixXd m;
  switch(id)
  {
    case LinearizationId::A1:
      m = buildA1(k);
      break;
    case LinearizationId::A2:
      m = buildA2(k, g0);
      break;
    case LinearizationId::A3:
      m = buildA3(k, g0);
      break;
  }

  LinearizationReport report;
  report.id = id;
  report.eigenvalues = eigenvalues(m);
  report.expectedEigenvalues = closedFormEigenvalues(id, k);
  report.eigenvalueMatchError = matchSpectra(report.expectedEigenvalues, report.eigenvalues);
  report.slowestRealPart = -std::numeric_limits<double>::infinity();
  for(const Complex & l : report.eigenvalues)
  {
    report.slowestRealPart = std::max(report.slowestRealPart, l.real());
  }
  report.isHurwitz = report.slowestRealPart < 0.0;

  static constexpr std::array<Complex, 5> probes{Complex(0.5, 0.0), Complex(1.0, 1.0), Complex(-2.0, 0.5),
                                                 Complex(0.0, 3.0), Complex(-50.0, 0.0)};
  double residual = 0.0;
  for(const Complex & lambda : probes)
  {
    Complex closedForm = 1.0;
    for(const Complex & r : report.expectedEigenvalues)
    {
      closedForm *= lambda - r;
    }
    const Complex det = characteristicDeterminant(m, lambda);
    residual = std::max(residual, std::abs(det - closedForm) / std::max(1.0, std::abs(closedForm)));
  }
  report.characteristicPolynomialResidual = residual;
  return report;
}

} // namespace tiltobs
