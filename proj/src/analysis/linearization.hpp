#pragma once

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "observer/observer.hpp"

namespace tiltobs
{

using Complex = std::complex<double>;

/// Linearized error dynamics of the intermediate estimator, state
/// ((alpha2/g0) z1, z2'). Blocks [-alpha1 I, -alpha2 I; I, 0].
Eigen::Matrix<double, 6, 6> buildA1(const Gains & k);

/// Linearization of the full error ODE at the antipodal equilibrium
/// (0, 0, 2 e_z), state (z1, z2', z2 - 2 e_z).
Eigen::Matrix<double, 9, 9> buildA2(const Gains & k, GravityConstant g0);

/// Linearization at the origin in tangent coordinates (z1, z2', z2 horizontal).
/// The z2' -> z2 block is gamma * [I_2 0], the exact Jacobian of the flow.
Eigen::Matrix<double, 8, 8> buildA3(const Gains & k, GravityConstant g0);

/// P(lambda) = (lambda^2 + alpha1 lambda + alpha2)^3 lambda (lambda - gamma)^2,
/// the characteristic polynomial of A2.
Complex charPolyA2(const Gains & k, GravityConstant g0, Complex lambda);

/// det(lambda I - m) via LU.
Complex characteristicDeterminant(const Eigen::MatrixXd & m, Complex lambda);

std::vector<Complex> eigenvalues(const Eigen::MatrixXd & m);

enum class LinearizationId
{
  A1,
  A2,
  A3
};

std::string toString(LinearizationId id);

struct LinearizationReport
{
  LinearizationId id = LinearizationId::A1;
  std::vector<Complex> eigenvalues; ///< computed numerically
  std::vector<Complex> expectedEigenvalues; ///< closed-form roots with multiplicity
  double eigenvalueMatchError = 0.0; ///< max distance after one-to-one matching
  bool isHurwitz = false;
  double slowestRealPart = 0.0; ///< largest real part
  double characteristicPolynomialResidual = 0.0; ///< relative det vs closed form
};

/// Closed-form spectrum of the given matrix.
std::vector<Complex> closedFormEigenvalues(LinearizationId id, const Gains & k);

LinearizationReport analyzeLinearization(LinearizationId id, const Gains & k, GravityConstant g0);

/// Max over a one-to-one greedy matching of |a_i - b_j|. Sizes must agree.
double matchSpectra(const std::vector<Complex> & a, const std::vector<Complex> & b);

} // namespace tiltobs
