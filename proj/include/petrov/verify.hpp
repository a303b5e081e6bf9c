#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "petrov/catalog.hpp"

namespace petrov::verify {

using catalog::HypersurfaceExample;

/// Every threshold and default step of the harness.
struct Thresholds {
  double shape_fd = 1e-5;
  double shape_fd_h = 1e-4;
  double gauss = 1e-3;
  double codazzi = 1e-3;
  double curvature_h = 1e-3;
  double convergence_ratio = 3.0;
  /// Residuals at or below this are rounding noise; the ratio test is skipped.
  double noise_floor = 1e-9;
  double iso_gradient_spread = 1e-8;
  double iso_laplacian_spread = 1e-4;
  double iso_h = 1e-4;
};

struct ResidualReport {
  std::string example;
  std::string check;
  int sample = -1;
  RealVector point;
  double residual = 0.0;
  double h = 0.0;
  double threshold = 0.0;
  /// Residual with step h/2 and residual(h)/residual(h/2), for convergence checks.
  std::optional<double> residual_half;
  std::optional<double> ratio;
  bool pass = false;
  std::string note;
};

/// Induced metric, Christoffel symbols and curvature of a chart at one point.
struct CurvatureData {
  int dim = 0;
  RealMatrix metric;
  /// christoffel[l](i, j) = Gamma^l_ij.
  std::vector<RealMatrix> christoffel;
  /// riemann[((i*m + j)*m + k)*m + l] = <R(d_i, d_j) d_k, d_l>.
  std::vector<double> riemann;
  double r(int i, int j, int k, int l) const { return riemann[static_cast<size_t>(((i * dim + j) * dim + k) * dim + l)]; }
};

CurvatureData curvature_data(const HypersurfaceExample& ex, const RealVector& q, double h);

/// Shape operator in chart coordinates: columns are A(d_i) in the basis d_j.
RealMatrix coordinate_shape(const HypersurfaceExample& ex, const RealVector& q, const RealMatrix& perturbation = {});

ResidualReport shape_fd_check(const HypersurfaceExample& ex, const RealVector& q, double h,
                              const Thresholds& t = {}, const RealMatrix& perturbation = {});
ResidualReport gauss_residual(const HypersurfaceExample& ex, const RealVector& q, double h,
                              const Thresholds& t = {}, const RealMatrix& perturbation = {});
ResidualReport codazzi_residual(const HypersurfaceExample& ex, const RealVector& q, double h,
                                const Thresholds& t = {}, const RealMatrix& perturbation = {});

/// Raw residual values without the h/2 companion run.
double gauss_residual_value(const HypersurfaceExample& ex, const RealVector& q, double h,
                            const RealMatrix& perturbation = {});
double codazzi_residual_value(const HypersurfaceExample& ex, const RealVector& q, double h,
                              const RealMatrix& perturbation = {});

/// Spread of <grad f, grad f> and of the finite-difference Laplacian within
/// each group of samples sharing a level value.
struct IsoparametricReport {
  ResidualReport gradient;
  ResidualReport laplacian;
  bool pass() const { return gradient.pass && laplacian.pass; }
};

IsoparametricReport isoparametric_function_check(const spaceform::QuadricFunction& f,
                                                 const std::vector<RealVector>& samples, const Thresholds& t = {},
                                                 const std::string& label = "quadric");

/// Seeded points on the level sets f = c for each c in `levels`.
std::vector<RealVector> sample_level_points(const spaceform::QuadricFunction& f, const std::vector<double>& levels,
                                            int per_level, std::uint64_t seed);

struct RunOptions {
  std::vector<std::string> ids;  // empty: every catalog entry
  std::optional<double> h;       // overrides both default steps
  int samples = 20;
  std::uint64_t seed = 0;
  std::optional<double> parameter;  // shape parameter of k and l
  Thresholds thresholds;
  unsigned threads = 0;  // 0: hardware concurrency
};

struct RunResult {
  std::vector<ResidualReport> reports;
  bool all_pass = true;
};

/// Runs the finite-difference checks on seeded samples of each example (plus
/// the isoparametric-function check of level-set examples). Work is spread
/// across threads; reports come back ordered by (example, sample, check).
RunResult run(const RunOptions& options);

}  // namespace petrov::verify
