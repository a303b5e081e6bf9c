#include "petrov/verify.hpp"

#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <sstream>
#include <thread>

namespace petrov::verify {

namespace {

using catalog::FrameOption;

RealVector shifted(const RealVector& q, int k, double step) {
  RealVector out = q;
  out(k) += step;
  return out;
}

// Shrinks h until a ball of radius 2h around q stays in the domain.
double interior_step(const HypersurfaceExample& ex, const RealVector& q, double h) {
  if (!(h > 0) || !std::isfinite(h)) throw Error(ErrorKind::contract, "step h must be positive");
  ex.check_domain(q);
  for (int attempt = 0; attempt < 4; ++attempt, h /= 2) {
    bool inside = true;
    for (int k = 0; k < ex.param_dim() && inside; ++k)
      for (double sgn : {-2.0, 2.0}) {
        try {
          ex.check_domain(shifted(q, k, sgn * h));
        } catch (const Error& e) {
          if (e.kind() != ErrorKind::domain) throw;
          inside = false;
          break;
        }
      }
    if (inside) return h;
  }
  throw Error(ErrorKind::domain, "point is too close to the domain boundary of example " + ex.id());
}

RealMatrix metric(const HypersurfaceExample& ex, const RealVector& q) {
  const RealMatrix j = ex.jacobian(q);
  return j.transpose() * ex.ambient().ambient_gram() * j;
}

std::vector<RealMatrix> christoffel(const HypersurfaceExample& ex, const RealVector& q, double h) {
  const int m = ex.param_dim();
  std::vector<RealMatrix> dg;
  for (int k = 0; k < m; ++k) dg.push_back((metric(ex, shifted(q, k, h)) - metric(ex, shifted(q, k, -h))) / (2 * h));
  const RealMatrix ginv = metric(ex, q).inverse();
  std::vector<RealMatrix> gamma(static_cast<size_t>(m), RealMatrix::Zero(m, m));
  for (int l = 0; l < m; ++l)
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        double s = 0.0;
        for (int p = 0; p < m; ++p) s += ginv(l, p) * (dg[i](p, j) + dg[j](p, i) - dg[p](i, j));
        gamma[l](i, j) = 0.5 * s;
      }
  return gamma;
}

ResidualReport base_report(const HypersurfaceExample& ex, const RealVector& q, const char* check, double h,
                           double threshold) {
  ResidualReport r;
  r.example = ex.id();
  r.check = check;
  r.point = q;
  r.h = h;
  r.threshold = threshold;
  return r;
}

ResidualReport convergence_report(const HypersurfaceExample& ex, const RealVector& q, const char* check, double h,
                                  double threshold, const Thresholds& t,
                                  const std::function<double(double)>& residual_at) {
  h = interior_step(ex, q, h);
  ResidualReport r = base_report(ex, q, check, h, threshold);
  r.residual = residual_at(h);
  r.residual_half = residual_at(h / 2);
  r.ratio = *r.residual_half > 0 ? r.residual / *r.residual_half : std::numeric_limits<double>::infinity();
  const bool small = r.residual <= t.noise_floor;
  r.pass = r.residual <= threshold && (small || *r.ratio >= t.convergence_ratio);
  if (small) r.note = "ratio test skipped at rounding level";
  return r;
}

}  // namespace

RealMatrix coordinate_shape(const HypersurfaceExample& ex, const RealVector& q, const RealMatrix& perturbation) {
  const RealMatrix b = ex.frame(q, FrameOption::standard);
  RealMatrix s = ex.shape(q, FrameOption::standard);
  if (perturbation.size() > 0) {
    if (perturbation.rows() != s.rows() || perturbation.cols() != s.cols())
      throw Error(ErrorKind::shape, "shape perturbation has the wrong size");
    s += perturbation;
  }
  const RealMatrix c = ex.jacobian(q).colPivHouseholderQr().solve(b);
  return c * s * c.inverse();
}

CurvatureData curvature_data(const HypersurfaceExample& ex, const RealVector& q, double h) {
  const int m = ex.param_dim();
  CurvatureData d;
  d.dim = m;
  d.metric = metric(ex, q);
  d.christoffel = christoffel(ex, q, h);
  std::vector<std::vector<RealMatrix>> dgamma;  // dgamma[i][l](j, k) = d_i Gamma^l_jk
  for (int i = 0; i < m; ++i) {
    const auto plus = christoffel(ex, shifted(q, i, h), h);
    const auto minus = christoffel(ex, shifted(q, i, -h), h);
    std::vector<RealMatrix> di;
    for (int l = 0; l < m; ++l) di.push_back((plus[l] - minus[l]) / (2 * h));
    dgamma.push_back(std::move(di));
  }
  const auto& g = d.christoffel;
  d.riemann.assign(static_cast<size_t>(m * m * m * m), 0.0);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k) {
        RealVector up(m);  // R^p_ijk
        for (int p = 0; p < m; ++p) {
          double s = dgamma[i][p](j, k) - dgamma[j][p](i, k);
          for (int n = 0; n < m; ++n) s += g[p](i, n) * g[n](j, k) - g[p](j, n) * g[n](i, k);
          up(p) = s;
        }
        for (int l = 0; l < m; ++l)
          d.riemann[static_cast<size_t>(((i * m + j) * m + k) * m + l)] = up.dot(d.metric.col(l));
      }
  return d;
}

ResidualReport shape_fd_check(const HypersurfaceExample& ex, const RealVector& q, double h, const Thresholds& t,
                              const RealMatrix& perturbation) {
  h = interior_step(ex, q, h);
  ResidualReport r = base_report(ex, q, "shape_fd", h, t.shape_fd);
  const RealMatrix j = ex.jacobian(q);
  const RealMatrix rhs = j * coordinate_shape(ex, q, perturbation);
  const RealMatrix g = ex.ambient().ambient_gram();
  const RealVector x = ex.point(q);
  const bool sphere = ex.ambient().curvature != 0;
  RealMatrix lhs(j.rows(), j.cols());
  for (int k = 0; k < ex.param_dim(); ++k) {
    RealVector d = (ex.normal(shifted(q, k, h)) - ex.normal(shifted(q, k, -h))) / (2 * h);
    // Levi-Civita of the pseudo-sphere: drop the component along the position vector.
    if (sphere) d -= (d.dot(g * x) / x.dot(g * x)) * x;
    lhs.col(k) = -d;
  }
  r.residual = (lhs - rhs).cwiseAbs().maxCoeff();
  r.pass = r.residual <= t.shape_fd;
  return r;
}

double gauss_residual_value(const HypersurfaceExample& ex, const RealVector& q, double h,
                            const RealMatrix& perturbation) {
  const CurvatureData d = curvature_data(ex, q, h);
  const int m = d.dim;
  const RealMatrix& g = d.metric;
  const RealMatrix a = coordinate_shape(ex, q, perturbation);
  RealMatrix sff = a.transpose() * g;  // <A d_a, d_b>
  sff = 0.5 * (sff + sff.transpose()).eval();
  const double kappa = ex.ambient().curvature;
  const double nu = ex.nu();
  double worst = 0.0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k)
        for (int l = 0; l < m; ++l) {
          const double rhs = kappa * (g(j, k) * g(i, l) - g(i, k) * g(j, l)) +
                             nu * (sff(j, k) * sff(i, l) - sff(i, k) * sff(j, l));
          worst = std::max(worst, std::fabs(d.r(i, j, k, l) - rhs));
        }
  return worst;
}

double codazzi_residual_value(const HypersurfaceExample& ex, const RealVector& q, double h,
                              const RealMatrix& perturbation) {
  const int m = ex.param_dim();
  const RealMatrix g = metric(ex, q);
  const auto gamma = christoffel(ex, q, h);
  const RealMatrix a = coordinate_shape(ex, q, perturbation);
  std::vector<RealMatrix> cov;  // cov[i](l, j) = (nabla_i A)^l_j
  for (int i = 0; i < m; ++i) {
    const RealMatrix da =
        (coordinate_shape(ex, shifted(q, i, h), perturbation) - coordinate_shape(ex, shifted(q, i, -h), perturbation)) /
        (2 * h);
    RealMatrix c = da;
    for (int l = 0; l < m; ++l)
      for (int j = 0; j < m; ++j) {
        double s = 0.0;
        for (int p = 0; p < m; ++p) s += gamma[l](i, p) * a(p, j) - a(l, p) * gamma[p](i, j);
        c(l, j) += s;
      }
    cov.push_back(std::move(c));
  }
  double worst = 0.0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      const RealVector diff = cov[i].col(j) - cov[j].col(i);
      worst = std::max(worst, (g * diff).cwiseAbs().maxCoeff());
    }
  return worst;
}

ResidualReport gauss_residual(const HypersurfaceExample& ex, const RealVector& q, double h, const Thresholds& t,
                              const RealMatrix& perturbation) {
  return convergence_report(ex, q, "gauss", h, t.gauss, t,
                            [&](double step) { return gauss_residual_value(ex, q, step, perturbation); });
}

ResidualReport codazzi_residual(const HypersurfaceExample& ex, const RealVector& q, double h, const Thresholds& t,
                                const RealMatrix& perturbation) {
  return convergence_report(ex, q, "codazzi", h, t.codazzi, t,
                            [&](double step) { return codazzi_residual_value(ex, q, step, perturbation); });
}

namespace {

double fd_laplacian(const spaceform::QuadricFunction& f, const RealVector& x, double h) {
  using Wide = Eigen::Matrix<long double, Eigen::Dynamic, 1>;
  const bool sphere = f.variant == spaceform::QuadricVariant::sphere;
  const Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic> gp =
      (spaceform::ambient_gram(static_cast<int>(x.size()), f.index) * f.P).cast<long double>();
  const Wide gl = (spaceform::ambient_gram(static_cast<int>(x.size()), f.index) * f.p).cast<long double>();
  // Extended precision: the stencil divides differences of O(|x|^2) values
  // by h^2, and double rounding alone reached the spread threshold.
  // On the pseudo-sphere the degree-0 extension y -> f(y / |y|) is used; its
  // flat Laplacian on the unit level equals the intrinsic one.
  auto value = [&](const Wide& y) -> long double {
    const long double q = y.dot(gp * y);
    if (!sphere) return q + 2 * gl.dot(y);
    long double yy = 0;
    for (Eigen::Index k = 0; k < y.size(); ++k) yy += (k < f.index ? -1 : 1) * y(k) * y(k);
    return q / yy;
  };
  const Wide xw = x.cast<long double>();
  const long double hw = h;
  const long double center = value(xw);
  long double lap = 0;
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    // Five-point stencil: the extension has large fourth derivatives away
    // from the origin, so the three-point rule's h^2 error shows up as spread.
    auto at = [&](long double step) {
      Wide y = xw;
      y(k) += step;
      return value(y);
    };
    const long double second =
        (-at(2 * hw) + 16 * at(hw) - 30 * center + 16 * at(-hw) - at(-2 * hw)) / (12 * hw * hw);
    lap += (k < f.index ? -1 : 1) * second;
  }
  return static_cast<double>(lap);
}

}  // namespace

IsoparametricReport isoparametric_function_check(const spaceform::QuadricFunction& f,
                                                 const std::vector<RealVector>& samples, const Thresholds& t,
                                                 const std::string& label) {
  IsoparametricReport out;
  for (auto* r : {&out.gradient, &out.laplacian}) {
    r->example = label;
    r->h = t.iso_h;
  }
  out.gradient.check = "iso_gradient";
  out.gradient.threshold = t.iso_gradient_spread;
  out.gradient.h = 0.0;
  out.laplacian.check = "iso_laplacian";
  out.laplacian.threshold = t.iso_laplacian_spread;
  if (samples.empty()) throw Error(ErrorKind::contract, "isoparametric check needs at least one sample");

  struct Range {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    void add(double v) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    double spread() const { return hi - lo; }
  };
  std::map<long long, std::pair<Range, Range>> groups;
  for (const auto& x : samples) {
    const double level = f.value(x);
    const auto key = std::llround(level * 1e6);
    const RealVector grad = spaceform::quadric_gradient(f, x, 1e-8);
    groups[key].first.add(spaceform::ambient_inner(grad, grad, f.index));
    groups[key].second.add(fd_laplacian(f, x, t.iso_h));
  }
  for (const auto& [key, ranges] : groups) {
    out.gradient.residual = std::max(out.gradient.residual, ranges.first.spread());
    out.laplacian.residual = std::max(out.laplacian.residual, ranges.second.spread());
  }
  std::ostringstream note;
  note << groups.size() << " level group(s), " << samples.size() << " samples";
  out.gradient.note = out.laplacian.note = note.str();
  out.gradient.pass = out.gradient.residual <= out.gradient.threshold;
  out.laplacian.pass = out.laplacian.residual <= out.laplacian.threshold;
  return out;
}

std::vector<RealVector> sample_level_points(const spaceform::QuadricFunction& f, const std::vector<double>& levels,
                                            int per_level, std::uint64_t seed) {
  if (per_level < 1) throw Error(ErrorKind::contract, "need at least one point per level");
  catalog::Sampler rng(seed);
  std::vector<RealVector> out;
  const int n = f.ambient_dim();
  const bool sphere = f.variant == spaceform::QuadricVariant::sphere;
  for (double c : levels) {
    auto fc = f;
    fc.level = c;
    int found = 0;
    for (int attempt = 0; attempt < 100 * per_level && found < per_level; ++attempt) {
      RealVector x(n);
      for (int k = 0; k < n; ++k) x(k) = rng.uniform(-1.5, 1.5);
      if (sphere) {
        const double xx = spaceform::ambient_inner(x, x, f.index);
        if (xx <= 0.1) continue;
        x /= std::sqrt(xx);
      }
      try {
        x = spaceform::project_to_level(fc, x, 1e-14);
        // Keep samples in a bounded region; far out the projection residual
        // scales with |x|^2 and pollutes the spread.
        if (x.cwiseAbs().maxCoeff() > 4.0) continue;
        const RealVector grad = spaceform::quadric_gradient(fc, x, 1e-8);
        if (std::fabs(spaceform::ambient_inner(grad, grad, f.index)) <= 1e-6) continue;
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::domain && e.kind() != ErrorKind::degenerate_level) throw;
        continue;
      }
      out.push_back(std::move(x));
      ++found;
    }
    if (found < per_level) {
      std::ostringstream os;
      os << "could not sample the level set f = " << c;
      throw Error(ErrorKind::degenerate_level, os.str());
    }
  }
  return out;
}

RunResult run(const RunOptions& options) {
  if (options.samples < 1) throw Error(ErrorKind::contract, "sample count must be at least 1");
  const auto& t = options.thresholds;
  const std::vector<std::string> ids = options.ids.empty() ? catalog::example_ids() : options.ids;

  std::vector<std::shared_ptr<const HypersurfaceExample>> examples;
  for (const auto& id : ids) {
    const bool takes_parameter = id == "k" || id == "l";
    examples.push_back(catalog::make_example(id, takes_parameter ? options.parameter : std::nullopt));
  }

  // One slot per report keeps the output order independent of scheduling.
  std::vector<ResidualReport> slots;
  std::vector<std::function<void()>> tasks;
  for (const auto& ex : examples) {
    const auto points = ex->sample_domain(options.samples, options.seed);
    for (size_t s = 0; s < points.size(); ++s) {
      const size_t base = slots.size();
      slots.resize(base + 3);
      tasks.emplace_back([&, ex, q = points[s], base, s] {
        const double h1 = options.h.value_or(t.shape_fd_h);
        const double h2 = options.h.value_or(t.curvature_h);
        const char* names[] = {"shape_fd", "gauss", "codazzi"};
        for (int c = 0; c < 3; ++c) {
          ResidualReport& r = slots[base + static_cast<size_t>(c)];
          try {
            r = c == 0 ? shape_fd_check(*ex, q, h1, t) : c == 1 ? gauss_residual(*ex, q, h2, t) : codazzi_residual(*ex, q, h2, t);
          } catch (const std::exception& e) {
            r = ResidualReport{};
            r.example = ex->id();
            r.check = names[c];
            r.point = q;
            r.pass = false;
            r.note = std::string("error: ") + e.what();
          }
          r.sample = static_cast<int>(s);
        }
      });
    }
    if (const auto* f = ex->quadric()) {
      const size_t base = slots.size();
      slots.resize(base + 2);
      tasks.emplace_back([&, ex, f, base] {
        try {
          const auto pts = sample_level_points(*f, {f->level, f->level + 0.5}, options.samples, options.seed);
          const auto rep = isoparametric_function_check(*f, pts, t, ex->id());
          slots[base] = rep.gradient;
          slots[base + 1] = rep.laplacian;
        } catch (const std::exception& e) {
          for (size_t k = 0; k < 2; ++k) {
            slots[base + k] = ResidualReport{};
            slots[base + k].example = ex->id();
            slots[base + k].check = k == 0 ? "iso_gradient" : "iso_laplacian";
            slots[base + k].note = std::string("error: ") + e.what();
          }
        }
      });
    }
  }

  unsigned threads = options.threads ? options.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max<size_t>(1, tasks.size())));
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t k = next++; k < tasks.size(); k = next++) tasks[k]();
  };
  std::vector<std::thread> pool;
  for (unsigned k = 1; k < threads; ++k) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  RunResult result;
  result.reports = std::move(slots);
  for (const auto& r : result.reports) result.all_pass = result.all_pass && r.pass;
  return result;
}

}  // namespace petrov::verify
