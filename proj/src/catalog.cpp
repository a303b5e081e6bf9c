#include "petrov/catalog.hpp"

#include <cmath>
#include <random>

namespace petrov::catalog {

const char* to_string(FrameOption f) { return f == FrameOption::standard ? "standard" : "special"; }

FrameOption frame_option_from_string(const std::string& text) {
  if (text == "standard") return FrameOption::standard;
  if (text == "special") return FrameOption::special;
  throw Error(ErrorKind::parse, "unknown frame option '" + text + "' (expected standard or special)");
}

struct Sampler::Impl {
  std::mt19937_64 engine;
};

Sampler::Sampler(std::uint64_t seed) : impl_(std::make_shared<Impl>()) { impl_->engine.seed(seed); }

double Sampler::uniform() {
  // 53 random mantissa bits, independent of the standard library's distributions.
  return static_cast<double>(impl_->engine() >> 11) * 0x1.0p-53;
}

void HypersurfaceExample::require_dim(const RealVector& q) const {
  if (q.size() != param_dim_)
    throw Error(ErrorKind::shape, "example " + id_ + " takes " + std::to_string(param_dim_) +
                                      " chart coordinates, got " + std::to_string(q.size()));
  if (!q.allFinite()) throw Error(ErrorKind::domain, "chart coordinates must be finite");
}

void HypersurfaceExample::check_domain(const RealVector& q) const { require_dim(q); }

RealVector HypersurfaceExample::point(const RealVector& q) const {
  require_dim(q);
  DualVector dq(q.data(), q.data() + q.size());
  const DualVector x = immersion(dq);
  RealVector out(static_cast<Eigen::Index>(x.size()));
  for (size_t i = 0; i < x.size(); ++i) out(static_cast<Eigen::Index>(i)) = x[i].v;
  return out;
}

RealMatrix HypersurfaceExample::jacobian(const RealVector& q) const {
  require_dim(q);
  if (param_dim_ > Dual::kDirections) throw Error(ErrorKind::internal, "chart dimension exceeds the dual width");
  DualVector dq;
  for (int k = 0; k < param_dim_; ++k) dq.push_back(Dual::variable(q(k), k));
  const DualVector x = immersion(dq);
  RealMatrix jac(static_cast<Eigen::Index>(x.size()), param_dim_);
  for (size_t i = 0; i < x.size(); ++i)
    for (int k = 0; k < param_dim_; ++k) jac(static_cast<Eigen::Index>(i), k) = x[i].d[k];
  return jac;
}

FrameData HypersurfaceExample::evaluate(const RealVector& q, FrameOption option) const {
  check_domain(q);
  if (option == FrameOption::special && !has_special_frame())
    throw Error(ErrorKind::contract, "example " + id_ + " has no special frame");
  FrameData out;
  out.domain_point = q;
  out.point = point(q);
  out.frame = frame(q, option);
  out.normal = normal(q);
  out.shape = shape(q, option);
  const RealMatrix g = ambient_.ambient_gram();
  out.gram = out.frame.transpose() * g * out.frame;
  out.nu = out.normal.dot(g * out.normal) > 0 ? 1 : -1;
  return out;
}

RealVector HypersurfaceExample::chart_point(const RealVector& v) const {
  if (v.size() != param_dim_)
    throw Error(ErrorKind::shape, "example " + id_ + " expects " + std::to_string(param_dim_) +
                                      " chart coordinates, got " + std::to_string(v.size()));
  return v;
}

std::vector<RealVector> HypersurfaceExample::sample_domain(int n, std::uint64_t seed) const {
  if (n < 1) throw Error(ErrorKind::contract, "sample count must be at least 1");
  Sampler rng(seed);
  std::vector<RealVector> out;
  out.reserve(static_cast<size_t>(n));
  for (int k = 0; k < n; ++k) {
    const int region = k % region_count();
    bool accepted = false;
    for (int attempt = 0; attempt < 200 && !accepted; ++attempt) {
      RealVector q = sample_in_region(region, rng);
      try {
        check_domain(q);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::domain) throw;
        continue;
      }
      out.push_back(std::move(q));
      accepted = true;
    }
    if (!accepted) throw Error(ErrorKind::internal, "could not sample the domain of example " + id_);
  }
  return out;
}

ObservedType observed_type(const FrameData& data, const linalg::Tolerance& tol) {
  const auto pair = SelfAdjointPair::make(Matrix(data.shape), Matrix(data.gram), tol.algebraic);
  return {classify_algebraic(petrov_normal_form(pair, tol)), classify_geometric(pair, tol)};
}

}  // namespace petrov::catalog
