#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "petrov/dual.hpp"
#include "petrov/normal_form.hpp"
#include "petrov/spaceform.hpp"

namespace petrov::catalog {

using ad::Dual;
using ad::DualVector;
using spaceform::SpaceForm;

enum class FrameOption {
  standard,  // the frame used everywhere on the domain
  special,   // the normalized basis offered at a single point (examples h, i)
};

const char* to_string(FrameOption f);
FrameOption frame_option_from_string(const std::string& text);

/// Everything an example exposes at one domain point.
struct FrameData {
  RealVector domain_point;
  RealVector point;   // ambient position
  RealMatrix frame;   // columns are tangent vectors
  RealVector normal;  // unit normal
  RealMatrix shape;   // shape operator in the frame
  RealMatrix gram;    // <b_i, b_j>
  int nu = 0;         // <normal, normal>
};

/// Classification stated for a domain region.
struct ExpectedType {
  int index = 0;
  Label label = Label::I;
  std::optional<int> epsilon;  // algebraic sign when the source states one
  std::string region;
  std::string source;
};

/// Deterministic uniform doubles in [0, 1) from a 64-bit Mersenne twister.
class Sampler {
 public:
  explicit Sampler(std::uint64_t seed);
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

 private:
  struct Impl;
  std::shared_ptr<Impl> impl_;
};

class HypersurfaceExample {
 public:
  virtual ~HypersurfaceExample() = default;

  const std::string& id() const { return id_; }
  const SpaceForm& ambient() const { return ambient_; }
  int param_dim() const { return param_dim_; }
  int nu() const { return nu_; }
  /// Shape parameter a (examples k, l); NaN when the example has none.
  double parameter() const { return parameter_; }
  int ambient_index() const { return ambient_.ambient_index(); }
  int ambient_dim() const { return ambient_.ambient_dim(); }
  bool is_level_set() const { return level_set_; }
  virtual bool has_special_frame() const { return false; }
  /// Defining function of a level-set example, null otherwise.
  virtual const spaceform::QuadricFunction* quadric() const { return nullptr; }
  virtual std::string description() const = 0;

  /// Throws ErrorKind::domain naming the violated clause.
  virtual void check_domain(const RealVector& q) const;

  /// Ambient position with derivatives carried along each chart coordinate.
  virtual DualVector immersion(const DualVector& q) const = 0;
  RealVector point(const RealVector& q) const;
  /// d(point)/dq, ambient_dim x param_dim.
  RealMatrix jacobian(const RealVector& q) const;

  virtual RealVector normal(const RealVector& q) const = 0;
  virtual RealMatrix frame(const RealVector& q, FrameOption option) const = 0;
  virtual RealMatrix shape(const RealVector& q, FrameOption option) const = 0;

  FrameData evaluate(const RealVector& q, FrameOption option = FrameOption::standard) const;

  /// Chart coordinates from either chart coordinates or an ambient point on
  /// the hypersurface.
  virtual RealVector chart_point(const RealVector& v) const;

  virtual ExpectedType expected_type(const RealVector& q) const = 0;
  virtual int region_count() const { return 1; }
  virtual int region_of(const RealVector&) const { return 0; }
  virtual std::string region_name(int) const { return "all"; }

  /// Representative interior point.
  virtual RealVector anchor() const = 0;
  /// Seeded points; consecutive points cycle through the regions.
  std::vector<RealVector> sample_domain(int n, std::uint64_t seed) const;

 protected:
  HypersurfaceExample(std::string id, SpaceForm ambient, int param_dim, int nu, bool level_set)
      : id_(std::move(id)), ambient_(ambient), param_dim_(param_dim), nu_(nu), level_set_(level_set) {}

  virtual RealVector sample_in_region(int region, Sampler& rng) const = 0;
  void require_dim(const RealVector& q) const;

  std::string id_;
  SpaceForm ambient_;
  int param_dim_;
  int nu_;
  bool level_set_;
  double parameter_ = std::numeric_limits<double>::quiet_NaN();
};

/// Catalog ids in presentation order.
const std::vector<std::string>& example_ids();

/// Builds an example. `parameter` is the shape parameter a > 0 of k and l
/// (default 2); it is rejected for other ids.
std::shared_ptr<const HypersurfaceExample> make_example(const std::string& id,
                                                        std::optional<double> parameter = std::nullopt);

/// Type of (A, G) for one evaluated frame: the geometric label plus the
/// algebraic type in the frame's own orientation.
struct ObservedType {
  AlgebraicType algebraic;
  GeometricType geometric;
};
ObservedType observed_type(const FrameData& data, const linalg::Tolerance& tol = {});

}  // namespace petrov::catalog
