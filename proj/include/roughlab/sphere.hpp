#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "roughlab/grid.hpp"

namespace roughlab {

enum class KernelFamily { harmonic, power, sign, custom };

std::string to_string(KernelFamily family);
KernelFamily kernel_family_from_string(const std::string& name);

struct RhoCertificate {
  double rho = 0.0;
  double norm = 0.0;
  int levels = 0;
};

/// Angular kernel Omega on S^{n-1}.
///
/// Every kernel carries a frame axis e. Evaluators receive sigma together with the
/// axial cosine sigma.e, computed from the quadrature parametrization and not
/// from sigma directly, so singularities on the equator {sigma.e = 0} are
/// resolved down to subnormal distances.
class SphereKernel {
 public:
  using Evaluator = std::function<double(const Point& sigma, double axial)>;

  SphereKernel(int dim, KernelFamily family, Point axis, Evaluator evaluator, std::string label,
               double singular_exponent = 0.0);

  /// sigma must be a unit vector.
  double operator()(const Point& sigma) const;
  double evaluate(const Point& sigma, double axial) const { return evaluator_(sigma, axial) - offset_; }

  int dim() const noexcept { return dim_; }
  KernelFamily family() const noexcept { return family_; }
  const Point& axis() const noexcept { return axis_; }
  const std::string& label() const noexcept { return label_; }
  /// mu with |Omega| ~ |sigma.e|^{-mu} near the equator; 0 for bounded kernels.
  double singular_exponent() const noexcept { return singular_exponent_; }
  /// Constant subtracted by mean-zero projection.
  double offset() const noexcept { return offset_; }
  const std::optional<RhoCertificate>& certificate() const noexcept { return certificate_; }

  SphereKernel shifted(double c) const;
  SphereKernel with_certificate(RhoCertificate cert) const;

 private:
  int dim_;
  KernelFamily family_;
  Point axis_;
  Evaluator evaluator_;
  std::string label_;
  double singular_exponent_;
  double offset_ = 0.0;
  std::optional<RhoCertificate> certificate_;
};

/// sum_l c_l Z_l(sigma.e) with Z_l the zonal harmonic of degree l = 1, 2, ...
/// (Chebyshev T_l on S^1, Legendre P_l on S^2); mean zero by orthogonality.
SphereKernel harmonic_kernel(int dim, Point axis, std::vector<double> coefficients);
/// |sigma.e|^{-1/beta}, not yet projected; in L^rho exactly for rho < beta.
SphereKernel power_kernel(int dim, Point axis, double beta);
/// sgn(sigma.e).
SphereKernel sign_kernel(int dim, Point axis);
SphereKernel constant_kernel(int dim, double value);
SphereKernel custom_kernel(int dim, std::function<double(const Point&)> f, std::string label);

/// |S^{n-1}|.
double sphere_measure(int dim);

constexpr int kSphereMaxLevel = 7;

/// Sum of w * g(Omega(sigma)) over the level-`level` rule graded toward the equator of the
/// kernel's axis.
double sphere_integral(const SphereKernel& kernel, const std::function<double(double)>& g, int level);

struct SphereNorm {
  bool finite = false;
  double value = 0.0;
  int levels = 0;
  double relative_change = 0.0;
};

/// (int |Omega|^rho)^{1/rho}, refined until the relative change is <= 1e-8;
/// finite == false means "norm infinite at this rho".
SphereNorm sphere_norm(const SphereKernel& kernel, double rho);

/// Omega - mean(Omega); throws NumericalError if the mean does not settle to 1e-6.
SphereKernel project_mean_zero(const SphereKernel& kernel);

/// Attaches a certificate at rho; throws NumericalError if the norm is infinite.
SphereKernel certify(const SphereKernel& kernel, double rho);
/// Largest rho in [lo, hi] (bisection) with a finite certified norm, or nullopt.
std::optional<double> largest_certified_rho(const SphereKernel& kernel, double lo, double hi, int bisections = 30);

/// Kernel choice from an experiment config.
struct KernelSpec {
  KernelFamily family = KernelFamily::harmonic;
  /// power family: Omega ~ |sigma.e|^{-1/beta}.
  double beta = 2.5;
  /// harmonic family: zonal coefficients c_1, c_2, ...
  std::vector<double> coefficients{1.0};
  /// Rotation (radians) applied to the coordinate axes before use as frame axes.
  /// The power family needs a generic axis so no lattice direction sits on the equator.
  double tilt = 0.0;
  /// Target rho for the certificate; 0 skips certification.
  double rho = 0.0;
};

/// Frame axis for component k: e_k rotated by `tilt`.
Point component_axis(int dim, int k, double tilt);

/// One projected (and certified when spec.rho > 0) kernel per component.
std::vector<SphereKernel> build_component_kernels(const KernelSpec& spec, int dim);

}  // namespace roughlab
