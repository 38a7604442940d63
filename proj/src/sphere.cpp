#include "roughlab/sphere.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "roughlab/error.hpp"
#include "roughlab/quadrature.hpp"

namespace roughlab {

namespace {

constexpr int kCellPoints = 10;

double dot(const Point& a, const Point& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

Point normalized(Point p, int dim) {
  for (int d = dim; d < 3; ++d) p[d] = 0.0;
  const double r = std::sqrt(dot(p, p));
  if (!(r > 0.0)) throw DomainError("kernel axis must be nonzero");
  for (double& c : p) c /= r;
  return p;
}

Point cross(const Point& a, const Point& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

std::string format_double(double v) {
  std::ostringstream ss;
  ss.precision(6);
  ss << v;
  return ss.str();
}

// Distances d in (0, D] from the equator: dyadic cells toward 0, K of them plus the core.
// Cell k is split into 2^{max(0, level - k)} equal pieces so refinement also resolves features
// away from the equator; pieces are further split at the sorted `breaks`.
template <class F>
void for_each_graded_distance(double D, int cells, int level, const std::vector<double>& breaks, F&& f) {
  const QuadratureRule& rule = gauss_legendre(kCellPoints);
  auto piece = [&](double a, double b) {
    const double half = 0.5 * (b - a), mid = a + half;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) f(mid + half * rule.nodes[i], half * rule.weights[i]);
  };
  double outer = D;
  for (int k = 0; k <= cells; ++k) {
    const double inner = (k == cells) ? 0.0 : 0.5 * outer;
    const int pieces = k < level ? 1 << (level - k) : 1;
    const double width = (outer - inner) / pieces;
    for (int j = 0; j < pieces; ++j) {
      double a = inner + j * width;
      const double b = (j + 1 == pieces) ? outer : a + width;
      for (auto it = std::upper_bound(breaks.begin(), breaks.end(), a); it != breaks.end() && *it < b; ++it) {
        piece(a, *it);
        a = *it;
      }
      piece(a, b);
    }
    outer = inner;
  }
}

// Axial cosine at distance d from the equator on hemisphere sa.
double axial_at(int dim, int sa, double d) { return sa * (dim == 3 ? d : std::sin(d)); }

// Distances where a zonal Omega changes sign on hemisphere sa; |Omega|^rho has a kink there.
std::vector<double> zonal_breaks(const SphereKernel& kernel, int sa, double D) {
  std::vector<double> out;
  if (kernel.family() == KernelFamily::custom) return out;
  const Point none{0.0, 0.0, 0.0};
  auto f = [&](double d) { return kernel.evaluate(none, axial_at(kernel.dim(), sa, d)); };
  constexpr int samples = 4096;
  double prev_d = D / (2.0 * samples), prev_f = f(prev_d);
  for (int i = 1; i < samples; ++i) {
    const double d = D * (i + 0.5) / samples, v = f(d);
    if ((prev_f < 0.0) != (v < 0.0) && prev_f != 0.0 && v != 0.0) {
      double lo = prev_d, hi = d, flo = prev_f;
      for (int it = 0; it < 80 && hi - lo > 1e-15 * hi; ++it) {
        const double mid = 0.5 * (lo + hi), fm = f(mid);
        if ((fm < 0.0) == (flo < 0.0)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
      out.push_back(0.5 * (lo + hi));
    }
    prev_d = d;
    prev_f = v;
  }
  return out;
}

// Visits (sigma, axial, weight) of the level-`level` rule graded toward the equator of the kernel's axis.
template <class F>
void for_each_sphere_node(const SphereKernel& kernel, int level, F&& f) {
  const int dim = kernel.dim();
  const Point& axis = kernel.axis();
  const int cells = 4 << level;
  if (dim == 2) {
    const double D = 0.5 * std::numbers::pi;
    const Point perp{-axis[1], axis[0], 0.0};
    for (int sa : {-1, 1}) {
      const std::vector<double> breaks = zonal_breaks(kernel, sa, D);
      for (int sp : {-1, 1})
        for_each_graded_distance(D, cells, level, breaks, [&](double d, double w) {
          const double u = sa * std::sin(d), v = sp * std::cos(d);
          const Point sigma{u * axis[0] + v * perp[0], u * axis[1] + v * perp[1], 0.0};
          f(sigma, u, w);
        });
    }
    return;
  }
  Point helper{1.0, 0.0, 0.0};
  if (std::abs(axis[0]) > 0.6) helper = {0.0, 1.0, 0.0};
  const Point b = normalized(cross(axis, helper), 3);
  const Point c = cross(axis, b);
  const int m = 16 << std::min(level, 3);
  const double dphi = 2.0 * std::numbers::pi / m;
  for (int sa : {-1, 1})
    for_each_graded_distance(1.0, cells, level, zonal_breaks(kernel, sa, 1.0), [&](double d, double w) {
      const double u = sa * d, r = std::sqrt((1.0 - d) * (1.0 + d));
      for (int j = 0; j < m; ++j) {
        const double phi = (j + 0.5) * dphi;
        const double cp = std::cos(phi), sp = std::sin(phi);
        const Point sigma{u * axis[0] + r * (cp * b[0] + sp * c[0]), u * axis[1] + r * (cp * b[1] + sp * c[1]),
                          u * axis[2] + r * (cp * b[2] + sp * c[2])};
        f(sigma, u, w * dphi);
      }
    });
}

}  // namespace

std::string to_string(KernelFamily family) {
  switch (family) {
    case KernelFamily::harmonic: return "harmonic";
    case KernelFamily::power: return "power";
    case KernelFamily::sign: return "sign";
    case KernelFamily::custom: return "custom";
  }
  return "custom";
}

KernelFamily kernel_family_from_string(const std::string& name) {
  if (name == "harmonic") return KernelFamily::harmonic;
  if (name == "power") return KernelFamily::power;
  if (name == "sign") return KernelFamily::sign;
  throw ConfigurationError("unknown kernel family '" + name + "' (expected harmonic, power or sign)");
}

SphereKernel::SphereKernel(int dim, KernelFamily family, Point axis, Evaluator evaluator, std::string label,
                           double singular_exponent)
    : dim_(dim),
      family_(family),
      axis_(normalized(axis, dim)),
      evaluator_(std::move(evaluator)),
      label_(std::move(label)),
      singular_exponent_(singular_exponent) {
  if (dim != 2 && dim != 3) throw ConfigurationError("kernel dimension must be 2 or 3");
}

double SphereKernel::operator()(const Point& sigma) const { return evaluate(sigma, dot(sigma, axis_)); }

SphereKernel SphereKernel::shifted(double c) const {
  SphereKernel out = *this;
  out.offset_ += c;
  out.certificate_.reset();
  return out;
}

SphereKernel SphereKernel::with_certificate(RhoCertificate cert) const {
  SphereKernel out = *this;
  out.certificate_ = cert;
  return out;
}

SphereKernel harmonic_kernel(int dim, Point axis, std::vector<double> coefficients) {
  std::string label = "harmonic[";
  for (std::size_t i = 0; i < coefficients.size(); ++i) label += (i ? "," : "") + format_double(coefficients[i]);
  label += "]";
  auto eval = [dim, c = std::move(coefficients)](const Point&, double x) {
    // Three-term recurrences from Z_0 = 1, Z_1 = x.
    double z0 = 1.0, z1 = x, sum = 0.0;
    for (std::size_t l = 1; l <= c.size(); ++l) {
      sum += c[l - 1] * z1;
      const double k = static_cast<double>(l);
      const double z2 = (dim == 2) ? 2.0 * x * z1 - z0 : ((2.0 * k + 1.0) * x * z1 - k * z0) / (k + 1.0);
      z0 = z1;
      z1 = z2;
    }
    return sum;
  };
  return SphereKernel(dim, KernelFamily::harmonic, axis, eval, label);
}

SphereKernel power_kernel(int dim, Point axis, double beta) {
  if (!(beta > 1.0)) throw DomainError("power kernel needs beta > 1 so that Omega is in L^1");
  const double mu = 1.0 / beta;
  auto eval = [mu](const Point&, double x) {
    // The equator is a null set; its value never enters an integral.
    if (x == 0.0) return 0.0;
    return std::pow(std::abs(x), -mu);
  };
  return SphereKernel(dim, KernelFamily::power, axis, eval, "power[beta=" + format_double(beta) + "]", mu);
}

SphereKernel sign_kernel(int dim, Point axis) {
  auto eval = [](const Point&, double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); };
  return SphereKernel(dim, KernelFamily::sign, axis, eval, "sign");
}

SphereKernel constant_kernel(int dim, double value) {
  return SphereKernel(dim, KernelFamily::custom, {1.0, 0.0, 0.0}, [value](const Point&, double) { return value; },
                      "constant[" + format_double(value) + "]");
}

SphereKernel custom_kernel(int dim, std::function<double(const Point&)> f, std::string label) {
  return SphereKernel(dim, KernelFamily::custom, {1.0, 0.0, 0.0},
                      [f = std::move(f)](const Point& s, double) { return f(s); }, std::move(label));
}

double sphere_measure(int dim) { return dim == 2 ? 2.0 * std::numbers::pi : 4.0 * std::numbers::pi; }

double sphere_integral(const SphereKernel& kernel, const std::function<double(double)>& g, int level) {
  double sum = 0.0;
  for_each_sphere_node(kernel, level,
                       [&](const Point& sigma, double axial, double w) { sum += w * g(kernel.evaluate(sigma, axial)); });
  return sum;
}

SphereNorm sphere_norm(const SphereKernel& kernel, double rho) {
  if (!(rho >= 1.0) || !std::isfinite(rho)) throw DomainError("sphere norm exponent must satisfy 1 <= rho < inf");
  SphereNorm out;
  double prev = 0.0;
  for (int level = 0; level <= kSphereMaxLevel; ++level) {
    const double integral = sphere_integral(kernel, [rho](double v) { return std::pow(std::abs(v), rho); }, level);
    const double value = std::pow(integral, 1.0 / rho);
    out.levels = level + 1;
    if (!std::isfinite(value)) {
      out.finite = false;
      out.value = std::numeric_limits<double>::infinity();
      out.relative_change = std::numeric_limits<double>::infinity();
      return out;
    }
    if (level > 0) {
      out.relative_change = value > 0.0 ? std::abs(value - prev) / value : 0.0;
      if (out.relative_change <= 1e-8) {
        out.finite = true;
        out.value = value;
        return out;
      }
    }
    prev = value;
  }
  out.finite = false;
  out.value = std::numeric_limits<double>::infinity();
  return out;
}

SphereKernel project_mean_zero(const SphereKernel& kernel) {
  double prev = 0.0;
  for (int level = 0; level <= kSphereMaxLevel; ++level) {
    const double integral = sphere_integral(kernel, [](double v) { return v; }, level);
    const double l1 = sphere_integral(kernel, [](double v) { return std::abs(v); }, level);
    if (!std::isfinite(integral) || !std::isfinite(l1)) break;
    if (level > 0 && std::abs(integral - prev) <= 1e-6 * l1) {
      const double mean = integral / sphere_measure(kernel.dim());
      // Exact symmetry cancellations leave only rounding dust.
      if (std::abs(mean) * sphere_measure(kernel.dim()) <= 1e-14 * l1) return kernel;
      return kernel.shifted(mean);
    }
    prev = integral;
  }
  throw NumericalError("mean of kernel '" + kernel.label() + "' did not converge under sphere refinement");
}

SphereKernel certify(const SphereKernel& kernel, double rho) {
  const SphereNorm norm = sphere_norm(kernel, rho);
  if (!norm.finite)
    throw NumericalError("kernel '" + kernel.label() + "': norm infinite at rho = " + format_double(rho));
  return kernel.with_certificate(RhoCertificate{rho, norm.value, norm.levels});
}

std::optional<double> largest_certified_rho(const SphereKernel& kernel, double lo, double hi, int bisections) {
  if (!sphere_norm(kernel, lo).finite) return std::nullopt;
  if (sphere_norm(kernel, hi).finite) return hi;
  for (int i = 0; i < bisections; ++i) {
    const double mid = 0.5 * (lo + hi);
    (sphere_norm(kernel, mid).finite ? lo : hi) = mid;
  }
  return lo;
}

Point component_axis(int dim, int k, double tilt) {
  Point e{0.0, 0.0, 0.0};
  e[k] = 1.0;
  if (tilt == 0.0) return e;
  const double c = std::cos(tilt), s = std::sin(tilt);
  if (dim == 2) return {c * e[0] - s * e[1], s * e[0] + c * e[1], 0.0};
  // Rodrigues rotation about a fixed generic direction.
  const double r = std::sqrt(14.0);
  const Point w{1.0 / r, 2.0 / r, 3.0 / r};
  const Point wx = cross(w, e);
  const double wd = dot(w, e);
  Point out{};
  for (int d = 0; d < 3; ++d) out[d] = c * e[d] + s * wx[d] + (1.0 - c) * wd * w[d];
  return out;
}

std::vector<SphereKernel> build_component_kernels(const KernelSpec& spec, int dim) {
  std::vector<SphereKernel> out;
  for (int k = 0; k < dim; ++k) {
    const Point axis = component_axis(dim, k, spec.tilt);
    SphereKernel raw = [&] {
      switch (spec.family) {
        case KernelFamily::harmonic: return harmonic_kernel(dim, axis, spec.coefficients);
        case KernelFamily::power: return power_kernel(dim, axis, spec.beta);
        case KernelFamily::sign: return sign_kernel(dim, axis);
        case KernelFamily::custom: break;
      }
      throw ConfigurationError("custom kernels cannot be built from a KernelSpec");
    }();
    SphereKernel projected = project_mean_zero(raw);
    out.push_back(spec.rho > 0.0 ? certify(projected, spec.rho) : projected);
  }
  return out;
}

}  // namespace roughlab
