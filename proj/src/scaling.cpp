#include "fcs/scaling.hpp"

#include "fcs/energy.hpp"
#include "fcs/error.hpp"

#include <boost/math/interpolators/cubic_hermite.hpp>
#include <cmath>
#include <fmt/format.h>

namespace fcs {

namespace {

constexpr long kPad = 3;  // mirrored nodes on the left, zero nodes beyond R

/// Monotone cubic Hermite on the uniform extended grid x_j = j h,
/// j = -kPad..M+1+kPad: slopes from 4th-order central differences, limited
/// by Fritsch-Carlson so no new extrema appear.
class MonotoneInterpolant {
public:
  explicit MonotoneInterpolant(const Field &u) : R_(u.grid->R()) {
    const double h = u.grid->h();
    const long M = static_cast<long>(u.grid->M());
    const auto &v = u.values;
    auto node = [&](long j) -> double {
      if (j == 0)  // even extrapolation in r^2 through r = h, 2h, 3h
        return 1.5 * v[0] - 0.6 * v[1] + 0.1 * v[2];
      const long a = std::abs(j);
      return a <= M ? v[a - 1] : 0.0;
    };
    // two extra ghost nodes on each side feed the difference stencil
    const long lo = -kPad - 2, hi = M + 1 + kPad + 2;
    std::vector<double> xs, ys;
    for (long j = lo; j <= hi; ++j) {
      xs.push_back(static_cast<double>(j) * h);
      ys.push_back(node(j));
    }
    const std::size_t n = xs.size();
    std::vector<double> d(n, 0.0);
    for (std::size_t i = 2; i + 2 < n; ++i)
      d[i] = (ys[i - 2] - 8.0 * ys[i - 1] + 8.0 * ys[i + 1] - ys[i + 2]) / (12.0 * h);
    // Fritsch-Carlson limiting on the interior intervals
    for (std::size_t i = 2; i + 3 < n; ++i) {
      const double delta = (ys[i + 1] - ys[i]) / h;
      if (delta == 0.0) {
        d[i] = d[i + 1] = 0.0;
        continue;
      }
      if (d[i] * delta < 0)
        d[i] = 0.0;
      if (d[i + 1] * delta < 0)
        d[i + 1] = 0.0;
      const double a = d[i] / delta, b = d[i + 1] / delta;
      const double norm2 = a * a + b * b;
      if (norm2 > 9.0) {
        const double tau = 3.0 / std::sqrt(norm2);
        d[i] = tau * a * delta;
        d[i + 1] = tau * b * delta;
      }
    }
    std::vector<double> x(xs.begin() + 2, xs.end() - 2), y(ys.begin() + 2, ys.end() - 2),
        s(d.begin() + 2, d.end() - 2);
    lo_ = x.front();
    hi_ = x.back();
    spline_ = std::make_unique<boost::math::interpolators::cubic_hermite<std::vector<double>>>(
        std::move(x), std::move(y), std::move(s));
  }

  double operator()(double r) const {
    if (r >= R_)
      return 0.0;
    if (r < lo_ || r > hi_)
      throw InvalidArgument("interpolation radius outside the extended grid");
    return (*spline_)(r);
  }

private:
  double R_, lo_ = 0, hi_ = 0;
  std::unique_ptr<boost::math::interpolators::cubic_hermite<std::vector<double>>> spline_;
};

double sigma_of(const Field &u) { return u.grid->exponents().sigma; }

} // namespace

Eigen::VectorXd interpolate_at(const Field &u, const Eigen::VectorXd &radii) {
  const MonotoneInterpolant interp(u);
  Eigen::VectorXd out(radii.size());
  for (Eigen::Index i = 0; i < radii.size(); ++i)
    out[i] = interp(std::abs(radii[i]));
  return out;
}

Field resample(const Field &u, const GridPtr &target) {
  if (target->same_as(*u.grid))
    return u;
  return {target, interpolate_at(u, target->nodes())};
}

Field scale(const Field &u, double t) {
  if (!(t >= 0) || !std::isfinite(t))
    throw InvalidArgument(fmt::format("scale parameter t={} must be finite and >= 0", t));
  if (t == 0.0)
    return Field::zeros(u.grid);
  if (t == 1.0)
    return u;
  if (t > 1.0 && !u.decays_at_boundary())
    throw PreconditionError("scaling would read beyond cutoff");
  const double theta = u.grid->exponents().theta;
  Eigen::VectorXd v = interpolate_at(u, t * u.grid->nodes());
  return {u.grid, std::pow(t, theta) * v};
}

Field scale_exact(const Field &u, double t) {
  if (!(t >= 0) || !std::isfinite(t))
    throw InvalidArgument(fmt::format("scale parameter t={} must be finite and >= 0", t));
  if (t == 0.0)
    return Field::zeros(u.grid);
  if (t == 1.0)
    return u;
  const double theta = u.grid->exponents().theta;
  return {u.grid->rescaled(t), std::pow(t, theta) * u.values};
}

double fiber_parameter(const Field &u) {
  const double I = I_functional(u);
  if (!(I > 0))
    throw InvalidArgument("fiber parameter undefined for u = 0");
  return std::pow(I, -1.0 / sigma_of(u));
}

Field project_to_M(const Field &u, double tol) {
  if (u.is_zero())
    throw InvalidArgument("projection onto M undefined for u = 0");
  const double sigma = sigma_of(u);
  double t = fiber_parameter(u);
  Field v = scale(u, t);
  double I = I_functional(v);
  // I(u_t) ~ t^sigma I(u): Newton in t with the analytic slope sigma I / t
  for (int it = 0; it < 8 && std::abs(I - 1.0) > 0.25 * tol; ++it) {
    t -= (I - 1.0) * t / (sigma * I);
    v = scale(u, t);
    I = I_functional(v);
  }
  if (std::abs(I - 1.0) > tol)
    throw SolverError(fmt::format("projection onto M stalled at I = {:.12g}", I));
  return v;
}

Field project_to_M_exact(const Field &u) {
  if (u.is_zero())
    throw InvalidArgument("projection onto M undefined for u = 0");
  return scale_exact(u, fiber_parameter(u));
}

std::vector<FiberSample> fiber_profile(const Field &u, const NonlinearitySpec &f,
                                       const std::vector<double> &ts, double tol) {
  const double I = I_functional(u);
  if (std::abs(I - 1.0) > tol)
    throw PreconditionError(
        fmt::format("fiber profile expects u on M; got I(u) = {:.12g}", I));
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (!(ts[i] >= 0) || !std::isfinite(ts[i]))
      throw InvalidArgument("fiber parameters must be finite and >= 0");
    if (i > 0 && ts[i] <= ts[i - 1])
      throw InvalidArgument("fiber parameters must be ascending");
  }
  auto phi_at = [&](double t) { return t == 0.0 ? 0.0 : Phi(scale_exact(u, t), f); };
  constexpr double eps = 1e-4;
  std::vector<FiberSample> out;
  out.reserve(ts.size());
  for (double t : ts) {
    FiberSample smp;
    smp.t = t;
    smp.phi = phi_at(t);
    if (t == 0.0) {
      const double d = eps * (ts.size() > 1 ? ts.back() : 1.0);
      smp.dphi = phi_at(d) / d;
    } else {
      smp.dphi = (phi_at(t * (1 + eps)) - phi_at(t * (1 - eps))) / (2 * eps * t);
    }
    out.push_back(smp);
  }
  return out;
}

} // namespace fcs
