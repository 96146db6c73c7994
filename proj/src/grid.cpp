#include "fcs/grid.hpp"

#include "fcs/error.hpp"
#include "fcs/riesz.hpp"
#include "fcs/spectral.hpp"

#include <cmath>
#include <fmt/format.h>
#include <map>
#include <tuple>

namespace fcs {

namespace {

using GridKey = std::tuple<int, double, double, double, std::size_t>;

std::mutex registry_mutex;
std::map<GridKey, std::weak_ptr<const RadialGrid>> registry;

} // namespace

RadialGrid::RadialGrid(const ProblemParams &params, double R, std::size_t M)
    : params_(params), exps_(compute_exponents(params)), R_(R), M_(M),
      h_(R / static_cast<double>(M + 1)) {
  const double omega = unit_sphere_area(params.N);
  r_.resize(static_cast<Eigen::Index>(M));
  w_.resize(r_.size());
  for (Eigen::Index j = 0; j < r_.size(); ++j) {
    r_[j] = static_cast<double>(j + 1) * h_;
    w_[j] = omega * std::pow(r_[j], params.N - 1) * h_;
  }
  sqrt_w_ = w_.cwiseSqrt();
}

RadialGrid::~RadialGrid() = default;

std::shared_ptr<const RadialGrid> RadialGrid::make(const ProblemParams &params, double R,
                                                   std::size_t M) {
  if (!std::isfinite(R) || R <= 0)
    throw InvalidArgument(fmt::format("cutoff R={} must be finite and positive", R));
  if (M < 16)
    throw InvalidArgument(fmt::format("node count M={} must be >= 16", M));
  // re-validate: params may have been aggregate-initialized
  ProblemParams::make(params.N, params.s, params.alpha);

  const GridKey key{params.N, params.s, params.alpha, R, M};
  std::lock_guard lock(registry_mutex);
  if (auto it = registry.find(key); it != registry.end())
    if (auto sp = it->second.lock())
      return sp;
  auto sp = std::make_shared<const RadialGrid>(params, R, M);
  registry[key] = sp;
  // drop dead entries now and then
  if (registry.size() > 64)
    std::erase_if(registry, [](const auto &kv) { return kv.second.expired(); });
  return sp;
}

GridPtr make_grid(const ProblemParams &params, double R, std::size_t M) {
  return RadialGrid::make(params, R, M);
}

const SpectralBasis &RadialGrid::basis() const {
  std::call_once(basis_once_, [this] { basis_ = std::make_unique<SpectralBasis>(*this); });
  return *basis_;
}

const RieszKernel &RadialGrid::riesz() const {
  std::call_once(riesz_once_, [this] {
    const auto path =
        params_.N == 3 ? RieszKernel::Path::Kernel : RieszKernel::Path::Spectral;
    riesz_ = std::make_unique<RieszKernel>(*this, path);
  });
  return *riesz_;
}

const RieszKernel &RadialGrid::riesz_spectral() const {
  if (params_.N != 3)
    return riesz();
  std::call_once(riesz_spec_once_, [this] {
    riesz_spec_ = std::make_unique<RieszKernel>(*this, RieszKernel::Path::Spectral);
  });
  return *riesz_spec_;
}

std::shared_ptr<const RadialGrid> RadialGrid::rescaled(double t) const {
  if (!(t > 0) || !std::isfinite(t))
    throw InvalidArgument(fmt::format("dilation factor t={} must be positive", t));
  if (t == 1.0)
    return shared_from_this();
  return make(params_, R_ / t, M_);
}

Field::Field(GridPtr g, Eigen::VectorXd v) : grid(std::move(g)), values(std::move(v)) {
  if (!grid)
    throw InvalidArgument("field without grid");
  if (static_cast<std::size_t>(values.size()) != grid->M())
    throw GridMismatch(
        fmt::format("field has {} values, grid has {} nodes", values.size(), grid->M()));
}

Field Field::zeros(GridPtr g) {
  const auto M = static_cast<Eigen::Index>(g->M());
  return Field(std::move(g), Eigen::VectorXd::Zero(M));
}

bool Field::decays_at_boundary() const {
  const double peak = values.cwiseAbs().maxCoeff();
  if (peak == 0.0)
    return true;
  const double cut = 0.8 * grid->R();
  double tail = 0.0;
  for (Eigen::Index j = 0; j < values.size(); ++j)
    if (grid->nodes()[j] > cut)
      tail = std::max(tail, std::abs(values[j]));
  return tail < 1e-4 * peak;
}

void require_same_grid(const Field &a, const Field &b) {
  if (!a.grid || !b.grid || !a.grid->same_as(*b.grid))
    throw GridMismatch("fields live on different grids");
}

Field operator+(const Field &a, const Field &b) {
  require_same_grid(a, b);
  return {a.grid, a.values + b.values};
}

Field operator-(const Field &a, const Field &b) {
  require_same_grid(a, b);
  return {a.grid, a.values - b.values};
}

Field operator*(double c, const Field &a) { return {a.grid, c * a.values}; }

SpectralField forward_transform(const Field &u) {
  return {u.grid, u.grid->basis().forward(u.values)};
}

Field inverse_transform(const SpectralField &uhat) {
  if (!uhat.grid)
    throw InvalidArgument("spectral field without grid");
  if (static_cast<std::size_t>(uhat.coefficients.size()) != uhat.grid->M())
    throw GridMismatch("coefficient count does not match grid");
  return {uhat.grid, uhat.grid->basis().inverse(uhat.coefficients)};
}

double lp_integral(const Field &u, double p) {
  if (!(p >= 1.0))
    throw InvalidArgument(fmt::format("exponent p={} must be >= 1", p));
  const auto &w = u.grid->weights();
  double acc = 0.0;
  if (p == 2.0) {
    for (Eigen::Index j = 0; j < w.size(); ++j)
      acc += w[j] * u.values[j] * u.values[j];
  } else {
    for (Eigen::Index j = 0; j < w.size(); ++j)
      acc += w[j] * std::pow(std::abs(u.values[j]), p);
  }
  return acc;
}

double lp_norm(const Field &u, double p) {
  if (std::isinf(p) && p > 0)
    return u.values.size() ? u.values.cwiseAbs().maxCoeff() : 0.0;
  return std::pow(lp_integral(u, p), 1.0 / p);
}

double l2_inner(const Field &u, const Field &v) {
  require_same_grid(u, v);
  return (u.grid->weights().array() * u.values.array() * v.values.array()).sum();
}

} // namespace fcs
