#include "loschmidt/core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "loschmidt/error.hpp"

namespace loschmidt {

Grid::Grid(std::size_t n_points) : n_(n_points), dx_(0.0) {
  if (n_points < kMinPoints) {
    throw InvalidParameter("grid needs at least " + std::to_string(kMinPoints) +
                           " points, got " + std::to_string(n_points));
  }
  if (n_points % 2 != 0) {
    throw InvalidParameter("grid size must be even, got " +
                           std::to_string(n_points));
  }
  dx_ = kTwoPi / static_cast<double>(n_points);
}

std::vector<double> Grid::nodes() const {
  std::vector<double> x(n_);
  for (std::size_t i = 0; i < n_; ++i) x[i] = node(i);
  return x;
}

WaveField::WaveField(Grid grid) : grid_(grid), values_(grid.size()) {}

WaveField::WaveField(Grid grid, std::vector<Complex> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size()) {
    throw DimensionMismatch("wave field has " + std::to_string(values_.size()) +
                            " samples but the grid has " +
                            std::to_string(grid_.size()) + " nodes");
  }
}

double WaveField::mean_density() const noexcept {
  double sum = 0.0;
  for (const auto& v : values_) sum += std::norm(v);
  return sum / static_cast<double>(values_.size());
}

double WaveField::max_density() const noexcept {
  double m = 0.0;
  for (const auto& v : values_) m = std::max(m, std::norm(v));
  return m;
}

bool WaveField::all_finite() const noexcept {
  return std::all_of(values_.begin(), values_.end(), [](const Complex& v) {
    return std::isfinite(v.real()) && std::isfinite(v.imag());
  });
}

WaveField WaveField::conjugated() const {
  WaveField out(grid_);
  for (std::size_t i = 0; i < values_.size(); ++i) out[i] = std::conj(values_[i]);
  return out;
}

WaveField WaveField::reflected() const {
  WaveField out(grid_);
  for (std::size_t i = 0; i < values_.size(); ++i) {
    out[i] = values_[grid_.reflect(i)];
  }
  return out;
}

void SimParams::validate() const {
  auto require = [](bool ok, const char* field, const std::string& what) {
    if (!ok) throw InvalidParameter(std::string(field) + ": " + what);
  };
  require(std::isfinite(K0) && K0 > 0.0, "K0", "must be > 0");
  require(std::isfinite(h) && h > 0.0, "h", "must be > 0");
  require(std::isfinite(vf_ratio) && vf_ratio >= 0.0, "vf_ratio", "must be >= 0");
  require(std::isfinite(init_amplitude) && init_amplitude >= 0.0,
          "init_amplitude", "must be >= 0");
  require(n_points >= Grid::kMinPoints && n_points % 2 == 0, "n_points",
          "must be even and >= 16");
  require(std::isfinite(dt) && dt > 0.0, "dt", "must be > 0");
  require(std::isfinite(t_end) && t_end >= 0.0, "t_end", "must be >= 0");
  require(sample_every >= 1, "sample_every", "must be >= 1");
}

long SimParams::step_count() const noexcept {
  return std::lround(t_end / dt);
}

WaveField make_initial_state(const SimParams& params, const Grid& grid) {
  if (grid.size() != params.n_points) {
    throw DimensionMismatch("grid size " + std::to_string(grid.size()) +
                            " does not match n_points " +
                            std::to_string(params.n_points));
  }
  const double scale = params.h * params.K0;
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw InvalidParameter("h * K0 must be positive to define the initial phase");
  }
  const double phase_amplitude = params.init_amplitude / scale;
  if (!std::isfinite(phase_amplitude)) {
    throw InvalidParameter("init_amplitude / (h * K0) overflows");
  }
  WaveField psi(grid);
  const std::size_t n = grid.size();
  for (std::size_t i = 0; i <= n / 2; ++i) {
    psi[i] = std::polar(1.0, phase_amplitude * std::cos(grid.node(i)));
    psi[grid.reflect(i)] = psi[i];
  }
  return psi;
}

Complex inner_product(const WaveField& a, const WaveField& b) {
  if (!(a.grid() == b.grid())) {
    throw DimensionMismatch("inner product of fields on different grids");
  }
  Complex sum{0.0, 0.0};
  for (std::size_t i = 0; i < a.size(); ++i) sum += std::conj(a[i]) * b[i];
  return sum / static_cast<double>(a.size());
}

MadelungFields madelung_fields(const WaveField& psi, const SimParams& params) {
  constexpr double kNodeAmplitude = 1e-8;
  const std::size_t n = psi.size();
  MadelungFields out;
  out.density.resize(n);
  std::size_t node_index = n;
  for (std::size_t i = 0; i < n; ++i) {
    out.density[i] = std::norm(psi[i]);
    if (node_index == n && std::abs(psi[i]) < kNodeAmplitude) node_index = i;
  }
  if (node_index != n) throw DensityNodeError(node_index, std::move(out.density));

  // Forward phase increments on the nearest branch; the centered difference
  // is the mean of the two increments adjacent to a node.
  std::vector<double> increment(n);
  for (std::size_t i = 0; i < n; ++i) {
    increment[i] = std::arg(psi[(i + 1) % n] * std::conj(psi[i]));
  }
  const double scale = params.h * params.K0 / (2.0 * psi.grid().spacing());
  out.velocity.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.velocity[i] = scale * (increment[i] + increment[(i + n - 1) % n]);
  }
  return out;
}

}  // namespace loschmidt
