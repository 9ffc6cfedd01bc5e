#include "timsim/init.hpp"

#include <algorithm>
#include <cmath>

namespace timsim {

namespace {

constexpr double kTumourAmplitude = 800.0;
constexpr double kTumourWidth = 200.0;   // Gaussian exponent coefficient
constexpr double kTcellAmplitude = 60.0;
constexpr double kTcellWidth = 300.0;
constexpr double kChemoAmplitude = 90.0;

}  // namespace

std::vector<std::array<double, 2>> vessel_positions(int dim) {
  if (dim == 1) return {{0.26, 0.0}, {0.74, 0.0}};
  return {{0.26, 0.26}, {0.26, 0.74}, {0.74, 0.26}, {0.74, 0.74}};
}

std::vector<int> vessel_sites(const Grid& g) {
  const double chi = g.spacing();
  std::vector<int> sites;
  for (const auto& pos : vessel_positions(g.dim)) {
    const int i = static_cast<int>(std::lround(pos[0] / chi));
    const int j =
        g.dim == 1 ? 0 : static_cast<int>(std::lround(pos[1] / chi));
    sites.push_back(g.index(i, j));
  }
  std::sort(sites.begin(), sites.end());
  return sites;
}

InitialAmplitudes initial_amplitudes(const Grid& g) {
  const auto vessels = vessel_positions(g.dim);
  const double cx = 0.5 * g.length;
  const double cy = g.dim == 1 ? 0.0 : 0.5 * g.length;
  InitialAmplitudes amp;
  const std::size_t size = static_cast<std::size_t>(g.site_count());
  amp.tumour.resize(size);
  amp.tcell.resize(size);
  amp.phi.resize(size);
  for (int idx = 0; idx < g.site_count(); ++idx) {
    const auto pos = g.position(idx);
    const double dx = pos[0] - cx;
    const double dy = pos[1] - cy;
    const double r2 = dx * dx + dy * dy;
    const double centre_bump = std::exp(-kTumourWidth * r2);
    double tcell = 0.0;
    for (const auto& vp : vessels) {
      const double vx = pos[0] - vp[0];
      const double vy = pos[1] - vp[1];
      tcell += std::exp(-kTcellWidth * (vx * vx + vy * vy));
    }
    const std::size_t i = static_cast<std::size_t>(idx);
    amp.tumour[i] = kTumourAmplitude * centre_bump;
    amp.tcell[i] = kTcellAmplitude * tcell;
    amp.phi[i] = kChemoAmplitude * centre_bump;
  }
  return amp;
}

ContinuumState initial_continuum_state(const Grid& g) {
  const InitialAmplitudes amp = initial_amplitudes(g);
  const double inv_vol = 1.0 / g.cell_volume();
  ContinuumState state{ScalarField(g), ScalarField(g), ScalarField(g)};
  for (int i = 0; i < g.site_count(); ++i) {
    const std::size_t k = static_cast<std::size_t>(i);
    state.n[i] = static_cast<double>(std::llround(amp.tumour[k])) * inv_vol;
    state.c[i] = static_cast<double>(std::llround(amp.tcell[k])) * inv_vol;
    state.phi[i] = amp.phi[k] * inv_vol;
  }
  return state;
}

HybridState initial_hybrid_state(const Grid& g) {
  const InitialAmplitudes amp = initial_amplitudes(g);
  const double inv_vol = 1.0 / g.cell_volume();
  HybridState state;
  state.grid = g;
  state.tumour.resize(amp.tumour.size());
  state.tcell.resize(amp.tcell.size());
  state.phi = ScalarField(g);
  for (int i = 0; i < g.site_count(); ++i) {
    const std::size_t k = static_cast<std::size_t>(i);
    state.tumour[k] = std::llround(amp.tumour[k]);
    state.tcell[k] = std::llround(amp.tcell[k]);
    state.phi[i] = amp.phi[k] * inv_vol;
  }
  return state;
}

}  // namespace timsim
