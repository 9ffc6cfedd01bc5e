#pragma once

#include <array>
#include <vector>

#include "timsim/continuum.hpp"
#include "timsim/grid.hpp"
#include "timsim/hybrid.hpp"

namespace timsim {

/// Fixed blood-vessel positions on the unit domain: four points at
/// (0.26, 0.26), (0.26, 0.74), (0.74, 0.26), (0.74, 0.74) in 2D, and the
/// pair {0.26, 0.74} in 1D.
std::vector<std::array<double, 2>> vessel_positions(int dim);

/// Flat indices of the lattice sites nearest to the vessel positions,
/// sorted ascending.
std::vector<int> vessel_sites(const Grid& g);

/// Per-site amplitudes (count-like, before any rounding) of the reference
/// initial condition:
///   tumour:  800 * exp(-200 * |x - centre|^2)
///   T cells:  60 * sum over vessels of exp(-300 * |x - vessel|^2)
///   chemoattractant: 90 * exp(-200 * |x - centre|^2)
/// with the centre at the middle of the domain.
struct InitialAmplitudes {
  std::vector<double> tumour;
  std::vector<double> tcell;
  std::vector<double> phi;
};
InitialAmplitudes initial_amplitudes(const Grid& g);

/// Continuum initial state: cell densities are the per-site counts (the
/// amplitudes rounded to the nearest integer, as in the stochastic engine)
/// divided by chi^dim, so both engines start from the same census and the
/// same compact support. Without the rounding the continuum field would
/// carry sub-cell Gaussian tails over the whole domain — material no
/// stochastic realisation contains — and those tails grow exponentially
/// wherever the kill field cannot reach. The chemoattractant density is
/// not rounded (it is a concentration, not a census).
ContinuumState initial_continuum_state(const Grid& g);

/// Stochastic initial state: cell counts are the amplitudes rounded to the
/// nearest integer; the chemoattractant density is not rounded.
HybridState initial_hybrid_state(const Grid& g);

}  // namespace timsim
