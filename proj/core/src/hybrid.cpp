#include "timsim/hybrid.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "timsim/chemo.hpp"
#include "timsim/errors.hpp"

namespace timsim {

HybridEngine::HybridEngine(HybridState init, const ModelParams& params,
                           std::vector<int> vessel_sites, std::uint64_t seed)
    : params_(params),
      state_(std::move(init)),
      vessels_(std::move(vessel_sites)),
      rng_(seed) {
  params_.validate();
  const Grid& g = state_.grid;
  const int size = g.site_count();
  if (static_cast<int>(state_.tumour.size()) != size ||
      static_cast<int>(state_.tcell.size()) != size ||
      state_.phi.size() != size)
    throw ConfigError("hybrid state arrays do not match the grid");
  for (const auto n : state_.tumour)
    if (n < 0) throw ConfigError("negative tumour count in initial state");
  for (const auto c : state_.tcell)
    if (c < 0) throw ConfigError("negative T-cell count in initial state");
  for (const double f : state_.phi.v)
    if (!std::isfinite(f) || f < 0.0)
      throw ConfigError("chemoattractant field must be finite and >= 0");
  for (const int v : vessels_)
    if (v < 0 || v >= size) throw ConfigError("vessel site out of range");
  std::sort(vessels_.begin(), vessels_.end());

  phi_cap_ = phi_ceiling(state_.phi, params_.A, params_.w_max);
  for (const double f : state_.phi.v) phi_peak_ = std::max(phi_peak_, f);
  params_.gamma_c = params_.resolved_gamma_c(phi_cap_);
  const double nu = params_.chemotaxis_probability(phi_cap_);
  if (nu > 1.0)
    throw ConfigError(
        "chemotaxis probability gamma_c*2*dim*phi_cap*tau/chi^2 = " +
        std::to_string(nu) + " exceeds 1; decrease tau or gamma_c");

  w_.resize(static_cast<std::size_t>(size));
  next_.resize(static_cast<std::size_t>(size));
  n_density_ = ScalarField(g);
}

double HybridEngine::tumour_mass() const {
  return static_cast<double>(site_sum(state_.tumour));
}

double HybridEngine::tcell_mass() const {
  return static_cast<double>(site_sum(state_.tcell));
}

double HybridEngine::chemo_mass() const { return total_mass(state_.phi); }

ScalarField HybridEngine::tumour_density() const {
  ScalarField f(state_.grid);
  const double inv_vol = 1.0 / state_.grid.cell_volume();
  for (int i = 0; i < f.size(); ++i)
    f[i] = static_cast<double>(state_.tumour[static_cast<std::size_t>(i)]) *
           inv_vol;
  return f;
}

ScalarField HybridEngine::tcell_density() const {
  ScalarField f(state_.grid);
  const double inv_vol = 1.0 / state_.grid.cell_volume();
  for (int i = 0; i < f.size(); ++i)
    f[i] = static_cast<double>(state_.tcell[static_cast<std::size_t>(i)]) *
           inv_vol;
  return f;
}

// One movement sweep over all T cells.  For each occupied site the number of
// cells leaving in each direction is a multinomial draw with per-direction
// probabilities
//   q_d = coef_uniform * psi(w_dest)                          (random walk)
//       + coef_chemo * psi(w_dest) * max(phi_dest - phi_src, 0) (chemotaxis)
// where exactly one of the two coefficients is nonzero per phase.  Directions
// leaving the lattice get q_d = 0 (the attempt is aborted, the cell stays).
// The crowding field w is the one frozen at the start of the step.
void HybridEngine::move_phase(double coef_uniform, double coef_chemo,
                              const std::vector<double>& w) {
  const Grid& g = state_.grid;
  const int P = g.points;
  const int ndir = 2 * g.dim;
  std::array<int, 4> dest{};
  std::array<double, 4> q{};
  std::array<std::int64_t, 4> moved{};
  const auto& phi = state_.phi.v;
  auto& cur = state_.tcell;
  std::fill(next_.begin(), next_.end(), std::int64_t{0});

  for (int idx = 0, size = g.site_count(); idx < size; ++idx) {
    const std::int64_t count = cur[static_cast<std::size_t>(idx)];
    if (count == 0) continue;
    const int i = g.dim == 1 ? idx : idx / P;
    const int j = g.dim == 1 ? 0 : idx % P;
    // Direction order: -x, +x, then -y, +y.
    dest[0] = i > 0 ? idx - (g.dim == 1 ? 1 : P) : -1;
    dest[1] = i < P - 1 ? idx + (g.dim == 1 ? 1 : P) : -1;
    if (g.dim == 2) {
      dest[2] = j > 0 ? idx - 1 : -1;
      dest[3] = j < P - 1 ? idx + 1 : -1;
    }
    double qsum = 0.0;
    for (int d = 0; d < ndir; ++d) {
      if (dest[d] < 0) {
        q[d] = 0.0;
        continue;
      }
      const std::size_t dst = static_cast<std::size_t>(dest[d]);
      double prob =
          coef_uniform * crowding_factor(w[dst], params_.w_max);
      if (coef_chemo != 0.0) {
        const double dphi = phi[dst] - phi[static_cast<std::size_t>(idx)];
        if (dphi > 0.0)
          prob += coef_chemo * crowding_factor(w[dst], params_.w_max) * dphi;
      }
      q[d] = prob;
      qsum += prob;
    }
    if (qsum > 1.0)
      throw StepSizeError(
          "total movement probability " + std::to_string(qsum) +
          " exceeds 1 at a site; decrease tau (chemoattractant gradients "
          "exceed the assumed ceiling)");
    multinomial(rng_, count, std::span<const double>(q.data(), ndir),
                std::span<std::int64_t>(moved.data(), ndir));
    std::int64_t stay = count;
    for (int d = 0; d < ndir; ++d) {
      stay -= moved[d];
      if (moved[d] != 0)
        next_[static_cast<std::size_t>(dest[d])] += moved[d];
    }
    next_[static_cast<std::size_t>(idx)] += stay;
  }
  cur.swap(next_);
}

void HybridEngine::step() {
  const Grid& g = state_.grid;
  const int size = g.site_count();
  const double vol = g.cell_volume();
  const double chi = g.spacing();
  const double tau = params_.tau;

  // Freeze all rates at the start of the step.
  const double rho_n = static_cast<double>(site_sum(state_.tumour));
  const double rho_c = static_cast<double>(site_sum(state_.tcell));
  const double phi_tot = total_mass(state_.phi);
  const double inv_vol = 1.0 / vol;
  for (int i = 0; i < size; ++i)
    w_[static_cast<std::size_t>(i)] =
        static_cast<double>(state_.tumour[static_cast<std::size_t>(i)] +
                            state_.tcell[static_cast<std::size_t>(i)]) *
        inv_vol;
  const std::vector<double> kill =
      kill_field_counts(g, state_.tcell, params_.theta);

  // 1. Random movement.
  const double coef_uniform = params_.beta_c * tau / (chi * chi);
  move_phase(coef_uniform, 0.0, w_);

  // 2. Chemotaxis (from post-movement positions, step-start fields).
  const double coef_chemo = params_.gamma_c * tau / (chi * chi);
  move_phase(0.0, coef_chemo, w_);

  // 3. T-cell death, then vessel influx.
  const double p_death = tau * params_.mu_c * rho_c;
  if (p_death > 1.0)
    throw StepSizeError("T-cell death probability exceeds 1; decrease tau");
  if (p_death > 0.0) {
    for (int i = 0; i < size; ++i) {
      auto& c = state_.tcell[static_cast<std::size_t>(i)];
      if (c == 0) continue;
      c -= rng_.binomial(c, p_death);
    }
  }
  const double p_in = tau * params_.alpha_c * phi_tot * chi;
  if (p_in > 1.0)
    throw StepSizeError("vessel influx probability " + std::to_string(p_in) +
                        " exceeds 1; decrease tau");
  for (const int v : vessels_)
    if (rng_.bernoulli(p_in)) ++state_.tcell[static_cast<std::size_t>(v)];

  // 4. Tumour division and death.
  const double p_div = tau * params_.alpha_n;
  std::array<double, 2> qt{};
  std::array<std::int64_t, 2> events{};
  for (int i = 0; i < size; ++i) {
    auto& n = state_.tumour[static_cast<std::size_t>(i)];
    if (n == 0) continue;
    const double p_die =
        tau * (params_.mu_n * rho_n +
               params_.zeta_n * kill[static_cast<std::size_t>(i)]);
    if (p_div + p_die > 1.0)
      throw StepSizeError(
          "tumour division+death probability exceeds 1; decrease tau");
    qt = {p_div, p_die};
    multinomial(rng_, n, qt, events);
    n += events[0] - events[1];
  }

  // 5. Chemoattractant update from the just-updated tumour counts.
  for (int i = 0; i < size; ++i)
    n_density_[i] =
        static_cast<double>(state_.tumour[static_cast<std::size_t>(i)]) *
        inv_vol;
  chemo_step(state_.phi, n_density_, params_, chemo_scratch_);
  for (const double f : state_.phi.v) phi_peak_ = std::max(phi_peak_, f);

  ++steps_;
}

}  // namespace timsim
