#include "timsim/continuum.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "timsim/chemo.hpp"
#include "timsim/errors.hpp"

namespace timsim {

void continuum_step_n(ScalarField& n, const ScalarField& kill, double rho_n,
                      const ModelParams& p) {
  if (kill.size() != n.size())
    throw NumericError("continuum_step_n: field size mismatch");
  const double base = 1.0 + p.tau * (p.alpha_n - p.mu_n * rho_n);
  const double tz = p.tau * p.zeta_n;
  for (std::size_t i = 0; i < n.v.size(); ++i) {
    const double factor = base - tz * kill.v[i];
    if (factor < 0.0)
      throw StepSizeError(
          "tumour growth factor went negative (net decay rate exceeds 1/tau); "
          "decrease tau");
    n.v[i] *= factor;
  }
}

namespace {

struct FaceSweep {
  const std::vector<double>& c;
  const std::vector<double>& nk;
  const std::vector<double>& phi;
  std::vector<double>& div;
  double chi, beta_c, gamma_c, w_max;
  double max_dphi = 0.0;

  // Flux through the face between sites l and r (r the axis-positive
  // neighbour), accumulated into the divergence of both.
  //
  // The crowding-limited diffusion and aggregation pair is written in the
  // donor/destination product form
  //     (beta_c/chi) * [c_r psi(w_l) - c_l psi(w_r)],
  // which equals the face-averaged split
  //     beta_c psi(w_f) (c_r - c_l)/chi - beta_c c_f psi'(w_f) (w_r - w_l)/chi
  // identically on every face whose endpoints lie on the same branch of the
  // piecewise-linear psi (expand psi(w_l/r) about the face mean). The two
  // forms differ only on faces straddling w_max, where the face-averaged
  // split keeps draining the crowded side at a rate proportional to the
  // face-mean density even after that side is empty, driving it negative.
  // The product form's outflow is proportional to the donor density, so it
  // preserves nonnegativity, and it is the flux the stochastic engine's
  // destination-weighted random walk generates directly.
  void face(int l, int r) {
    const std::size_t a = static_cast<std::size_t>(l);
    const std::size_t b = static_cast<std::size_t>(r);
    const double psi_l = crowding_factor(nk[a] + c[a], w_max);
    const double psi_r = crowding_factor(nk[b] + c[b], w_max);
    const double dphi = phi[b] - phi[a];
    max_dphi = std::max(max_dphi, std::abs(dphi));
    const double adv = gamma_c * dphi / chi;
    double F = beta_c * (c[b] * psi_l - c[a] * psi_r) / chi;
    if (adv > 0.0)
      F -= adv * c[a] * psi_r;
    else if (adv < 0.0)
      F += (-adv) * c[b] * psi_l;
    div[a] += F;
    div[b] -= F;
  }
};

}  // namespace

double continuum_step_c(ScalarField& c, const ScalarField& n_k,
                        const ScalarField& phi, double rho_c, double phi_tot,
                        const std::vector<int>& vessel_sites,
                        const ModelParams& p, std::vector<double>& scratch) {
  const Grid& g = c.grid;
  if (n_k.size() != c.size() || phi.size() != c.size())
    throw NumericError("continuum_step_c: field size mismatch");
  const double chi = g.spacing();
  const int P = g.points;
  scratch.assign(c.v.size(), 0.0);

  FaceSweep sweep{c.v,     n_k.v,     phi.v,      scratch,
                  chi,     p.beta_c,  p.gamma_c,  p.w_max};
  if (g.dim == 1) {
    for (int i = 0; i + 1 < P; ++i) sweep.face(i, i + 1);
  } else {
    for (int i = 0; i < P; ++i)
      for (int j = 0; j + 1 < P; ++j)  // along y
        sweep.face(i * P + j, i * P + j + 1);
    for (int i = 0; i + 1 < P; ++i)
      for (int j = 0; j < P; ++j)  // along x
        sweep.face(i * P + j, (i + 1) * P + j);
  }

  // Heuristic explicit-transport stability bound.
  const double cfl =
      p.tau * (2.0 * g.dim * p.beta_c / (chi * chi) +
               2.0 * p.gamma_c * sweep.max_dphi / (chi * chi));
  if (cfl > 1.0)
    throw StepSizeError("T-cell transport stability number " +
                        std::to_string(cfl) + " exceeds 1; decrease tau");

  const double tau_over_chi = p.tau / chi;
  const double decay = p.tau * p.mu_c * rho_c;
  for (std::size_t i = 0; i < c.v.size(); ++i)
    c.v[i] += tau_over_chi * scratch[i] - decay * c.v[i];
  const double influx = p.tau * p.alpha_c * phi_tot * chi / g.cell_volume();
  for (const int v : vessel_sites) c.v[static_cast<std::size_t>(v)] += influx;

  double clamped = 0.0;
  for (double& x : c.v) {
    if (!std::isfinite(x))
      throw NumericError("T-cell density became non-finite");
    if (x < 0.0) {
      clamped -= x;
      x = 0.0;
    }
  }
  return clamped * g.cell_volume();
}

namespace {

/// Half-widths of the kill disc per row offset: for row offset di the disc
/// covers columns [-w, w] with w = floor(sqrt(r2 - di^2)), using the same
/// inflated squared radius as disc_offsets so membership matches exactly.
std::vector<int> disc_row_widths(const Grid& g, double radius) {
  const double q = radius / g.spacing();
  const double r2 = q * q * (1.0 + 1e-9) + 1e-12;
  const int reach = static_cast<int>(std::floor(std::sqrt(r2)));
  std::vector<int> widths;
  for (int di = -reach; di <= reach; ++di) {
    const double rem = r2 - static_cast<double>(di) * di;
    widths.push_back(rem < 0.0 ? -1
                               : static_cast<int>(std::floor(std::sqrt(rem))));
  }
  return widths;
}

/// Kill exposure via per-row prefix sums: K_i = sum over disc rows of a
/// contiguous column span, clipped at the lattice edge (no wrap-around).
/// Equivalent to the gather over disc_offsets, reordered for speed.
void kill_field_into(const ScalarField& c, const std::vector<int>& widths,
                     std::vector<double>& prefix, ScalarField& out) {
  const Grid& g = c.grid;
  const int P = g.points;
  const int rows = g.dim == 1 ? 1 : P;
  const int reach = (static_cast<int>(widths.size()) - 1) / 2;
  const double vol = g.cell_volume();

  // prefix[r*(P+1) + j+1] = sum of row r columns [0, j]; prefix[...0] = 0.
  prefix.assign(static_cast<std::size_t>(rows) * (P + 1), 0.0);
  for (int r = 0; r < rows; ++r) {
    const double* src = c.v.data() + static_cast<std::size_t>(r) * P;
    double* dst = prefix.data() + static_cast<std::size_t>(r) * (P + 1);
    double acc = 0.0;
    for (int j = 0; j < P; ++j) {
      acc += src[j];
      dst[j + 1] = acc;
    }
  }

  if (g.dim == 1) {
    // One axis: the disc is a single column span of half-width `reach`.
    const double* S = prefix.data();
    double* K = out.v.data();
    for (int j = 0; j < P; ++j) {
      const int lo = std::max(0, j - reach);
      const int hi = std::min(P - 1, j + reach);
      K[j] = (S[hi + 1] - S[lo]) * vol;
    }
    return;
  }

  for (int i = 0; i < P; ++i) {
    double* K = out.v.data() + static_cast<std::size_t>(i) * P;
    for (int j = 0; j < P; ++j) K[j] = 0.0;
    for (int di = -reach; di <= reach; ++di) {
      const int r = i + di;
      const int w = widths[static_cast<std::size_t>(di + reach)];
      if (w < 0 || r < 0 || r >= P) continue;
      const double* S = prefix.data() + static_cast<std::size_t>(r) * (P + 1);
      for (int j = 0; j < P; ++j) {
        const int lo = std::max(0, j - w);
        const int hi = std::min(P - 1, j + w);
        K[j] += S[hi + 1] - S[lo];
      }
    }
    for (int j = 0; j < P; ++j) K[j] *= vol;
  }
}

}  // namespace

ContinuumEngine::ContinuumEngine(ContinuumState init, const ModelParams& params,
                                 std::vector<int> vessel_sites)
    : params_(params), state_(std::move(init)), vessels_(std::move(vessel_sites)) {
  params_.validate();
  const Grid& g = state_.n.grid;
  const int size = g.site_count();
  if (state_.c.size() != size || state_.phi.size() != size ||
      state_.c.grid.points != g.points || state_.phi.grid.points != g.points)
    throw ConfigError("continuum state fields do not match the grid");
  for (const double x : state_.n.v)
    if (!std::isfinite(x) || x < 0.0)
      throw ConfigError("tumour density must be finite and >= 0");
  for (const double x : state_.c.v)
    if (!std::isfinite(x) || x < 0.0)
      throw ConfigError("T-cell density must be finite and >= 0");
  for (const double x : state_.phi.v)
    if (!std::isfinite(x) || x < 0.0)
      throw ConfigError("chemoattractant field must be finite and >= 0");
  for (const int v : vessels_)
    if (v < 0 || v >= size) throw ConfigError("vessel site out of range");
  std::sort(vessels_.begin(), vessels_.end());

  phi_cap_ = phi_ceiling(state_.phi, params_.A, params_.w_max);
  for (const double f : state_.phi.v) phi_peak_ = std::max(phi_peak_, f);
  params_.gamma_c = params_.resolved_gamma_c(phi_cap_);
  n_buffer_ = ScalarField(g);
  kill_buffer_ = ScalarField(g);
  kill_widths_ = disc_row_widths(g, params_.theta);
}

void ContinuumEngine::step() {
  const double rho_n = total_mass(state_.n);
  const double rho_c = total_mass(state_.c);
  const double phi_tot = total_mass(state_.phi);
  kill_field_into(state_.c, kill_widths_, prefix_, kill_buffer_);

  // Buffer the step-k tumour density: the T-cell and chemoattractant updates
  // must not see the already-updated values.
  n_buffer_.v = state_.n.v;
  continuum_step_n(state_.n, kill_buffer_, rho_n, params_);
  clamped_mass_ += continuum_step_c(state_.c, n_buffer_, state_.phi, rho_c,
                                    phi_tot, vessels_, params_, scratch_);
  if (clamped_mass_ > 1.0)
    throw StepSizeError(
        "cumulative T-cell mass restored by positivity clamping exceeded one "
        "cell; the transport scheme is outside its validity regime for this "
        "configuration");
  chemo_step(state_.phi, n_buffer_, params_, chemo_scratch_);
  for (const double f : state_.phi.v) phi_peak_ = std::max(phi_peak_, f);
  ++steps_;
}

}  // namespace timsim
