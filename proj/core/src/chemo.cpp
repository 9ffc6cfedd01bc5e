#include "timsim/chemo.hpp"

#include "timsim/errors.hpp"

namespace timsim {

namespace {

// Accumulate face fluxes of the zero-flux Laplacian along one axis.
// `stride` is the flat-index distance between axis neighbours and `count`
// the number of sites along the axis.
void accumulate_axis(const std::vector<double>& phi, std::vector<double>& lap,
                     int lines, int line_stride, int count, int stride,
                     double inv_chi2) {
  for (int l = 0; l < lines; ++l) {
    const int base = l * line_stride;
    for (int k = 0; k + 1 < count; ++k) {
      const int a = base + k * stride;
      const int b = a + stride;
      const double flux = (phi[static_cast<std::size_t>(b)] -
                           phi[static_cast<std::size_t>(a)]) *
                          inv_chi2;
      lap[static_cast<std::size_t>(a)] += flux;
      lap[static_cast<std::size_t>(b)] -= flux;
    }
  }
}

}  // namespace

void chemo_step(ScalarField& phi, const ScalarField& n, const ModelParams& p,
                std::vector<double>& scratch) {
  const Grid& g = phi.grid;
  if (n.size() != phi.size())
    throw NumericError("chemo_step: field size mismatch");
  const std::size_t size = phi.v.size();
  scratch.assign(size, 0.0);

  const double chi = g.spacing();
  const double inv_chi2 = 1.0 / (chi * chi);
  const int P = g.points;
  if (g.dim == 1) {
    accumulate_axis(phi.v, scratch, 1, 0, P, 1, inv_chi2);
  } else {
    accumulate_axis(phi.v, scratch, P, P, P, 1, inv_chi2);  // along y (rows)
    accumulate_axis(phi.v, scratch, P, 1, P, P, inv_chi2);  // along x (cols)
  }

  const double a = p.tau * p.beta_phi;
  const double b = p.tau * p.alpha_phi;
  const double keep = 1.0 - p.tau * p.kappa_phi;
  for (std::size_t i = 0; i < size; ++i)
    phi.v[i] = keep * phi.v[i] + a * scratch[i] + b * n.v[i];
}

void chemo_step(ScalarField& phi, const ScalarField& n, const ModelParams& p) {
  std::vector<double> scratch;
  chemo_step(phi, n, p, scratch);
}

}  // namespace timsim
