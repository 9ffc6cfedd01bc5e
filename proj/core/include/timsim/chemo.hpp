#pragma once

#include <vector>

#include "timsim/grid.hpp"
#include "timsim/params.hpp"

namespace timsim {

/// One explicit Euler step of the chemoattractant field:
///
///   phi' = phi + tau * beta_phi * L(phi) + tau * alpha_phi * n
///              - tau * kappa_phi * phi
///
/// where L is the five-point (three-point in 1D) Laplacian assembled in flux
/// form with zero-flux boundaries: every lattice face between two interior
/// neighbours carries the flux (phi_right - phi_left)/chi^2 and boundary
/// faces carry exactly zero.  Because each face contributes +F to one site
/// and -F to the other, the diffusion term telescopes to zero in the total
/// mass, giving the exact discrete balance
///
///   total_mass(phi') = (1 - tau*kappa_phi) * total_mass(phi)
///                      + tau * alpha_phi * total_mass(n).
///
/// `scratch` is resized as needed and holds the Laplacian.
void chemo_step(ScalarField& phi, const ScalarField& n, const ModelParams& p,
                std::vector<double>& scratch);

/// Convenience overload that allocates its own scratch buffer.
void chemo_step(ScalarField& phi, const ScalarField& n, const ModelParams& p);

}  // namespace timsim
