// Small numerics tour of the discrete calculus: adjointness, the Hodge
// splitting, the energy identity on the periodic grid, and the plateau
// cut-off family.
#include <cstdio>

#include "nlg/cutoff.hpp"
#include "nlg/hodge.hpp"
#include "nlg/rng.hpp"

int main() {
  using namespace nlg;
  Rng rng(11);

  // adjointness <d_s u, F>_mu = <u, div_s F>_h, exact by construction
  const auto line = make_grid(1.0, 24);
  const Field u = random_smooth_field(line, 3, 1, rng);
  const OdForm f = random_odform(line, 3, 1, rng);
  const double lhs = odform_inner(d_s(u, 0.5), f);
  const double rhs = field_inner(u, div_s(f, 0.5));
  std::printf("adjointness defect          %.3e\n", std::abs(lhs - rhs));

  // Hodge: G = d_s a + B with div_s B = 0
  const HodgeParts parts = hodge_decompose(f, 0.5);
  std::printf("pythagoras defect           %.3e\n",
              std::abs(parts.energy_total - parts.energy_gradient -
                       parts.energy_remainder));
  std::printf("||div B||                   %.3e\n",
              norm_lp_field(div_s(parts.b, 0.5), 2.0));

  // periodic energy identity <Lambda_s u, u> = [u]^2
  const auto torus = make_grid(1.0, 64, Geometry::periodic_torus, 32);
  Field mode(torus, 1, 1);
  for (int i = 0; i < 64; ++i)
    mode.s(i) = std::cos(2.0 * std::numbers::pi * torus->x[i]);
  const double energy = field_inner(frac_laplacian(mode, 0.5), mode);
  const double semi = sobolev_seminorm(mode, 0.5, 2.0);
  std::printf("energy identity defect      %.3e\n",
              std::abs(energy - semi * semi));

  // plateau cut-offs: seminorm decays along the double-exponential family
  for (int k = 1; k <= 3; ++k) {
    const CutoffSequence c = loglog_cutoff(k);
    std::printf("cut-off level %d: plateau %.3e, seminorm %.4f\n", k, c.rho,
                c.seminorm);
  }
  return 0;
}
