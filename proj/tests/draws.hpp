#pragma once

// Random parameter draws shared by the property tests and the acceptance
// suite.
//
// `draw_consistent` produces cross-source phases of the factorized form
// xi(mu1,nu2) = eta(mu1) - eta(nu2) with eta(V) - eta(H) = phi in each source,
// which is the regime where the constructed operators are guaranteed positive
// at every pipeline stage. `draw_free_xi` samples all four cross phases
// independently; the closed-form/numeric rate identities hold there too, but
// positivity of the intermediate operators is not asserted for such draws.

#include <numbers>
#include <random>

#include "entvis/entmeas.hpp"
#include "entvis/interf.hpp"

namespace draws {

struct Draw {
  entvis::entmeas::MixedStateParams p;
  entvis::interf::SetupParams s;
};

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline Draw draw_consistent(std::mt19937_64& rng, bool t_half_range = true) {
  Draw d;
  d.p.i_h = uniform(rng, 0.05, 0.95);
  d.p.coh = uniform(rng, 0.0, 1.0);
  d.p.phi = uniform(rng, 0.0, 2.0 * std::numbers::pi);
  const double ab1 = uniform(rng, 0.1, 0.95);
  d.s.b1 = std::polar(ab1, uniform(rng, 0.0, 2.0 * std::numbers::pi));
  d.s.b2 = std::polar(std::sqrt(1.0 - ab1 * ab1), uniform(rng, 0.0, 2.0 * std::numbers::pi));
  const double t_lo = t_half_range ? 0.5 : 0.3;
  d.s.t_h = uniform(rng, t_lo, 1.0);
  d.s.t_v = uniform(rng, t_lo, 1.0);
  d.s.theta = uniform(rng, 0.0, std::numbers::pi / 2.0);
  const double delta = uniform(rng, 0.0, 2.0 * std::numbers::pi);  // common propagation phase
  d.s.xi_hh = delta;
  d.s.xi_vv = delta;
  d.s.xi_hv = delta - d.p.phi;
  d.s.xi_vh = delta + d.p.phi;
  d.s.phi_alpha = uniform(rng, 0.0, 2.0 * std::numbers::pi);
  d.s.phi_beta = uniform(rng, 0.0, 2.0 * std::numbers::pi);
  return d;
}

inline Draw draw_free_xi(std::mt19937_64& rng) {
  Draw d = draw_consistent(rng, true);
  d.s.xi_hh = uniform(rng, 0.0, 2.0 * std::numbers::pi);
  d.s.xi_vv = uniform(rng, 0.0, 2.0 * std::numbers::pi);
  d.s.xi_hv = uniform(rng, 0.0, 2.0 * std::numbers::pi);
  d.s.xi_vh = uniform(rng, 0.0, 2.0 * std::numbers::pi);
  return d;
}

}  // namespace draws
