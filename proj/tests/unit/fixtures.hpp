#pragma once

#include "ehsense/model.hpp"

namespace ehsense::testing {

// Single-rate instance of the region plots: B=50, E_T=10, tau=0.2.
inline SystemParams fig2_params() {
  SystemParams p;
  p.lambda0 = 0.6;
  p.lambda1 = 0.9;
  p.energy_pmf = two_point_pmf(10, 0.1);
  p.b_max = 50;
  p.e_tx = 10;
  p.e_sense = 2;
  p.r_low = 0.0;
  p.r_high = 3.0;
  p.beta = 0.98;
  return p;
}

// Small enough for the exact solver.
inline SystemParams small_params() {
  SystemParams p;
  p.lambda0 = 0.3;
  p.lambda1 = 0.8;
  p.energy_pmf = {0.5, 0.5};
  p.b_max = 4;
  p.e_tx = 2;
  p.e_sense = 1;
  p.r_low = 0.0;
  p.r_high = 1.0;
  p.beta = 0.9;
  return p;
}

// Two-rate variant used by the general-case tests.
inline SystemParams two_rate_params() {
  SystemParams p = fig2_params();
  p.r_low = 1.0;
  p.beta = 0.9;
  return p;
}

inline SystemParams throughput_params(double q, int e_sense) {
  SystemParams p;
  p.lambda0 = 0.2;
  p.lambda1 = 0.8;
  p.energy_pmf = two_point_pmf(10, q);
  p.b_max = 50;
  p.e_tx = 10;
  p.e_sense = e_sense;
  p.r_low = 0.0;
  p.r_high = 2.0;
  p.beta = 0.999;
  return p;
}

}  // namespace ehsense::testing
