#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "twp/grid.hpp"

namespace twp {

enum class GeneratorKind { gaussian, wave_packet, band_limited_random, lemma_phi, lemma_psi };

std::string to_string(GeneratorKind kind);
GeneratorKind generator_kind_from_string(const std::string& name);

// Analytic test function, evaluated periodically about its center.
//
// gaussian             amplitude * exp(-|d|^2 / (2 width^2))
// wave_packet          amplitude * e^{2 pi i xi0.d} * gaussian(epsilon d)
// band_limited_random  gaussian envelope (omitted when width <= 0) times
//                      sum_k c_k e^{2 pi i k.d} over lattice points k of
//                      spacing lattice with annulus[0] <= |k| < annulus[1],
//                      c_k unit-variance complex normal drawn from seed
// lemma_phi            e^{2 pi i xi0.d} Phi(epsilon d), Phi_hat = theta x theta
//                      normalised so the sample at the center is amplitude
// lemma_psi            amplitude * e^{2 pi i xi0.d} Psi(epsilon d), Psi_hat(xi) =
//                      theta(xi_1/4) theta(xi_2/4), equal to 1 on [-2, 2]^2
//
// d is the displacement from center, wrapped into [-L/2, L/2)^2. A nonzero
// dilation a replaces d_x by 2^{-a} d_x.
struct Generator {
  GeneratorKind kind = GeneratorKind::gaussian;
  std::array<double, 2> center{0.0, 0.0};
  double width = 1.0;
  std::array<double, 2> modulation{0.0, 0.0};
  double epsilon = 1.0;
  double amplitude = 1.0;
  std::array<double, 2> annulus{0.5, 1.0};
  double lattice = 0.0;  // 0 selects the grid spacing 1/L
  std::uint64_t seed = 0;
  int dilation = 0;
  bool check_support = true;
};

Generator dilate_generator(const Generator& gen, int a);

GridFunction2D sample(const Generator& gen, const GridGeometry& geo);

// Largest magnitude on the seam of the box farthest from the center, relative
// to the peak magnitude.
double seam_ratio(const GridFunction2D& f, std::array<double, 2> center);

}  // namespace twp
