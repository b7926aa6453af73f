#pragma once

#include <complex>
#include <vector>

#include "dsthin/element.hpp"
#include "dsthin/geometry.hpp"
#include "dsthin/metrics.hpp"
#include "dsthin/sequences.hpp"

namespace dsthin::reference {

// Serial direct-summation implementations. These are the correctness
// baselines for the FFT/OpenMP kernels: tests compare against them and the
// benchmark reports the speedups. No FFT, no threads.

/// Eq.-5-style conjugate-first circular autocorrelation, quadruple loop.
AutocorrGrid autocorrelation_direct(const ExcitationGrid& grid);

/// F_kl = sum alpha_pq exp(+j 2 pi (pk/P + ql/Q)) by direct summation.
std::vector<std::complex<double>> spectrum_direct(const ExcitationGrid& grid);

/// Per-node direct array-factor evaluation of the oversampled pattern grid
/// (array factor only, no element weighting or direction reduction).
std::vector<double> pattern_grid_direct(const ExcitationGrid& grid, int oversample);

/// Single-thread midpoint-rule directivity, same quadrature as
/// metrics::directivity.
double directivity_serial(const ExcitationGrid& grid, const UnitCell& cell,
                          const ElementPattern& ep, const Steering& steer,
                          const QuadratureSpec& quad);

} // namespace dsthin::reference
