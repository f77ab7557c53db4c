#pragma once

#include <optional>
#include <string>

#include "qmpkit/chart.hpp"
#include "qmpkit/constants.hpp"
#include "qmpkit/grid.hpp"
#include "qmpkit/quantization.hpp"

namespace qmpkit {

// Symmetrized dense discretization of a Hamiltonian variant on a grid.
//
// Kinetic part: conservative flux differences of d_a(g^(1/2) omega^ab d_b),
// divided by the measure weight, then similarity-transformed with
// D^(1/2) H D^(-1/2) (D = diagonal measure weights) into an exactly symmetric
// matrix. QMP and external potentials enter on the diagonal.
struct DiscretizedHamiltonian {
  HamiltonianVariant variant = HamiltonianVariant::Schroedinger;
  double nu = 2.0;
  UniformGrid grid;
  Vector weights;        // g^(1/2) * cell volume per node, strictly positive
  Matrix matrix;         // symmetric
  std::string chart_name;
};

DiscretizedHamiltonian discretize(const MetricChart& chart, const Constants& c,
                                  HamiltonianVariant variant, const GridSpec& spec,
                                  double nu = 2.0, const ScalarField* v_ext = nullptr);

struct Spectrum {
  Vector eigenvalues;                  // ascending
  std::optional<Matrix> eigenvectors;  // columns, in node space (weights applied)
};

Spectrum eigenvalues(const DiscretizedHamiltonian& h, int k, bool with_vectors = false);

// Per-level |lambda_i(N) - lambda_i(N/2)|, the self-estimated discretization error.
Vector discretization_error_estimate(const MetricChart& chart, const Constants& c,
                                     HamiltonianVariant variant, const GridSpec& spec, int k,
                                     double nu = 2.0);

// Spectra of the same variant on two charts of the same manifold, with the
// discretization error estimate of both. For the Schroedinger variant the
// gaps vanish with the grid; for DeWitt they persist.
struct AnomalyReport {
  Vector levels_a;
  Vector levels_b;
  Vector gap;        // |a - b|
  Vector error_estimate;  // max of the two self-estimates, per level
};

AnomalyReport anomaly_gap(const MetricChart& chart_a, const MetricChart& chart_b,
                          const Constants& c, HamiltonianVariant variant, const GridSpec& spec,
                          int k, double nu = 2.0);

}  // namespace qmpkit
