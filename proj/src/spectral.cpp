#include "qmpkit/spectral.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

#include "kinetic_form.hpp"

namespace qmpkit {

namespace {

double real_potential(const ScalarField& v, const Vector& q) {
  const Complex val = v(q);
  if (std::abs(val.imag()) > 1e-12 * std::max(1.0, std::abs(val.real())))
    fail(ErrorCode::InvalidArgument, "external potential must be real-valued");
  return val.real();
}

}  // namespace

DiscretizedHamiltonian discretize(const MetricChart& chart, const Constants& c,
                                  HamiltonianVariant variant, const GridSpec& spec, double nu,
                                  const ScalarField* v_ext) {
  c.validate();
  if (!std::isfinite(nu)) fail(ErrorCode::InvalidArgument, "nu must be finite");

  DiscretizedHamiltonian out;
  out.variant = variant;
  out.nu = nu;
  out.chart_name = chart.name();
  out.grid = UniformGrid::build(chart.domain(), spec);
  const detail::NodeData data = detail::node_data(chart, out.grid);
  out.weights = data.sqrt_w;

  const long total = out.grid.total();
  Matrix kin = Matrix::Zero(total, total);
  detail::for_each_kinetic_entry(out.grid, data,
                                 [&kin](long i, long j, double v) { kin(i, j) += v; });

  const Vector isq = out.weights.cwiseSqrt().cwiseInverse();
  out.matrix.noalias() = c.kinetic_scale() * (isq.asDiagonal() * kin * isq.asDiagonal());

  for (long i = 0; i < total; ++i) {
    const Vector q = out.grid.node(i);
    double v = 0.0;
    if (variant == HamiltonianVariant::DeWitt) v += qmp_dewitt(chart, c, q).v_dw;
    if (variant == HamiltonianVariant::NuFamily) v += qmp_nu(chart, c, q, nu);
    if (v_ext) v += real_potential(*v_ext, q);
    out.matrix(i, i) += v;
  }

  const double scale = std::max(1.0, out.matrix.cwiseAbs().maxCoeff());
  const double asym = (out.matrix - out.matrix.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-10 * scale)
    fail(ErrorCode::AsymmetryExceeded,
         "discretized Hamiltonian asymmetry " + std::to_string(asym));
  out.matrix = (0.5 * (out.matrix + out.matrix.transpose())).eval();
  return out;
}

Spectrum eigenvalues(const DiscretizedHamiltonian& h, int k, bool with_vectors) {
  const long total = h.grid.total();
  if (k < 1) fail(ErrorCode::InvalidArgument, "need at least one eigenvalue");
  if (k > total) k = static_cast<int>(total);

  Eigen::SelfAdjointEigenSolver<Matrix> solver;
  solver.compute(h.matrix, with_vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) fail(ErrorCode::SolverFailure, "eigendecomposition failed");

  Spectrum out;
  out.eigenvalues = solver.eigenvalues().head(k);
  if (with_vectors) {
    const Vector isq = h.weights.cwiseSqrt().cwiseInverse();
    Matrix v(total, k);
    for (int j = 0; j < k; ++j) v.col(j) = solver.eigenvectors().col(j).cwiseProduct(isq);
    out.eigenvectors = std::move(v);
  }
  return out;
}

namespace {

GridSpec halved(const GridSpec& spec) {
  GridSpec out = spec;
  for (int& n : out.nodes) n /= 2;
  return out;
}

}  // namespace

Vector discretization_error_estimate(const MetricChart& chart, const Constants& c,
                                     HamiltonianVariant variant, const GridSpec& spec, int k,
                                     double nu) {
  const Spectrum fine = eigenvalues(discretize(chart, c, variant, spec, nu), k);
  const Spectrum coarse = eigenvalues(discretize(chart, c, variant, halved(spec), nu), k);
  return (fine.eigenvalues - coarse.eigenvalues).cwiseAbs();
}

AnomalyReport anomaly_gap(const MetricChart& chart_a, const MetricChart& chart_b,
                          const Constants& c, HamiltonianVariant variant, const GridSpec& spec,
                          int k, double nu) {
  const Spectrum a = eigenvalues(discretize(chart_a, c, variant, spec, nu), k);
  const Spectrum a2 = eigenvalues(discretize(chart_a, c, variant, halved(spec), nu), k);
  const Spectrum b = eigenvalues(discretize(chart_b, c, variant, spec, nu), k);
  const Spectrum b2 = eigenvalues(discretize(chart_b, c, variant, halved(spec), nu), k);

  AnomalyReport out;
  out.levels_a = a.eigenvalues;
  out.levels_b = b.eigenvalues;
  out.gap = (a.eigenvalues - b.eigenvalues).cwiseAbs();
  out.error_estimate = (a.eigenvalues - a2.eigenvalues)
                           .cwiseAbs()
                           .cwiseMax((b.eigenvalues - b2.eigenvalues).cwiseAbs());
  return out;
}

}  // namespace qmpkit
