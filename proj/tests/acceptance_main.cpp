// Acceptance gate: one pass/fail line per shipping criterion, exit code is the
// number of failures. Numbers that look arbitrary are frozen closed forms or
// independently computed reference values.
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "qmpkit/catalog.hpp"
#include "qmpkit/flat_deformation.hpp"
#include "qmpkit/normal_coords.hpp"
#include "qmpkit/quantization.hpp"
#include "qmpkit/quasiclassical.hpp"
#include "qmpkit/spectral.hpp"

using namespace qmpkit;

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw std::runtime_error(what);
}

std::string num(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

Vector vec1(double a) {
  Vector v(1);
  v << a;
  return v;
}

Vector vec2(double a, double b) {
  Vector v(2);
  v << a, b;
  return v;
}

Vector vec3(double a, double b, double c) {
  Vector v(3);
  v << a, b, c;
  return v;
}

// --- 1: radial flat chart -------------------------------------------------

void radial_potential() {
  Constants c;  // hbar = m = 1, kinetic scale 1/2
  MetricChart polar = make_chart("polar2");
  MetricChart polar_numeric = MetricChart::numeric("polar-numeric", polar.domain(), [](const Vector& q) {
    Matrix m(2, 2);
    m << 1.0, 0.0, 0.0, q(0) * q(0);
    return m;
  });
  for (double r : {0.5, 1.0, 2.0}) {
    const Vector q = vec2(r, 0.3);
    const double want = 1.0 / (8.0 * r * r);
    const double analytic = qmp_dewitt(polar, c, q).v_dw;
    require(std::abs(analytic - want) <= 1e-8 * want,
            "analytic chart at r=" + num(r) + ": " + num(analytic) + " vs " + num(want));
    const double numeric = qmp_dewitt(polar_numeric, c, q).v_dw;
    require(std::abs(numeric - want) <= 1e-5 * want,
            "numeric chart at r=" + num(r) + ": " + num(numeric) + " vs " + num(want));
  }
}

// --- 2: ordering family ----------------------------------------------------

void ordering_family() {
  Constants c;
  const double eps = std::numeric_limits<double>::epsilon();

  MetricChart circle = make_chart("circle-deformed:0.2");
  const Vector q = vec1(0.7);
  const QmpValue base = qmp_dewitt(circle, c, q);
  for (double nu : {0.0, 1.0, 2.0, 4.0}) {
    const double got = qmp_nu(circle, c, q, nu);
    const double want = base.v_dw + (nu - 2.0) * base.nu_correction_density;
    const double scale =
        std::abs(base.v_dw) + std::abs(nu - 2.0) * std::abs(base.nu_correction_density) + 1.0;
    require(std::abs(got - want) <= 8.0 * eps * scale,
            "nu=" + num(nu) + ": " + num(got) + " vs " + num(want));
  }

  MetricChart flat = make_chart("cartesian:3");
  const Vector x = vec3(0.3, -1.2, 2.0);
  const QmpValue v = qmp_dewitt(flat, c, x);
  require(v.v_dw == 0.0 && v.nu_correction_density == 0.0,
          "flat chart potential not exactly zero");
  require(qmp_nu(flat, c, x, 7.0) == 0.0, "flat chart family member not exactly zero");
}

// --- 3: metric expansion in normal coordinates ------------------------------

void metric_expansion() {
  MetricChart sphere = make_chart("sphere2:1.0");
  NormalChart nc = build_normal_chart(sphere, vec2(1.1, 0.7), 0.3);
  ExpansionFit fit = metric_expansion_fit(nc, 0.05);
  // leading coefficient size on the unit sphere is 1/3; ask for 1% of that
  require(fit.max_abs_error <= 0.01 / 3.0,
          "fit deviates from curvature prediction by " + num(fit.max_abs_error));
  require(std::abs(fit.coeff(0, 0)(1, 1) + 1.0 / 3.0) <= 0.01 / 3.0,
          "transverse coefficient " + num(fit.coeff(0, 0)(1, 1)) + " vs -1/3");
}

// --- 4: potential asymptote in normal coordinates ---------------------------

void normal_asymptote() {
  Constants c;
  MetricChart sphere2 = make_chart("sphere2:1.0");
  AsymptoteResult s2 = qmp_normal_asymptote(sphere2, c, vec2(1.1, 0.7), 0.1, 6);
  require(s2.sign == 1, "2-sphere sign " + std::to_string(s2.sign) + ", expected +1");
  require(std::abs(s2.extrapolated - s2.prediction_magnitude) <= 0.01 * s2.prediction_magnitude,
          "2-sphere extrapolation " + num(s2.extrapolated) + " vs " + num(s2.prediction_magnitude));

  MetricChart sphere3 = make_chart("sphere3:1.0");
  AsymptoteResult s3 = qmp_normal_asymptote(sphere3, c, vec3(1.2, 0.9, 0.5), 0.1, 6);
  require(s3.sign == 1, "3-sphere sign " + std::to_string(s3.sign) + ", expected +1");
  require(std::abs(s3.extrapolated - 0.5) <= 0.005,
          "3-sphere extrapolation " + num(s3.extrapolated) + " vs 0.5");

  MetricChart polar = make_chart("polar2");
  AsymptoteResult flat = qmp_normal_asymptote(polar, c, vec2(1.1, 0.7), 0.1, 4);
  require(flat.sign == 0, "flat sign " + std::to_string(flat.sign) + ", expected 0");
  require(std::abs(flat.extrapolated) < 1e-6, "flat extrapolation " + num(flat.extrapolated));
}

// --- 5: coincidence limit of the two-point potential -------------------------

void coincidence() {
  Constants c;
  MetricChart sphere = make_chart("sphere2:1.0");
  const Vector q0 = vec2(M_PI / 2, 0.3);
  CoincidenceResult r = coincidence_limit(sphere, c, q0, vec2(0.6, 1.0), 0.4, 4, 1.0);
  require(std::abs(r.extrapolated - r.prediction) <= 0.02 * std::abs(r.prediction),
          "extrapolation " + num(r.extrapolated) + " vs curvature value " + num(r.prediction));
  // same limit through the static normal-coordinate route, at the same point
  AsymptoteResult nc = qmp_normal_asymptote(sphere, c, q0, 0.1, 5);
  require(std::abs(r.extrapolated - nc.sign * nc.extrapolated) <=
              0.02 * std::abs(nc.extrapolated),
          "two-point " + num(r.extrapolated) + " vs normal-coordinate " + num(nc.extrapolated));
}

// --- 6: deformed flat chart converges at second order ------------------------

void deformation_rate() {
  Constants c;
  const Vector q = vec1(0.4);
  std::vector<double> gaps;
  for (double eps : {0.01, 0.005, 0.0025}) {
    DeformationField field = DeformationField::from_id("sin-x", 1, eps);
    const double exact = qmp_dewitt(deformed_chart(field), c, q).v_dw;
    const double first = qmp_deformation_first_order(field, c, q);
    gaps.push_back(exact - first);
  }
  for (int i = 0; i + 1 < static_cast<int>(gaps.size()); ++i) {
    const double ratio = gaps[i] / gaps[i + 1];
    require(ratio > 3.5 && ratio < 4.5, "halving eps scaled the defect by " + num(ratio));
  }
}

// --- 7: spectral gap between charts ------------------------------------------

void spectral_anomaly() {
  Constants c;
  MetricChart arc = make_chart("circle-deformed:0.0");
  MetricChart deformed = make_chart("circle-deformed:0.2");
  const GridSpec spec{{256}, 2};

  AnomalyReport sch =
      anomaly_gap(arc, deformed, c, HamiltonianVariant::Schroedinger, spec, 5);
  for (int i = 0; i < 5; ++i)
    require(sch.gap(i) <= 2.0 * sch.error_estimate(i) + 1e-12,
            "bare level " + std::to_string(i) + " moved by " + num(sch.gap(i)) +
                " (estimate " + num(sch.error_estimate(i)) + ")");

  AnomalyReport dw = anomaly_gap(arc, deformed, c, HamiltonianVariant::DeWitt, spec, 5);
  bool persistent = false;
  for (int i = 0; i < 5; ++i)
    if (dw.gap(i) > 5.0 * dw.error_estimate(i)) persistent = true;
  require(persistent, "no corrected level moved beyond five error estimates");

  DiscretizedHamiltonian a =
      discretize(arc, c, HamiltonianVariant::Schroedinger, spec);
  DiscretizedHamiltonian b = discretize(arc, c, HamiltonianVariant::DeWitt, spec);
  require((a.matrix - b.matrix).cwiseAbs().maxCoeff() == 0.0,
          "arc-length chart: variants differ");
}

// --- 8: spectra of the circle and the sphere ---------------------------------

void reference_spectra() {
  Constants circle_constants{1.0, 0.5};  // kinetic scale 1
  MetricChart circle = make_chart("circle-deformed:0.0");
  Spectrum s = eigenvalues(
      discretize(circle, circle_constants, HamiltonianVariant::Schroedinger, GridSpec{{256}, 2}),
      5);
  const double circle_want[5] = {0.0, 1.0, 1.0, 4.0, 4.0};
  for (int i = 0; i < 5; ++i)
    require(std::abs(s.eigenvalues(i) - circle_want[i]) <= 1e-3,
            "circle level " + std::to_string(i) + " = " + num(s.eigenvalues(i)));

  Constants c;  // kinetic scale 1/2: sphere levels l(l+1)/2
  MetricChart sphere = make_chart("sphere2:1.0");
  Spectrum sp = eigenvalues(
      discretize(sphere, c, HamiltonianVariant::Schroedinger, GridSpec{{64, 64}, 2}), 16);
  const int multiplicity[4] = {1, 3, 5, 7};
  const double want[4] = {0.0, 1.0, 3.0, 6.0};
  int at = 0;
  for (int l = 0; l < 4; ++l) {
    double mean = 0.0;
    for (int k = 0; k < multiplicity[l]; ++k) mean += sp.eigenvalues(at++);
    mean /= multiplicity[l];
    if (l == 0)
      require(std::abs(mean) <= 0.02, "sphere ground level " + num(mean));
    else
      require(std::abs(mean / want[l] - 1.0) <= 0.02,
              "sphere level group " + std::to_string(l) + " mean " + num(mean) + " vs " +
                  num(want[l]));
  }
}

// --- 9: van Vleck determinant -------------------------------------------------

void fluctuation_determinant() {
  Constants c;
  MetricChart plane = make_chart("cartesian:2");
  const double dt = 0.5;
  const double flat = van_vleck(plane, c, vec2(1.3, 0.2), vec2(0.1, -0.5), dt);
  require(std::abs(flat - 4.0) <= 1e-6 * 4.0, "flat determinant " + num(flat) + " vs 4");

  MetricChart sphere = make_chart("sphere2:1.0");
  for (double s : {0.2, 0.5, 1.0}) {
    const double d = van_vleck(sphere, c, vec2(M_PI / 2, 0.7 + s), vec2(M_PI / 2, 0.7), 1.0);
    const double want = s / std::sin(s);
    require(std::abs(d - want) <= 0.005 * want,
            "sphere s=" + num(s) + ": " + num(d) + " vs " + num(want));
  }
}

// --- 10: hermiticity in the invariant inner product ----------------------------

void hermiticity() {
  Constants c;
  MetricChart circle = make_chart("circle-deformed:0.2");

  ScalarField psi(
      [](const Vector& q) { return std::exp(Complex(0.0, std::sin(q(0)))); },
      [](const Vector& q, int) {
        return Complex(0.0, std::cos(q(0))) * std::exp(Complex(0.0, std::sin(q(0))));
      },
      [](const Vector& q, int, int) {
        const Complex val = std::exp(Complex(0.0, std::sin(q(0))));
        const Complex d1 = Complex(0.0, std::cos(q(0)));
        return (d1 * d1 + Complex(0.0, -std::sin(q(0)))) * val;
      });
  ScalarField phi(
      [](const Vector& q) { return Complex(std::exp(std::cos(q(0))), 0.0); },
      [](const Vector& q, int) {
        return Complex(-std::sin(q(0)) * std::exp(std::cos(q(0))), 0.0);
      },
      [](const Vector& q, int, int) {
        return Complex((std::sin(q(0)) * std::sin(q(0)) - std::cos(q(0))) *
                           std::exp(std::cos(q(0))),
                       0.0);
      });

  const int n = 256;
  const double h = 2.0 * M_PI / n;
  Complex p_defect = 0.0, h_defect = 0.0;
  double p_scale = 0.0, h_scale = 0.0;
  for (int j = 0; j < n; ++j) {
    const Vector q = vec1(j * h);
    const double w = h * std::sqrt(circle.metric(q).determinant());
    const Complex p_psi = apply_momentum(circle, c, psi, q, 0);
    const Complex p_phi = apply_momentum(circle, c, phi, q, 0);
    p_defect += w * (std::conj(phi(q)) * p_psi - std::conj(p_phi) * psi(q));
    p_scale += std::abs(w * std::conj(phi(q)) * p_psi);
    const Complex h_psi = apply_hamiltonian(circle, c, HamiltonianVariant::DeWitt, psi, q);
    const Complex h_phi = apply_hamiltonian(circle, c, HamiltonianVariant::DeWitt, phi, q);
    h_defect += w * (std::conj(phi(q)) * h_psi - std::conj(h_phi) * psi(q));
    h_scale += std::abs(w * std::conj(phi(q)) * h_psi);
  }
  require(std::abs(p_defect) <= 1e-10 * std::max(1.0, p_scale),
          "momentum pairing defect " + num(std::abs(p_defect)));
  require(std::abs(h_defect) <= 1e-10 * std::max(1.0, h_scale),
          "Hamiltonian pairing defect " + num(std::abs(h_defect)));
}

// --- 11: conformal coupling -----------------------------------------------------

void conformal_coupling() {
  for (int n = 1; n <= 8; ++n) {
    ConformalComparison cc = conformal_coefficient(n);
    require(cc.equal == (n == 3),
            "dimension " + std::to_string(n) + ": equality flag " +
                (cc.equal ? "set" : "clear"));
  }
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<void()> run;
  };
  const std::vector<Criterion> criteria = {
      {"radial flat chart potential hbar^2/(8 m r^2), analytic and numeric jets",
       radial_potential},
      {"ordering family linear in nu at machine precision, zero on flat charts",
       ordering_family},
      {"normal-coordinate metric expansion matches curvature coefficients to 1%",
       metric_expansion},
      {"normal-coordinate potential extrapolates to +curvature/6 on spheres, 0 flat",
       normal_asymptote},
      {"two-point potential coincidence limit agrees with the normal-coordinate value",
       coincidence},
      {"deformed-chart potential approaches its first order at rate eps^2",
       deformation_rate},
      {"chart change shifts corrected spectra but not the bare ones", spectral_anomaly},
      {"discretized spectra reproduce circle and sphere eigenvalues", reference_spectra},
      {"van Vleck determinant: (m/dt)^n flat, s/sin(s) on the sphere",
       fluctuation_determinant},
      {"momentum and corrected Hamiltonian symmetric in the invariant pairing",
       hermiticity},
      {"quantized conformal coupling equals 1/6 only in dimension three",
       conformal_coupling},
  };

  int failures = 0;
  for (const Criterion& c : criteria) {
    try {
      c.run();
      std::printf("[PASS] %s\n", c.name);
    } catch (const std::exception& e) {
      ++failures;
      std::printf("[FAIL] %s: %s\n", c.name, e.what());
    }
    std::fflush(stdout);
  }
  return failures;
}
