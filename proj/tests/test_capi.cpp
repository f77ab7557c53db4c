#include <doctest.h>

#include <cmath>
#include <cstring>
#include <string>

#include <qmpkit.h>

namespace {

struct ChartGuard {
  qk_chart* h = nullptr;
  explicit ChartGuard(const char* id) { REQUIRE(qk_chart_open(id, &h) == QK_OK); }
  ~ChartGuard() { qk_chart_close(h); }
  ChartGuard(const ChartGuard&) = delete;
  ChartGuard& operator=(const ChartGuard&) = delete;
};

}  // namespace

TEST_CASE("version and status names") {
  CHECK(std::string(qk_version()) == "0.1.0");
  CHECK(std::string(qk_status_name(QK_OK)) == "ok");
  CHECK(std::string(qk_status_name(QK_POINT_OUTSIDE_DOMAIN)) == "point outside domain");
  CHECK(std::string(qk_status_name(QK_CONJUGATE_POINT_SUSPECTED)) == "conjugate point suspected");
  CHECK(std::string(qk_status_name(QK_INTERNAL)) == "internal error");
}

TEST_CASE("open rejects unknown ids and reports a message") {
  qk_chart* h = nullptr;
  CHECK(qk_chart_open("definitely-not-a-chart", &h) == QK_INVALID_ARGUMENT);
  CHECK(h == nullptr);
  CHECK(std::strlen(qk_last_error()) > 0);
  CHECK(qk_chart_open("sphere2:abc", &h) == QK_PARSE_ERROR);
  CHECK(qk_chart_open(nullptr, &h) == QK_INVALID_ARGUMENT);
  CHECK(qk_chart_open("polar2", nullptr) == QK_INVALID_ARGUMENT);
}

TEST_CASE("chart accessors") {
  ChartGuard polar("polar2");
  int32_t dim = 0;
  REQUIRE(qk_chart_dim(polar.h, &dim) == QK_OK);
  CHECK(dim == 2);
  CHECK(std::string(qk_chart_name(polar.h)) == "polar2");

  const double q[2] = {1.3, 0.4};
  double omega[4] = {0, 0, 0, 0};
  REQUIRE(qk_chart_metric(polar.h, q, omega) == QK_OK);
  CHECK(omega[0] == doctest::Approx(1.0));
  CHECK(omega[1] == doctest::Approx(0.0));
  CHECK(omega[2] == doctest::Approx(0.0));
  CHECK(omega[3] == doctest::Approx(1.69));

  CHECK(qk_chart_dim(nullptr, &dim) == QK_INVALID_ARGUMENT);
  CHECK(qk_chart_metric(polar.h, nullptr, omega) == QK_INVALID_ARGUMENT);

  const double bad[2] = {-1.0, 0.0};
  CHECK(qk_chart_metric(polar.h, bad, omega) == QK_POINT_OUTSIDE_DOMAIN);
}

TEST_CASE("opening a chart definition file") {
  std::string path = std::string(QMPKIT_TEST_DATA_DIR) + "/stereographic_sphere.chart";
  ChartGuard chart(path.c_str());
  int32_t dim = 0;
  REQUIRE(qk_chart_dim(chart.h, &dim) == QK_OK);
  CHECK(dim == 2);
  CHECK(std::string(qk_chart_name(chart.h)) == "stereographic_sphere.chart");
  const double q[2] = {0.3, -0.4};
  double scalar = 0.0;
  REQUIRE(qk_geometry(chart.h, q, nullptr, nullptr, &scalar) == QK_OK);
  CHECK(scalar == doctest::Approx(2.0).epsilon(1e-7));
}

TEST_CASE("pointwise geometry with optional buffers") {
  ChartGuard sphere("sphere2:1.0");
  const double q[2] = {M_PI / 3, 0.2};
  double gamma[8], ricci[4], scalar = 0.0;
  REQUIRE(qk_geometry(sphere.h, q, gamma, ricci, &scalar) == QK_OK);
  CHECK(scalar == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(ricci[0] == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(ricci[3] == doctest::Approx(0.75).epsilon(1e-10));
  // Gamma^theta_phiphi = -sin cos, Gamma^phi_thetaphi = cot
  CHECK(gamma[3] == doctest::Approx(-std::sin(M_PI / 3) * std::cos(M_PI / 3)).epsilon(1e-10));
  CHECK(gamma[5] == doctest::Approx(1.0 / std::tan(M_PI / 3)).epsilon(1e-10));
  REQUIRE(qk_geometry(sphere.h, q, nullptr, nullptr, nullptr) == QK_OK);
}

TEST_CASE("distance across two descriptions of the sphere") {
  ChartGuard intrinsic("sphere2:1.0");
  std::string path = std::string(QMPKIT_TEST_DATA_DIR) + "/stereographic_sphere.chart";
  ChartGuard projected(path.c_str());
  const double a1[2] = {M_PI / 2, 0.0}, b1[2] = {M_PI / 2, 0.5};
  const double a2[2] = {1.0, 0.0}, b2[2] = {std::cos(0.5), std::sin(0.5)};
  double d1 = 0.0, d2 = 0.0;
  REQUIRE(qk_geodesic_distance(intrinsic.h, a1, b1, &d1) == QK_OK);
  REQUIRE(qk_geodesic_distance(projected.h, a2, b2, &d2) == QK_OK);
  CHECK(d1 == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(d2 == doctest::Approx(0.5).epsilon(1e-7));
}

TEST_CASE("potential of the radial chart and the ordering family") {
  ChartGuard polar("polar2");
  const double q[2] = {2.0, 0.3};
  double v = 0.0, density = 0.0;
  REQUIRE(qk_qmp(polar.h, 1.0, 1.0, q, &v, &density) == QK_OK);
  CHECK(v == doctest::Approx(1.0 / 32.0).epsilon(1e-10));

  ChartGuard circle("circle-deformed:0.2");
  const double x[1] = {0.7};
  double v_dw = 0.0, rho = 0.0, v4 = 0.0;
  REQUIRE(qk_qmp(circle.h, 1.0, 1.0, x, &v_dw, &rho) == QK_OK);
  REQUIRE(qk_qmp_nu(circle.h, 1.0, 1.0, x, 4.0, &v4) == QK_OK);
  CHECK(v_dw == doctest::Approx(0.030822411743928434).epsilon(1e-12));
  CHECK(rho == doctest::Approx(0.031996675397372289).epsilon(1e-12));
  CHECK(v4 == doctest::Approx(v_dw + 2.0 * rho).epsilon(1e-12));
}

TEST_CASE("normal-coordinate asymptote through the C surface") {
  ChartGuard polar("polar2");
  const double q0[2] = {1.1, 0.7};
  double radii[3], values[3], extrapolated = 1.0, prediction = 1.0, scalar = 1.0;
  int32_t sign = 7;
  REQUIRE(qk_normal_asymptote(polar.h, 1.0, 1.0, q0, 0.1, 3, radii, values, &extrapolated,
                              &prediction, &scalar, &sign) == QK_OK);
  CHECK(radii[1] == doctest::Approx(0.05));
  CHECK(std::abs(extrapolated) < 1e-6);
  CHECK(std::abs(prediction) < 1e-10);
  CHECK(std::abs(scalar) < 1e-8);
  CHECK(sign == 0);
}

TEST_CASE("deformed flat chart potential against its first order") {
  double exact = 0.0, first = 0.0;
  const double q[1] = {0.4};
  REQUIRE(qk_deformation_qmp("sin-x", 1, 0.01, 1.0, 1.0, q, &exact, &first) == QK_OK);
  CHECK(first == doctest::Approx(-0.0025 * std::cos(0.4)).epsilon(1e-9));
  CHECK(exact == doctest::Approx(-0.0022871358458102291).epsilon(1e-6));
  CHECK(qk_deformation_qmp("whirl", 1, 0.01, 1.0, 1.0, q, &exact, &first) == QK_INVALID_ARGUMENT);
}

TEST_CASE("spectrum of the circle through the C surface") {
  ChartGuard circle("circle-deformed:0.0");
  const int32_t nodes[1] = {128};
  double ev[5];
  REQUIRE(qk_spectrum(circle.h, 1.0, 0.5, QK_VARIANT_SCHROEDINGER, 2.0, nodes, 2, 5, ev) == QK_OK);
  const double want[5] = {0.0, 1.0, 1.0, 4.0, 4.0};
  for (int i = 0; i < 5; ++i) CHECK(std::abs(ev[i] - want[i]) < 1e-2);
  CHECK(qk_spectrum(circle.h, 1.0, 0.5, 9, 2.0, nodes, 2, 5, ev) == QK_INVALID_ARGUMENT);
}

TEST_CASE("ordering anomaly through the C surface") {
  ChartGuard arc("circle-deformed:0.0");
  ChartGuard deformed("circle-deformed:0.2");
  const int32_t nodes[1] = {128};
  double la[4], lb[4], gap[4], est[4];
  REQUIRE(qk_anomaly_gap(arc.h, deformed.h, 1.0, 1.0, QK_VARIANT_DEWITT, 2.0, nodes, 2, 4, la, lb,
                         gap, est) == QK_OK);
  bool persistent = false;
  for (int i = 0; i < 4; ++i) {
    CHECK(gap[i] == doctest::Approx(std::abs(la[i] - lb[i])).epsilon(1e-12));
    if (gap[i] > 5.0 * est[i]) persistent = true;
  }
  CHECK(persistent);
}

TEST_CASE("quasiclassical block through the C surface") {
  ChartGuard plane("cartesian:2");
  const double a[2] = {0.0, 0.0}, b[2] = {3.0, 4.0};
  double s = 0.0, d = 0.0, v = 1.0;
  REQUIRE(qk_action(plane.h, 1.0, 1.0, b, a, 1.0, &s) == QK_OK);
  CHECK(s == doctest::Approx(12.5).epsilon(1e-10));
  REQUIRE(qk_van_vleck(plane.h, 1.0, 1.0, b, a, 0.5, &d) == QK_OK);
  CHECK(d == doctest::Approx(4.0).epsilon(1e-8));
  REQUIRE(qk_v_tilde(plane.h, 1.0, 1.0, b, a, 1.0, &v) == QK_OK);
  CHECK(std::abs(v) < 1e-8);

  ChartGuard sphere("sphere2:1.0");
  const double q0[2] = {M_PI / 2, 0.3}, dir[2] = {0.6, 1.0};
  double seps[3], vals[3], extrapolated = 0.0, prediction = 0.0, scalar = 0.0;
  REQUIRE(qk_coincidence_limit(sphere.h, 1.0, 1.0, q0, dir, 0.4, 3, 1.0, seps, vals, &extrapolated,
                               &prediction, &scalar) == QK_OK);
  CHECK(prediction == doctest::Approx(1.0 / 6.0).epsilon(1e-6));
  CHECK(extrapolated == doctest::Approx(prediction).epsilon(0.05));

  const double at[2] = {0.4, 0.2};
  double actions[2], vvs[2], vts[2];
  REQUIRE(qk_propagator_series(sphere.h, 1.0, 1.0, q0, dir, at, 2, 1.0, actions, vvs, vts) ==
          QK_OK);
  CHECK(actions[0] == doctest::Approx(0.08).epsilon(1e-8));
  CHECK(vts[0] == doctest::Approx(vals[0]).epsilon(1e-10));
  REQUIRE(qk_propagator_series(sphere.h, 1.0, 1.0, q0, dir, at, 2, 1.0, nullptr, nullptr, vts) ==
          QK_OK);
}

TEST_CASE("conformal coefficient table") {
  int64_t qn = 0, qd = 0, cn = 0, cd = 0;
  int32_t equal = -1;
  REQUIRE(qk_conformal_coefficient(3, &qn, &qd, &cn, &cd, &equal) == QK_OK);
  CHECK(qn == 1);
  CHECK(qd == 6);
  CHECK(cn == 1);
  CHECK(cd == 6);
  CHECK(equal == 1);
  REQUIRE(qk_conformal_coefficient(2, &qn, &qd, &cn, &cd, &equal) == QK_OK);
  CHECK(qn == 1);
  CHECK(qd == 8);
  CHECK(equal == 0);
  CHECK(qk_conformal_coefficient(0, &qn, &qd, &cn, &cd, &equal) == QK_INVALID_ARGUMENT);
}

TEST_CASE("domain errors surface as status codes with messages") {
  ChartGuard polar("polar2");
  const double bad[2] = {-2.0, 0.0}, good[2] = {1.0, 0.0};
  double v = 0.0, rho = 0.0;
  CHECK(qk_qmp(polar.h, 1.0, 1.0, bad, &v, &rho) == QK_POINT_OUTSIDE_DOMAIN);
  CHECK(std::strlen(qk_last_error()) > 0);
  double out = 0.0;
  CHECK(qk_geodesic_distance(polar.h, bad, good, &out) == QK_POINT_OUTSIDE_DOMAIN);
  CHECK(qk_qmp(nullptr, 1.0, 1.0, good, &v, &rho) == QK_INVALID_ARGUMENT);
  CHECK(qk_qmp(polar.h, 0.0, 1.0, good, &v, &rho) == QK_INVALID_ARGUMENT);
}
