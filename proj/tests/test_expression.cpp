#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "qmpkit/catalog.hpp"
#include "qmpkit/expression.hpp"
#include "qmpkit/geometry.hpp"
#include "qmpkit/normal_coords.hpp"

using namespace qmpkit;

namespace {

double ev(const std::string& text, std::initializer_list<double> coords = {}) {
  Vector q(static_cast<int>(coords.size()));
  int i = 0;
  for (double c : coords) q(i++) = c;
  if (q.size() == 0) q = Vector::Zero(1);
  return Expression::parse(text).eval(q);
}

template <class Fn>
ErrorCode thrown_code(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::InvalidArgument;
}

std::filesystem::path write_temp_chart(const std::string& stem, const std::string& body) {
  auto path = std::filesystem::temp_directory_path() / (stem + ".chart");
  std::ofstream out(path);
  out << body;
  return path;
}

Vector vec2(double a, double b) {
  Vector v(2);
  v << a, b;
  return v;
}

}  // namespace

TEST_CASE("arithmetic precedence and associativity") {
  CHECK(ev("2 + 3 * 4") == doctest::Approx(14.0));
  CHECK(ev("(2 + 3) * 4") == doctest::Approx(20.0));
  CHECK(ev("2 ^ 3 ^ 2") == doctest::Approx(512.0));       // right associative
  CHECK(ev("12 / 4 / 3") == doctest::Approx(1.0));        // left associative
  CHECK(ev("7 - 2 - 1") == doctest::Approx(4.0));
  CHECK(ev("2 ^ -1") == doctest::Approx(0.5));
  // unary minus binds tighter than the power: -2^2 = (-2)^2
  CHECK(ev("-2 ^ 2") == doctest::Approx(4.0));
  CHECK(ev("0 - 2 ^ 2") == doctest::Approx(-4.0));
  CHECK(ev("1 - -2") == doctest::Approx(3.0));
}

TEST_CASE("functions and constants") {
  CHECK(ev("sin(pi / 2)") == doctest::Approx(1.0));
  CHECK(ev("cos(0)") == doctest::Approx(1.0));
  CHECK(ev("tan(pi / 4)") == doctest::Approx(1.0));
  CHECK(ev("sqrt(2) ^ 2") == doctest::Approx(2.0));
  CHECK(ev("log(e)") == doctest::Approx(1.0));
  CHECK(ev("exp(1)") == doctest::Approx(std::exp(1.0)));
  CHECK(ev("pow(3, 4)") == doctest::Approx(81.0));
  CHECK(ev("1e-3 + 2.5E2") == doctest::Approx(250.001));
}

TEST_CASE("coordinate variables") {
  CHECK(ev("q1 * q2 + q1", {3.0, 5.0}) == doctest::Approx(18.0));
  Expression e = Expression::parse("q1 + sin(q3)");
  CHECK(e.max_variable() == 3);
  CHECK(Expression::parse("4 / (1 + q1^2 + q2^2)^2").max_variable() == 2);
  CHECK(Expression::parse("2.5").max_variable() == 0);
}

TEST_CASE("parse failures carry the parse error code") {
  CHECK(thrown_code([] { Expression::parse("2 +"); }) == ErrorCode::ParseError);
  CHECK(thrown_code([] { Expression::parse("(1 + 2"); }) == ErrorCode::ParseError);
  CHECK(thrown_code([] { Expression::parse("sinh(1)"); }) == ErrorCode::ParseError);
  CHECK(thrown_code([] { Expression::parse("q0 + 1"); }) == ErrorCode::ParseError);
  CHECK(thrown_code([] { Expression::parse("pow(1)"); }) == ErrorCode::ParseError);
  CHECK(thrown_code([] { Expression::parse("1 2"); }) == ErrorCode::ParseError);
}

TEST_CASE("chart files load with axes and symmetric components") {
  MetricChart torus = load_chart_file(std::string(QMPKIT_TEST_DATA_DIR) + "/skewed_torus.chart");
  CHECK(torus.dim() == 2);
  CHECK(torus.domain().axis(0).periodic);
  CHECK(torus.domain().axis(1).periodic);
  Matrix m = torus.metric(vec2(1.0, 2.0));
  CHECK(m(0, 0) == doctest::Approx(2.0));
  CHECK(m(0, 1) == doctest::Approx(0.5));
  CHECK(m(1, 0) == doctest::Approx(0.5));
  CHECK(m(1, 1) == doctest::Approx(1.0));
}

TEST_CASE("stereographic file chart carries unit-sphere geometry") {
  MetricChart st =
      load_chart_file(std::string(QMPKIT_TEST_DATA_DIR) + "/stereographic_sphere.chart");
  CHECK(st.jet_source() == JetSource::Numeric);
  CHECK(geometry_jet(st, vec2(0.2, -0.4)).scalar_curvature == doctest::Approx(2.0).epsilon(1e-8));
  CHECK(geometry_jet(st, vec2(1.1, 0.6)).scalar_curvature == doctest::Approx(2.0).epsilon(1e-8));

  // The same pair of points in both charts: equator arc of length 0.5.
  // Projection from the north pole maps (theta, phi) to tan(theta/2) e^{i phi}.
  MetricChart sphere = make_chart("sphere2:1.0");
  const double want = geodesic_distance(sphere, vec2(M_PI / 2, 0.0), vec2(M_PI / 2, 0.5));
  const double got = geodesic_distance(st, vec2(1.0, 0.0), vec2(std::cos(0.5), std::sin(0.5)));
  CHECK(want == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(got == doctest::Approx(0.5).epsilon(1e-7));
}

TEST_CASE("chart file validation") {
  auto missing_diag = write_temp_chart("missing_diag", "dim = 2\nomega_11 = 1\n");
  CHECK(thrown_code([&] { load_chart_file(missing_diag.string()); }) == ErrorCode::ParseError);

  auto bad_mode = write_temp_chart("bad_mode", "omega_11 = 1\naxis1 = 0 1 closed\n");
  CHECK(thrown_code([&] { load_chart_file(bad_mode.string()); }) == ErrorCode::ParseError);

  auto bad_key = write_temp_chart("bad_key", "omega_11 = 1\nvolume = 3\n");
  CHECK(thrown_code([&] { load_chart_file(bad_key.string()); }) == ErrorCode::ParseError);

  auto bad_index = write_temp_chart("bad_index", "omega_01 = 1\n");
  CHECK(thrown_code([&] { load_chart_file(bad_index.string()); }) == ErrorCode::ParseError);

  CHECK(thrown_code([] { load_chart_file("/nonexistent/nowhere.chart"); }) == ErrorCode::IoError);
}

TEST_CASE("open_chart dispatches between catalog ids and files") {
  CHECK(open_chart("polar2").name() == "polar2");
  MetricChart st =
      open_chart(std::string(QMPKIT_TEST_DATA_DIR) + "/stereographic_sphere.chart");
  CHECK(st.name() == "stereographic_sphere.chart");
  CHECK(thrown_code([] { open_chart("definitely-not-a-chart"); }) == ErrorCode::InvalidArgument);
}
