#include "qmpkit/catalog.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

#include "qmpkit/expression.hpp"
#include "qmpkit/flat_deformation.hpp"

namespace qmpkit {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

double parse_double(const std::string& s, const std::string& what) {
  try {
    size_t used = 0;
    double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    fail(ErrorCode::ParseError, "invalid " + what + " '" + s + "'");
  }
}

int parse_int(const std::string& s, const std::string& what) {
  try {
    size_t used = 0;
    int v = std::stoi(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    fail(ErrorCode::ParseError, "invalid " + what + " '" + s + "'");
  }
}

MetricChart make_cartesian(int n) {
  if (n < 1) fail(ErrorCode::InvalidArgument, "cartesian dimension must be >= 1");
  Domain domain = Domain::unbounded(n);
  auto zero = [n](const Vector&, int, int) { return Matrix::Zero(n, n).eval(); };
  return MetricChart::analytic(
      "cartesian:" + std::to_string(n), domain,
      [n](const Vector&) { return Matrix::Identity(n, n).eval(); },
      [n](const Vector&, int) { return Matrix::Zero(n, n).eval(); }, zero);
}

MetricChart make_polar2() {
  Domain domain(std::vector<Axis>{Axis{0.0, std::numeric_limits<double>::infinity(), false},
                                  Axis{0.0, kTwoPi, true}});
  return MetricChart::analytic(
      "polar2", domain,
      [](const Vector& q) {
        Matrix m = Matrix::Identity(2, 2);
        m(1, 1) = q(0) * q(0);
        return m;
      },
      [](const Vector& q, int c) {
        Matrix m = Matrix::Zero(2, 2);
        if (c == 0) m(1, 1) = 2.0 * q(0);
        return m;
      },
      [](const Vector&, int c, int d) {
        Matrix m = Matrix::Zero(2, 2);
        if (c == 0 && d == 0) m(1, 1) = 2.0;
        return m;
      });
}

MetricChart make_sphere2(double a) {
  if (!(a > 0.0)) fail(ErrorCode::InvalidArgument, "sphere radius must be positive");
  Domain domain(std::vector<Axis>{Axis{0.0, M_PI, false}, Axis{0.0, kTwoPi, true}});
  const double a2 = a * a;
  return MetricChart::analytic(
      "sphere2:" + std::to_string(a), domain,
      [a2](const Vector& q) {
        Matrix m = Matrix::Zero(2, 2);
        const double s = std::sin(q(0));
        m(0, 0) = a2;
        m(1, 1) = a2 * s * s;
        return m;
      },
      [a2](const Vector& q, int c) {
        Matrix m = Matrix::Zero(2, 2);
        if (c == 0) m(1, 1) = a2 * std::sin(2.0 * q(0));
        return m;
      },
      [a2](const Vector& q, int c, int d) {
        Matrix m = Matrix::Zero(2, 2);
        if (c == 0 && d == 0) m(1, 1) = 2.0 * a2 * std::cos(2.0 * q(0));
        return m;
      });
}

MetricChart make_sphere3(double a) {
  if (!(a > 0.0)) fail(ErrorCode::InvalidArgument, "sphere radius must be positive");
  Domain domain(std::vector<Axis>{Axis{0.0, M_PI, false}, Axis{0.0, M_PI, false},
                                  Axis{0.0, kTwoPi, true}});
  const double a2 = a * a;
  // omega = a^2 diag(1, sin^2 chi, sin^2 chi sin^2 theta)
  return MetricChart::analytic(
      "sphere3:" + std::to_string(a), domain,
      [a2](const Vector& q) {
        Matrix m = Matrix::Zero(3, 3);
        const double sc = std::sin(q(0));
        const double st = std::sin(q(1));
        m(0, 0) = a2;
        m(1, 1) = a2 * sc * sc;
        m(2, 2) = a2 * sc * sc * st * st;
        return m;
      },
      [a2](const Vector& q, int c) {
        Matrix m = Matrix::Zero(3, 3);
        const double sc = std::sin(q(0));
        const double st = std::sin(q(1));
        if (c == 0) {
          m(1, 1) = a2 * std::sin(2.0 * q(0));
          m(2, 2) = a2 * std::sin(2.0 * q(0)) * st * st;
        } else if (c == 1) {
          m(2, 2) = a2 * sc * sc * std::sin(2.0 * q(1));
        }
        return m;
      },
      [a2](const Vector& q, int c, int d) {
        Matrix m = Matrix::Zero(3, 3);
        const double sc = std::sin(q(0));
        const double st = std::sin(q(1));
        if (c == 0 && d == 0) {
          m(1, 1) = 2.0 * a2 * std::cos(2.0 * q(0));
          m(2, 2) = 2.0 * a2 * std::cos(2.0 * q(0)) * st * st;
        } else if (c == 1 && d == 1) {
          m(2, 2) = 2.0 * a2 * sc * sc * std::cos(2.0 * q(1));
        } else if ((c == 0 && d == 1) || (c == 1 && d == 0)) {
          m(2, 2) = a2 * std::sin(2.0 * q(0)) * std::sin(2.0 * q(1));
        }
        return m;
      });
}

MetricChart make_circle_deformed(double eps) {
  if (!(std::abs(eps) < 1.0))
    fail(ErrorCode::InvalidArgument, "circle deformation needs |eps| < 1 to stay invertible");
  Domain domain(std::vector<Axis>{Axis{0.0, kTwoPi, true}});
  // omega = (1 + eps cos q)^2: a stretched parametrization of the unit circle
  // (total arc length stays 2 pi).
  return MetricChart::analytic(
      "circle-deformed:" + std::to_string(eps), domain,
      [eps](const Vector& q) {
        Matrix m(1, 1);
        const double w = 1.0 + eps * std::cos(q(0));
        m(0, 0) = w * w;
        return m;
      },
      [eps](const Vector& q, int) {
        Matrix m(1, 1);
        m(0, 0) = -2.0 * eps * std::sin(q(0)) * (1.0 + eps * std::cos(q(0)));
        return m;
      },
      [eps](const Vector& q, int, int) {
        Matrix m(1, 1);
        m(0, 0) = -2.0 * eps * std::cos(q(0)) - 2.0 * eps * eps * std::cos(2.0 * q(0));
        return m;
      });
}

}  // namespace

MetricChart make_chart(const std::string& id) {
  const std::vector<std::string> parts = split(id, ':');
  const std::string& kind = parts[0];

  if (kind == "cartesian") {
    if (parts.size() != 2) fail(ErrorCode::ParseError, "expected cartesian:n");
    return make_cartesian(parse_int(parts[1], "dimension"));
  }
  if (kind == "polar2") {
    if (parts.size() != 1) fail(ErrorCode::ParseError, "polar2 takes no parameters");
    return make_polar2();
  }
  if (kind == "sphere2") {
    if (parts.size() != 2) fail(ErrorCode::ParseError, "expected sphere2:a");
    return make_sphere2(parse_double(parts[1], "radius"));
  }
  if (kind == "sphere3") {
    if (parts.size() != 2) fail(ErrorCode::ParseError, "expected sphere3:a");
    return make_sphere3(parse_double(parts[1], "radius"));
  }
  if (kind == "circle-deformed") {
    if (parts.size() != 2) fail(ErrorCode::ParseError, "expected circle-deformed:eps");
    return make_circle_deformed(parse_double(parts[1], "epsilon"));
  }
  if (kind == "plane-deformed") {
    if (parts.size() < 3) fail(ErrorCode::ParseError, "expected plane-deformed:eps:f-id");
    const double eps = parse_double(parts[1], "epsilon");
    std::string f_id = parts[2];
    for (size_t i = 3; i < parts.size(); ++i) f_id += ":" + parts[i];
    return deformed_chart(DeformationField::from_id(f_id, 2, eps));
  }
  fail(ErrorCode::InvalidArgument, "unknown chart id '" + id + "'");
}

MetricChart load_chart_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::IoError, "cannot open chart file '" + path + "'");

  int declared_dim = 0;
  std::map<int, Axis> axes;
  std::map<std::pair<int, int>, Expression> components;
  int max_index = 0;

  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto eq = line.find('=');
    auto trim = [](std::string s) {
      const char* ws = " \t\r\n";
      s.erase(0, s.find_first_not_of(ws));
      if (auto end = s.find_last_not_of(ws); end != std::string::npos) s.erase(end + 1);
      else s.clear();
      return s;
    };
    std::string key = trim(eq == std::string::npos ? line : line.substr(0, eq));
    std::string value = eq == std::string::npos ? "" : trim(line.substr(eq + 1));
    if (key.empty()) continue;
    if (eq == std::string::npos)
      fail(ErrorCode::ParseError, path + ":" + std::to_string(lineno) + ": expected key = value");

    if (key == "dim") {
      declared_dim = parse_int(value, "dim");
    } else if (key.rfind("axis", 0) == 0) {
      int idx = parse_int(key.substr(4), "axis index");
      std::istringstream vs(value);
      std::string lo, hi, mode;
      vs >> lo >> hi >> mode;
      Axis ax;
      ax.lo = lo == "-inf" ? -std::numeric_limits<double>::infinity() : parse_double(lo, "axis bound");
      ax.hi = hi == "inf" ? std::numeric_limits<double>::infinity() : parse_double(hi, "axis bound");
      if (mode == "periodic") ax.periodic = true;
      else if (mode != "open" && !mode.empty())
        fail(ErrorCode::ParseError,
             path + ":" + std::to_string(lineno) + ": axis mode must be open or periodic");
      axes[idx] = ax;
      max_index = std::max(max_index, idx);
    } else if (key.rfind("omega_", 0) == 0) {
      const std::string suffix = key.substr(6);
      if (suffix.size() != 2 || !std::isdigit(static_cast<unsigned char>(suffix[0])) ||
          !std::isdigit(static_cast<unsigned char>(suffix[1])))
        fail(ErrorCode::ParseError,
             path + ":" + std::to_string(lineno) + ": expected omega_ab with digit indices");
      int a = suffix[0] - '0';
      int b = suffix[1] - '0';
      if (a < 1 || b < 1)
        fail(ErrorCode::ParseError, path + ":" + std::to_string(lineno) + ": indices start at 1");
      Expression expr = Expression::parse(value);
      max_index = std::max({max_index, a, b, expr.max_variable()});
      components.insert({{a, b}, std::move(expr)});
    } else {
      fail(ErrorCode::ParseError,
           path + ":" + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
  }

  const int n = std::max(declared_dim, max_index);
  if (n < 1) fail(ErrorCode::ParseError, path + ": no metric components found");
  for (int a = 1; a <= n; ++a)
    if (!components.count({a, a}))
      fail(ErrorCode::ParseError,
           path + ": diagonal component omega_" + std::to_string(a) + std::to_string(a) +
               " missing");

  std::vector<Axis> axis_list(n);
  for (auto& [idx, ax] : axes) {
    if (idx < 1 || idx > n)
      fail(ErrorCode::ParseError, path + ": axis" + std::to_string(idx) + " out of range");
    axis_list[idx - 1] = ax;
  }

  auto table = std::make_shared<std::map<std::pair<int, int>, Expression>>(std::move(components));
  auto eval = [table, n](const Vector& q) {
    Matrix m = Matrix::Zero(n, n);
    for (int a = 1; a <= n; ++a)
      for (int b = a; b <= n; ++b) {
        double v = 0.0;
        if (auto it = table->find({a, b}); it != table->end()) v = it->second.eval(q);
        else if (auto jt = table->find({b, a}); jt != table->end()) v = jt->second.eval(q);
        m(a - 1, b - 1) = v;
        m(b - 1, a - 1) = v;
      }
    return m;
  };

  std::string name = std::filesystem::path(path).filename().string();
  return MetricChart::numeric(name, Domain(std::move(axis_list)), std::move(eval));
}

MetricChart open_chart(const std::string& spec) {
  static const std::vector<std::string> prefixes = {"cartesian",       "polar2", "sphere2",
                                                    "sphere3",         "circle-deformed",
                                                    "plane-deformed"};
  const std::string head = split(spec, ':')[0];
  for (const auto& p : prefixes)
    if (head == p) return make_chart(spec);
  if (std::filesystem::exists(spec)) return load_chart_file(spec);
  fail(ErrorCode::InvalidArgument, "'" + spec + "' is neither a catalog chart id nor a file");
}

}  // namespace qmpkit
