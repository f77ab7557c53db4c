// Command-line front end. Talks to the library exclusively through the C API,
// so it doubles as a smoke test of the shared-library surface.
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "qmpkit.h"

namespace {

using nlohmann::json;

struct CliError : std::runtime_error {
  int exit_code;
  CliError(int code, const std::string& what) : std::runtime_error(what), exit_code(code) {}
};

void check(qk_status status) {
  if (status != QK_OK)
    throw CliError(static_cast<int>(status),
                   std::string(qk_status_name(status)) + ": " + qk_last_error());
}

using ChartPtr = std::unique_ptr<qk_chart, decltype(&qk_chart_close)>;

ChartPtr open_chart(const std::string& spec) {
  qk_chart* raw = nullptr;
  check(qk_chart_open(spec.c_str(), &raw));
  return ChartPtr(raw, &qk_chart_close);
}

int chart_dim(const qk_chart* chart) {
  int32_t n = 0;
  check(qk_chart_dim(chart, &n));
  return n;
}

std::vector<double> parse_doubles(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t pos = 0;
      out.push_back(std::stod(item, &pos));
      if (pos != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw CliError(QK_PARSE_ERROR, "not a number: '" + item + "'");
    }
  }
  if (out.empty()) throw CliError(QK_PARSE_ERROR, "empty number list");
  return out;
}

std::vector<int32_t> parse_ints(const std::string& text) {
  std::vector<int32_t> out;
  for (double v : parse_doubles(text)) out.push_back(static_cast<int32_t>(v));
  return out;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  void add(std::initializer_list<double> row) { rows.emplace_back(row); }
};

struct OutputSpec {
  std::string path;            // empty: stdout
  std::string format = "csv";  // csv | json
};

// Data rows go to the output (17 significant digits, deterministic bytes);
// scalar summaries go to the result object, which lands in the manifest next
// to a file output and inside the payload for json format.
void emit(const std::string& command, const Table& table, const json& result, const json& options,
          const OutputSpec& out, double wall_ms) {
  std::string payload;
  if (out.format == "csv") {
    std::ostringstream os;
    for (std::size_t i = 0; i < table.columns.size(); ++i)
      os << (i ? "," : "") << table.columns[i];
    os << "\n";
    for (const auto& row : table.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << fmt(row[i]);
      os << "\n";
    }
    payload = os.str();
  } else if (out.format == "json") {
    json j;
    j["columns"] = table.columns;
    j["rows"] = json::array();
    for (const auto& row : table.rows) j["rows"].push_back(row);
    j["result"] = result;
    payload = j.dump(2) + "\n";
  } else {
    throw CliError(QK_INVALID_ARGUMENT, "unknown format '" + out.format + "'");
  }

  if (out.path.empty()) {
    std::cout << payload;
    return;
  }
  std::ofstream file(out.path, std::ios::binary);
  if (!file) throw CliError(QK_IO_ERROR, "cannot write '" + out.path + "'");
  file << payload;
  file.close();

  json manifest;
  manifest["version"] = qk_version();
  manifest["command"] = command;
  manifest["options"] = options;
  manifest["result"] = result;
  manifest["output"] = out.path;
  manifest["wall_ms"] = wall_ms;
  const std::string mpath = out.path + ".manifest.json";
  std::ofstream mfile(mpath, std::ios::binary);
  if (!mfile) throw CliError(QK_IO_ERROR, "cannot write '" + mpath + "'");
  mfile << manifest.dump(2) << "\n";
}

int32_t parse_variant(const std::string& name) {
  if (name == "schroedinger" || name == "sch") return QK_VARIANT_SCHROEDINGER;
  if (name == "dewitt" || name == "dw") return QK_VARIANT_DEWITT;
  if (name == "nu" || name == "nu-family") return QK_VARIANT_NU_FAMILY;
  throw CliError(QK_INVALID_ARGUMENT, "unknown variant '" + name + "'");
}

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
        .count();
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quantization toolkit: curvature, quantum-mechanical potentials, spectra"};
  app.set_version_flag("--version", qk_version());
  app.set_config("--config", "", "INI config file; command-line flags take precedence");
  app.require_subcommand(1);

  double hbar = 1.0, mass = 1.0;
  app.add_option("--hbar", hbar, "Planck constant")->capture_default_str();
  app.add_option("--mass", mass, "particle mass")->capture_default_str();

  OutputSpec out;
  app.add_option("-o,--output", out.path, "output file (default: stdout)");
  app.add_option("--format", out.format, "csv or json")->capture_default_str();

  // ---- curvature ----------------------------------------------------------
  auto* cmd_curv = app.add_subcommand("curvature", "Christoffel symbols, Ricci, scalar curvature");
  cmd_curv->fallthrough();
  std::string curv_chart, curv_point;
  cmd_curv->add_option("--chart", curv_chart, "chart id or file")->required();
  cmd_curv->add_option("--point", curv_point, "comma-separated coordinates")->required();

  // ---- qmp ----------------------------------------------------------------
  auto* cmd_qmp = app.add_subcommand("qmp", "quantum-mechanical potential at points");
  cmd_qmp->fallthrough();
  std::string qmp_chart;
  std::vector<std::string> qmp_points;
  double qmp_nu_value = 2.0;
  bool qmp_has_nu = false;
  cmd_qmp->add_option("--chart", qmp_chart, "chart id or file")->required();
  cmd_qmp->add_option("--point", qmp_points, "coordinates; repeatable")->required();
  cmd_qmp->add_option("--nu", qmp_nu_value, "also evaluate the nu-family member")
      ->each([&](const std::string&) { qmp_has_nu = true; });

  // ---- normal -------------------------------------------------------------
  auto* cmd_normal = app.add_subcommand("normal", "DeWitt potential asymptote in normal coordinates");
  cmd_normal->fallthrough();
  std::string normal_chart, normal_point;
  double normal_r0 = 0.1;
  int normal_count = 6;
  cmd_normal->add_option("--chart", normal_chart, "chart id or file")->required();
  cmd_normal->add_option("--point", normal_point, "expansion point")->required();
  cmd_normal->add_option("--r0", normal_r0, "largest radius")->capture_default_str();
  cmd_normal->add_option("--count", normal_count, "number of halved radii")->capture_default_str();

  // ---- deform -------------------------------------------------------------
  auto* cmd_deform = app.add_subcommand("deform", "deformed flat chart: exact vs first-order potential");
  cmd_deform->fallthrough();
  std::string deform_field = "sin-x", deform_point;
  int deform_dim = 2;
  std::vector<double> deform_eps;
  cmd_deform->add_option("--field", deform_field, "deformation id")->capture_default_str();
  cmd_deform->add_option("--dim", deform_dim, "dimension")->capture_default_str();
  cmd_deform->add_option("--eps", deform_eps, "deformation strengths; repeatable")->required();
  cmd_deform->add_option("--point", deform_point, "evaluation point")->required();

  // ---- spectrum -----------------------------------------------------------
  auto* cmd_spec = app.add_subcommand("spectrum", "lowest levels of a discretized Hamiltonian");
  cmd_spec->fallthrough();
  std::string spec_chart, spec_variant = "dewitt", spec_nodes;
  double spec_nu = 2.0;
  int spec_guard = 2, spec_levels = 5;
  cmd_spec->add_option("--chart", spec_chart, "chart id or file")->required();
  cmd_spec->add_option("--variant", spec_variant, "schroedinger | dewitt | nu")->capture_default_str();
  cmd_spec->add_option("--nu", spec_nu, "ordering parameter for variant nu")->capture_default_str();
  cmd_spec->add_option("--nodes", spec_nodes, "grid nodes per axis, e.g. 64,64")->required();
  cmd_spec->add_option("--guard-cells", spec_guard, "excised cells at open ends")->capture_default_str();
  cmd_spec->add_option("--levels", spec_levels, "number of eigenvalues")->capture_default_str();

  // ---- anomaly ------------------------------------------------------------
  auto* cmd_anom = app.add_subcommand("anomaly", "spectral gap between two charts of one manifold");
  cmd_anom->fallthrough();
  std::string anom_chart_a, anom_chart_b, anom_variant = "dewitt", anom_nodes;
  double anom_nu = 2.0;
  int anom_guard = 2, anom_levels = 5;
  cmd_anom->add_option("--chart-a", anom_chart_a, "first chart")->required();
  cmd_anom->add_option("--chart-b", anom_chart_b, "second chart")->required();
  cmd_anom->add_option("--variant", anom_variant, "schroedinger | dewitt | nu")->capture_default_str();
  cmd_anom->add_option("--nu", anom_nu, "ordering parameter for variant nu")->capture_default_str();
  cmd_anom->add_option("--nodes", anom_nodes, "grid nodes per axis")->required();
  cmd_anom->add_option("--guard-cells", anom_guard, "excised cells at open ends")->capture_default_str();
  cmd_anom->add_option("--levels", anom_levels, "number of eigenvalues")->capture_default_str();

  // ---- propagator ---------------------------------------------------------
  auto* cmd_prop = app.add_subcommand("propagator", "quasiclassical two-point data along a geodesic ray");
  cmd_prop->fallthrough();
  std::string prop_chart, prop_q0, prop_dir, prop_seps;
  double prop_dt = 1.0, prop_s0 = 0.4;
  int prop_count = 4;
  bool prop_coincidence = false;
  cmd_prop->add_option("--chart", prop_chart, "chart id or file")->required();
  cmd_prop->add_option("--q0", prop_q0, "base point")->required();
  cmd_prop->add_option("--direction", prop_dir, "ray direction (chart components)")->required();
  cmd_prop->add_option("--dt", prop_dt, "time slice")->capture_default_str();
  cmd_prop->add_option("--separations", prop_seps, "geodesic separations, e.g. 0.2,0.5,1.0");
  cmd_prop->add_flag("--coincidence", prop_coincidence,
                     "halve separations from --s0 and extrapolate the two-point potential");
  cmd_prop->add_option("--s0", prop_s0, "largest separation for --coincidence")->capture_default_str();
  cmd_prop->add_option("--count", prop_count, "separation count for --coincidence")->capture_default_str();

  // ---- conformal ----------------------------------------------------------
  auto* cmd_conf = app.add_subcommand("conformal", "curvature coupling (n-1)/4n against the conformal 1/6");
  cmd_conf->fallthrough();
  int conf_max_dim = 8;
  cmd_conf->add_option("--max-dim", conf_max_dim, "check dimensions 1..max")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    Timer timer;
    Table table;
    json result = json::object();
    json options = json::object();
    options["hbar"] = hbar;
    options["mass"] = mass;
    std::string command;

    if (*cmd_curv) {
      command = "curvature";
      options["chart"] = curv_chart;
      options["point"] = curv_point;
      ChartPtr chart = open_chart(curv_chart);
      const int n = chart_dim(chart.get());
      const std::vector<double> q = parse_doubles(curv_point);
      if (static_cast<int>(q.size()) != n) throw CliError(QK_INVALID_ARGUMENT, "point has wrong dimension");
      std::vector<double> gamma(n * n * n), ricci(n * n);
      double scalar = 0.0;
      check(qk_geometry(chart.get(), q.data(), gamma.data(), ricci.data(), &scalar));
      table.columns = {"kind", "a", "b", "c", "value"};
      // kind: 0 scalar, 1 ricci, 2 christoffel; unused indices are -1.
      table.add({0, -1, -1, -1, scalar});
      for (int b = 0; b < n; ++b)
        for (int d = 0; d < n; ++d)
          table.add({1, static_cast<double>(b), static_cast<double>(d), -1, ricci[b * n + d]});
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
          for (int c = 0; c < n; ++c)
            table.add({2, static_cast<double>(a), static_cast<double>(b), static_cast<double>(c),
                       gamma[(a * n + b) * n + c]});
      result["scalar_curvature"] = scalar;
    } else if (*cmd_qmp) {
      command = "qmp";
      options["chart"] = qmp_chart;
      options["nu"] = qmp_has_nu ? json(qmp_nu_value) : json();
      ChartPtr chart = open_chart(qmp_chart);
      const int n = chart_dim(chart.get());
      table.columns.clear();
      for (int i = 1; i <= n; ++i) table.columns.push_back("q" + std::to_string(i));
      table.columns.push_back("v_dw");
      table.columns.push_back("nu_density");
      if (qmp_has_nu) table.columns.push_back("v_nu");
      for (const std::string& text : qmp_points) {
        const std::vector<double> q = parse_doubles(text);
        if (static_cast<int>(q.size()) != n)
          throw CliError(QK_INVALID_ARGUMENT, "point has wrong dimension");
        double v_dw = 0.0, density = 0.0;
        check(qk_qmp(chart.get(), hbar, mass, q.data(), &v_dw, &density));
        std::vector<double> row = q;
        row.push_back(v_dw);
        row.push_back(density);
        if (qmp_has_nu) {
          double v_nu = 0.0;
          check(qk_qmp_nu(chart.get(), hbar, mass, q.data(), qmp_nu_value, &v_nu));
          row.push_back(v_nu);
        }
        table.rows.push_back(row);
      }
    } else if (*cmd_normal) {
      command = "normal";
      options["chart"] = normal_chart;
      options["point"] = normal_point;
      options["r0"] = normal_r0;
      options["count"] = normal_count;
      ChartPtr chart = open_chart(normal_chart);
      const int n = chart_dim(chart.get());
      const std::vector<double> q0 = parse_doubles(normal_point);
      if (static_cast<int>(q0.size()) != n) throw CliError(QK_INVALID_ARGUMENT, "point has wrong dimension");
      std::vector<double> radii(normal_count), values(normal_count);
      double extrapolated = 0.0, prediction = 0.0, scalar = 0.0;
      int32_t sign = 0;
      check(qk_normal_asymptote(chart.get(), hbar, mass, q0.data(), normal_r0, normal_count,
                                radii.data(), values.data(), &extrapolated, &prediction, &scalar,
                                &sign));
      table.columns = {"radius", "v_dw"};
      for (int k = 0; k < normal_count; ++k) table.add({radii[k], values[k]});
      result["extrapolated"] = extrapolated;
      result["prediction_magnitude"] = prediction;
      result["scalar_curvature"] = scalar;
      result["sign"] = sign;
    } else if (*cmd_deform) {
      command = "deform";
      options["field"] = deform_field;
      options["dim"] = deform_dim;
      options["point"] = deform_point;
      const std::vector<double> q = parse_doubles(deform_point);
      if (static_cast<int>(q.size()) != deform_dim)
        throw CliError(QK_INVALID_ARGUMENT, "point has wrong dimension");
      table.columns = {"eps", "exact", "first_order"};
      for (double eps : deform_eps) {
        double exact = 0.0, first = 0.0;
        check(qk_deformation_qmp(deform_field.c_str(), deform_dim, eps, hbar, mass, q.data(),
                                 &exact, &first));
        table.add({eps, exact, first});
      }
    } else if (*cmd_spec) {
      command = "spectrum";
      options["chart"] = spec_chart;
      options["variant"] = spec_variant;
      options["nodes"] = spec_nodes;
      options["guard_cells"] = spec_guard;
      ChartPtr chart = open_chart(spec_chart);
      const int n = chart_dim(chart.get());
      const std::vector<int32_t> nodes = parse_ints(spec_nodes);
      if (static_cast<int>(nodes.size()) != n)
        throw CliError(QK_INVALID_ARGUMENT, "need one node count per axis");
      std::vector<double> levels(spec_levels);
      check(qk_spectrum(chart.get(), hbar, mass, parse_variant(spec_variant), spec_nu,
                        nodes.data(), spec_guard, spec_levels, levels.data()));
      table.columns = {"level", "eigenvalue"};
      for (int i = 0; i < spec_levels; ++i) table.add({static_cast<double>(i), levels[i]});
    } else if (*cmd_anom) {
      command = "anomaly";
      options["chart_a"] = anom_chart_a;
      options["chart_b"] = anom_chart_b;
      options["variant"] = anom_variant;
      options["nodes"] = anom_nodes;
      ChartPtr chart_a = open_chart(anom_chart_a);
      ChartPtr chart_b = open_chart(anom_chart_b);
      const int n = chart_dim(chart_a.get());
      const std::vector<int32_t> nodes = parse_ints(anom_nodes);
      if (static_cast<int>(nodes.size()) != n)
        throw CliError(QK_INVALID_ARGUMENT, "need one node count per axis");
      std::vector<double> la(anom_levels), lb(anom_levels), gap(anom_levels), est(anom_levels);
      check(qk_anomaly_gap(chart_a.get(), chart_b.get(), hbar, mass, parse_variant(anom_variant),
                           anom_nu, nodes.data(), anom_guard, anom_levels, la.data(), lb.data(),
                           gap.data(), est.data()));
      table.columns = {"level", "chart_a", "chart_b", "gap", "error_estimate"};
      double max_ratio = 0.0;
      for (int i = 0; i < anom_levels; ++i) {
        table.add({static_cast<double>(i), la[i], lb[i], gap[i], est[i]});
        if (est[i] > 0.0) max_ratio = std::max(max_ratio, gap[i] / est[i]);
      }
      result["max_gap_to_estimate_ratio"] = max_ratio;
    } else if (*cmd_prop) {
      command = "propagator";
      options["chart"] = prop_chart;
      options["q0"] = prop_q0;
      options["direction"] = prop_dir;
      options["dt"] = prop_dt;
      ChartPtr chart = open_chart(prop_chart);
      const int n = chart_dim(chart.get());
      const std::vector<double> q0 = parse_doubles(prop_q0);
      const std::vector<double> dir = parse_doubles(prop_dir);
      if (static_cast<int>(q0.size()) != n || static_cast<int>(dir.size()) != n)
        throw CliError(QK_INVALID_ARGUMENT, "point or direction has wrong dimension");
      if (prop_coincidence) {
        options["s0"] = prop_s0;
        options["count"] = prop_count;
        std::vector<double> seps(prop_count), values(prop_count);
        double extrapolated = 0.0, prediction = 0.0, scalar = 0.0;
        check(qk_coincidence_limit(chart.get(), hbar, mass, q0.data(), dir.data(), prop_s0,
                                   prop_count, prop_dt, seps.data(), values.data(), &extrapolated,
                                   &prediction, &scalar));
        table.columns = {"s", "v_tilde"};
        for (int i = 0; i < prop_count; ++i) table.add({seps[i], values[i]});
        result["extrapolated"] = extrapolated;
        result["prediction"] = prediction;
        result["scalar_curvature"] = scalar;
      } else {
        if (prop_seps.empty())
          throw CliError(QK_INVALID_ARGUMENT, "--separations is required without --coincidence");
        options["separations"] = prop_seps;
        const std::vector<double> seps = parse_doubles(prop_seps);
        const int count = static_cast<int>(seps.size());
        std::vector<double> actions(count), dets(count), vts(count);
        check(qk_propagator_series(chart.get(), hbar, mass, q0.data(), dir.data(), seps.data(),
                                   count, prop_dt, actions.data(), dets.data(), vts.data()));
        table.columns = {"s", "dt", "action", "van_vleck", "v_tilde"};
        for (int i = 0; i < count; ++i) table.add({seps[i], prop_dt, actions[i], dets[i], vts[i]});
      }
    } else if (*cmd_conf) {
      command = "conformal";
      options["max_dim"] = conf_max_dim;
      table.columns = {"n", "quantization_num", "quantization_den", "conformal_num",
                       "conformal_den", "equal"};
      json equal_dims = json::array();
      for (int n = 1; n <= conf_max_dim; ++n) {
        int64_t qn = 0, qd = 1, cn = 0, cd = 1;
        int32_t equal = 0;
        check(qk_conformal_coefficient(n, &qn, &qd, &cn, &cd, &equal));
        table.add({static_cast<double>(n), static_cast<double>(qn), static_cast<double>(qd),
                   static_cast<double>(cn), static_cast<double>(cd), static_cast<double>(equal)});
        if (equal) equal_dims.push_back(n);
      }
      result["equal_dimensions"] = equal_dims;
    }

    emit(command, table, result, options, out, timer.ms());
    return 0;
  } catch (const CliError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.exit_code == 0 ? 1 : e.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
