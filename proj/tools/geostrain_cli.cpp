// Command-line front end: polar/exp/log kernels, distances to SO(n),
// geodesic sampling and endpoint solving, distance bounds, theorem
// verifiers, field energies and rigid-field generation.
//
// JSON subcommands write a single versioned object to stdout. CSV
// subcommands (geodesic sample, rigid-field) keep stdout as pure CSV and
// echo their machine-readable input record to stderr instead.
//
// Exit codes: 0 success, 1 usage, 2 domain error, 3 non-convergence.

#include <charconv>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "geostrain/geostrain.hpp"

namespace gs = geostrain;
using json = nlohmann::ordered_json;

namespace {

struct NonConvergence : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct AnyMatrix {
  int n = 0;
  std::array<double, 9> v{};
};

AnyMatrix parse_matrix_literal(const std::string& text) {
  AnyMatrix m;
  std::vector<std::vector<double>> rows;
  std::stringstream row_stream(text);
  std::string row;
  while (std::getline(row_stream, row, ';')) {
    std::vector<double> entries;
    std::stringstream entry_stream(row);
    std::string entry;
    while (std::getline(entry_stream, entry, ',')) {
      double value = 0.0;
      if (!gs::detail::parse_double(entry, value) || !std::isfinite(value))
        throw std::domain_error("matrix literal: unparsable entry '" + entry + "'");
      entries.push_back(value);
    }
    rows.push_back(std::move(entries));
  }
  const int n = static_cast<int>(rows.size());
  if (n != 2 && n != 3)
    throw std::domain_error("matrix literal: need 2 or 3 rows separated by ';'");
  for (const auto& r : rows)
    if (static_cast<int>(r.size()) != n)
      throw std::domain_error("matrix literal: matrix must be square");
  m.n = n;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m.v[i * n + j] = rows[i][j];
  return m;
}

AnyMatrix parse_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::domain_error("cannot open matrix file: " + path);
  json j;
  in >> j;
  if (!j.is_array()) throw std::domain_error("matrix file: expected nested arrays");
  AnyMatrix m;
  const int n = static_cast<int>(j.size());
  if (n != 2 && n != 3) throw std::domain_error("matrix file: need 2 or 3 rows");
  m.n = n;
  for (int i = 0; i < n; ++i) {
    if (!j[i].is_array() || static_cast<int>(j[i].size()) != n)
      throw std::domain_error("matrix file: matrix must be square");
    for (int jj = 0; jj < n; ++jj) {
      const double value = j[i][jj].get<double>();
      if (!std::isfinite(value)) throw std::domain_error("matrix file: non-finite entry");
      m.v[i * n + jj] = value;
    }
  }
  return m;
}

template <int N>
gs::Matrix<N> to_matrix(const AnyMatrix& m) {
  gs::Matrix<N> out;
  for (int k = 0; k < N * N; ++k) out.a[k] = m.v[k];
  return out;
}

template <int N>
json matrix_json(const gs::Matrix<N>& m) {
  json rows = json::array();
  for (int i = 0; i < N; ++i) {
    json row = json::array();
    for (int j = 0; j < N; ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

json tolerances_json() {
  return json{{"rotation_orthogonality", gs::tol::rotation_orthogonality},
              {"endpoint_residual", gs::tol::endpoint_residual},
              {"scan_gap", gs::tol::scan_gap},
              {"identity_equalities", gs::tol::identity_equalities},
              {"quadrature_rel", gs::tol::quadrature_rel}};
}

json envelope(const std::string& command) {
  json out;
  out["schema"] = 1;
  out["version"] = gs::version;
  out["command"] = command;
  return out;
}

void emit(const json& out) { std::cout << out.dump(2) << "\n"; }

// matrix flags shared by most subcommands; exactly one of the literal and
// file forms must be given
struct MatrixOption {
  std::string literal;
  std::string file;

  void attach(CLI::App* cmd, const std::string& flag, const std::string& desc) {
    auto* group = cmd->add_option_group(flag);
    group->add_option("--" + flag, literal, desc + " as 'a,b;c,d'");
    group->add_option("--" + flag + "-file", file,
                      desc + " from a JSON file of nested arrays");
    group->require_option(1);
    name_ = flag;
  }

  AnyMatrix value() const {
    if (!literal.empty()) return parse_matrix_literal(literal);
    if (!file.empty()) return parse_matrix_file(file);
    throw std::domain_error("missing required matrix option --" + name_);
  }

 private:
  std::string name_;
};

struct MetricOption {
  double mu = 1.0;
  double mu_c = 1.0;
  double kappa = 1.0;

  void attach(CLI::App* cmd) {
    cmd->add_option("--mu", mu, "shear modulus (> 0)");
    cmd->add_option("--mu-c", mu_c, "spin modulus (>= 0; 0 selects pseudometric mode)");
    cmd->add_option("--kappa", kappa, "bulk modulus (> 0)");
  }

  gs::MetricParams params() const { return gs::MetricParams(mu, mu_c, kappa); }

  json echo() const { return json{{"mu", mu}, {"mu_c", mu_c}, {"kappa", kappa}}; }
};

template <typename Fn>
void with_dim(int n, Fn&& fn) {
  if (n == 2)
    fn(std::integral_constant<int, 2>{});
  else
    fn(std::integral_constant<int, 3>{});
}

void csv_number(std::ostream& out, double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  out.write(buf, res.ptr - buf);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"geodesic and Euclidean strain distances on GL(n)"};
  app.require_subcommand(1);

  // ---- polar ----------------------------------------------------------
  auto* polar_cmd = app.add_subcommand("polar", "polar decomposition F = R U");
  MatrixOption polar_f;
  polar_f.attach(polar_cmd, "f", "deformation gradient");
  polar_cmd->callback([&] {
    const AnyMatrix any = polar_f.value();
    with_dim(any.n, [&](auto dim) {
      constexpr int N = dim();
      const auto f = to_matrix<N>(any);
      const auto factors = gs::polar_decompose(f);
      json out = envelope("polar");
      out["inputs"] = {{"f", matrix_json(f)}};
      out["seed"] = nullptr;
      out["tolerances"] = tolerances_json();
      out["result"] = {{"r", matrix_json(factors.r.matrix())},
                       {"u", matrix_json(factors.u.matrix())},
                       {"condition_warning", factors.condition_warning}};
      emit(out);
    });
  });

  // ---- expm / logm ----------------------------------------------------
  auto* expm_cmd = app.add_subcommand("expm", "matrix exponential");
  MatrixOption expm_f;
  expm_f.attach(expm_cmd, "f", "matrix argument");
  expm_cmd->callback([&] {
    const AnyMatrix any = expm_f.value();
    with_dim(any.n, [&](auto dim) {
      constexpr int N = dim();
      const auto x = to_matrix<N>(any);
      json out = envelope("expm");
      out["inputs"] = {{"f", matrix_json(x)}};
      out["seed"] = nullptr;
      out["tolerances"] = tolerances_json();
      out["result"] = {{"exp", matrix_json(gs::mat_exp(x))}};
      emit(out);
    });
  });

  auto* logm_cmd = app.add_subcommand("logm", "principal matrix logarithm");
  MatrixOption logm_f;
  logm_f.attach(logm_cmd, "f", "matrix argument");
  logm_cmd->callback([&] {
    const AnyMatrix any = logm_f.value();
    with_dim(any.n, [&](auto dim) {
      constexpr int N = dim();
      const auto x = to_matrix<N>(any);
      json out = envelope("logm");
      out["inputs"] = {{"f", matrix_json(x)}};
      out["seed"] = nullptr;
      out["tolerances"] = tolerances_json();
      out["result"] = {{"log", matrix_json(gs::mat_log_principal(x))}};
      emit(out);
    });
  });

  // ---- dist -----------------------------------------------------------
  auto* dist_cmd = app.add_subcommand("dist", "distance of F to the rotation group");
  dist_cmd->require_subcommand(1);

  auto* dist_euclid = dist_cmd->add_subcommand("euclid", "squared Euclidean distance to SO(n)");
  MatrixOption dist_euclid_f;
  dist_euclid_f.attach(dist_euclid, "f", "deformation gradient");
  dist_euclid->callback([&] {
    const AnyMatrix any = dist_euclid_f.value();
    with_dim(any.n, [&](auto dim) {
      constexpr int N = dim();
      const auto f = to_matrix<N>(any);
      const auto factors = gs::polar_decompose(f);
      json out = envelope("dist euclid");
      out["inputs"] = {{"f", matrix_json(f)}};
      out["seed"] = nullptr;
      out["tolerances"] = tolerances_json();
      out["result"] = {{"dist_sq", gs::dist_euclid_sq_to_SO(f)},
                       {"nearest_rotation", matrix_json(factors.r.matrix())}};
      emit(out);
    });
  });

  auto* dist_geod = dist_cmd->add_subcommand("geod", "squared geodesic distance to SO(n)");
  MatrixOption dist_geod_f;
  MetricOption dist_geod_metric;
  dist_geod_f.attach(dist_geod, "f", "deformation gradient");
  dist_geod_metric.attach(dist_geod);
  dist_geod->callback([&] {
    const AnyMatrix any = dist_geod_f.value();
    with_dim(any.n, [&](auto dim) {
      constexpr int N = dim();
      const auto f = to_matrix<N>(any);
      const auto d = gs::geodesic_dist_sq_to_SO(dist_geod_metric.params(), f);
      const auto factors = gs::polar_decompose(f);
      json out = envelope("dist geod");
      out["inputs"] = {{"f", matrix_json(f)}, {"metric", dist_geod_metric.echo()}};
      out["seed"] = nullptr;
      out["tolerances"] = tolerances_json();
      out["result"] = {{"dist_sq", d.value},
                       {"mu_c_used", d.mu_c_used},
                       {"pseudometric", d.pseudometric},
                       {"nearest_rotation", matrix_json(factors.r.matrix())}};
      emit(out);
    });
  });

  // ---- geodesic -------------------------------------------------------
  auto* geo_cmd = app.add_subcommand("geodesic", "geodesics of the left-invariant metric");
  geo_cmd->require_subcommand(1);

  auto* geo_sample = geo_cmd->add_subcommand("sample", "sample a geodesic curve as CSV");
  MatrixOption geo_f, geo_xi;
  MetricOption geo_metric;
  int geo_steps = 16;
  geo_f.attach(geo_sample, "f", "base point");
  geo_xi.attach(geo_sample, "xi", "tangent parameter");
  geo_metric.attach(geo_sample);
  geo_sample->add_option("--steps", geo_steps, "number of steps over [0, 1]")
      ->check(CLI::PositiveNumber);
  geo_sample->callback([&] {
    const AnyMatrix any_f = geo_f.value();
    const AnyMatrix any_xi = geo_xi.value();
    if (any_f.n != any_xi.n) throw std::domain_error("--f and --xi must share a dimension");
    with_dim(any_f.n, [&](auto dim) {
      constexpr int N = dim();
      const gs::GeodesicSpec<N> spec(to_matrix<N>(any_f), to_matrix<N>(any_xi),
                                     geo_metric.params());
      json echo = envelope("geodesic sample");
      echo["inputs"] = {{"f", matrix_json(spec.base)},
                        {"xi", matrix_json(spec.xi)},
                        {"metric", geo_metric.echo()},
                        {"steps", geo_steps}};
      echo["seed"] = nullptr;
      echo["tolerances"] = tolerances_json();
      std::cerr << echo.dump(2) << "\n";

      std::cout << "t";
      for (int i = 1; i <= N; ++i)
        for (int j = 1; j <= N; ++j) std::cout << ",g" << i << j;
      std::cout << ",speed\n";
      for (int s = 0; s <= geo_steps; ++s) {
        const double t = static_cast<double>(s) / geo_steps;
        const auto g = gs::geodesic_point(spec, t);
        csv_number(std::cout, t);
        for (int k = 0; k < N * N; ++k) {
          std::cout << ',';
          csv_number(std::cout, g.a[k]);
        }
        std::cout << ',';
        csv_number(std::cout, gs::geodesic_speed(spec, t));
        std::cout << "\n";
      }
    });
  });

  auto* geo_solve = geo_cmd->add_subcommand("solve", "solve the endpoint equation for xi");
  MatrixOption solve_f, solve_p;
  MetricOption solve_metric;
  int solve_starts = 8;
  std::uint64_t solve_seed = 1234;
  solve_f.attach(geo_solve, "f", "start point");
  solve_p.attach(geo_solve, "p", "end point");
  solve_metric.attach(geo_solve);
  geo_solve->add_option("--starts", solve_starts, "multistart count")->check(CLI::PositiveNumber);
  geo_solve->add_option("--seed", solve_seed, "seed for the multistart perturbations");
  geo_solve->callback([&] {
    const AnyMatrix any_f = solve_f.value();
    const AnyMatrix any_p = solve_p.value();
    if (any_f.n != any_p.n) throw std::domain_error("--f and --p must share a dimension");
    with_dim(any_f.n, [&](auto dim) {
      constexpr int N = dim();
      const auto f = to_matrix<N>(any_f);
      const auto p = to_matrix<N>(any_p);
      json out = envelope("geodesic solve");
      out["inputs"] = {{"f", matrix_json(f)},
                       {"p", matrix_json(p)},
                       {"metric", solve_metric.echo()},
                       {"starts", solve_starts}};
      out["seed"] = solve_seed;
      out["tolerances"] = tolerances_json();
      try {
        const auto est = gs::geodesic_distance_estimate(solve_metric.params(), f, p,
                                                        solve_starts, solve_seed);
        json reports = json::array();
        for (const auto& r : est.reports)
          reports.push_back({{"converged", r.converged},
                             {"residual", r.residual},
                             {"iterations", r.iterations},
                             {"length", r.length}});
        out["result"] = {{"xi", matrix_json(est.best.xi)},
                         {"length", est.value},
                         {"residual", est.best.residual},
                         {"pseudometric", est.pseudometric},
                         {"starts", reports}};
        emit(out);
      } catch (const gs::EndpointSolveFailure<N>& failure) {
        json reports = json::array();
        for (const auto& r : failure.reports)
          reports.push_back({{"converged", r.converged},
                             {"residual", r.residual},
                             {"iterations", r.iterations},
                             {"length", r.length}});
        out["result"] = {{"converged", false}, {"starts", reports}};
        emit(out);
        throw NonConvergence(failure.what());
      }
    });
  });

  // ---- bounds ---------------------------------------------------------
  auto* bounds_cmd = app.add_subcommand("bounds", "lower/upper bounds for the geodesic distance");
  MatrixOption bounds_f;
  MetricOption bounds_metric;
  long bounds_samples = 10000;
  std::uint64_t bounds_seed = 1234;
  bounds_f.attach(bounds_cmd, "f", "deformation gradient");
  bounds_metric.attach(bounds_cmd);
  bounds_cmd->add_option("--samples", bounds_samples, "rotation samples for the scan")
      ->check(CLI::PositiveNumber);
  bounds_cmd->add_option("--seed", bounds_seed, "seed for rotation sampling (n = 3)");
  bounds_cmd->callback([&] {
    const AnyMatrix any = bounds_f.value();
    with_dim(any.n, [&](auto dim) {
      constexpr int N = dim();
      const auto f = to_matrix<N>(any);
      const auto params = bounds_metric.params();
      const auto lower = gs::lower_bound_scan(params, f, bounds_samples, bounds_seed);
      const auto upper = gs::upper_bound_via_polar_geodesic(params, f);
      const auto closed = gs::geodesic_dist_sq_to_SO(params, f);
      json out = envelope("bounds");
      out["inputs"] = {{"f", matrix_json(f)},
                       {"metric", bounds_metric.echo()},
                       {"samples", bounds_samples}};
      out["seed"] = bounds_seed;
      out["tolerances"] = tolerances_json();
      out["result"] = {{"lower_scan", lower.value},
                       {"upper_polar_geodesic", upper.value},
                       {"closed_form", closed.value},
                       {"attained_rotation", matrix_json(lower.attained_q.matrix())},
                       {"skipped", lower.skipped},
                       {"pseudometric", lower.pseudometric}};
      emit(out);
    });
  });

  // ---- verify ---------------------------------------------------------
  auto* verify_cmd = app.add_subcommand("verify", "desk-scale theorem verifiers");
  verify_cmd->require_subcommand(1);
  auto* verify_t1 = verify_cmd->add_subcommand("theorem1", "rotation optimality of the polar factor");
  int verify_n = 2;
  int verify_trials = 10;
  long verify_samples = 10000;
  std::uint64_t verify_seed = 1234;
  double verify_cond = 100.0;
  verify_t1->add_option("--n", verify_n, "dimension (2 or 3)")->check(CLI::IsMember({2, 3}));
  verify_t1->add_option("--trials", verify_trials, "number of random gradients")
      ->check(CLI::PositiveNumber);
  verify_t1->add_option("--samples", verify_samples, "rotation samples per trial")
      ->check(CLI::PositiveNumber);
  verify_t1->add_option("--seed", verify_seed, "base seed");
  verify_t1->add_option("--cond-max", verify_cond, "condition cap for the random gradients");
  verify_t1->callback([&] {
    with_dim(verify_n, [&](auto dim) {
      constexpr int N = dim();
      json trials = json::array();
      double max_gap = 0.0, max_angle = 0.0;
      long total_skipped = 0;
      for (int t = 0; t < verify_trials; ++t) {
        const std::uint64_t seed = verify_seed + static_cast<std::uint64_t>(t);
        const auto f = gs::random_glp<N>(seed, verify_cond);
        const auto report = gs::verify_theorem1(f, verify_samples, seed);
        const auto polar_t = gs::polar_decompose(f).r.transpose();
        const double angle = gs::rotation_angle_between(report.q_best, polar_t);
        max_gap = std::max(max_gap, std::abs(report.gap));
        max_angle = std::max(max_angle, angle);
        total_skipped += report.skipped;
        trials.push_back({{"seed", seed},
                          {"min_value", report.min_value},
                          {"closed_form", report.closed_form},
                          {"gap", report.gap},
                          {"angle_to_polar_transpose", angle},
                          {"skipped", report.skipped}});
      }
      json out = envelope("verify theorem1");
      out["inputs"] = {{"n", verify_n},
                       {"trials", verify_trials},
                       {"samples", verify_samples},
                       {"cond_max", verify_cond}};
      out["seed"] = verify_seed;
      out["tolerances"] = tolerances_json();
      out["result"] = {{"trials", trials},
                       {"max_abs_gap", max_gap},
                       {"max_angle_to_polar_transpose", max_angle},
                       {"total_skipped", total_skipped}};
      emit(out);
    });
  });

  // ---- energy ---------------------------------------------------------
  auto* energy_cmd = app.add_subcommand("energy", "total energy of a field CSV");
  std::string energy_model = "hencky";
  double energy_mu = 1.0, energy_kappa = 1.0;
  std::string energy_path;
  energy_cmd->add_option("--model", energy_model, "hencky|biot|euclid_so|linearized")
      ->check(CLI::IsMember({"hencky", "biot", "euclid_so", "linearized"}));
  energy_cmd->add_option("--mu", energy_mu, "shear modulus");
  energy_cmd->add_option("--kappa", energy_kappa, "bulk modulus");
  energy_cmd->add_option("field", energy_path, "field CSV path")->required();
  energy_cmd->callback([&] {
    std::ifstream in(energy_path);
    if (!in) throw std::domain_error("cannot open field file: " + energy_path);
    std::string header;
    if (!std::getline(in, header)) throw std::invalid_argument("field CSV: missing header row");
    const int n = gs::sniff_field_dimension(header);
    in.seekg(0);

    gs::EnergyModel model = gs::EnergyModel::hencky;
    if (energy_model == "biot") model = gs::EnergyModel::biot;
    if (energy_model == "euclid_so") model = gs::EnergyModel::euclid_so;
    if (energy_model == "linearized") model = gs::EnergyModel::linearized;

    with_dim(n, [&](auto dim) {
      constexpr int N = dim();
      const auto parsed =
          gs::parse_field<N>(in, model != gs::EnergyModel::linearized);
      const auto report = gs::total_energy(model, energy_mu, energy_kappa, parsed.records);
      json issues = json::array();
      for (const auto& issue : parsed.issues)
        issues.push_back({{"line", issue.line}, {"message", issue.message}});
      json out = envelope("energy");
      out["inputs"] = {{"model", energy_model},
                       {"mu", energy_mu},
                       {"kappa", energy_kappa},
                       {"field", energy_path},
                       {"n", n}};
      out["seed"] = nullptr;
      out["tolerances"] = tolerances_json();
      out["result"] = {{"total", report.total},
                       {"cells", report.cells},
                       {"skipped", report.skipped},
                       {"parse_issues", issues},
                       {"per_cell", report.per_cell}};
      emit(out);
    });
  });

  // ---- rigid-field ----------------------------------------------------
  auto* rigid_cmd = app.add_subcommand("rigid-field", "generate a rigid-movement field CSV");
  int rigid_n = 2;
  std::string rigid_kind = "rotation";
  double rigid_angle = 0.0;
  std::vector<double> rigid_axis{0.0, 0.0, 1.0};
  std::vector<double> rigid_spin{1.0};
  std::vector<double> rigid_b;
  int rigid_cells = 8;
  rigid_cmd->add_option("--n", rigid_n, "dimension (2 or 3)")->check(CLI::IsMember({2, 3}));
  rigid_cmd->add_option("--kind", rigid_kind, "rotation|linearized")
      ->check(CLI::IsMember({"rotation", "linearized"}));
  rigid_cmd->add_option("--angle", rigid_angle, "rotation angle (kind = rotation)");
  rigid_cmd->add_option("--axis", rigid_axis, "rotation axis, n = 3 (three numbers)")
      ->expected(3);
  rigid_cmd->add_option("--spin", rigid_spin,
                        "spin parameters of skew W (1 number for n = 2, 3 for n = 3)");
  rigid_cmd->add_option("--b", rigid_b, "translation (echoed only; gradients are constant)");
  rigid_cmd->add_option("--cells", rigid_cells, "grid cells per axis")->check(CLI::PositiveNumber);
  rigid_cmd->callback([&] {
    with_dim(rigid_n, [&](auto dim) {
      constexpr int N = dim();
      std::array<double, N> b{};
      for (std::size_t i = 0; i < b.size() && i < rigid_b.size(); ++i) b[i] = rigid_b[i];

      std::vector<gs::FieldRecord<N>> records;
      json inputs = {{"n", rigid_n}, {"kind", rigid_kind}, {"cells", rigid_cells}};
      if (rigid_kind == "rotation") {
        if constexpr (N == 2) {
          records = gs::rigid_field_rotation<2>(gs::RotationMatrix<2>::from_angle(rigid_angle),
                                                b, rigid_cells);
        } else {
          const double len = std::sqrt(rigid_axis[0] * rigid_axis[0] +
                                       rigid_axis[1] * rigid_axis[1] +
                                       rigid_axis[2] * rigid_axis[2]);
          if (!(len > 0.0)) throw std::domain_error("rigid-field: zero rotation axis");
          const gs::Mat3 hat = gs::mat3(0, -rigid_axis[2], rigid_axis[1], rigid_axis[2], 0,
                                        -rigid_axis[0], -rigid_axis[1], rigid_axis[0], 0);
          const gs::Mat3 q = gs::mat_exp(gs::Mat3((rigid_angle / len) * hat));
          records = gs::rigid_field_rotation<3>(gs::RotationMatrix<3>(q), b, rigid_cells);
        }
        inputs["angle"] = rigid_angle;
        if (N == 3) inputs["axis"] = rigid_axis;
      } else {
        gs::Matrix<N> w;
        if constexpr (N == 2) {
          if (rigid_spin.size() != 1)
            throw std::domain_error("rigid-field: --spin needs 1 number at n = 2");
          w = gs::mat2(0, -rigid_spin[0], rigid_spin[0], 0);
        } else {
          if (rigid_spin.size() != 3)
            throw std::domain_error("rigid-field: --spin needs 3 numbers at n = 3");
          w = gs::mat3(0, -rigid_spin[2], rigid_spin[1], rigid_spin[2], 0, -rigid_spin[0],
                       -rigid_spin[1], rigid_spin[0], 0);
        }
        records = gs::rigid_field_linearized<N>(w, b, rigid_cells);
        inputs["spin"] = rigid_spin;
      }
      inputs["b"] = rigid_b;

      json echo = envelope("rigid-field");
      echo["inputs"] = inputs;
      echo["seed"] = nullptr;
      echo["tolerances"] = tolerances_json();
      std::cerr << echo.dump(2) << "\n";
      gs::write_field_csv(std::cout, records);
    });
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n\n" << app.help() << std::flush;
    return 1;
  } catch (const NonConvergence& e) {
    std::cerr << "non-convergence: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
