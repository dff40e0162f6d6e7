#pragma once

#include <array>
#include <charconv>
#include <cstdlib>
#include <istream>
#include <limits>
#include <ostream>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "geostrain/matrix.hpp"
#include "geostrain/strain.hpp"
#include "geostrain/tolerances.hpp"
#include "geostrain/types.hpp"

namespace geostrain {

// One quadrature cell: position, cell measure and deformation gradient
// (or displacement gradient in linearized mode).
template <int N>
struct FieldRecord {
  std::array<double, N> position{};
  double weight = 0.0;
  Matrix<N> f;
};

struct ParseIssue {
  long line;  // 1-based, header is line 1
  std::string message;
};

template <int N>
struct FieldParseResult {
  std::vector<FieldRecord<N>> records;
  std::vector<ParseIssue> issues;
};

namespace detail {

inline std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return out;
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r'))
    s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

inline bool parse_double(std::string_view s, double& out) {
  s = trim(s);
  const char* begin = s.data();
  const char* end = begin + s.size();
  const auto res = std::from_chars(begin, end, out);
  return res.ec == std::errc() && res.ptr == end && !s.empty();
}

// Neumaier compensated accumulator
struct CompensatedSum {
  double sum = 0.0;
  double c = 0.0;

  void add(double x) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x))
      c += (sum - t) + x;
    else
      c += (x - t) + sum;
    sum = t;
  }
  double value() const { return sum + c; }
};

inline unsigned thread_cap() {
  unsigned cap = 0;
  if (const char* env = std::getenv("GEOSTRAIN_THREADS")) {
    char* end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (end && *end == '\0') cap = static_cast<unsigned>(v);
  }
  if (cap == 0) cap = std::max(1u, std::thread::hardware_concurrency());
  return cap;
}

// Chunked parallel map over [0, n); worker count never changes the result
// because each index writes its own slot.
template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn) {
  const unsigned cap = thread_cap();
  if (cap <= 1 || n < 256) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(cap, n));
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const std::size_t chunk = (n + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    const std::size_t lo = w * chunk;
    const std::size_t hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &fn] {
      for (std::size_t i = lo; i < hi; ++i) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

template <int N>
constexpr int field_columns() {
  return N + 1 + N * N;
}

template <int N>
std::string field_header() {
  std::string h = (N == 2) ? "x,y,weight" : "x,y,z,weight";
  for (int i = 1; i <= N; ++i)
    for (int j = 1; j <= N; ++j)
      h += ",F" + std::to_string(i) + std::to_string(j);
  return h;
}

}  // namespace detail

// Dimension implied by a header row: 2 for `x,y,weight,...`, 3 for
// `x,y,z,weight,...`. Throws when the header matches neither layout.
inline int sniff_field_dimension(std::string_view header) {
  const auto cols = detail::split_csv(header);
  const auto name = [&](std::size_t i) {
    return i < cols.size() ? detail::trim(cols[i]) : std::string_view{};
  };
  if (name(0) == "x" && name(1) == "y" && name(2) == "weight" && cols.size() == 7)
    return 2;
  if (name(0) == "x" && name(1) == "y" && name(2) == "z" && name(3) == "weight" &&
      cols.size() == 13)
    return 3;
  throw std::invalid_argument("field CSV: unrecognized header row");
}

// Parse a field CSV with header `x,y[,z],weight,F11,...,Fnn` (row-major F).
// Malformed rows are collected with their line numbers and skipped; parsing
// always continues. With require_positive_det (the nonlinear modes), rows
// with det F <= 0 are rejected the same way.
template <int N>
FieldParseResult<N> parse_field(std::istream& in, bool require_positive_det = true) {
  FieldParseResult<N> out;
  std::string line;
  if (!std::getline(in, line))
    throw std::invalid_argument("field CSV: missing header row");
  if (sniff_field_dimension(line) != N)
    throw std::invalid_argument("field CSV: header dimension mismatch");

  long line_no = 1;
  constexpr int cols = detail::field_columns<N>();
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::trim(line).empty()) continue;
    const auto fields = detail::split_csv(line);
    if (static_cast<int>(fields.size()) != cols) {
      out.issues.push_back({line_no, "expected " + std::to_string(cols) + " columns, got " +
                                         std::to_string(fields.size())});
      continue;
    }
    std::array<double, cols> vals;
    bool ok = true;
    for (int i = 0; i < cols && ok; ++i) {
      if (!detail::parse_double(fields[i], vals[i])) {
        out.issues.push_back({line_no, "unparsable number in column " + std::to_string(i + 1)});
        ok = false;
      } else if (!std::isfinite(vals[i])) {
        out.issues.push_back({line_no, "non-finite entry in column " + std::to_string(i + 1)});
        ok = false;
      }
    }
    if (!ok) continue;

    FieldRecord<N> rec;
    for (int i = 0; i < N; ++i) rec.position[i] = vals[i];
    rec.weight = vals[N];
    for (int k = 0; k < N * N; ++k) rec.f.a[k] = vals[N + 1 + k];
    if (rec.weight < 0.0) {
      out.issues.push_back({line_no, "negative weight"});
      continue;
    }
    if (require_positive_det && !(rec.f.det() > 0.0)) {
      out.issues.push_back({line_no, "det F <= 0"});
      continue;
    }
    out.records.push_back(rec);
  }
  return out;
}

template <int N>
void write_field_csv(std::ostream& out, const std::vector<FieldRecord<N>>& records);

enum class EnergyModel { hencky, biot, euclid_so, linearized };

inline const char* to_string(EnergyModel m) {
  switch (m) {
    case EnergyModel::hencky: return "hencky";
    case EnergyModel::biot: return "biot";
    case EnergyModel::euclid_so: return "euclid_so";
    case EnergyModel::linearized: return "linearized";
  }
  return "?";
}

struct EnergyReport {
  EnergyModel model;
  double total = 0.0;              // sum of weight * density, input order, compensated
  std::vector<double> per_cell;    // densities; NaN marks a skipped cell
  long cells = 0;
  long skipped = 0;
};

// Total energy of a discretized field. Per-cell densities may be evaluated
// in parallel (capped by GEOSTRAIN_THREADS); the reduction is always the
// sequential compensated sum over the stored densities, so the total does
// not depend on the worker count. Cells whose density evaluation hits a
// domain error are skipped and counted, never fatal.
template <int N>
EnergyReport total_energy(EnergyModel model, double mu, double kappa,
                          const std::vector<FieldRecord<N>>& field) {
  EnergyReport report;
  report.model = model;
  report.cells = static_cast<long>(field.size());
  report.per_cell.assign(field.size(), std::numeric_limits<double>::quiet_NaN());

  detail::parallel_for(field.size(), [&](std::size_t i) {
    const Matrix<N>& f = field[i].f;
    try {
      switch (model) {
        case EnergyModel::hencky:
          report.per_cell[i] = hencky_energy(mu, kappa, f).value;
          break;
        case EnergyModel::biot:
          report.per_cell[i] = biot_energy_density(mu, kappa, f);
          break;
        case EnergyModel::euclid_so:
          report.per_cell[i] = dist_euclid_sq_to_SO(f);
          break;
        case EnergyModel::linearized:
          report.per_cell[i] = dist_euclid_sq_to_so(f);
          break;
      }
    } catch (const std::exception&) {
      // leave NaN
    }
  });

  detail::CompensatedSum sum;
  for (std::size_t i = 0; i < field.size(); ++i) {
    if (std::isnan(report.per_cell[i])) {
      ++report.skipped;
      continue;
    }
    sum.add(field[i].weight * report.per_cell[i]);
  }
  report.total = sum.value();
  return report;
}

namespace detail {

template <int N>
std::vector<FieldRecord<N>> constant_gradient_grid(const Matrix<N>& grad, int cells_per_axis) {
  if (cells_per_axis < 1)
    throw std::invalid_argument("rigid_field: cells_per_axis must be >= 1");
  const int m = cells_per_axis;
  const long total = (N == 2) ? static_cast<long>(m) * m : static_cast<long>(m) * m * m;
  const double w = 1.0 / static_cast<double>(total);
  std::vector<FieldRecord<N>> out;
  out.reserve(total);
  std::array<int, N> idx{};
  for (long c = 0; c < total; ++c) {
    FieldRecord<N> rec;
    long rem = c;
    for (int d = 0; d < N; ++d) {
      idx[d] = static_cast<int>(rem % m);
      rem /= m;
    }
    for (int d = 0; d < N; ++d) rec.position[d] = (idx[d] + 0.5) / m;
    rec.weight = w;
    rec.f = grad;
    out.push_back(rec);
  }
  return out;
}

}  // namespace detail

// Constant-gradient field of a rigid movement x -> Q x + b on a uniform grid
// over the unit square/cube; equal weights summing to one.
template <int N>
std::vector<FieldRecord<N>> rigid_field_rotation(const RotationMatrix<N>& q,
                                                 const std::array<double, static_cast<std::size_t>(N)>& /*b*/,
                                                 int cells_per_axis) {
  return detail::constant_gradient_grid<N>(q.matrix(), cells_per_axis);
}

// Constant-gradient field of a linearized rigid movement x -> W x + b,
// W skew; the records carry the displacement gradient.
template <int N>
std::vector<FieldRecord<N>> rigid_field_linearized(const Matrix<N>& w,
                                                   const std::array<double, static_cast<std::size_t>(N)>& /*b*/,
                                                   int cells_per_axis) {
  if (frobenius_norm(w + w.transpose()) > tol::skew_symmetry)
    throw std::domain_error("rigid_field_linearized: W is not skew symmetric");
  return detail::constant_gradient_grid<N>(w, cells_per_axis);
}

// CSV writer matching parse_field, used by the rigid-field generator CLI.
template <int N>
void write_field_csv(std::ostream& out, const std::vector<FieldRecord<N>>& records) {
  out << detail::field_header<N>() << "\n";
  const auto emit = [&out](double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    out.write(buf, res.ptr - buf);
  };
  for (const auto& rec : records) {
    for (int i = 0; i < N; ++i) {
      emit(rec.position[i]);
      out << ',';
    }
    emit(rec.weight);
    for (int k = 0; k < N * N; ++k) {
      out << ',';
      emit(rec.f.a[k]);
    }
    out << "\n";
  }
}

}  // namespace geostrain
