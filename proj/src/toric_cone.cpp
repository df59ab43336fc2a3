#include "sasakit/toric_cone.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <set>

#include "sasakit/exact_linalg.hpp"
#include "sasakit/lp.hpp"
#include "sasakit/rational.hpp"

namespace sasakit {

namespace {

void validate(const ToricDiagram& d) {
  const int n = d.n;
  if (n < 2 || n > 4) fail(Errc::MalformedInput, "dim must be between 2 and 4");
  const int rows = d.facet_count();
  if (static_cast<int>(d.normals.cols()) != n)
    fail(Errc::MalformedInput, "normal length does not match dim");

  for (int r = 0; r < rows; ++r) {
    Integer g = vec_gcd(d.normals.row(r).transpose());
    if (g != 1)
      fail(Errc::NonPrimitiveNormal,
           "normal row " + std::to_string(r + 1) + " is not primitive (gcd " + g.str() + ")");
  }

  MatQ a = to_rational(d.normals);
  if (rows < n || rank_q(a) < n)
    fail(Errc::RankDeficient, "normals do not span R^" + std::to_string(n));

  // Nonempty interior: {y : <lambda_j, y> >= 1} feasible (exact LP).
  if (!lp_feasible(a, VecQ::Ones(rows)))
    fail(Errc::EmptyInterior, "the cone {<lambda_j, y> >= 0} has empty interior");

  // Pointedness: no line, i.e. no nonzero y with <lambda_j, y> = 0 for all j.
  // Implied by full rank; the LP check is kept as an explicit guard.
  for (int i = 0; i < n; ++i) {
    MatQ eq(2 * rows + 1, n);
    VecQ rhs = VecQ::Zero(2 * rows + 1);
    eq.topRows(rows) = a;
    eq.middleRows(rows, rows) = -a;
    eq.row(2 * rows).setZero();
    eq(2 * rows, i) = 1;
    rhs(2 * rows) = 1;
    if (lp_feasible(eq, rhs))
      fail(Errc::NotPointed, "the cone contains a line through coordinate " + std::to_string(i));
  }
}

}  // namespace

ToricDiagram make_toric_diagram(std::string name, int n, MatZ normals) {
  ToricDiagram d{std::move(name), n, std::move(normals)};
  validate(d);
  return d;
}

ToricDiagram parse_toric_diagram(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::MalformedInput, std::string("JSON syntax error: ") + e.what());
  }
  if (!doc.is_object()) fail(Errc::MalformedInput, "top-level value must be an object");
  for (const auto& [key, value] : doc.items()) {
    (void)value;
    if (key != "name" && key != "dim" && key != "normals")
      fail(Errc::MalformedInput, "unknown field '" + key + "'");
  }
  if (!doc.contains("name") || !doc["name"].is_string())
    fail(Errc::MalformedInput, "field 'name' (string) is required");
  if (!doc.contains("dim") || !doc["dim"].is_number_integer())
    fail(Errc::MalformedInput, "field 'dim' (integer) is required");
  if (!doc.contains("normals") || !doc["normals"].is_array() || doc["normals"].empty())
    fail(Errc::MalformedInput, "field 'normals' (non-empty array) is required");

  const int n = doc["dim"].get<int>();
  if (n < 2 || n > 4) fail(Errc::MalformedInput, "dim must be between 2 and 4");
  const auto& rows = doc["normals"];
  MatZ normals(rows.size(), n);
  for (size_t r = 0; r < rows.size(); ++r) {
    if (!rows[r].is_array() || static_cast<int>(rows[r].size()) != n)
      fail(Errc::MalformedInput, "normal row " + std::to_string(r) + " must have " +
                                     std::to_string(n) + " entries");
    for (int j = 0; j < n; ++j) {
      const auto& cell = rows[r][j];
      if (!cell.is_number_integer())
        fail(Errc::MalformedInput, "normals must be signed 64-bit integers");
      if (cell.is_number_unsigned() &&
          cell.get<uint64_t>() > static_cast<uint64_t>(std::numeric_limits<int64_t>::max()))
        fail(Errc::MalformedInput, "normal entry exceeds signed 64-bit range");
      normals(static_cast<int>(r), j) = Integer(cell.get<int64_t>());
    }
  }
  return make_toric_diagram(doc["name"].get<std::string>(), n, std::move(normals));
}

MatZ dual_rays(const MatZ& normals) { return cone_extreme_rays(to_rational(normals)); }

VecQ gorenstein_gamma(const MatZ& normals, Integer* ell) {
  const int rows = static_cast<int>(normals.rows());
  MatQ a = to_rational(normals);
  LinSolveQ sol = solve_exact(a, VecQ::Constant(rows, Rational(-1)));
  if (!sol.consistent)
    fail(Errc::GammaInconsistent, "Gorenstein condition (lambda_j, gamma) = -1 unsolvable");
  if (ell) *ell = lcm_of_denominators(sol.x);
  return sol.x;
}

ConeModel build_cone_model(const ToricDiagram& diagram) {
  ConeModel m;
  m.diagram = diagram;
  m.rays = dual_rays(diagram.normals);
  m.gamma = gorenstein_gamma(diagram.normals, &m.gamma_ell);
  m.l_infty = diagram.normals.colwise().sum().transpose();

  const int d = diagram.facet_count();
  const int r = m.ray_count();
  m.incidence.resize(d, r);
  for (int i = 0; i < d; ++i) {
    for (int k = 0; k < r; ++k) {
      Integer dot = 0;
      for (int j = 0; j < diagram.n; ++j) dot += diagram.normals(i, j) * m.rays(j, k);
      if (dot < 0) fail(Errc::MalformedInput, "internal: ray outside its own cone");
      m.incidence(i, k) = (dot == 0);
    }
  }

  m.normals_d = to_double(diagram.normals);
  m.rays_d = to_double(m.rays);
  m.gamma_d = to_double(m.gamma);
  m.l_infty_d = to_double(m.l_infty);
  return m;
}

namespace {

constexpr double kSliceTol = 1e-12;

ReebVector evaluate_reeb(const ConeModel& model, VecD xi, std::optional<VecQ> exact) {
  const int n = model.n();
  if (static_cast<int>(xi.size()) != n)
    fail(Errc::MalformedInput, "Reeb vector dimension mismatch");
  ReebVector out;
  out.xi = std::move(xi);
  out.xi_exact = std::move(exact);

  if (out.xi_exact) {
    Rational dot = 0;
    for (int j = 0; j < n; ++j) dot += model.gamma(j) * (*out.xi_exact)(j);
    Rational target = Rational(-(n));  // -(m+1) with m = n-1
    out.on_slice = (dot == target);
    out.slice_residual = to_double(dot - target);
    out.interior = true;
    for (int k = 0; k < model.ray_count(); ++k) {
      Rational pair = 0;
      for (int j = 0; j < n; ++j) pair += (*out.xi_exact)(j)*Rational(model.rays(j, k));
      if (pair <= 0) {
        out.interior = false;
        out.violated_ray = k;
        break;
      }
    }
  } else {
    const double residual = model.gamma_d.dot(out.xi) + n;
    out.slice_residual = residual;
    out.on_slice = std::abs(residual) <= kSliceTol;
    out.interior = true;
    for (int k = 0; k < model.ray_count(); ++k) {
      if (out.xi.dot(model.rays_d.col(k)) <= 0) {
        out.interior = false;
        out.violated_ray = k;
        break;
      }
    }
  }
  return out;
}

std::string ray_string(const ConeModel& model, int k) {
  std::string s = "(";
  for (int j = 0; j < model.n(); ++j) {
    if (j) s += ",";
    s += model.rays(j, k).str();
  }
  return s + ")";
}

}  // namespace

ReebVector check_reeb(const ConeModel& model, const VecD& xi) {
  return evaluate_reeb(model, xi, std::nullopt);
}

ReebVector check_reeb(const ConeModel& model, const VecQ& xi) {
  return evaluate_reeb(model, to_double(xi), xi);
}

void require_feasible(const ReebVector& xi) {
  if (!xi.on_slice)
    fail(Errc::NotOnSlice, "Reeb vector misses the slice (gamma, xi) = -(m+1); residual " +
                               std::to_string(xi.slice_residual));
  if (!xi.interior)
    fail(Errc::NotInterior,
         "Reeb vector is not interior to the dual cone (ray index " +
             std::to_string(xi.violated_ray) + ")");
}

ReebVector reeb_feasible(const ConeModel& model, const VecD& xi) {
  ReebVector out = check_reeb(model, xi);
  if (!out.on_slice)
    fail(Errc::NotOnSlice, "Reeb vector misses the slice (gamma, xi) = -(m+1); residual " +
                               std::to_string(out.slice_residual));
  if (!out.interior)
    fail(Errc::NotInterior, "Reeb vector pairs non-positively with ray " +
                                ray_string(model, out.violated_ray));
  return out;
}

ReebVector reeb_feasible(const ConeModel& model, const VecQ& xi) {
  ReebVector out = check_reeb(model, xi);
  if (!out.on_slice)
    fail(Errc::NotOnSlice, "Reeb vector misses the slice (gamma, xi) = -(m+1) exactly");
  if (!out.interior)
    fail(Errc::NotInterior, "Reeb vector pairs non-positively with ray " +
                                ray_string(model, out.violated_ray));
  return out;
}

PolytopeD characteristic_polytope(const ConeModel& model, const ReebVector& xi) {
  require_feasible(xi);
  const int n = model.n();
  int drop = 0;
  for (int j = 1; j < n; ++j) {
    if (std::abs(xi.xi(j)) > std::abs(xi.xi(drop))) drop = j;
  }
  // Chart v -> y with y_drop = (1 - sum_{j != drop} xi_j v_j) / xi_drop;
  // the facet l_i(y) >= 0 becomes an affine functional of v.
  const int d = model.facet_count();
  MatD a(d, n - 1);
  VecD b(d);
  for (int i = 0; i < d; ++i) {
    const double lead = model.normals_d(i, drop) / xi.xi(drop);
    b(i) = lead;
    int col = 0;
    for (int j = 0; j < n; ++j) {
      if (j == drop) continue;
      a(i, col++) = model.normals_d(i, j) - lead * xi.xi(j);
    }
  }
  return vertex_enumeration<double>(a, b);
}

}  // namespace sasakit
