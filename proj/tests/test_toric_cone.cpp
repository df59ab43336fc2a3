#include <doctest.h>

#include "oracles.hpp"
#include "sasakit/lp.hpp"

using namespace sasakit;
using namespace sasakit::testing;

namespace {

Errc error_code(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return Errc::MalformedInput;
}

MatZ sorted_rows(MatZ m) {
  std::vector<VecZ> rows;
  for (int r = 0; r < m.rows(); ++r) rows.push_back(m.row(r).transpose());
  std::sort(rows.begin(), rows.end(), [](const VecZ& a, const VecZ& b) {
    for (Eigen::Index i = 0; i < a.size(); ++i)
      if (a(i) != b(i)) return a(i) < b(i);
    return false;
  });
  for (int r = 0; r < m.rows(); ++r) m.row(r) = rows[r].transpose();
  return m;
}

}  // namespace

TEST_CASE("parse_toric_diagram accepts the documented format") {
  ToricDiagram d = parse_toric_diagram(
      R"({"name": "dP2", "dim": 3, "normals": [[1,0,0],[1,0,1],[1,1,2],[1,2,1],[1,1,0]]})");
  CHECK(d.name == "dP2");
  CHECK(d.n == 3);
  CHECK(d.facet_count() == 5);

  ToricDiagram quad = parse_toric_diagram(R"({"name":"quad","dim":2,"normals":[[1,0],[0,1]]})");
  CHECK(quad.n == 2);
  CHECK(quad.facet_count() == 2);
}

TEST_CASE("parse_toric_diagram rejects malformed documents") {
  auto code = [](const std::string& text) {
    return error_code([&] { parse_toric_diagram(text); });
  };
  CHECK(code("not json at all") == Errc::MalformedInput);
  CHECK(code(R"({"name":"x","dim":3})") == Errc::MalformedInput);
  CHECK(code(R"({"name":"x","dim":3,"normals":[[1,0,0]],"extra":1})") == Errc::MalformedInput);
  CHECK(code(R"({"name":"x","dim":5,"normals":[[1,0,0,0,0]]})") == Errc::MalformedInput);
  CHECK(code(R"({"name":"x","dim":3,"normals":[[1,0],[0,1,0],[0,0,1]]})") == Errc::MalformedInput);
  CHECK(code(R"({"name":"x","dim":3,"normals":[[1.5,0,0],[0,1,0],[0,0,1]]})") ==
        Errc::MalformedInput);
}

TEST_CASE("non-primitive normals are rejected, not rescaled") {
  try {
    parse_toric_diagram(R"({"name":"bad","dim":3,"normals":[[2,0,0],[1,0,1],[1,1,0]]})");
    FAIL("expected NonPrimitiveNormal");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::NonPrimitiveNormal);
    CHECK(std::string(e.what()).find("row 1") != std::string::npos);
  }
}

TEST_CASE("validation catches rank, pointedness and interior failures") {
  auto make = [](int n, std::vector<std::vector<long>> rows) {
    MatZ m(rows.size(), n);
    for (size_t r = 0; r < rows.size(); ++r)
      for (int c = 0; c < n; ++c) m(static_cast<int>(r), c) = Integer(rows[r][c]);
    return make_toric_diagram("t", n, std::move(m));
  };
  CHECK(error_code([&] { make(3, {{1, 0, 0}, {0, 1, 0}}) ; }) == Errc::RankDeficient);
  CHECK(error_code([&] { make(3, {{1, 0, 0}, {0, 1, 0}, {1, 1, 0}}); }) == Errc::RankDeficient);
  CHECK(error_code([&] { make(2, {{1, 0}, {-1, 0}, {0, 1}}); }) == Errc::EmptyInterior);
}

TEST_CASE("dual rays: coordinate cone is self dual") {
  ConeModel cone = build_cone_model(diagram_c3());
  REQUIRE(cone.ray_count() == 3);
  // Lexicographic column order: e3, e2, e1.
  MatZ expected(3, 3);
  expected << 0, 0, 1, 0, 1, 0, 1, 0, 0;
  CHECK(cone.rays == expected);
}

TEST_CASE("dual rays agree with the brute-force subset oracle") {
  for (const ToricDiagram& d :
       {diagram_c3(), diagram_conifold(), diagram_dp1(), diagram_dp2()}) {
    CAPTURE(d.name);
    MatZ expected = brute_force_rays(d.normals);
    MatZ actual = dual_rays(d.normals);
    CHECK(actual == expected);
  }
}

TEST_CASE("conifold has four rays, dP2 has five with a pentagonal cross-section") {
  ConeModel conifold = build_cone_model(diagram_conifold());
  CHECK(conifold.ray_count() == 4);

  ConeModel dp2 = build_cone_model(diagram_dp2());
  CHECK(dp2.ray_count() == 5);
  // Pentagonal incidence: every facet holds exactly two rays and every ray
  // lies on exactly two facets.
  for (int f = 0; f < dp2.facet_count(); ++f) {
    int count = 0;
    for (int r = 0; r < dp2.ray_count(); ++r) count += dp2.incidence(f, r);
    CHECK(count == 2);
  }
  for (int r = 0; r < dp2.ray_count(); ++r) {
    int count = 0;
    for (int f = 0; f < dp2.facet_count(); ++f) count += dp2.incidence(f, r);
    CHECK(count == 2);
  }
}

TEST_CASE("duality round trip recovers the input normals exactly") {
  for (const ToricDiagram& d :
       {diagram_c3(), diagram_conifold(), diagram_dp1(), diagram_dp2()}) {
    CAPTURE(d.name);
    MatZ rays = dual_rays(d.normals);
    MatZ back = dual_rays(MatZ(rays.transpose()));
    CHECK(sorted_rows(MatZ(back.transpose())) == sorted_rows(d.normals));
  }
}

TEST_CASE("gorenstein gamma on the fixtures") {
  Integer ell;
  VecQ gamma = gorenstein_gamma(diagram_dp2().normals, &ell);
  CHECK(gamma(0) == -1);
  CHECK(gamma(1) == 0);
  CHECK(gamma(2) == 0);
  CHECK(ell == 1);

  gamma = gorenstein_gamma(diagram_c3().normals, &ell);
  CHECK(gamma(0) == -1);
  CHECK(gamma(1) == -1);
  CHECK(gamma(2) == -1);
  CHECK(ell == 1);
}

TEST_CASE("gamma inconsistency is detected") {
  MatZ n(3, 2);
  n << 1, 0, 0, 1, 1, 2;
  try {
    gorenstein_gamma(n);
    FAIL("expected GammaInconsistent");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::GammaInconsistent);
  }
}

TEST_CASE("gamma subsystem uniqueness: any full-rank subset gives the same gamma") {
  for (const ToricDiagram& d :
       {diagram_c3(), diagram_conifold(), diagram_dp1(), diagram_dp2()}) {
    CAPTURE(d.name);
    VecQ gamma = gorenstein_gamma(d.normals);
    const int n = d.n, rows = d.facet_count();
    std::vector<int> subset(n);
    std::function<void(int, int)> rec = [&](int start, int depth) {
      if (depth == n) {
        MatQ sub(n, n);
        for (int i = 0; i < n; ++i) sub.row(i) = to_rational(d.normals).row(subset[i]);
        if (rank_q(sub) < n) return;
        LinSolveQ sol = solve_exact(sub, VecQ::Constant(n, Rational(-1)));
        REQUIRE(sol.consistent);
        CHECK(sol.x == gamma);
        return;
      }
      for (int i = start; i < rows; ++i) {
        subset[depth] = i;
        rec(i + 1, depth + 1);
      }
    };
    rec(0, 0);
  }
}

TEST_CASE("the canonical direction pairs strictly positively with every ray") {
  for (const ToricDiagram& d :
       {diagram_c3(), diagram_conifold(), diagram_dp1(), diagram_dp2()}) {
    ConeModel cone = build_cone_model(d);
    for (int k = 0; k < cone.ray_count(); ++k) {
      Integer dot = 0;
      for (int j = 0; j < cone.n(); ++j) dot += cone.l_infty(j) * cone.rays(j, k);
      CHECK(dot > 0);
    }
  }
}

TEST_CASE("reeb feasibility on dP2") {
  ConeModel cone = build_cone_model(diagram_dp2());

  VecD xi(3);
  xi << 3, 3, 3;
  ReebVector r = reeb_feasible(cone, xi);
  CHECK(r.on_slice);
  CHECK(r.interior);

  VecD bad(3);
  bad << 3, 0, 0;
  ReebVector flags = check_reeb(cone, bad);
  CHECK(flags.on_slice);
  CHECK_FALSE(flags.interior);
  // The witness ray is the (0,1,0) direction family.
  Integer dot = 0;
  for (int j = 0; j < 3; ++j)
    dot += rational_from_double(bad(j)).convert_to<Integer>() * cone.rays(j, flags.violated_ray);
  try {
    reeb_feasible(cone, bad);
    FAIL("expected NotInterior");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::NotInterior);
  }
}

TEST_CASE("slice test is 1e-12 absolute for doubles and exact for rationals") {
  ConeModel cone = build_cone_model(diagram_dp2());
  VecD near(3);
  near << 3 + 5e-13, 3, 3;
  CHECK(check_reeb(cone, near).on_slice);
  VecD off(3);
  off << 3 + 5e-12, 3, 3;
  CHECK_FALSE(check_reeb(cone, off).on_slice);
  try {
    reeb_feasible(cone, off);
    FAIL("expected NotOnSlice");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::NotOnSlice);
  }

  VecQ exact(3);
  exact << 3, 3, 3;
  CHECK(check_reeb(cone, exact).on_slice);
  exact(0) = Rational(3) + Rational(1, 1000000000000000);  // 1e-15 off: exactly off-slice
  CHECK_FALSE(check_reeb(cone, exact).on_slice);
}

TEST_CASE("C3 at (1,1,1) is feasible") {
  ConeModel cone = build_cone_model(diagram_c3());
  VecQ xi(3);
  xi << 1, 1, 1;
  ReebVector r = reeb_feasible(cone, xi);
  CHECK(r.on_slice);
  CHECK(r.interior);
}

TEST_CASE("characteristic polytope cross-sections") {
  ConeModel c3 = build_cone_model(diagram_c3());
  VecQ one(3);
  one << 1, 1, 1;
  PolytopeD tri = characteristic_polytope(c3, reeb_feasible(c3, one));
  REQUIRE(tri.vertex_count() == 3);
  // Pre-chart vertices are e_i; the chart drops the first coordinate.
  MatD expected(2, 3);
  expected << 0, 0, 1, 0, 1, 0;
  CHECK((tri.vertices - expected).cwiseAbs().maxCoeff() < 1e-14);

  ConeModel coni = build_cone_model(diagram_conifold());
  VecQ xiq(3);
  xiq << 3, Rational(3, 2), Rational(3, 2);
  CHECK(characteristic_polytope(coni, reeb_feasible(coni, xiq)).vertex_count() == 4);

  ConeModel dp2 = build_cone_model(diagram_dp2());
  VecD xid(3);
  xid << 3, 3, 3;
  CHECK(characteristic_polytope(dp2, reeb_feasible(dp2, xid)).vertex_count() == 5);
}

TEST_CASE("interior flag agrees with an exact LP oracle on random cones") {
  auto rng = oracle_rng(11);
  std::uniform_int_distribution<int> ncoef(-3, 3);
  std::uniform_int_distribution<int> nd(0, 1);
  int tested = 0;
  int interior_seen = 0, boundary_seen = 0;
  while (tested < 40) {
    const int n = 2 + nd(rng);
    const int d = n + nd(rng) + nd(rng) + nd(rng) * 3;
    MatZ normals(d, n);
    for (int r = 0; r < d; ++r)
      for (int c = 0; c < n; ++c) normals(r, c) = ncoef(rng);
    ConeModel cone;
    try {
      cone = build_cone_model(make_toric_diagram("rand", n, normals));
    } catch (const Error&) {
      continue;
    }
    // Random rational candidate Reeb vector, intentionally not always interior.
    VecQ xi(n);
    for (int c = 0; c < n; ++c) xi(c) = Rational(ncoef(rng), 1 + nd(rng));
    ReebVector flags = check_reeb(cone, xi);

    // Oracle: min <xi, y> over {y in C, <l_infty, y> = 1}; interior iff > 0.
    MatQ a(d + 2, n);
    VecQ b = VecQ::Zero(d + 2);
    a.topRows(d) = to_rational(cone.diagram.normals);
    for (int c = 0; c < n; ++c) {
      a(d, c) = Rational(cone.l_infty(c));
      a(d + 1, c) = -Rational(cone.l_infty(c));
    }
    b(d) = 1;
    b(d + 1) = -1;
    LpResult lp = solve_lp(a, b, xi);
    REQUIRE(lp.status == LpStatus::Optimal);
    CHECK(flags.interior == (lp.value > 0));
    (flags.interior ? interior_seen : boundary_seen) += 1;
    ++tested;
  }
  // The sample must exercise both outcomes.
  CHECK(interior_seen > 0);
  CHECK(boundary_seen > 0);
}
