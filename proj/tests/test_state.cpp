#include <doctest.h>

#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

#include "helpers.hpp"
#include "qca/debruijn.hpp"
#include "qca/oracle.hpp"
#include "qca/state.hpp"

using namespace qca;

namespace {
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);
}

TEST_CASE("make_superposition merges, cancels and normalizes") {
  Rule rule = load_rule("xor");
  Config x = cfg(rule, "0|1"), y = cfg(rule, "0|11");

  Superposition phi = make_superposition({{x, 1.0}, {y, 1.0}});
  CHECK(std::abs(phi.amplitude(x) - kInvSqrt2) < 1e-15);
  CHECK(std::abs(phi.amplitude(y) - kInvSqrt2) < 1e-15);
  CHECK(std::abs(phi.norm() - 1.0) < 1e-15);

  CHECK_THROWS_AS((void)make_superposition({{x, 1.0}, {x, -1.0}}), Error);

  Superposition single = make_superposition({{x, 2.0}});
  CHECK(std::abs(single.amplitude(x) - 1.0) < 1e-15);
}

TEST_CASE("apply_F maps the worked xor superposition") {
  Rule rule = load_rule("xor");
  Config x;  // all-quiescent
  Config y = cfg(rule, "0|111111111111");
  Superposition phi = make_superposition({{x, 1.0}, {y, 1.0}});
  FlaggedState out = apply_F(rule, phi);
  CHECK_FALSE(out.non_isometric);
  CHECK(std::abs(out.state.amplitude(Config{}) - kInvSqrt2) < 1e-15);
  CHECK(std::abs(out.state.amplitude(cfg(rule, "-1|1000000000001")) - kInvSqrt2) < 1e-15);
  CHECK(out.state.terms() == 2);

  Rule id = load_rule("identity");
  FlaggedState same = apply_F(id, phi);
  CHECK(same.state.distance(phi) < 1e-15);
}

TEST_CASE("apply_F flags collisions and lets the norm grow") {
  Rule rule = load_rule("and");  // a lone 1 and the vacuum share an image
  Config a = cfg(rule, "0|1");
  Config b = cfg(rule, "0|");
  REQUIRE(step(rule, a) == step(rule, b));
  Superposition phi = make_superposition({{a, 1.0}, {b, 1.0}});
  FlaggedState out = apply_F(rule, phi);
  CHECK(out.non_isometric);
  CHECK(out.state.terms() == 1);
  CHECK(std::abs(out.state.norm() - std::sqrt(2.0)) < 1e-12);
}

TEST_CASE("apply_F_dagger inverts on images and annihilates non-images") {
  Rule rule = load_rule("xor");
  Superposition image = make_superposition({{cfg(rule, "-1|1000000000001"), 1.0}});
  Superposition back = apply_F_dagger(rule, image);
  CHECK(std::abs(back.amplitude(cfg(rule, "0|111111111111")) - 1.0) < 1e-15);
  CHECK(back.terms() == 1);

  Superposition lonely = make_superposition({{cfg(rule, "0|1"), 1.0}});
  CHECK(apply_F_dagger(rule, lonely).zero());

  Rule id = load_rule("identity");
  Superposition s = make_superposition({{cfg(id, "0|101"), 0.6}, {cfg(id, "2|1"), 0.8}});
  CHECK(apply_F_dagger(id, s).distance(s) < 1e-15);

  // Non-open rules need an explicit halo.
  Rule nonopen = load_rule("and");
  CHECK_THROWS_AS((void)apply_F_dagger(nonopen, lonely), Error);
  (void)apply_F_dagger(nonopen, lonely, 4);  // explicit halo is accepted
}

TEST_CASE("explicit halo reproduces brute-force preimage sums on a non-open rule") {
  oracle::SearchSpace space;
  space.neighborhood = {0, 1, 2};
  oracle::RulePredicate pred;
  pred.injective_finite = true;
  pred.open = false;
  Rule rule = oracle::search_rules(space, pred).front();

  std::mt19937_64 rng(61);
  for (int i = 0; i < 20; ++i) {
    Config c = random_config(rng, rule.alphabet, 5, 3);
    Superposition s;
    s.add(c, 1.0);
    // A halo past the single-diagram vertex count is complete for an
    // injective rule; the brute enumeration bounds support length instead.
    Superposition back = apply_F_dagger(rule, s, 8);
    auto brute = oracle::brute_preimages(rule, c, c.length() + 10);
    CHECK(back.terms() == brute.size());
    for (const Config& u : brute) CHECK(std::abs(back.amplitude(u) - 1.0) < 1e-15);
  }
}

TEST_CASE("pure density entries and trace") {
  Rule rule = load_rule("xor");
  Config x = cfg(rule, "0|1"), y = cfg(rule, "3|11");

  DensityOp rho = pure_density(make_superposition({{x, 1.0}}));
  CHECK(rho.entries().size() == 1);
  CHECK(std::abs(rho.entry(x, x) - 1.0) < 1e-15);

  DensityOp mix = pure_density(make_superposition({{x, 1.0}, {y, 1.0}}));
  CHECK(mix.entries().size() == 4);
  for (const auto& [key, amp] : mix.entries()) CHECK(std::abs(std::abs(amp) - 0.5) < 1e-15);
  CHECK(std::abs(mix.trace() - 1.0) < 1e-15);

  Superposition unnormalized;
  unnormalized.add(x, 2.0);
  CHECK_THROWS_AS((void)pure_density(unnormalized), Error);
}

TEST_CASE("evolve conjugates pure states and preserves trace for injective rules") {
  Rule rule = load_rule("xor");
  Config x;  // all-quiescent
  Config y = cfg(rule, "0|111111111111");

  DensityOp pure = pure_density(make_superposition({{x, 1.0}}));
  FlaggedDensity out = evolve(rule, pure);
  CHECK_FALSE(out.non_isometric);
  CHECK(std::abs(out.op.entry(Config{}, Config{}) - 1.0) < 1e-15);

  // rho_pm evolve to the pure densities of (|F x> pm |F y>)/sqrt(2).
  for (double sign : {1.0, -1.0}) {
    DensityOp rho = pure_density(make_superposition({{x, 1.0}, {y, sign}}));
    DensityOp evolved = evolve(rule, rho).op;
    DensityOp expected = pure_density(
        make_superposition({{step(rule, x), 1.0}, {step(rule, y), sign}}));
    for (const auto& [key, amp] : expected.entries())
      CHECK(std::abs(evolved.entry(key.first, key.second) - amp) < 1e-12);
    CHECK(evolved.entries().size() == expected.entries().size());
  }

  std::mt19937_64 rng(13);
  for (int i = 0; i < 100; ++i) {
    DensityOp rho = pure_density(random_superposition(rng, rule.alphabet, 5));
    CHECK(std::abs(evolve(rule, rho).op.trace() - 1.0) < 1e-12);
  }
}

TEST_CASE("reduce: projectors, the witness reductions, nesting") {
  Rule rule = load_rule("xor");
  const Alphabet& ab = rule.alphabet;
  Config x;  // all-quiescent
  Config y = cfg(rule, "0|111111111111");

  // Basis state reduces to a rank-1 projector onto its restriction.
  Region r = Region::of({0, 5});
  ReducedMatrix proj = reduce(pure_density(make_superposition({{y, 1.0}})), r, ab);
  CHECK(std::abs(proj.mat.trace().real() - 1.0) < 1e-15);
  const std::int64_t idx = word_index(restrict_config(y, r, ab.quiescent), ab.size());
  CHECK(std::abs(proj.mat(idx, idx) - 1.0) < 1e-15);
  CHECK(proj.mat.cwiseAbs().sum() == doctest::Approx(1.0));

  // The two witness states reduce identically on A+N: x and y differ outside.
  Region an = region_union(interval(-4, 2), interval(5, 11));
  SparseReduction plus = reduce_sparse(
      pure_density(make_superposition({{x, 1.0}, {y, 1.0}})), an, ab);
  SparseReduction minus = reduce_sparse(
      pure_density(make_superposition({{x, 1.0}, {y, -1.0}})), an, ab);
  CHECK(plus == minus);
  CHECK(reduction_residual(pure_density(make_superposition({{x, 1.0}, {y, 1.0}})),
                           pure_density(make_superposition({{x, 1.0}, {y, -1.0}})), an,
                           ab) == 0.0);

  // Nested reduction: reducing to A u B then restricting to A equals
  // reducing to A directly.
  std::mt19937_64 rng(23);
  Region big = Region::of({-1, 0, 2});
  Region small = Region::of({-1, 2});
  for (int i = 0; i < 100; ++i) {
    DensityOp rho = pure_density(random_superposition(rng, ab, 3));
    ReducedMatrix direct = reduce(rho, small, ab);
    ReducedMatrix nested = restrict_to(reduce(rho, big, ab), small, ab);
    CHECK((direct.mat - nested.mat).cwiseAbs().maxCoeff() < 1e-12);
  }

  // The dimension cap is enforced.
  CHECK_THROWS_AS((void)reduce(pure_density(make_superposition({{x, 1.0}})), interval(0, 12), ab),
                  Error);
}

TEST_CASE("trace distance: coincidence, orthogonality, the evolved witness") {
  Rule rule = load_rule("xor");
  const Alphabet& ab = rule.alphabet;
  Config x;
  Config y = cfg(rule, "0|111111111111");

  Region r = Region::of({0, 1});
  ReducedMatrix m = reduce(pure_density(make_superposition({{y, 1.0}})), r, ab);
  CHECK(trace_distance(m, m) == 0.0);

  ReducedMatrix m2 = reduce(pure_density(make_superposition({{x, 1.0}})), r, ab);
  CHECK(trace_distance(m, m2) == doctest::Approx(1.0));

  // sigma+ vs sigma- on Alice's two cells: distance 1 within 1e-9.
  Region alice = Region::of({-1, 11});
  Superposition psi_plus = apply_F(rule, make_superposition({{x, 1.0}, {y, 1.0}})).state;
  Superposition psi_minus = apply_F(rule, make_superposition({{x, 1.0}, {y, -1.0}})).state;
  ReducedMatrix sp = reduce(pure_density(psi_plus), alice, ab);
  ReducedMatrix sm = reduce(pure_density(psi_minus), alice, ab);
  CHECK(sp.mat.rows() == 4);
  CHECK(std::abs(trace_distance(sp, sm) - 1.0) < 1e-9);

  CHECK_THROWS_AS((void)trace_distance(sp, m), Error);  // region mismatch
}

TEST_CASE("inner product and isometry") {
  Rule rules[] = {load_rule("xor"), load_rule("identity"), load_rule("shift"),
                  load_rule("shift_neg")};
  Config x = cfg(rules[0], "0|1"), y = cfg(rules[0], "0|11");
  Superposition sx = make_superposition({{x, 1.0}});
  Superposition sy = make_superposition({{y, 1.0}});
  CHECK(inner_product(sx, sx) == Amplitude{1.0});
  CHECK(inner_product(sx, sy) == Amplitude{});

  std::mt19937_64 rng(31);
  for (const Rule& rule : rules)
    for (int i = 0; i < 100; ++i) {
      Superposition a = random_superposition(rng, rule.alphabet, 8);
      Superposition b = random_superposition(rng, rule.alphabet, 8);
      Amplitude before = inner_product(a, b);
      Amplitude after = inner_product(apply_F(rule, a).state, apply_F(rule, b).state);
      CHECK(std::abs(before - after) < 1e-12);
      // F~dagger F~ = Id on the same vectors.
      CHECK(apply_F_dagger(rule, apply_F(rule, a).state).distance(a) < 1e-12);
    }
}

TEST_CASE("quantum shift invariance, exactly") {
  std::mt19937_64 rng(37);
  for (const char* name : {"xor", "shift", "and"}) {
    Rule rule = load_rule(name);
    for (int i = 0; i < 50; ++i) {
      Superposition s = random_superposition(rng, rule.alphabet, 6);
      int k = static_cast<int>(rng() % 7) - 3;
      Superposition lhs = apply_F(rule, shift_superposition(s, k)).state;
      Superposition rhs = shift_superposition(apply_F(rule, s).state, k);
      CHECK(lhs.distance(rhs) == 0.0);
    }
  }
}

TEST_CASE("random states stay hermitian, unit-trace, positive under reduction") {
  Rule rule = load_rule("xor");
  const Alphabet& ab = rule.alphabet;
  std::mt19937_64 rng(41);
  for (int i = 0; i < 100; ++i) {
    DensityOp rho = pure_density(random_superposition(rng, ab, 3));
    if (i % 3 == 0) {
      DensityOp other = pure_density(random_superposition(rng, ab, 3));
      rho = convex_mix({{0.5, rho}, {0.5, other}});
    }
    CHECK(std::abs(rho.trace() - 1.0) < 1e-9);
    CHECK(hermiticity_residual(rho) < 1e-9);
    CHECK(density_min_eigenvalue(rho) > -1e-9);

    Region r = Region::of({-1, 0, 1});
    ReducedMatrix red = reduce(rho, r, ab);
    CHECK(std::abs(red.mat.trace().real() - 1.0) < 1e-9);
    CHECK((red.mat - red.mat.adjoint()).cwiseAbs().maxCoeff() < 1e-9);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(red.mat, Eigen::EigenvaluesOnly);
    CHECK(solver.eigenvalues().minCoeff() > -1e-9);
  }
}
