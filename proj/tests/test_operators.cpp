#include "semiq/operators.hpp"

#include <doctest.h>

#include "test_util.hpp"

using namespace semiq;

TEST_CASE("tensor of identities and basis projectors") {
  const ComplexOperator i2 = ComplexOperator::identity(2);
  const ComplexOperator i4 = tensor(i2, i2);
  CHECK((i4.matrix() - Matrix::Identity(4, 4)).cwiseAbs().maxCoeff() == 0.0);
  CHECK(i4.subsystem_dims() == std::vector<int>{2, 2});

  Matrix p0(2, 2), p1(2, 2);
  p0 << 1, 0, 0, 0;
  p1 << 0, 0, 0, 1;
  const ComplexOperator prod = tensor(ComplexOperator(p0), ComplexOperator(p1));
  Matrix expected = Matrix::Zero(4, 4);
  expected(1, 1) = 1.0;
  CHECK((prod.matrix() - expected).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("sigma_x tensor sigma_x maps |00> to |11>") {
  const ComplexOperator xx = tensor(ComplexOperator::pauli(1), ComplexOperator::pauli(1));
  const Ket zz = tensor(Ket::basis(2, 0), Ket::basis(2, 0));
  const CVector mapped = xx.matrix() * zz.amplitudes();
  const Ket ones = tensor(Ket::basis(2, 1), Ket::basis(2, 1));
  CHECK((mapped - ones.amplitudes()).cwiseAbs().maxCoeff() == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("tensor dimension law and kron oracle on random inputs") {
  auto rng = testutil::make_rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    std::uniform_int_distribution<int> d(1, 4);
    const int r1 = d(rng), c1 = d(rng), r2 = d(rng), c2 = d(rng);
    const Matrix a = testutil::random_complex_matrix(r1, c1, rng);
    const Matrix b = testutil::random_complex_matrix(r2, c2, rng);
    const ComplexOperator t = tensor(ComplexOperator(a), ComplexOperator(b));
    CHECK(t.rows() == r1 * r2);
    CHECK(t.cols() == c1 * c2);
    CHECK((t.matrix() - testutil::kron_oracle(a, b)).cwiseAbs().maxCoeff() < 1e-14);
  }
}

TEST_CASE("max_entangled") {
  const Ket d1 = max_entangled(1);
  CHECK(d1.dim() == 1);
  CHECK(std::abs(d1.amplitude(0) - Complex(1, 0)) < 1e-15);

  const Ket d2 = max_entangled(2);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(d2.amplitude(0) - Complex(inv_sqrt2, 0)) < 1e-15);
  CHECK(std::abs(d2.amplitude(3) - Complex(inv_sqrt2, 0)) < 1e-15);
  CHECK(std::abs(d2.amplitude(1)) == 0.0);
  CHECK(std::abs(d2.amplitude(2)) == 0.0);

  const Ket d3 = max_entangled(3);
  const double inv_sqrt3 = 1.0 / std::sqrt(3.0);
  for (int k : {0, 4, 8}) CHECK(std::abs(d3.amplitude(k) - Complex(inv_sqrt3, 0)) < 1e-15);
  for (int k : {1, 2, 3, 5, 6, 7}) CHECK(std::abs(d3.amplitude(k)) == 0.0);

  CHECK_THROWS_AS(max_entangled(0), ValidationError);
}

TEST_CASE("singlet reduced states and orthogonality") {
  const DensityOperator rho(projector(singlet()).with_subsystem_dims({2, 2}));
  for (int keep : {0, 1}) {
    const DensityOperator reduced = partial_trace(rho, {keep});
    CHECK((reduced.matrix() - 0.5 * Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-15);
  }
  CHECK(overlap(max_entangled(2), singlet()) < 1e-30);
}

TEST_CASE("singlet is anticorrelated along every axis") {
  // <psi-| (a.sigma ⊗ a.sigma) |psi-> = -1 for any unit a; checked by
  // explicit 4x4 sandwiching.
  auto rng = testutil::make_rng(5);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<std::array<double, 3>> axes = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  std::array<double, 3> random_axis{normal(rng), normal(rng), normal(rng)};
  const double n = std::sqrt(random_axis[0] * random_axis[0] + random_axis[1] * random_axis[1] +
                             random_axis[2] * random_axis[2]);
  for (auto& c : random_axis) c /= n;
  axes.push_back(random_axis);

  for (const auto& a : axes) {
    Matrix dir = a[0] * ComplexOperator::pauli(1).matrix() +
                 a[1] * ComplexOperator::pauli(2).matrix() +
                 a[2] * ComplexOperator::pauli(3).matrix();
    const Matrix joint = testutil::kron_oracle(dir, dir);
    CHECK(testutil::sandwich(singlet(), joint) == doctest::Approx(-1.0).epsilon(1e-12));
  }
}

TEST_CASE("bloch_to_density") {
  const DensityOperator north = bloch_to_density(BlochVector{{0, 0, 1}});
  Matrix expected(2, 2);
  expected << 1, 0, 0, 0;
  CHECK((north.matrix() - expected).cwiseAbs().maxCoeff() < 1e-15);

  const DensityOperator mixed = bloch_to_density(BlochVector{{0, 0, 0}});
  CHECK((mixed.matrix() - 0.5 * Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-15);

  // v1 = (1,1,1)/sqrt(3), expanded by hand.
  const double r = 1.0 / std::sqrt(3.0);
  const DensityOperator v1 = bloch_to_density(BlochVector{{r, r, r}});
  Matrix hand(2, 2);
  hand << Complex((1 + r) / 2, 0), Complex(r / 2, -r / 2), Complex(r / 2, r / 2),
      Complex((1 - r) / 2, 0);
  CHECK((v1.matrix() - hand).cwiseAbs().maxCoeff() < 1e-15);

  CHECK_THROWS_AS(bloch_to_density(BlochVector{{1.0, 1e-3, 0.0}}), ValidationError);
}

TEST_CASE("bloch_to_density yields valid states for random vectors") {
  auto rng = testutil::make_rng(7);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  int accepted = 0;
  while (accepted < 1000) {
    BlochVector v{{unit(rng), unit(rng), unit(rng)}};
    if (v.norm() > 1.0) continue;
    ++accepted;
    CHECK_NOTHROW(bloch_to_density(v));  // DensityOperator invariants run inside
  }
}

TEST_CASE("projector") {
  const ComplexOperator p0 = projector(Ket::basis(2, 0));
  Matrix expected(2, 2);
  expected << 1, 0, 0, 0;
  CHECK((p0.matrix() - expected).cwiseAbs().maxCoeff() < 1e-15);

  const ComplexOperator phi = projector(max_entangled(2));
  for (auto [i, j] : std::vector<std::pair<int, int>>{{0, 0}, {0, 3}, {3, 0}, {3, 3}}) {
    CHECK(std::abs(phi.matrix()(i, j) - Complex(0.5, 0)) < 1e-15);
  }
  CHECK(std::abs(phi.matrix()(1, 1)) == 0.0);

  auto rng = testutil::make_rng(13);
  for (int trial = 0; trial < 10; ++trial) {
    const ComplexOperator p = projector(testutil::random_ket(4, rng));
    CHECK(std::abs(p.trace() - Complex(1, 0)) < 1e-12);
  }
}

TEST_CASE("bell_projection_povm") {
  for (int d : {2, 3, 4}) {
    const Povm povm = bell_projection_povm(d);  // construction validates
    CHECK(povm.size() == 2);
    CHECK(povm.dim() == d * d);
  }
  const Povm p2 = bell_projection_povm(2);
  Matrix sum = p2.effect(0).matrix() + p2.effect(1).matrix();
  CHECK((sum - Matrix::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-15);
  CHECK(std::abs(p2.effect_for_label(1).trace() - Complex(1, 0)) < 1e-12);
  CHECK(std::abs(p2.effect_for_label(0).trace() - Complex(3, 0)) < 1e-12);
  CHECK(std::abs(bell_projection_povm(3).effect_for_label(0).trace() - Complex(8, 0)) < 1e-12);
}

TEST_CASE("POVM validation rejects a mutated effect set") {
  const Povm good = bell_projection_povm(2);
  Matrix mutated = good.effect(0).matrix();
  mutated(0, 0) += 1e-6;
  std::vector<ComplexOperator> effects{ComplexOperator(mutated), good.effect(1)};
  CHECK_THROWS_AS(Povm(std::move(effects), std::vector<int>{0, 1}), ValidationError);
}

TEST_CASE("born basics") {
  Matrix p0(2, 2);
  p0 << 1, 0, 0, 0;
  const DensityOperator mixed = bloch_to_density(BlochVector{{0, 0, 0}});
  CHECK(born(mixed, ComplexOperator(p0)) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(born(mixed, ComplexOperator::identity(2)) == doctest::Approx(1.0).epsilon(1e-14));

  auto rng = testutil::make_rng(17);
  for (int trial = 0; trial < 10; ++trial) {
    const DensityOperator rho = testutil::random_density(3, rng);
    CHECK(born(rho, ComplexOperator::identity(3)) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("transpose identity against an independent oracle") {
  // <phi+|(A ⊗ B)|phi+> = Tr[A^T B]/2, both sides computed with explicit
  // loops rather than the library's trace path.
  auto rng = testutil::make_rng(19);
  const DensityOperator phi_state(projector(max_entangled(2)));
  for (int trial = 0; trial < 100; ++trial) {
    const Matrix a = testutil::random_hermitian(2, rng);
    const Matrix b = testutil::random_hermitian(2, rng);
    const double via_born =
        born(phi_state, tensor(ComplexOperator(a), ComplexOperator(b)));
    const double via_sandwich = testutil::sandwich(max_entangled(2), testutil::kron_oracle(a, b));
    Complex tr = 0.0;
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) tr += a(j, i) * b(j, i);
    }
    const double rhs = tr.real() / 2.0;
    CHECK(std::abs(via_sandwich - rhs) < 1e-10);
    CHECK(std::abs(via_born - rhs) < 1e-10);
  }
}

TEST_CASE("born is linear and monotone in the effect") {
  auto rng = testutil::make_rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    const DensityOperator rho = testutil::random_density(2, rng);
    const Matrix e = testutil::random_hermitian(2, rng);
    const Matrix f = testutil::random_hermitian(2, rng);
    std::uniform_real_distribution<double> coeff(0.0, 2.0);
    const double alpha = coeff(rng), beta = coeff(rng);
    const double lhs = born(rho, ComplexOperator(alpha * e + beta * f));
    const double rhs = alpha * born(rho, ComplexOperator(e)) + beta * born(rho, ComplexOperator(f));
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));

    // E <= E + PSD implies born(rho, E) <= born(rho, E + PSD).
    const Matrix g = testutil::random_complex_matrix(2, 2, rng);
    const Matrix psd = g * g.adjoint();
    CHECK(born(rho, ComplexOperator(e)) <=
          born(rho, ComplexOperator(e + psd)) + 1e-10);
  }
}

TEST_CASE("born rejects effects with an imaginary trace contribution") {
  Matrix skew(2, 2);
  skew << 0, Complex(0, 1), Complex(0, 1), 0;  // not Hermitian
  const DensityOperator rho = bloch_to_density(BlochVector{{1, 0, 0}});
  CHECK_THROWS_AS(born(rho, ComplexOperator(skew)), NumericError);
}

TEST_CASE("partial_trace") {
  auto rng = testutil::make_rng(29);
  const DensityOperator rho = testutil::random_density(2, rng);
  const DensityOperator sigma = testutil::random_density(3, rng);
  const DensityOperator prod(tensor(rho.op(), sigma.op()));
  const DensityOperator back = partial_trace(prod, {0});
  CHECK((back.matrix() - rho.matrix()).cwiseAbs().maxCoeff() < 1e-13);
  const DensityOperator back_b = partial_trace(prod, {1});
  CHECK((back_b.matrix() - sigma.matrix()).cwiseAbs().maxCoeff() < 1e-13);

  for (int trial = 0; trial < 10; ++trial) {
    const DensityOperator big = testutil::random_density(6, rng).with_subsystem_dims({2, 3});
    const DensityOperator reduced = partial_trace(big, {1});
    CHECK(std::abs(reduced.matrix().trace() - Complex(1, 0)) < 1e-12);
  }

  CHECK_THROWS_AS(partial_trace(rho.with_subsystem_dims({2}), {2}), ValidationError);
  CHECK_THROWS_AS(partial_trace(rho.with_subsystem_dims({2}), {0, 0}), ValidationError);
}

TEST_CASE("permute_subsystems") {
  auto rng = testutil::make_rng(31);
  const DensityOperator rho = testutil::random_density(2, rng);
  const DensityOperator sigma = testutil::random_density(3, rng);
  const ComplexOperator prod = tensor(rho.op(), sigma.op());

  const ComplexOperator same = permute_subsystems(prod, {0, 1});
  CHECK((same.matrix() - prod.matrix()).cwiseAbs().maxCoeff() == 0.0);

  const ComplexOperator swapped = permute_subsystems(prod, {1, 0});
  const ComplexOperator expected = tensor(sigma.op(), rho.op());
  CHECK((swapped.matrix() - expected.matrix()).cwiseAbs().maxCoeff() < 1e-14);
  CHECK(swapped.subsystem_dims() == std::vector<int>{3, 2});

  const ComplexOperator twice = permute_subsystems(swapped, {1, 0});
  CHECK((twice.matrix() - prod.matrix()).cwiseAbs().maxCoeff() < 1e-14);

  CHECK_THROWS_AS(permute_subsystems(prod, {0, 0}), ValidationError);
  CHECK_THROWS_AS(permute_subsystems(prod, {0}), ValidationError);
}

TEST_CASE("ket and density validation") {
  CVector bad(2);
  bad << 1.0, 1.0;
  CHECK_THROWS_AS(Ket(bad), ValidationError);

  Matrix not_unit_trace = Matrix::Identity(2, 2);
  CHECK_THROWS_AS(DensityOperator(ComplexOperator(not_unit_trace)), ValidationError);

  Matrix negative(2, 2);
  negative << 1.5, 0, 0, -0.5;
  CHECK_THROWS_AS(DensityOperator(ComplexOperator(negative)), ValidationError);
}
