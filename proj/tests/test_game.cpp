#include "semiq/game.hpp"

#include <doctest.h>

#include "test_util.hpp"

using namespace semiq;

namespace {

double eq4_value(int x, int y, bool same) {
  if (same) {
    if (x == 0 && y == 0) return 0.5;
    if (x == 1 && y == 1) return 0.0;
    return 0.25;
  }
  if (x == 0 && y == 0) return 7.0 / 12.0;
  if (x == 1 && y == 1) return 1.0 / 12.0;
  return 1.0 / 6.0;
}

}  // namespace

TEST_CASE("tetrahedron game reproduces the target correlations") {
  const CorrelationTable table = correlation(tetrahedron_game());
  for (int s = 1; s <= 4; ++s) {
    for (int t = 1; t <= 4; ++t) {
      for (int x : {0, 1}) {
        for (int y : {0, 1}) {
          CHECK(std::abs(table.at(x, y, s, t) - eq4_value(x, y, s == t)) < 1e-12);
        }
      }
    }
  }
}

TEST_CASE("maximally mixed shared state factorizes the Bell projections") {
  // Independent derivation via the transpose identity applied per side:
  // p(1,1|s,t) = Tr[Phi (tau ⊗ I/2)] Tr[Phi (I/2 ⊗ omega)] = 1/16.
  const GameSpec tetra = tetrahedron_game();
  DensityOperator mixed(
      ComplexOperator(0.25 * Matrix::Identity(4, 4), std::vector<int>{2, 2}));
  const GameSpec game(mixed, tetra.alice_inputs(), tetra.bob_inputs(), tetra.alice_povm(),
                      tetra.bob_povm());
  const CorrelationTable table = correlation(game);
  for (int s = 1; s <= 4; ++s) {
    for (int t = 1; t <= 4; ++t) {
      CHECK(table.at(1, 1, s, t) == doctest::Approx(1.0 / 16.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("tetrahedron ensemble properties") {
  const GameSpec game = tetrahedron_game();
  CHECK(game.alice_inputs().spans_operator_space());
  CHECK(game.bob_inputs().spans_operator_space());

  const auto& states = game.alice_inputs().states();
  for (std::size_t i = 0; i < states.size(); ++i) {
    // Purity: Tr(rho^2) = 1 for Bloch norm 1.
    const double purity =
        (states[i].matrix() * states[i].matrix()).trace().real();
    CHECK(purity == doctest::Approx(1.0).epsilon(1e-12));
    for (std::size_t j = i + 1; j < states.size(); ++j) {
      const double ov = (states[i].matrix() * states[j].matrix()).trace().real();
      CHECK(ov == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("classify distinguishes the three scenarios") {
  CHECK(classify(tetrahedron_game()) == Scenario::kSemiQuantum);

  std::vector<DensityOperator> basis_states;
  basis_states.emplace_back(projector(Ket::basis(2, 0)));
  basis_states.emplace_back(projector(Ket::basis(2, 1)));
  InputEnsemble basis(basis_states, {1, 2});

  const GameSpec tetra = tetrahedron_game();
  const GameSpec steering(tetra.shared_state(), basis, tetra.bob_inputs(), tetra.alice_povm(),
                          tetra.bob_povm());
  CHECK(classify(steering) == Scenario::kSteering);

  const GameSpec bell(tetra.shared_state(), basis, basis, tetra.alice_povm(), tetra.bob_povm());
  CHECK(classify(bell) == Scenario::kBell);
}

TEST_CASE("classify warns on nearly orthogonal ensembles") {
  // Overlap ~1e-8 sits in the warning band (1e-10, 1e-6).
  const double eps = 1e-4;
  CVector tilted(2);
  tilted << std::sqrt(1.0 - eps * eps), eps;
  std::vector<DensityOperator> states;
  states.emplace_back(projector(Ket::basis(2, 1)));
  states.emplace_back(projector(Ket(tilted)));
  InputEnsemble nearly(states, {1, 2});
  const GameSpec tetra = tetrahedron_game();
  const GameSpec game(tetra.shared_state(), nearly, tetra.bob_inputs(), tetra.alice_povm(),
                      tetra.bob_povm());
  std::vector<std::string> warnings;
  CHECK(classify(game, &warnings) == Scenario::kSemiQuantum);
  REQUIRE(warnings.size() == 1);
  CHECK(warnings[0].find("Alice") != std::string::npos);
}

TEST_CASE("alice marginal of the tetrahedron game is flat") {
  const CorrelationTable table = correlation(tetrahedron_game());
  const MarginalTable alice = alice_marginal(table);
  const MarginalTable bob = bob_marginal(table);
  for (std::size_t si = 0; si < 4; ++si) {
    for (std::size_t ti = 0; ti < 4; ++ti) {
      CHECK(alice.at_index(1, si, ti) == doctest::Approx(0.25).epsilon(1e-12));
      CHECK(bob.at_index(1, si, ti) == doctest::Approx(0.25).epsilon(1e-12));
      double sum = 0.0;
      for (std::size_t oi = 0; oi < 2; ++oi) sum += alice.at_index(oi, si, ti);
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("uniform table has a uniform marginal") {
  std::vector<double> values(16, 0.25);
  const CorrelationTable uniform({0, 1}, {0, 1}, {1, 2}, {1, 2}, values);
  const MarginalTable m = alice_marginal(uniform);
  for (double v : m.values) CHECK(v == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("random games satisfy normalization and no-signaling") {
  auto rng = testutil::make_rng(101);
  for (int trial = 0; trial < 50; ++trial) {
    const GameSpec game = testutil::random_game(rng);
    const CorrelationTable table = correlation(game);  // constructor checks normalization

    const MarginalTable alice = alice_marginal(table);
    const MarginalTable bob = bob_marginal(table);
    for (std::size_t oi = 0; oi < alice.out_labels.size(); ++oi) {
      for (std::size_t si = 0; si < table.num_s(); ++si) {
        for (std::size_t ti = 1; ti < table.num_t(); ++ti) {
          CHECK(std::abs(alice.at_index(oi, si, ti) - alice.at_index(oi, si, 0)) < 1e-10);
        }
      }
    }
    for (std::size_t oi = 0; oi < bob.out_labels.size(); ++oi) {
      for (std::size_t ti = 0; ti < table.num_t(); ++ti) {
        for (std::size_t si = 1; si < table.num_s(); ++si) {
          CHECK(std::abs(bob.at_index(oi, si, ti) - bob.at_index(oi, 0, ti)) < 1e-10);
        }
      }
    }
  }
}

TEST_CASE("tetrahedron table depends on settings only through equality") {
  const CorrelationTable table = correlation(tetrahedron_game());
  for (int x : {0, 1}) {
    for (int y : {0, 1}) {
      const double diag = table.at(x, y, 1, 1);
      const double off = table.at(x, y, 1, 2);
      for (int s = 1; s <= 4; ++s) {
        for (int t = 1; t <= 4; ++t) {
          CHECK(std::abs(table.at(x, y, s, t) - (s == t ? diag : off)) < 1e-12);
        }
      }
    }
  }
}

TEST_CASE("global phases on input kets leave the table unchanged") {
  auto rng = testutil::make_rng(103);
  std::vector<Ket> kets;
  for (int i = 0; i < 3; ++i) kets.push_back(testutil::random_ket(2, rng));

  auto make_game = [&](bool phased) {
    std::vector<DensityOperator> states;
    std::vector<int> labels;
    for (std::size_t i = 0; i < kets.size(); ++i) {
      CVector amps = kets[i].amplitudes();
      if (phased) amps *= std::exp(Complex(0.0, 0.7 + static_cast<double>(i)));
      states.emplace_back(projector(Ket(amps)));
      labels.push_back(static_cast<int>(i) + 1);
    }
    InputEnsemble ensemble(states, labels);
    DensityOperator shared(projector(singlet()).with_subsystem_dims({2, 2}));
    return GameSpec(std::move(shared), ensemble, ensemble, bell_projection_povm(2),
                    bell_projection_povm(2));
  };

  const CorrelationTable plain = correlation(make_game(false));
  const CorrelationTable phased = correlation(make_game(true));
  CHECK(plain.max_abs_difference(phased) < 1e-12);
}

TEST_CASE("game spec validation") {
  const GameSpec tetra = tetrahedron_game();
  // Shared state of the wrong dimension.
  DensityOperator wrong(ComplexOperator(Matrix::Identity(2, 2) * 0.5));
  CHECK_THROWS_AS(GameSpec(wrong, tetra.alice_inputs(), tetra.bob_inputs(), tetra.alice_povm(),
                           tetra.bob_povm()),
                  ValidationError);
  // POVM on the wrong space.
  CHECK_THROWS_AS(GameSpec(tetra.shared_state(), tetra.alice_inputs(), tetra.bob_inputs(),
                           bell_projection_povm(3), tetra.bob_povm()),
                  ValidationError);
}

TEST_CASE("correlation table validation") {
  std::vector<double> bad(16, 0.25);
  bad[0] = 0.3;  // breaks normalization
  CHECK_THROWS_AS(CorrelationTable({0, 1}, {0, 1}, {1, 2}, {1, 2}, bad), ValidationError);
}
