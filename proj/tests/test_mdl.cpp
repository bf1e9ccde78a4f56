#include "semiq/mdl.hpp"

#include <doctest.h>

#include "test_util.hpp"

using namespace semiq;

TEST_CASE("paper model distributions and responses") {
  const MdlModel model = paper_model();
  CHECK(model.num_lambda() == 4);
  CHECK_FALSE(model.setting_dependent_responses());

  // s = t row: {1/2, 1/4, 1/4, 0}; s != t row: {7/12, 1/6, 1/6, 1/12}.
  const auto& same = model.cond_dist(0, 0);
  CHECK(same[3] == 0.0);
  CHECK(same[0] == doctest::Approx(0.5).epsilon(1e-15));
  const auto& diff = model.cond_dist(0, 1);
  CHECK(diff[0] == doctest::Approx(7.0 / 12.0).epsilon(1e-15));

  CHECK(model.alice_outcome(1, 0) == 0);
  CHECK(model.bob_outcome(1, 0) == 1);
  CHECK(model.alice_outcome(2, 0) == 1);
  CHECK(model.bob_outcome(2, 0) == 0);

  CHECK(model.has_exact());
  CHECK(model.cond_dist_exact(0, 1)[3] == Rational(1, 12));
}

TEST_CASE("evaluate pushes the distribution through the responses") {
  const MdlModel model = paper_model();
  const auto same = evaluate(model, 1, 1);
  CHECK(same[0] == doctest::Approx(0.5).epsilon(1e-15));   // (0,0)
  CHECK(same[1] == doctest::Approx(0.25).epsilon(1e-15));  // (0,1)
  CHECK(same[2] == doctest::Approx(0.25).epsilon(1e-15));  // (1,0)
  CHECK(same[3] == 0.0);                                   // (1,1)

  const auto diff = evaluate(model, 1, 2);
  CHECK(diff[0] == doctest::Approx(7.0 / 12.0).epsilon(1e-15));
  CHECK(diff[1] == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
  CHECK(diff[2] == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
  CHECK(diff[3] == doctest::Approx(1.0 / 12.0).epsilon(1e-15));

  CHECK_THROWS_AS(evaluate(model, 99, 1), ValidationError);
}

TEST_CASE("single-atom model is deterministic") {
  const MdlModel model = MdlModel::with_constant_responses(
      {"only"}, {1}, {1}, {0, 1}, {0, 1}, {{1.0}}, {0}, {0});
  const auto dist = evaluate(model, 1, 1);
  CHECK(dist[0] == 1.0);
  CHECK(dist[1] == 0.0);
  CHECK(dist[2] == 0.0);
  CHECK(dist[3] == 0.0);
}

TEST_CASE("paper model table equals the quantum table") {
  const CorrelationTable model = model_table(paper_model());
  const CorrelationTable quantum = correlation(tetrahedron_game());
  CHECK(model.max_abs_difference(quantum) < 1e-12);
}

TEST_CASE("exact table matches the target fractions") {
  const auto exact = exact_model_table(paper_model());
  REQUIRE(exact.has_value());
  const MdlModel model = paper_model();
  auto value = [&](std::size_t xi, std::size_t yi, std::size_t si, std::size_t ti) {
    return (*exact)[((si * 4 + ti) * 2 + xi) * 2 + yi];
  };
  for (std::size_t si = 0; si < 4; ++si) {
    for (std::size_t ti = 0; ti < 4; ++ti) {
      const bool same = si == ti;
      CHECK(value(0, 0, si, ti) == (same ? Rational(1, 2) : Rational(7, 12)));
      CHECK(value(0, 1, si, ti) == (same ? Rational(1, 4) : Rational(1, 6)));
      CHECK(value(1, 0, si, ti) == (same ? Rational(1, 4) : Rational(1, 6)));
      CHECK(value(1, 1, si, ti) == (same ? Rational(0) : Rational(1, 12)));
    }
  }
  auto rng = testutil::make_rng(1);
  CHECK_FALSE(exact_model_table(testutil::random_model(rng)).has_value());
}

TEST_CASE("setting-independent distributions give a setting-independent table") {
  auto rng = testutil::make_rng(41);
  const auto dist = testutil::random_distribution(3, rng);
  std::vector<std::vector<double>> cond(4, dist);
  const MdlModel model = MdlModel::with_constant_responses(
      {"a", "b", "c"}, {1, 2}, {1, 2}, {0, 1}, {0, 1}, cond, {0, 1, 1}, {1, 0, 1});
  const CorrelationTable table = model_table(model);
  for (std::size_t xi = 0; xi < 2; ++xi) {
    for (std::size_t yi = 0; yi < 2; ++yi) {
      const double ref = table.at_index(xi, yi, 0, 0);
      for (std::size_t si = 0; si < 2; ++si) {
        for (std::size_t ti = 0; ti < 2; ++ti) {
          CHECK(table.at_index(xi, yi, si, ti) == doctest::Approx(ref).epsilon(1e-15));
        }
      }
    }
  }
}

TEST_CASE("sampling never hits the zero-mass atom") {
  const MdlModel model = paper_model();
  RandomStream rng(7);
  for (int i = 0; i < 20000; ++i) {
    const auto [x, y] = sample(model, 2, 2, rng);
    CHECK_FALSE((x == 1 && y == 1));
  }
}

TEST_CASE("sampling is reproducible for a fixed seed") {
  const MdlModel model = paper_model();
  std::vector<std::pair<int, int>> first, second;
  {
    RandomStream rng(99);
    for (int i = 0; i < 100; ++i) first.push_back(sample(model, 1, 3, rng));
  }
  {
    RandomStream rng(99);
    for (int i = 0; i < 100; ++i) second.push_back(sample(model, 1, 3, rng));
  }
  CHECK(first == second);
}

TEST_CASE("point-mass model always returns its atom") {
  const MdlModel model = MdlModel::with_constant_responses(
      {"a", "b"}, {1}, {1}, {0, 1}, {0, 1}, {{1.0, 0.0}}, {0, 1}, {0, 1});
  RandomStream rng(3);
  for (int i = 0; i < 100; ++i) {
    const auto [x, y] = sample(model, 1, 1, rng);
    CHECK(x == 0);
    CHECK(y == 0);
  }
}

TEST_CASE("empirical table converges to the exact table") {
  const MdlModel model = paper_model();
  const CorrelationTable exact = model_table(model);
  RandomStream rng(2024);
  // Binomial std at n = 1e4 is <= 0.005; 0.03 is a 6-sigma bound.
  const CorrelationTable emp = empirical_table(model, 10000, rng);
  CHECK(emp.max_abs_difference(exact) < 0.03);

  RandomStream rng1(55);
  const CorrelationTable one = empirical_table(model, 1, rng1);
  for (double v : one.values()) CHECK((v == 0.0 || v == 1.0));
}

TEST_CASE("threaded sampling matches single-threaded sampling") {
  const MdlModel model = paper_model();
  RandomStream rng_a(31415);
  RandomStream rng_b(31415);
  const CorrelationTable serial = empirical_table(model, 5000, rng_a, 1);
  const CorrelationTable parallel = empirical_table(model, 5000, rng_b, 4);
  CHECK(serial.max_abs_difference(parallel) == 0.0);
}

TEST_CASE("doubling the sample count shrinks the RMS error by about sqrt(2)") {
  const MdlModel model = paper_model();
  const CorrelationTable exact = model_table(model);
  auto rms_at = [&](long n, std::uint64_t seed) {
    RandomStream rng(seed);
    const CorrelationTable emp = empirical_table(model, n, rng);
    double acc = 0.0;
    for (std::size_t i = 0; i < emp.values().size(); ++i) {
      const double d = emp.values()[i] - exact.values()[i];
      acc += d * d;
    }
    return std::sqrt(acc / static_cast<double>(emp.values().size()));
  };
  double sum_small = 0.0, sum_big = 0.0;
  const int trials = 32;
  for (int k = 0; k < trials; ++k) {
    sum_small += rms_at(2000, 1000 + k);
    sum_big += rms_at(4000, 5000 + k);
  }
  const double ratio = sum_big / sum_small;
  CHECK(ratio > 0.55);
  CHECK(ratio < 0.9);
}

TEST_CASE("pushforward conserves probability on random models") {
  auto rng = testutil::make_rng(43);
  for (int trial = 0; trial < 50; ++trial) {
    const MdlModel model = testutil::random_model(rng);
    for (int s : model.s_labels()) {
      for (int t : model.t_labels()) {
        const auto dist = evaluate(model, s, t);
        double sum = 0.0;
        for (double v : dist) sum += v;
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("paper model distributions depend only on label equality") {
  const MdlModel model = paper_model();
  for (std::size_t si = 0; si < 4; ++si) {
    for (std::size_t ti = 0; ti < 4; ++ti) {
      const auto& expected = model.cond_dist(si == ti ? 0 : 0, si == ti ? 0 : 1);
      const auto& got = model.cond_dist(si, ti);
      for (std::size_t li = 0; li < 4; ++li) CHECK(got[li] == expected[li]);
    }
  }
}

TEST_CASE("model validation") {
  // Unnormalized distribution.
  CHECK_THROWS_AS(MdlModel::with_constant_responses({"a"}, {1}, {1}, {0, 1}, {0, 1}, {{0.9}},
                                                    {0}, {0}),
                  ValidationError);
  // Response label outside X.
  CHECK_THROWS_AS(MdlModel::with_constant_responses({"a"}, {1}, {1}, {0, 1}, {0, 1}, {{1.0}},
                                                    {7}, {0}),
                  ValidationError);
  // Wrong distribution count.
  CHECK_THROWS_AS(MdlModel::with_constant_responses({"a"}, {1, 2}, {1}, {0, 1}, {0, 1}, {{1.0}},
                                                    {0}, {0}),
                  ValidationError);
}
