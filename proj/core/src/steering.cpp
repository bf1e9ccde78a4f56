#include "semiq/steering.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "semiq/errors.hpp"
#include "semiq/metrics.hpp"

namespace semiq {

namespace {

int ceil_log2(std::size_t n) {
  int bits = 0;
  std::size_t cap = 1;
  while (cap < n) {
    cap <<= 1;
    ++bits;
  }
  return bits;
}

std::size_t sample_index(const std::vector<double>& dist, RandomStream& rng) {
  const double u = rng.next_unit();
  double cum = 0.0;
  for (std::size_t i = 0; i < dist.size(); ++i) {
    cum += dist[i];
    if (u < cum) return i;
  }
  for (std::size_t i = dist.size(); i-- > 0;) {
    if (dist[i] > 0.0) return i;
  }
  return dist.size() - 1;
}

}  // namespace

const char* to_string(ProtocolVariant v) {
  return v == ProtocolVariant::kOneWay ? "one_way" : "two_way";
}

const char* to_string(Message::Direction d) {
  switch (d) {
    case Message::Direction::kAliceToBob:
      return "alice_to_bob";
    case Message::Direction::kBobToAlice:
      return "bob_to_alice";
    case Message::Direction::kAliceToReferee:
      return "alice_to_referee";
    case Message::Direction::kBobToReferee:
      return "bob_to_referee";
  }
  return "unknown";
}

int Transcript::forward_bits() const {
  int total = 0;
  for (const auto& m : messages) {
    if (m.direction == Message::Direction::kAliceToBob) total += m.bits;
  }
  return total;
}

int Transcript::backward_bits() const {
  int total = 0;
  for (const auto& m : messages) {
    if (m.direction == Message::Direction::kBobToAlice) total += m.bits;
  }
  return total;
}

bool discrimination_check(const InputEnsemble& ensemble) {
  return ensemble.pairwise_orthogonal();
}

ProtocolConfig::ProtocolConfig(GameSpec g, ProtocolVariant v)
    : game(std::move(g)), variant(v) {
  if (!discrimination_check(game.alice_inputs())) {
    throw ValidationError(
        "LOCC protocol requires Alice's input states to be pairwise orthogonal: "
        "nonorthogonal inputs cannot be discriminated, so no LOCC simulation protocol exists "
        "for this game (max pairwise overlap " +
        std::to_string(game.alice_inputs().max_pairwise_overlap()) + ")");
  }
}

AliceAgent::AliceAgent(InputEnsemble inputs) : inputs_(std::move(inputs)) {
  if (!discrimination_check(inputs_)) {
    throw ValidationError("Alice's discrimination measurement needs orthogonal states");
  }
}

int AliceAgent::measure_input(const DensityOperator& input, RandomStream& rng) const {
  // Von Neumann measurement in the {pi^s} basis: outcome probabilities are
  // Tr[pi^k rho] / Tr[pi^k pi^k] for rank-deficient effects; for orthogonal
  // pure or full-support states Tr[pi^k rho] suffices since the inputs come
  // from the ensemble itself.
  std::vector<double> probs(inputs_.size(), 0.0);
  double total = 0.0;
  for (std::size_t k = 0; k < inputs_.size(); ++k) {
    const double p = std::max(0.0, expectation(input, inputs_.state(k).op()));
    probs[k] = p;
    total += p;
  }
  if (total <= 1e-12) {
    throw NumericError("received input has no support on the discrimination basis");
  }
  for (auto& p : probs) p /= total;
  return inputs_.labels()[sample_index(probs, rng)];
}

BobAgent::BobAgent(DensityOperator shared_state, InputEnsemble alice_inputs, Povm alice_povm,
                   Povm bob_povm, int dim_a, int dim_b)
    : shared_state_(shared_state.with_subsystem_dims({dim_a, dim_b})),
      alice_inputs_(std::move(alice_inputs)),
      alice_povm_(alice_povm.with_subsystem_dims({dim_a, dim_a})),
      bob_povm_(bob_povm.with_subsystem_dims({dim_b, dim_b})) {
  joint_effects_.reserve(alice_povm_.size() * bob_povm_.size());
  for (std::size_t xi = 0; xi < alice_povm_.size(); ++xi) {
    for (std::size_t yi = 0; yi < bob_povm_.size(); ++yi) {
      joint_effects_.push_back(tensor(alice_povm_.effect(xi), bob_povm_.effect(yi)));
    }
  }
}

std::vector<double> BobAgent::outcome_distribution(int s_label,
                                                   const DensityOperator& omega) const {
  // Steps (IV)-(V): prepare pi^s on the ancilla, assemble pi^s ⊗ rho_AB ⊗
  // omega locally, and evaluate both POVMs jointly.
  const DensityOperator& pi_s = alice_inputs_.state_for_label(s_label);
  const DensityOperator total(tensor(tensor(pi_s.op(), shared_state_.op()), omega.op()));
  std::vector<double> dist(joint_effects_.size());
  double sum = 0.0;
  for (std::size_t k = 0; k < joint_effects_.size(); ++k) {
    dist[k] = born(total, joint_effects_[k]);
    sum += dist[k];
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw NumericError("joint outcome distribution not normalized: sum " + std::to_string(sum));
  }
  for (auto& p : dist) p /= sum;
  return dist;
}

std::pair<int, int> BobAgent::measure(int s_label, const DensityOperator& omega,
                                      RandomStream& rng) const {
  const auto dist = outcome_distribution(s_label, omega);
  const std::size_t k = sample_index(dist, rng);
  return {x_labels()[k / y_labels().size()], y_labels()[k % y_labels().size()]};
}

LoccSimulator::LoccSimulator(ProtocolConfig config)
    : config_(std::move(config)),
      alice_(config_.game.alice_inputs()),
      bob_(config_.game.shared_state(), config_.game.alice_inputs(), config_.game.alice_povm(),
           config_.game.bob_povm(), config_.game.dim_a(), config_.game.dim_b()) {}

int LoccSimulator::forward_bits_per_round() const {
  return ceil_log2(config_.game.s_labels().size());
}

int LoccSimulator::backward_bits_per_round() const {
  if (config_.variant == ProtocolVariant::kOneWay) return 0;
  return ceil_log2(config_.game.x_labels().size());
}

const std::vector<double>& LoccSimulator::cached_distribution(std::size_t si, std::size_t ti) {
  const auto key = std::make_pair(si, ti);
  auto it = dist_cache_.find(key);
  if (it == dist_cache_.end()) {
    const int s_label = config_.game.s_labels()[si];
    const auto& omega = config_.game.bob_inputs().state(ti);
    it = dist_cache_.emplace(key, bob_.outcome_distribution(s_label, omega)).first;
  }
  return it->second;
}

RoundResult LoccSimulator::run_round(int s_label, int t_label, RandomStream& rng) {
  const auto& game = config_.game;
  const std::size_t n_s = game.s_labels().size();
  const std::size_t n_x = game.x_labels().size();
  const std::size_t n_y = game.y_labels().size();

  Transcript transcript;

  // (II) Alice measures the referee's state in her orthogonal basis.
  const DensityOperator& referee_state = game.alice_inputs().state_for_label(s_label);
  const int announced = alice_.measure_input(referee_state, rng);

  // (III) Alice -> Bob: the recovered index.
  transcript.messages.push_back(Message{Message::Direction::kAliceToBob, "setting_index",
                                        announced, ceil_log2(n_s),
                                        std::log2(static_cast<double>(n_s))});

  // (IV)-(V) Bob prepares pi^announced and measures jointly with omega^t.
  const std::size_t si = game.alice_inputs().index_of_label(announced);
  const std::size_t ti = game.bob_inputs().index_of_label(t_label);
  const auto& dist = cached_distribution(si, ti);
  const std::size_t k = sample_index(dist, rng);
  const int x = game.x_labels()[k / n_y];
  const int y = game.y_labels()[k % n_y];

  if (config_.variant == ProtocolVariant::kTwoWay) {
    // (VI) Bob -> Alice: her outcome, so both parties report to the referee.
    transcript.messages.push_back(Message{Message::Direction::kBobToAlice, "outcome_x", x,
                                          ceil_log2(n_x),
                                          std::log2(static_cast<double>(n_x))});
    transcript.messages.push_back(Message{Message::Direction::kAliceToReferee, "outcome_x", x,
                                          ceil_log2(n_x),
                                          std::log2(static_cast<double>(n_x))});
    transcript.messages.push_back(Message{Message::Direction::kBobToReferee, "outcome_y", y,
                                          ceil_log2(n_y),
                                          std::log2(static_cast<double>(n_y))});
  } else {
    transcript.messages.push_back(Message{Message::Direction::kBobToReferee, "outcome_x", x,
                                          ceil_log2(n_x),
                                          std::log2(static_cast<double>(n_x))});
    transcript.messages.push_back(Message{Message::Direction::kBobToReferee, "outcome_y", y,
                                          ceil_log2(n_y),
                                          std::log2(static_cast<double>(n_y))});
  }

  return RoundResult{x, y, std::move(transcript)};
}

RoundResult LoccSimulator::run_referee_round(const SettingPrior& prior, RandomStream& rng) {
  const double u = rng.next_unit();
  double cum = 0.0;
  const auto& game = config_.game;
  for (std::size_t si = 0; si < game.s_labels().size(); ++si) {
    for (std::size_t ti = 0; ti < game.t_labels().size(); ++ti) {
      cum += prior.at_index(si, ti);
      if (u < cum) {
        return run_round(game.s_labels()[si], game.t_labels()[ti], rng);
      }
    }
  }
  return run_round(game.s_labels().back(), game.t_labels().back(), rng);
}

CorrelationTable LoccSimulator::exact_table() const {
  const auto& game = config_.game;
  const std::size_t n_s = game.s_labels().size();
  const std::size_t n_t = game.t_labels().size();
  const std::size_t n_x = game.x_labels().size();
  const std::size_t n_y = game.y_labels().size();

  // Alice's recovery statistics p(a|s) are a delta for orthogonal ensembles,
  // but the protocol path composes them explicitly.
  std::vector<std::vector<double>> recovery(n_s, std::vector<double>(n_s, 0.0));
  for (std::size_t si = 0; si < n_s; ++si) {
    const auto& input = game.alice_inputs().state(si);
    double total = 0.0;
    for (std::size_t ai = 0; ai < n_s; ++ai) {
      const double p = std::max(0.0, expectation(input, game.alice_inputs().state(ai).op()));
      recovery[si][ai] = p;
      total += p;
    }
    for (auto& p : recovery[si]) p /= total;
  }

  std::vector<double> values(n_x * n_y * n_s * n_t, 0.0);
  for (std::size_t si = 0; si < n_s; ++si) {
    for (std::size_t ti = 0; ti < n_t; ++ti) {
      for (std::size_t ai = 0; ai < n_s; ++ai) {
        if (recovery[si][ai] == 0.0) continue;
        const auto dist = bob_.outcome_distribution(game.s_labels()[ai],
                                                    game.bob_inputs().state(ti));
        for (std::size_t k = 0; k < dist.size(); ++k) {
          const std::size_t xi = k / n_y;
          const std::size_t yi = k % n_y;
          values[((si * n_t + ti) * n_x + xi) * n_y + yi] += recovery[si][ai] * dist[k];
        }
      }
    }
  }
  return CorrelationTable(game.x_labels(), game.y_labels(), game.s_labels(), game.t_labels(),
                          std::move(values));
}

CorrelationTable LoccSimulator::empirical_table(long n_per_setting, RandomStream& rng,
                                                int threads) {
  if (n_per_setting < 1) throw ValidationError("empirical_table requires n >= 1");
  const auto& game = config_.game;
  const std::size_t n_s = game.s_labels().size();
  const std::size_t n_t = game.t_labels().size();
  const std::size_t n_x = game.x_labels().size();
  const std::size_t n_y = game.y_labels().size();
  const std::size_t cells = n_s * n_t;

  // Warm the cache serially; worker threads then only read it.
  for (std::size_t si = 0; si < n_s; ++si) {
    for (std::size_t ti = 0; ti < n_t; ++ti) cached_distribution(si, ti);
  }

  std::vector<std::vector<long>> counts(cells, std::vector<long>(n_x * n_y, 0));
  auto run_cell = [&](std::size_t cell) {
    const std::size_t si = cell / n_t;
    const std::size_t ti = cell % n_t;
    RandomStream stream = rng.split(cell);
    const auto& dist = dist_cache_.at({si, ti});
    auto& bucket = counts[cell];
    for (long i = 0; i < n_per_setting; ++i) {
      // Alice's step: deterministic recovery for orthogonal inputs; the
      // announced index is si itself, which the cached key already encodes.
      bucket[sample_index(dist, stream)] += 1;
    }
  };

  if (threads <= 1 || cells == 1) {
    for (std::size_t cell = 0; cell < cells; ++cell) run_cell(cell);
  } else {
    std::vector<std::thread> pool;
    const std::size_t workers = std::min<std::size_t>(threads, cells);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w]() {
        for (std::size_t cell = w; cell < cells; cell += workers) run_cell(cell);
      });
    }
    for (auto& t : pool) t.join();
  }

  std::vector<double> values(cells * n_x * n_y);
  for (std::size_t cell = 0; cell < cells; ++cell) {
    for (std::size_t k = 0; k < counts[cell].size(); ++k) {
      values[cell * counts[cell].size() + k] =
          static_cast<double>(counts[cell][k]) / static_cast<double>(n_per_setting);
    }
  }
  return CorrelationTable(game.x_labels(), game.y_labels(), game.s_labels(), game.t_labels(),
                          std::move(values));
}

RoundResult run_protocol(const ProtocolConfig& config, int s_label, int t_label,
                         RandomStream& rng) {
  LoccSimulator sim(config);
  return sim.run_round(s_label, t_label, rng);
}

CorrelationTable simulated_table(const ProtocolConfig& config) {
  LoccSimulator sim(config);
  return sim.exact_table();
}

GameSpec steering_demo_game() {
  std::vector<DensityOperator> alice_states;
  alice_states.emplace_back(projector(Ket::basis(2, 0)));
  alice_states.emplace_back(projector(Ket::basis(2, 1)));
  InputEnsemble alice(std::move(alice_states), {1, 2});

  std::vector<DensityOperator> bob_states;
  for (const auto& v : tetrahedron_bloch_vectors()) bob_states.push_back(bloch_to_density(v));
  InputEnsemble bob(std::move(bob_states), {1, 2, 3, 4});

  DensityOperator shared(projector(singlet()).with_subsystem_dims({2, 2}));
  return GameSpec(std::move(shared), std::move(alice), std::move(bob), bell_projection_povm(2),
                  bell_projection_povm(2));
}

}  // namespace semiq
