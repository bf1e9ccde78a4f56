#pragma once

#include <map>
#include <string>
#include <vector>

#include "semiq/game.hpp"
#include "semiq/rng.hpp"

namespace semiq {

enum class ProtocolVariant { kOneWay, kTwoWay };

const char* to_string(ProtocolVariant v);

// One classical message of the protocol. Payloads are plain indices or
// outcome labels; the type cannot carry quantum state, which is the
// no-quantum-transmission guarantee.
struct Message {
  enum class Direction { kAliceToBob, kBobToAlice, kAliceToReferee, kBobToReferee };

  Direction direction;
  std::string kind;  // "setting_index", "outcome_x", "outcome_y"
  int payload;
  int bits;         // ceil(log2 of the alphabet size)
  double bit_cost;  // log2 of the alphabet size
};

const char* to_string(Message::Direction d);

struct Transcript {
  std::vector<Message> messages;

  // Alice → Bob classical cost in whole bits.
  int forward_bits() const;
  // Bob → Alice classical cost (two-way variant only).
  int backward_bits() const;
};

// True iff every pair of ensemble states is orthogonal, i.e. a measurement
// can identify the received state with certainty.
bool discrimination_check(const InputEnsemble& ensemble);

// Steering-game protocol configuration. Construction requires Alice's input
// ensemble to be orthogonal (Bell games qualify: both sides orthogonal).
struct ProtocolConfig {
  GameSpec game;
  ProtocolVariant variant;

  ProtocolConfig(GameSpec g, ProtocolVariant v);
};

// Alice's side of the protocol. Holds only her input ensemble; the shared
// state and Bob's inputs never reach this object.
class AliceAgent {
 public:
  explicit AliceAgent(InputEnsemble inputs);

  // Measures the received input in the {pi^s} basis, returning the label of
  // the identified state.
  int measure_input(const DensityOperator& input, RandomStream& rng) const;

  const InputEnsemble& inputs() const { return inputs_; }

 private:
  InputEnsemble inputs_;
};

// Bob's side: the shared state prepared locally, both joint POVMs, and the
// (public) description of Alice's input set so pi^s can be re-prepared.
class BobAgent {
 public:
  BobAgent(DensityOperator shared_state, InputEnsemble alice_inputs, Povm alice_povm,
           Povm bob_povm, int dim_a, int dim_b);

  // Joint outcome distribution over (x, y), row-major, for Alice's announced
  // label and the referee state omega received by Bob.
  std::vector<double> outcome_distribution(int s_label, const DensityOperator& omega) const;

  std::pair<int, int> measure(int s_label, const DensityOperator& omega, RandomStream& rng) const;

  const std::vector<int>& x_labels() const { return alice_povm_.outcome_labels(); }
  const std::vector<int>& y_labels() const { return bob_povm_.outcome_labels(); }

 private:
  DensityOperator shared_state_;
  InputEnsemble alice_inputs_;
  Povm alice_povm_;
  Povm bob_povm_;
  std::vector<ComplexOperator> joint_effects_;  // A^x ⊗ B^y, (x,y) row-major
};

struct RoundResult {
  int x;
  int y;
  Transcript transcript;
};

// Runs the protocol agents for repeated rounds. Per-(s,t) outcome
// distributions are memoized, so bulk sampling stays cheap.
class LoccSimulator {
 public:
  explicit LoccSimulator(ProtocolConfig config);

  RoundResult run_round(int s_label, int t_label, RandomStream& rng);

  // One full round with (s,t) drawn from the prior.
  RoundResult run_referee_round(const class SettingPrior& prior, RandomStream& rng);

  // Exact table along the protocol path: Alice's measurement statistics
  // composed with Bob's joint measurement.
  CorrelationTable exact_table() const;

  // Frequency table from n rounds per setting pair, one substream per pair.
  CorrelationTable empirical_table(long n_per_setting, RandomStream& rng, int threads = 1);

  const ProtocolConfig& config() const { return config_; }

  // Communication cost per round, in whole bits.
  int forward_bits_per_round() const;
  int backward_bits_per_round() const;

 private:
  const std::vector<double>& cached_distribution(std::size_t si, std::size_t ti);

  ProtocolConfig config_;
  AliceAgent alice_;
  BobAgent bob_;
  std::map<std::pair<std::size_t, std::size_t>, std::vector<double>> dist_cache_;
};

// Single-shot convenience wrappers.
RoundResult run_protocol(const ProtocolConfig& config, int s_label, int t_label,
                         RandomStream& rng);
CorrelationTable simulated_table(const ProtocolConfig& config);

// Built-in steering game: Alice receives |0><0| / |1><1| (labels 1, 2), Bob
// the tetrahedron ensemble; singlet shared state and Bell-projection POVMs.
GameSpec steering_demo_game();

}  // namespace semiq
