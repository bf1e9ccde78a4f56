#pragma once

#include <string>
#include <vector>

#include "semiq/operators.hpp"

namespace semiq {

// Referee input ensemble: density operators on a common C^d, indexed by
// integer labels.
class InputEnsemble {
 public:
  InputEnsemble(std::vector<DensityOperator> states, std::vector<int> labels);

  std::size_t size() const { return states_.size(); }
  Eigen::Index dim() const { return states_.front().dim(); }
  const std::vector<DensityOperator>& states() const { return states_; }
  const std::vector<int>& labels() const { return labels_; }
  const DensityOperator& state(std::size_t i) const { return states_[i]; }
  const DensityOperator& state_for_label(int label) const;
  std::size_t index_of_label(int label) const;

  // True iff the states span the d^2-dimensional operator space: the Gram
  // matrix [Tr(rho_i rho_j)] has rank d^2 (singular values > 1e-10).
  bool spans_operator_space(double tol = 1e-10) const;
  bool pairwise_orthogonal(double tol = 1e-10) const;
  // max_{i != j} Tr(rho_i rho_j); 0 for a single-state ensemble.
  double max_pairwise_overlap() const;

 private:
  std::vector<DensityOperator> states_;
  std::vector<int> labels_;
};

// The 5-tuple defining a semi-quantum game: shared state on C^{dA} ⊗ C^{dB},
// input ensembles on C^{dA} / C^{dB}, and joint POVMs on (A',A) and (B,B').
class GameSpec {
 public:
  GameSpec(DensityOperator shared_state, InputEnsemble alice_inputs, InputEnsemble bob_inputs,
           Povm alice_povm, Povm bob_povm);

  const DensityOperator& shared_state() const { return shared_state_; }
  const InputEnsemble& alice_inputs() const { return alice_inputs_; }
  const InputEnsemble& bob_inputs() const { return bob_inputs_; }
  const Povm& alice_povm() const { return alice_povm_; }
  const Povm& bob_povm() const { return bob_povm_; }
  int dim_a() const { return dim_a_; }
  int dim_b() const { return dim_b_; }
  const std::vector<int>& x_labels() const { return alice_povm_.outcome_labels(); }
  const std::vector<int>& y_labels() const { return bob_povm_.outcome_labels(); }
  const std::vector<int>& s_labels() const { return alice_inputs_.labels(); }
  const std::vector<int>& t_labels() const { return bob_inputs_.labels(); }

 private:
  DensityOperator shared_state_;
  InputEnsemble alice_inputs_;
  InputEnsemble bob_inputs_;
  Povm alice_povm_;
  Povm bob_povm_;
  int dim_a_;
  int dim_b_;
};

// p(x,y|s,t) over finite label sets, normalized per (s,t) within 1e-10.
class CorrelationTable {
 public:
  // values laid out as [s][t][x][y], row-major.
  CorrelationTable(std::vector<int> x_labels, std::vector<int> y_labels,
                   std::vector<int> s_labels, std::vector<int> t_labels,
                   std::vector<double> values);

  const std::vector<int>& x_labels() const { return x_labels_; }
  const std::vector<int>& y_labels() const { return y_labels_; }
  const std::vector<int>& s_labels() const { return s_labels_; }
  const std::vector<int>& t_labels() const { return t_labels_; }
  const std::vector<double>& values() const { return values_; }

  double at_index(std::size_t xi, std::size_t yi, std::size_t si, std::size_t ti) const;
  double at(int x, int y, int s, int t) const;

  std::size_t num_x() const { return x_labels_.size(); }
  std::size_t num_y() const { return y_labels_.size(); }
  std::size_t num_s() const { return s_labels_.size(); }
  std::size_t num_t() const { return t_labels_.size(); }

  // Largest entrywise |difference|; label sets must match.
  double max_abs_difference(const CorrelationTable& other) const;

 private:
  std::vector<int> x_labels_, y_labels_, s_labels_, t_labels_;
  std::vector<double> values_;
};

// Single-party conditional p(out|s,t).
struct MarginalTable {
  std::vector<int> out_labels, s_labels, t_labels;
  std::vector<double> values;  // [s][t][out]

  double at_index(std::size_t oi, std::size_t si, std::size_t ti) const {
    return values[(si * t_labels.size() + ti) * out_labels.size() + oi];
  }
};

enum class Scenario { kBell, kSteering, kSemiQuantum };

const char* to_string(Scenario s);

// p(x,y|s,t) = Tr[(A^x ⊗ B^y)(tau^s ⊗ rho_AB ⊗ omega^t)] in the canonical
// factor order A', A, B, B'.
CorrelationTable correlation(const GameSpec& game);

// Singlet shared state, tetrahedron input ensembles on both sides
// (labels 1..4), Bell-projection POVMs.
GameSpec tetrahedron_game();

// The four Bloch vectors of the regular tetrahedron used by
// tetrahedron_game, in label order 1..4.
std::vector<BlochVector> tetrahedron_bloch_vectors();

// Bell if both ensembles are pairwise orthogonal, steering if exactly
// Alice's is, semi-quantum otherwise. Overlaps in (1e-10, 1e-6) append a
// warning (near-orthogonal ensemble classified as non-orthogonal).
Scenario classify(const GameSpec& game, std::vector<std::string>* warnings = nullptr);

MarginalTable alice_marginal(const CorrelationTable& table);
MarginalTable bob_marginal(const CorrelationTable& table);

}  // namespace semiq
