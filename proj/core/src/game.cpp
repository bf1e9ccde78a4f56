#include "semiq/game.hpp"

#include <algorithm>
#include <cmath>

namespace semiq {

namespace {

void check_distinct(const std::vector<int>& labels, const char* what) {
  std::vector<int> sorted = labels;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw ValidationError(std::string(what) + " labels must be distinct");
  }
}

double state_overlap(const DensityOperator& a, const DensityOperator& b) {
  Complex t = a.matrix().cwiseProduct(b.matrix().transpose()).sum();
  return t.real();
}

}  // namespace

InputEnsemble::InputEnsemble(std::vector<DensityOperator> states, std::vector<int> labels)
    : states_(std::move(states)), labels_(std::move(labels)) {
  if (states_.empty()) throw ValidationError("input ensemble must not be empty");
  if (states_.size() != labels_.size()) {
    throw ValidationError("input ensemble needs one label per state");
  }
  check_distinct(labels_, "input ensemble");
  const Eigen::Index d = states_.front().dim();
  for (const auto& s : states_) {
    if (s.dim() != d) throw ValidationError("input ensemble states must share one dimension");
  }
}

const DensityOperator& InputEnsemble::state_for_label(int label) const {
  return states_[index_of_label(label)];
}

std::size_t InputEnsemble::index_of_label(int label) const {
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i] == label) return i;
  }
  throw ValidationError("unknown input label " + std::to_string(label));
}

bool InputEnsemble::spans_operator_space(double tol) const {
  const std::size_t k = states_.size();
  const auto d2 = static_cast<std::size_t>(dim() * dim());
  if (k < d2) return false;
  Eigen::MatrixXd gram(k, k);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      gram(i, j) = state_overlap(states_[i], states_[j]);
    }
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(gram);
  const auto& sv = svd.singularValues();
  std::size_t rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > tol) ++rank;
  }
  return rank == d2;
}

bool InputEnsemble::pairwise_orthogonal(double tol) const {
  return max_pairwise_overlap() < tol;
}

double InputEnsemble::max_pairwise_overlap() const {
  double worst = 0.0;
  for (std::size_t i = 0; i < states_.size(); ++i) {
    for (std::size_t j = i + 1; j < states_.size(); ++j) {
      worst = std::max(worst, state_overlap(states_[i], states_[j]));
    }
  }
  return worst;
}

GameSpec::GameSpec(DensityOperator shared_state, InputEnsemble alice_inputs,
                   InputEnsemble bob_inputs, Povm alice_povm, Povm bob_povm)
    : shared_state_(std::move(shared_state)),
      alice_inputs_(std::move(alice_inputs)),
      bob_inputs_(std::move(bob_inputs)),
      alice_povm_(std::move(alice_povm)),
      bob_povm_(std::move(bob_povm)) {
  dim_a_ = static_cast<int>(alice_inputs_.dim());
  dim_b_ = static_cast<int>(bob_inputs_.dim());
  if (shared_state_.dim() != static_cast<Eigen::Index>(dim_a_) * dim_b_) {
    throw ValidationError("shared state dimension must equal dim_a * dim_b");
  }
  if (!shared_state_.subsystem_dims().empty() &&
      shared_state_.subsystem_dims() != std::vector<int>{dim_a_, dim_b_}) {
    throw ValidationError("shared state subsystem dims must be [dim_a, dim_b]");
  }
  if (shared_state_.subsystem_dims().empty()) {
    shared_state_ = shared_state_.with_subsystem_dims({dim_a_, dim_b_});
  }
  if (alice_povm_.dim() != static_cast<Eigen::Index>(dim_a_) * dim_a_) {
    throw ValidationError("Alice's POVM must act on C^{dA} ⊗ C^{dA}");
  }
  if (bob_povm_.dim() != static_cast<Eigen::Index>(dim_b_) * dim_b_) {
    throw ValidationError("Bob's POVM must act on C^{dB} ⊗ C^{dB}");
  }
}

CorrelationTable::CorrelationTable(std::vector<int> x_labels, std::vector<int> y_labels,
                                   std::vector<int> s_labels, std::vector<int> t_labels,
                                   std::vector<double> values)
    : x_labels_(std::move(x_labels)),
      y_labels_(std::move(y_labels)),
      s_labels_(std::move(s_labels)),
      t_labels_(std::move(t_labels)),
      values_(std::move(values)) {
  check_distinct(x_labels_, "x");
  check_distinct(y_labels_, "y");
  check_distinct(s_labels_, "s");
  check_distinct(t_labels_, "t");
  const std::size_t expected = num_x() * num_y() * num_s() * num_t();
  if (values_.size() != expected) {
    throw ValidationError("correlation table value count does not match label sets");
  }
  for (std::size_t si = 0; si < num_s(); ++si) {
    for (std::size_t ti = 0; ti < num_t(); ++ti) {
      double sum = 0.0;
      for (std::size_t xi = 0; xi < num_x(); ++xi) {
        for (std::size_t yi = 0; yi < num_y(); ++yi) {
          const double p = at_index(xi, yi, si, ti);
          if (!(p >= -1e-10 && p <= 1.0 + 1e-10)) {
            throw ValidationError("correlation table entry outside [0, 1]");
          }
          sum += p;
        }
      }
      if (std::abs(sum - 1.0) > 1e-10) {
        throw ValidationError("correlation table not normalized for setting pair (" +
                              std::to_string(s_labels_[si]) + "," + std::to_string(t_labels_[ti]) +
                              ")");
      }
    }
  }
}

double CorrelationTable::at_index(std::size_t xi, std::size_t yi, std::size_t si,
                                  std::size_t ti) const {
  return values_[((si * num_t() + ti) * num_x() + xi) * num_y() + yi];
}

namespace {

std::size_t label_index(const std::vector<int>& labels, int label, const char* what) {
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == label) return i;
  }
  throw ValidationError(std::string("unknown ") + what + " label " + std::to_string(label));
}

}  // namespace

double CorrelationTable::at(int x, int y, int s, int t) const {
  return at_index(label_index(x_labels_, x, "x"), label_index(y_labels_, y, "y"),
                  label_index(s_labels_, s, "s"), label_index(t_labels_, t, "t"));
}

double CorrelationTable::max_abs_difference(const CorrelationTable& other) const {
  if (x_labels_ != other.x_labels_ || y_labels_ != other.y_labels_ ||
      s_labels_ != other.s_labels_ || t_labels_ != other.t_labels_) {
    throw ValidationError("cannot compare tables with different label sets");
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < values_.size(); ++i) {
    worst = std::max(worst, std::abs(values_[i] - other.values_[i]));
  }
  return worst;
}

const char* to_string(Scenario s) {
  switch (s) {
    case Scenario::kBell:
      return "bell";
    case Scenario::kSteering:
      return "steering";
    case Scenario::kSemiQuantum:
      return "semi_quantum";
  }
  return "unknown";
}

CorrelationTable correlation(const GameSpec& game) {
  const auto& xs = game.x_labels();
  const auto& ys = game.y_labels();
  const auto& ss = game.s_labels();
  const auto& ts = game.t_labels();

  const Povm alice = game.alice_povm().with_subsystem_dims({game.dim_a(), game.dim_a()});
  const Povm bob = game.bob_povm().with_subsystem_dims({game.dim_b(), game.dim_b()});

  // Effects A^x ⊗ B^y are setting-independent; build them once.
  std::vector<ComplexOperator> effects;
  effects.reserve(xs.size() * ys.size());
  for (std::size_t xi = 0; xi < xs.size(); ++xi) {
    for (std::size_t yi = 0; yi < ys.size(); ++yi) {
      effects.push_back(tensor(alice.effect(xi), bob.effect(yi)));
    }
  }

  std::vector<double> values(xs.size() * ys.size() * ss.size() * ts.size());
  for (std::size_t si = 0; si < ss.size(); ++si) {
    const auto& tau = game.alice_inputs().state(si);
    for (std::size_t ti = 0; ti < ts.size(); ++ti) {
      const auto& omega = game.bob_inputs().state(ti);
      const DensityOperator total(
          tensor(tensor(tau.op(), game.shared_state().op()), omega.op()));
      for (std::size_t xi = 0; xi < xs.size(); ++xi) {
        for (std::size_t yi = 0; yi < ys.size(); ++yi) {
          values[((si * ts.size() + ti) * xs.size() + xi) * ys.size() + yi] =
              born(total, effects[xi * ys.size() + yi]);
        }
      }
    }
  }
  return CorrelationTable(xs, ys, ss, ts, std::move(values));
}

std::vector<BlochVector> tetrahedron_bloch_vectors() {
  const double r = 1.0 / std::sqrt(3.0);
  return {
      BlochVector{{r, r, r}},
      BlochVector{{r, -r, -r}},
      BlochVector{{-r, r, -r}},
      BlochVector{{-r, -r, r}},
  };
}

GameSpec tetrahedron_game() {
  std::vector<DensityOperator> states;
  for (const auto& v : tetrahedron_bloch_vectors()) states.push_back(bloch_to_density(v));
  InputEnsemble tetra(states, {1, 2, 3, 4});
  DensityOperator shared(projector(singlet()).with_subsystem_dims({2, 2}));
  return GameSpec(std::move(shared), tetra, tetra, bell_projection_povm(2),
                  bell_projection_povm(2));
}

namespace {

bool orthogonal_with_warning(const InputEnsemble& ensemble, const char* who,
                             std::vector<std::string>* warnings) {
  const double worst = ensemble.max_pairwise_overlap();
  if (worst < 1e-10) return true;
  if (worst < 1e-6 && warnings != nullptr) {
    warnings->push_back(std::string(who) +
                        " ensemble is nearly orthogonal (max pairwise overlap " +
                        std::to_string(worst) + "); classified as non-orthogonal");
  }
  return false;
}

}  // namespace

Scenario classify(const GameSpec& game, std::vector<std::string>* warnings) {
  const bool alice_orth = orthogonal_with_warning(game.alice_inputs(), "Alice", warnings);
  const bool bob_orth = orthogonal_with_warning(game.bob_inputs(), "Bob", warnings);
  if (alice_orth && bob_orth) return Scenario::kBell;
  if (alice_orth) return Scenario::kSteering;
  return Scenario::kSemiQuantum;
}

namespace {

MarginalTable marginal_impl(const CorrelationTable& table, bool alice) {
  MarginalTable out;
  out.out_labels = alice ? table.x_labels() : table.y_labels();
  out.s_labels = table.s_labels();
  out.t_labels = table.t_labels();
  out.values.assign(out.out_labels.size() * out.s_labels.size() * out.t_labels.size(), 0.0);
  for (std::size_t si = 0; si < table.num_s(); ++si) {
    for (std::size_t ti = 0; ti < table.num_t(); ++ti) {
      for (std::size_t xi = 0; xi < table.num_x(); ++xi) {
        for (std::size_t yi = 0; yi < table.num_y(); ++yi) {
          const std::size_t oi = alice ? xi : yi;
          out.values[(si * table.num_t() + ti) * out.out_labels.size() + oi] +=
              table.at_index(xi, yi, si, ti);
        }
      }
    }
  }
  return out;
}

}  // namespace

MarginalTable alice_marginal(const CorrelationTable& table) {
  return marginal_impl(table, true);
}

MarginalTable bob_marginal(const CorrelationTable& table) {
  return marginal_impl(table, false);
}

}  // namespace semiq
