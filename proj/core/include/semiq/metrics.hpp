#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "semiq/mdl.hpp"

namespace semiq {

// Joint distribution p(s,t) over setting pairs, normalized within 1e-12.
class SettingPrior {
 public:
  // p laid out [s][t] row-major.
  SettingPrior(std::vector<int> s_labels, std::vector<int> t_labels, std::vector<double> p);

  static SettingPrior uniform(std::vector<int> s_labels, std::vector<int> t_labels);

  const std::vector<int>& s_labels() const { return s_labels_; }
  const std::vector<int>& t_labels() const { return t_labels_; }
  const std::vector<double>& values() const { return p_; }
  double at_index(std::size_t si, std::size_t ti) const { return p_[si * t_labels_.size() + ti]; }

  // P = sum over cells with equal s and t labels.
  double same_label_mass() const;

 private:
  std::vector<int> s_labels_, t_labels_;
  std::vector<double> p_;
};

// Variational-distance measure of measurement dependence:
// M = sup over setting-pair pairs of the L1 distance between the
// conditional hidden-variable distributions. Always in [0, 2].
double variational_M(const MdlModel& model);

// Same quantity in exact rational arithmetic; nullopt when the model carries
// no exact distributions.
std::optional<Rational> variational_M_exact(const MdlModel& model);

// F = 1 - M/2.
double free_will_F(double m_value);

// Shannon entropy in bits; 0 log 0 = 0. Input must be normalized within 1e-9.
double entropy_bits(const std::vector<double>& dist);

// H(S,T : Λ) in bits for a given setting prior.
double mutual_information(const MdlModel& model, const SettingPrior& prior);

// The two distributions of a model whose conditionals take exactly two
// values partitioned by [s = t].
struct TwoRowStructure {
  std::vector<double> same;  // p(λ | s = t)
  std::vector<double> diff;  // p(λ | s ≠ t)
};

// Detects the two-row structure; nullopt when the model is not two-row.
std::optional<TwoRowStructure> detect_two_row(const MdlModel& model);

// H(S,T : Λ) as a function of the same-label mass P for a two-row model:
// H[P p_same + (1-P) p_diff] - P H[p_same] - (1-P) H[p_diff].
double mi_two_row(const MdlModel& model, double same_label_mass);

struct CapacityResult {
  double bits;          // certified achievable value (lower bound)
  double lower_bound;
  double upper_bound;
  SettingPrior argmax;
  std::optional<double> p_star;  // two-row models: maximizing same-label mass
  long iterations;
};

// Supremum of the mutual information over setting priors. Two-row models are
// solved by golden-section search over P (interval tolerance 1e-10, after a
// 200-point scan that verifies unimodality); general models by
// Blahut-Arimoto on the channel (s,t) → λ.
CapacityResult capacity(const MdlModel& model);
CapacityResult capacity_two_row(const MdlModel& model);
CapacityResult capacity_blahut_arimoto(const MdlModel& model, double tol = 1e-10,
                                       long max_iterations = 100000);

// True iff max over λ and setting-pair pairs of |p(λ|s,t) - p(λ|s',t')| is
// within tol.
bool check_measurement_independence(const MdlModel& model, double tol);

// Posterior p(s,t|λ) via Bayes' rule. Rows with p(λ) = 0 are undefined.
struct BayesDual {
  std::vector<std::vector<double>> posterior;  // [li][(si,ti) row-major]
  std::vector<bool> defined;                   // per λ
};
BayesDual bayes_dual(const MdlModel& model, const SettingPrior& prior);

// mi_two_row evaluated on an equally spaced P grid (for plotting).
std::vector<std::pair<double, double>> mi_curve(const MdlModel& model, int grid_points);

struct MetricsReport {
  double m_value;
  double free_will;
  double h_at_prior;
  CapacityResult capacity;
};

MetricsReport metrics_report(const MdlModel& model, const SettingPrior& prior);

}  // namespace semiq
