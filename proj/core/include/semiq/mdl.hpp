#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <boost/rational.hpp>

#include "semiq/game.hpp"
#include "semiq/rng.hpp"

namespace semiq {

using Rational = boost::rational<long long>;

// Measurement-dependent local hidden-variable model: a finite set Λ, one
// conditional distribution p(λ|s,t) per setting pair, and deterministic
// response maps. Responses are stored as dense lookup tables Λ×S → X and
// Λ×T → Y; when setting_dependent_responses is false every row is constant.
//
// Models built from rational probabilities additionally keep the exact
// distributions, enabling exact-arithmetic tables.
class MdlModel {
 public:
  MdlModel(std::vector<std::string> lambda_labels, std::vector<int> s_labels,
           std::vector<int> t_labels, std::vector<int> x_labels, std::vector<int> y_labels,
           std::vector<std::vector<double>> cond_dist,      // [(si*nT+ti)][li]
           std::vector<std::vector<int>> alice_response,    // [li][si] -> x label
           std::vector<std::vector<int>> bob_response,      // [li][ti] -> y label
           bool setting_dependent_responses,
           std::optional<std::vector<std::vector<Rational>>> cond_dist_exact = std::nullopt);

  // Convenience constructor for setting-independent responses given as one
  // outcome label per λ.
  static MdlModel with_constant_responses(
      std::vector<std::string> lambda_labels, std::vector<int> s_labels,
      std::vector<int> t_labels, std::vector<int> x_labels, std::vector<int> y_labels,
      std::vector<std::vector<double>> cond_dist, std::vector<int> f, std::vector<int> g,
      std::optional<std::vector<std::vector<Rational>>> cond_dist_exact = std::nullopt);

  std::size_t num_lambda() const { return lambda_labels_.size(); }
  std::size_t num_s() const { return s_labels_.size(); }
  std::size_t num_t() const { return t_labels_.size(); }
  std::size_t num_x() const { return x_labels_.size(); }
  std::size_t num_y() const { return y_labels_.size(); }

  const std::vector<std::string>& lambda_labels() const { return lambda_labels_; }
  const std::vector<int>& s_labels() const { return s_labels_; }
  const std::vector<int>& t_labels() const { return t_labels_; }
  const std::vector<int>& x_labels() const { return x_labels_; }
  const std::vector<int>& y_labels() const { return y_labels_; }
  bool setting_dependent_responses() const { return setting_dependent_; }
  bool has_exact() const { return cond_exact_.has_value(); }

  const std::vector<double>& cond_dist(std::size_t si, std::size_t ti) const {
    return cond_[si * num_t() + ti];
  }
  const std::vector<Rational>& cond_dist_exact(std::size_t si, std::size_t ti) const {
    return (*cond_exact_)[si * num_t() + ti];
  }
  const std::vector<std::vector<double>>& cond_dists() const { return cond_; }

  // Response outcome labels.
  int alice_outcome(std::size_t li, std::size_t si) const { return f_[li][si]; }
  int bob_outcome(std::size_t li, std::size_t ti) const { return g_[li][ti]; }
  const std::vector<std::vector<int>>& alice_responses() const { return f_; }
  const std::vector<std::vector<int>>& bob_responses() const { return g_; }

  std::size_t s_index(int label) const;
  std::size_t t_index(int label) const;
  std::size_t x_index(int label) const;
  std::size_t y_index(int label) const;

 private:
  std::vector<std::string> lambda_labels_;
  std::vector<int> s_labels_, t_labels_, x_labels_, y_labels_;
  std::vector<std::vector<double>> cond_;
  std::optional<std::vector<std::vector<Rational>>> cond_exact_;
  std::vector<std::vector<int>> f_, g_;
  bool setting_dependent_;
};

// The 4-atom model reproducing the tetrahedron-game correlations:
// p(·|s=t) = {1/2, 1/4, 1/4, 0}, p(·|s≠t) = {7/12, 1/6, 1/6, 1/12},
// f = (0,0,1,1), g = (0,1,0,1). Carries exact rationals.
MdlModel paper_model();

// Pushforward of p(·|s,t) through the response maps: p(x,y|s,t) laid out
// row-major over (x,y).
std::vector<double> evaluate(const MdlModel& model, int s_label, int t_label);

// evaluate() assembled over all setting pairs.
CorrelationTable model_table(const MdlModel& model);

// Exact-rational table, [s][t][x][y] row-major; nullopt when the model has
// no exact distributions.
std::optional<std::vector<Rational>> exact_model_table(const MdlModel& model);

// Draws λ by inverse-CDF over the fixed Λ ordering, then applies the
// response maps. Returns (x, y) labels.
std::pair<int, int> sample(const MdlModel& model, int s_label, int t_label, RandomStream& rng);

// Frequency estimate from n independent samples per setting pair. Each pair
// uses its own substream of rng, so results do not depend on thread count.
CorrelationTable empirical_table(const MdlModel& model, long n_per_setting, RandomStream& rng,
                                 int threads = 1);

}  // namespace semiq
