#include "semiq/mdl.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <thread>

#include "semiq/errors.hpp"

namespace semiq {

namespace {

std::size_t find_label(const std::vector<int>& labels, int label, const char* what) {
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == label) return i;
  }
  throw ValidationError(std::string("unknown ") + what + " label " + std::to_string(label));
}

}  // namespace

MdlModel::MdlModel(std::vector<std::string> lambda_labels, std::vector<int> s_labels,
                   std::vector<int> t_labels, std::vector<int> x_labels,
                   std::vector<int> y_labels, std::vector<std::vector<double>> cond_dist,
                   std::vector<std::vector<int>> alice_response,
                   std::vector<std::vector<int>> bob_response, bool setting_dependent_responses,
                   std::optional<std::vector<std::vector<Rational>>> cond_dist_exact)
    : lambda_labels_(std::move(lambda_labels)),
      s_labels_(std::move(s_labels)),
      t_labels_(std::move(t_labels)),
      x_labels_(std::move(x_labels)),
      y_labels_(std::move(y_labels)),
      cond_(std::move(cond_dist)),
      cond_exact_(std::move(cond_dist_exact)),
      f_(std::move(alice_response)),
      g_(std::move(bob_response)),
      setting_dependent_(setting_dependent_responses) {
  const std::size_t nl = lambda_labels_.size();
  if (nl == 0) throw ValidationError("model needs a nonempty Λ");
  if (s_labels_.empty() || t_labels_.empty() || x_labels_.empty() || y_labels_.empty()) {
    throw ValidationError("model needs nonempty label sets");
  }
  if (cond_.size() != num_s() * num_t()) {
    throw ValidationError("model needs one distribution per setting pair");
  }
  for (const auto& dist : cond_) {
    if (dist.size() != nl) throw ValidationError("distribution length must equal |Λ|");
    double sum = 0.0;
    for (double p : dist) {
      if (p < 0.0) throw ValidationError("distribution entries must be nonnegative");
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-12) {
      throw ValidationError("distribution must sum to 1 (within 1e-12)");
    }
  }
  if (cond_exact_) {
    if (cond_exact_->size() != cond_.size()) {
      throw ValidationError("exact distributions must match the setting-pair count");
    }
    for (const auto& dist : *cond_exact_) {
      if (dist.size() != nl) throw ValidationError("exact distribution length must equal |Λ|");
      Rational sum(0);
      for (const auto& p : dist) {
        if (p < Rational(0)) throw ValidationError("exact entries must be nonnegative");
        sum += p;
      }
      if (sum != Rational(1)) throw ValidationError("exact distribution must sum to 1");
    }
  }
  if (f_.size() != nl || g_.size() != nl) {
    throw ValidationError("response tables need one row per λ");
  }
  for (std::size_t li = 0; li < nl; ++li) {
    if (f_[li].size() != num_s() || g_[li].size() != num_t()) {
      throw ValidationError("response rows must cover every setting");
    }
    for (int x : f_[li]) find_label(x_labels_, x, "x");
    for (int y : g_[li]) find_label(y_labels_, y, "y");
    if (!setting_dependent_) {
      if (std::adjacent_find(f_[li].begin(), f_[li].end(), std::not_equal_to<>()) != f_[li].end() ||
          std::adjacent_find(g_[li].begin(), g_[li].end(), std::not_equal_to<>()) != g_[li].end()) {
        throw ValidationError("constant-response model has a setting-dependent row");
      }
    }
  }
}

MdlModel MdlModel::with_constant_responses(
    std::vector<std::string> lambda_labels, std::vector<int> s_labels, std::vector<int> t_labels,
    std::vector<int> x_labels, std::vector<int> y_labels,
    std::vector<std::vector<double>> cond_dist, std::vector<int> f, std::vector<int> g,
    std::optional<std::vector<std::vector<Rational>>> cond_dist_exact) {
  const std::size_t nl = lambda_labels.size();
  if (f.size() != nl || g.size() != nl) {
    throw ValidationError("need one response per λ");
  }
  std::vector<std::vector<int>> f_rows(nl), g_rows(nl);
  for (std::size_t li = 0; li < nl; ++li) {
    f_rows[li].assign(s_labels.size(), f[li]);
    g_rows[li].assign(t_labels.size(), g[li]);
  }
  return MdlModel(std::move(lambda_labels), std::move(s_labels), std::move(t_labels),
                  std::move(x_labels), std::move(y_labels), std::move(cond_dist),
                  std::move(f_rows), std::move(g_rows), false, std::move(cond_dist_exact));
}

std::size_t MdlModel::s_index(int label) const { return find_label(s_labels_, label, "s"); }
std::size_t MdlModel::t_index(int label) const { return find_label(t_labels_, label, "t"); }
std::size_t MdlModel::x_index(int label) const { return find_label(x_labels_, label, "x"); }
std::size_t MdlModel::y_index(int label) const { return find_label(y_labels_, label, "y"); }

MdlModel paper_model() {
  std::vector<std::vector<Rational>> exact;
  exact.reserve(16);
  const std::vector<Rational> same{{1, 2}, {1, 4}, {1, 4}, {0, 1}};
  const std::vector<Rational> diff{{7, 12}, {1, 6}, {1, 6}, {1, 12}};
  std::vector<std::vector<double>> cond;
  cond.reserve(16);
  for (int s = 0; s < 4; ++s) {
    for (int t = 0; t < 4; ++t) {
      const auto& dist = (s == t) ? same : diff;
      exact.push_back(dist);
      std::vector<double> row;
      for (const auto& p : dist) {
        row.push_back(boost::rational_cast<double>(p));
      }
      cond.push_back(std::move(row));
    }
  }
  return MdlModel::with_constant_responses({"l1", "l2", "l3", "l4"}, {1, 2, 3, 4}, {1, 2, 3, 4},
                                           {0, 1}, {0, 1}, std::move(cond), {0, 0, 1, 1},
                                           {0, 1, 0, 1}, std::move(exact));
}

std::vector<double> evaluate(const MdlModel& model, int s_label, int t_label) {
  const std::size_t si = model.s_index(s_label);
  const std::size_t ti = model.t_index(t_label);
  std::vector<double> out(model.num_x() * model.num_y(), 0.0);
  const auto& dist = model.cond_dist(si, ti);
  for (std::size_t li = 0; li < model.num_lambda(); ++li) {
    const std::size_t xi = model.x_index(model.alice_outcome(li, si));
    const std::size_t yi = model.y_index(model.bob_outcome(li, ti));
    out[xi * model.num_y() + yi] += dist[li];
  }
  return out;
}

CorrelationTable model_table(const MdlModel& model) {
  std::vector<double> values(model.num_x() * model.num_y() * model.num_s() * model.num_t());
  for (std::size_t si = 0; si < model.num_s(); ++si) {
    for (std::size_t ti = 0; ti < model.num_t(); ++ti) {
      const auto cell = evaluate(model, model.s_labels()[si], model.t_labels()[ti]);
      for (std::size_t xi = 0; xi < model.num_x(); ++xi) {
        for (std::size_t yi = 0; yi < model.num_y(); ++yi) {
          values[((si * model.num_t() + ti) * model.num_x() + xi) * model.num_y() + yi] =
              cell[xi * model.num_y() + yi];
        }
      }
    }
  }
  return CorrelationTable(model.x_labels(), model.y_labels(), model.s_labels(), model.t_labels(),
                          std::move(values));
}

std::optional<std::vector<Rational>> exact_model_table(const MdlModel& model) {
  if (!model.has_exact()) return std::nullopt;
  std::vector<Rational> values(model.num_x() * model.num_y() * model.num_s() * model.num_t(),
                               Rational(0));
  for (std::size_t si = 0; si < model.num_s(); ++si) {
    for (std::size_t ti = 0; ti < model.num_t(); ++ti) {
      const auto& dist = model.cond_dist_exact(si, ti);
      for (std::size_t li = 0; li < model.num_lambda(); ++li) {
        const std::size_t xi = model.x_index(model.alice_outcome(li, si));
        const std::size_t yi = model.y_index(model.bob_outcome(li, ti));
        values[((si * model.num_t() + ti) * model.num_x() + xi) * model.num_y() + yi] += dist[li];
      }
    }
  }
  return values;
}

std::pair<int, int> sample(const MdlModel& model, int s_label, int t_label, RandomStream& rng) {
  const std::size_t si = model.s_index(s_label);
  const std::size_t ti = model.t_index(t_label);
  const auto& dist = model.cond_dist(si, ti);
  const double u = rng.next_unit();
  double cum = 0.0;
  std::size_t chosen = model.num_lambda();
  for (std::size_t li = 0; li < dist.size(); ++li) {
    cum += dist[li];
    if (u < cum) {
      chosen = li;
      break;
    }
  }
  if (chosen == model.num_lambda()) {
    // u landed past the accumulated mass (roundoff); take the last atom with
    // positive probability.
    for (std::size_t li = dist.size(); li-- > 0;) {
      if (dist[li] > 0.0) {
        chosen = li;
        break;
      }
    }
  }
  return {model.alice_outcome(chosen, si), model.bob_outcome(chosen, ti)};
}

CorrelationTable empirical_table(const MdlModel& model, long n_per_setting, RandomStream& rng,
                                 int threads) {
  if (n_per_setting < 1) throw ValidationError("empirical_table requires n >= 1");
  const std::size_t cells = model.num_s() * model.num_t();
  std::vector<std::vector<long>> counts(cells,
                                        std::vector<long>(model.num_x() * model.num_y(), 0));

  auto run_cell = [&](std::size_t cell) {
    const std::size_t si = cell / model.num_t();
    const std::size_t ti = cell % model.num_t();
    RandomStream stream = rng.split(cell);
    auto& bucket = counts[cell];
    for (long i = 0; i < n_per_setting; ++i) {
      const auto [x, y] = sample(model, model.s_labels()[si], model.t_labels()[ti], stream);
      bucket[model.x_index(x) * model.num_y() + model.y_index(y)] += 1;
    }
  };

  if (threads <= 1 || cells == 1) {
    for (std::size_t cell = 0; cell < cells; ++cell) run_cell(cell);
  } else {
    std::vector<std::thread> pool;
    std::size_t workers = std::min<std::size_t>(threads, cells);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w]() {
        for (std::size_t cell = w; cell < cells; cell += workers) run_cell(cell);
      });
    }
    for (auto& t : pool) t.join();
  }

  std::vector<double> values(cells * model.num_x() * model.num_y());
  for (std::size_t cell = 0; cell < cells; ++cell) {
    for (std::size_t k = 0; k < counts[cell].size(); ++k) {
      values[cell * counts[cell].size() + k] =
          static_cast<double>(counts[cell][k]) / static_cast<double>(n_per_setting);
    }
  }
  return CorrelationTable(model.x_labels(), model.y_labels(), model.s_labels(), model.t_labels(),
                          std::move(values));
}

}  // namespace semiq
