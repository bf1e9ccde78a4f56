#include "semiq/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "semiq/errors.hpp"

namespace semiq {

namespace {

double l1_distance(const std::vector<double>& a, const std::vector<double>& b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += std::abs(a[i] - b[i]);
  return sum;
}

constexpr double kLog2E = 1.4426950408889634;  // 1/ln(2)

double xlogx_bits(double p) { return p > 0.0 ? p * std::log(p) * kLog2E : 0.0; }

}  // namespace

SettingPrior::SettingPrior(std::vector<int> s_labels, std::vector<int> t_labels,
                           std::vector<double> p)
    : s_labels_(std::move(s_labels)), t_labels_(std::move(t_labels)), p_(std::move(p)) {
  if (s_labels_.empty() || t_labels_.empty()) {
    throw ValidationError("setting prior needs nonempty label sets");
  }
  if (p_.size() != s_labels_.size() * t_labels_.size()) {
    throw ValidationError("setting prior size must be |S| * |T|");
  }
  double sum = 0.0;
  for (double v : p_) {
    if (v < 0.0) throw ValidationError("setting prior entries must be nonnegative");
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-12) {
    throw ValidationError("setting prior must sum to 1 (within 1e-12)");
  }
}

SettingPrior SettingPrior::uniform(std::vector<int> s_labels, std::vector<int> t_labels) {
  const std::size_t n = s_labels.size() * t_labels.size();
  std::vector<double> p(n, 1.0 / static_cast<double>(n));
  return SettingPrior(std::move(s_labels), std::move(t_labels), std::move(p));
}

double SettingPrior::same_label_mass() const {
  double mass = 0.0;
  for (std::size_t si = 0; si < s_labels_.size(); ++si) {
    for (std::size_t ti = 0; ti < t_labels_.size(); ++ti) {
      if (s_labels_[si] == t_labels_[ti]) mass += at_index(si, ti);
    }
  }
  return mass;
}

double variational_M(const MdlModel& model) {
  const auto& dists = model.cond_dists();
  double worst = 0.0;
  for (std::size_t i = 0; i < dists.size(); ++i) {
    for (std::size_t j = i + 1; j < dists.size(); ++j) {
      worst = std::max(worst, l1_distance(dists[i], dists[j]));
    }
  }
  return worst;
}

std::optional<Rational> variational_M_exact(const MdlModel& model) {
  if (!model.has_exact()) return std::nullopt;
  const std::size_t cells = model.num_s() * model.num_t();
  Rational worst(0);
  for (std::size_t i = 0; i < cells; ++i) {
    const auto& a = model.cond_dist_exact(i / model.num_t(), i % model.num_t());
    for (std::size_t j = i + 1; j < cells; ++j) {
      const auto& b = model.cond_dist_exact(j / model.num_t(), j % model.num_t());
      Rational sum(0);
      for (std::size_t li = 0; li < a.size(); ++li) {
        const Rational d = a[li] - b[li];
        sum += d < Rational(0) ? -d : d;
      }
      if (sum > worst) worst = sum;
    }
  }
  return worst;
}

double free_will_F(double m_value) {
  if (m_value < 0.0 || m_value > 2.0) {
    throw ValidationError("M must lie in [0, 2]");
  }
  return 1.0 - m_value / 2.0;
}

double entropy_bits(const std::vector<double>& dist) {
  double sum = 0.0;
  for (double p : dist) {
    if (p < -1e-12) throw ValidationError("entropy input must be nonnegative");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw ValidationError("entropy input must be normalized (within 1e-9)");
  }
  double h = 0.0;
  for (double p : dist) h -= xlogx_bits(std::max(p, 0.0));
  return h;
}

namespace {

void check_prior_matches(const MdlModel& model, const SettingPrior& prior) {
  if (prior.s_labels() != model.s_labels() || prior.t_labels() != model.t_labels()) {
    throw ValidationError("setting prior labels must match the model's");
  }
}

// MI of the joint p(s,t,λ) = prior(s,t) p(λ|s,t) in bits.
double mi_at_prior(const MdlModel& model, const std::vector<double>& prior_values) {
  const std::size_t cells = model.num_s() * model.num_t();
  std::vector<double> p_lambda(model.num_lambda(), 0.0);
  for (std::size_t cell = 0; cell < cells; ++cell) {
    const auto& dist = model.cond_dists()[cell];
    for (std::size_t li = 0; li < dist.size(); ++li) {
      p_lambda[li] += prior_values[cell] * dist[li];
    }
  }
  double mi = 0.0;
  for (std::size_t cell = 0; cell < cells; ++cell) {
    const auto& dist = model.cond_dists()[cell];
    for (std::size_t li = 0; li < dist.size(); ++li) {
      const double joint = prior_values[cell] * dist[li];
      if (joint > 0.0) {
        mi += joint * std::log(joint / (prior_values[cell] * p_lambda[li])) * kLog2E;
      }
    }
  }
  return std::max(mi, 0.0);
}

}  // namespace

double mutual_information(const MdlModel& model, const SettingPrior& prior) {
  check_prior_matches(model, prior);
  return mi_at_prior(model, prior.values());
}

std::optional<TwoRowStructure> detect_two_row(const MdlModel& model) {
  constexpr double kTol = 1e-12;
  std::optional<std::vector<double>> same, diff;
  for (std::size_t si = 0; si < model.num_s(); ++si) {
    for (std::size_t ti = 0; ti < model.num_t(); ++ti) {
      const auto& dist = model.cond_dist(si, ti);
      auto& slot = (model.s_labels()[si] == model.t_labels()[ti]) ? same : diff;
      if (!slot) {
        slot = dist;
      } else {
        for (std::size_t li = 0; li < dist.size(); ++li) {
          if (std::abs((*slot)[li] - dist[li]) > kTol) return std::nullopt;
        }
      }
    }
  }
  if (!same || !diff) return std::nullopt;
  return TwoRowStructure{std::move(*same), std::move(*diff)};
}

namespace {

double mi_two_row_impl(const TwoRowStructure& rows, double p) {
  std::vector<double> mix(rows.same.size());
  for (std::size_t i = 0; i < mix.size(); ++i) {
    mix[i] = p * rows.same[i] + (1.0 - p) * rows.diff[i];
  }
  return entropy_bits(mix) - p * entropy_bits(rows.same) - (1.0 - p) * entropy_bits(rows.diff);
}

// Prior with mass p spread uniformly over the same-label cells and 1-p over
// the rest.
SettingPrior two_row_prior(const MdlModel& model, double p) {
  const std::size_t cells = model.num_s() * model.num_t();
  std::size_t n_same = 0;
  for (std::size_t si = 0; si < model.num_s(); ++si) {
    for (std::size_t ti = 0; ti < model.num_t(); ++ti) {
      if (model.s_labels()[si] == model.t_labels()[ti]) ++n_same;
    }
  }
  const std::size_t n_diff = cells - n_same;
  std::vector<double> values(cells);
  double total = 0.0;
  for (std::size_t si = 0; si < model.num_s(); ++si) {
    for (std::size_t ti = 0; ti < model.num_t(); ++ti) {
      const bool is_same = model.s_labels()[si] == model.t_labels()[ti];
      double v = is_same ? p / static_cast<double>(n_same) : (1.0 - p) / static_cast<double>(n_diff);
      values[si * model.num_t() + ti] = v;
      total += v;
    }
  }
  for (auto& v : values) v /= total;
  return SettingPrior(model.s_labels(), model.t_labels(), std::move(values));
}

}  // namespace

double mi_two_row(const MdlModel& model, double same_label_mass) {
  if (same_label_mass < 0.0 || same_label_mass > 1.0) {
    throw ValidationError("P must lie in [0, 1]");
  }
  const auto rows = detect_two_row(model);
  if (!rows) {
    throw ValidationError(
        "model is not two-row: conditional distributions are not partitioned by [s = t]");
  }
  return mi_two_row_impl(*rows, same_label_mass);
}

CapacityResult capacity_two_row(const MdlModel& model) {
  const auto rows = detect_two_row(model);
  if (!rows) throw ValidationError("capacity_two_row requires a two-row model");

  auto g = [&](double p) { return mi_two_row_impl(*rows, p); };

  // Pre-scan to bracket the maximum (the objective is concave in P, but the
  // scan guards against a flat or boundary optimum).
  constexpr int kScan = 200;
  double best_p = 0.0, best_v = g(0.0);
  for (int i = 1; i <= kScan; ++i) {
    const double p = static_cast<double>(i) / kScan;
    const double v = g(p);
    if (v > best_v) {
      best_v = v;
      best_p = p;
    }
  }
  double lo = std::max(0.0, best_p - 1.0 / kScan);
  double hi = std::min(1.0, best_p + 1.0 / kScan);

  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = g(c), fd = g(d);
  long iters = 0;
  while (b - a > 1e-10) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = g(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = g(d);
    }
    ++iters;
  }
  const double p_star = 0.5 * (a + b);
  const double value = g(p_star);
  CapacityResult result{
      value, value, value, two_row_prior(model, p_star), p_star, iters,
  };
  return result;
}

CapacityResult capacity_blahut_arimoto(const MdlModel& model, double tol, long max_iterations) {
  const std::size_t n_in = model.num_s() * model.num_t();
  const std::size_t n_out = model.num_lambda();
  const auto& rows = model.cond_dists();  // channel W(λ | s,t)

  std::vector<double> r(n_in, 1.0 / static_cast<double>(n_in));
  std::vector<double> p_out(n_out);
  std::vector<double> divergence(n_in);

  double lower = 0.0, upper = std::numeric_limits<double>::infinity();
  long iter = 0;
  for (; iter < max_iterations; ++iter) {
    std::fill(p_out.begin(), p_out.end(), 0.0);
    for (std::size_t i = 0; i < n_in; ++i) {
      for (std::size_t o = 0; o < n_out; ++o) p_out[o] += r[i] * rows[i][o];
    }
    // D(i) = KL(W(.|i) || p_out) in bits.
    for (std::size_t i = 0; i < n_in; ++i) {
      double d = 0.0;
      for (std::size_t o = 0; o < n_out; ++o) {
        const double w = rows[i][o];
        if (w > 0.0) d += w * std::log(w / p_out[o]) * kLog2E;
      }
      divergence[i] = d;
    }
    lower = 0.0;
    upper = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n_in; ++i) {
      lower += r[i] * divergence[i];
      upper = std::max(upper, divergence[i]);
    }
    if (upper - lower < tol) {
      ++iter;
      break;
    }
    // r'(i) ∝ r(i) 2^{D(i)}
    double norm = 0.0;
    for (std::size_t i = 0; i < n_in; ++i) {
      r[i] *= std::exp2(divergence[i]);
      norm += r[i];
    }
    for (auto& v : r) v /= norm;
  }
  if (upper - lower >= tol) {
    throw ConvergenceError("Blahut-Arimoto did not converge: bounds [" + std::to_string(lower) +
                               ", " + std::to_string(upper) + "] after " +
                               std::to_string(max_iterations) + " iterations",
                           lower, upper);
  }
  // Clean residual normalization drift before constructing the prior.
  double norm = 0.0;
  for (double v : r) norm += v;
  for (auto& v : r) v /= norm;
  SettingPrior argmax(model.s_labels(), model.t_labels(), std::move(r));
  CapacityResult result{lower, lower, upper, std::move(argmax), std::nullopt, iter};
  return result;
}

CapacityResult capacity(const MdlModel& model) {
  if (detect_two_row(model)) {
    auto result = capacity_two_row(model);
    return result;
  }
  return capacity_blahut_arimoto(model);
}

bool check_measurement_independence(const MdlModel& model, double tol) {
  const auto& dists = model.cond_dists();
  for (std::size_t i = 0; i < dists.size(); ++i) {
    for (std::size_t j = i + 1; j < dists.size(); ++j) {
      for (std::size_t li = 0; li < dists[i].size(); ++li) {
        if (std::abs(dists[i][li] - dists[j][li]) > tol) return false;
      }
    }
  }
  return true;
}

BayesDual bayes_dual(const MdlModel& model, const SettingPrior& prior) {
  check_prior_matches(model, prior);
  const std::size_t cells = model.num_s() * model.num_t();
  std::vector<double> p_lambda(model.num_lambda(), 0.0);
  for (std::size_t cell = 0; cell < cells; ++cell) {
    const auto& dist = model.cond_dists()[cell];
    for (std::size_t li = 0; li < dist.size(); ++li) {
      p_lambda[li] += prior.values()[cell] * dist[li];
    }
  }
  BayesDual out;
  out.posterior.assign(model.num_lambda(), std::vector<double>(cells, 0.0));
  out.defined.assign(model.num_lambda(), false);
  for (std::size_t li = 0; li < model.num_lambda(); ++li) {
    if (p_lambda[li] <= 0.0) continue;
    out.defined[li] = true;
    for (std::size_t cell = 0; cell < cells; ++cell) {
      out.posterior[li][cell] =
          prior.values()[cell] * model.cond_dists()[cell][li] / p_lambda[li];
    }
  }
  return out;
}

std::vector<std::pair<double, double>> mi_curve(const MdlModel& model, int grid_points) {
  if (grid_points < 2) throw ValidationError("curve needs at least 2 grid points");
  std::vector<std::pair<double, double>> out;
  out.reserve(grid_points);
  for (int i = 0; i < grid_points; ++i) {
    const double p = static_cast<double>(i) / (grid_points - 1);
    out.emplace_back(p, mi_two_row(model, p));
  }
  return out;
}

MetricsReport metrics_report(const MdlModel& model, const SettingPrior& prior) {
  MetricsReport report{
      variational_M(model),
      0.0,
      mutual_information(model, prior),
      capacity(model),
  };
  report.free_will = free_will_F(report.m_value);
  return report;
}

}  // namespace semiq
