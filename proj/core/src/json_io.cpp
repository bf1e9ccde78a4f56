#include "semiq/json_io.hpp"

#include <algorithm>
#include <cstdio>
#include <set>

#include <json.hpp>

#include "semiq/errors.hpp"

namespace semiq {

namespace {

using nlohmann::json;

json parse_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed JSON: ") + e.what());
  }
}

const json& require_field(const json& obj, const char* field) {
  if (!obj.is_object() || !obj.contains(field)) {
    throw ValidationError(std::string("missing field '") + field + "'");
  }
  return obj.at(field);
}

Complex parse_complex(const json& j, const char* field) {
  if (j.is_number()) return Complex(j.get<double>(), 0.0);
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return Complex(j[0].get<double>(), j[1].get<double>());
  }
  throw ValidationError(std::string("field '") + field +
                        "': complex entries must be numbers or [re, im] pairs");
}

Matrix parse_matrix(const json& j, const char* field) {
  if (!j.is_array() || j.empty()) {
    throw ValidationError(std::string("field '") + field + "' must be a nonempty matrix");
  }
  const std::size_t rows = j.size();
  if (!j[0].is_array() || j[0].empty()) {
    throw ValidationError(std::string("field '") + field + "' must contain array rows");
  }
  const std::size_t cols = j[0].size();
  Matrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].size() != cols) {
      throw ValidationError(std::string("field '") + field + "' has ragged rows");
    }
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = parse_complex(j[r][c], field);
  }
  return m;
}

json complex_to_json(const Complex& z) { return json::array({z.real(), z.imag()}); }

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_to_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<int> parse_int_array(const json& j, const char* field) {
  if (!j.is_array()) {
    throw ValidationError(std::string("field '") + field + "' must be an array of integers");
  }
  std::vector<int> out;
  for (const auto& v : j) {
    if (!v.is_number_integer()) {
      throw ValidationError(std::string("field '") + field + "' must contain integers");
    }
    out.push_back(v.get<int>());
  }
  return out;
}

std::vector<double> parse_double_array(const json& j, const char* field) {
  if (!j.is_array()) {
    throw ValidationError(std::string("field '") + field + "' must be an array of numbers");
  }
  std::vector<double> out;
  for (const auto& v : j) {
    if (!v.is_number()) {
      throw ValidationError(std::string("field '") + field + "' must contain numbers");
    }
    out.push_back(v.get<double>());
  }
  return out;
}

InputEnsemble parse_ensemble(const json& j, const char* field) {
  const json& format = require_field(j, "format");
  const json& states = require_field(j, "states");
  if (!states.is_array() || states.empty()) {
    throw ValidationError(std::string("field '") + field + ".states' must be a nonempty array");
  }
  std::vector<DensityOperator> ops;
  if (format == "matrix") {
    for (const auto& s : states) {
      ops.emplace_back(ComplexOperator(parse_matrix(s, field)));
    }
  } else if (format == "bloch") {
    for (const auto& s : states) {
      const auto v = parse_double_array(s, field);
      if (v.size() != 3) {
        throw ValidationError(std::string("field '") + field +
                              ".states': Bloch vectors must have 3 components");
      }
      ops.push_back(bloch_to_density(BlochVector{{v[0], v[1], v[2]}}));
    }
  } else {
    throw ValidationError(std::string("field '") + field +
                          ".format' must be \"matrix\" or \"bloch\"");
  }
  std::vector<int> labels;
  if (j.contains("labels")) {
    labels = parse_int_array(j.at("labels"), field);
  } else {
    for (std::size_t i = 0; i < ops.size(); ++i) labels.push_back(static_cast<int>(i) + 1);
  }
  return InputEnsemble(std::move(ops), std::move(labels));
}

Povm parse_povm(const json& j, const char* field, int expected_dim) {
  if (!j.is_array() || j.empty()) {
    throw ValidationError(std::string("field '") + field + "' must be a nonempty array");
  }
  std::vector<ComplexOperator> effects;
  std::vector<int> labels;
  for (std::size_t i = 0; i < j.size(); ++i) {
    effects.emplace_back(parse_matrix(j[i], field));
    labels.push_back(static_cast<int>(i));
  }
  if (effects.front().rows() != expected_dim) {
    throw ValidationError(std::string("field '") + field + "' effect dimension " +
                          std::to_string(effects.front().rows()) + " does not match expected " +
                          std::to_string(expected_dim));
  }
  return Povm(std::move(effects), std::move(labels));
}

}  // namespace

GameSpec parse_game_spec(const std::string& text) {
  const json j = parse_text(text);
  InputEnsemble alice = parse_ensemble(require_field(j, "alice_inputs"), "alice_inputs");
  InputEnsemble bob = parse_ensemble(require_field(j, "bob_inputs"), "bob_inputs");
  const int dim_a = static_cast<int>(alice.dim());
  const int dim_b = static_cast<int>(bob.dim());

  Matrix shared = parse_matrix(require_field(j, "shared_state"), "shared_state");
  DensityOperator shared_state(
      ComplexOperator(std::move(shared), std::vector<int>{dim_a, dim_b}));

  Povm alice_povm = j.contains("alice_povm")
                        ? parse_povm(j.at("alice_povm"), "alice_povm", dim_a * dim_a)
                        : bell_projection_povm(dim_a);
  Povm bob_povm = j.contains("bob_povm")
                      ? parse_povm(j.at("bob_povm"), "bob_povm", dim_b * dim_b)
                      : bell_projection_povm(dim_b);

  return GameSpec(std::move(shared_state), std::move(alice), std::move(bob),
                  std::move(alice_povm), std::move(bob_povm));
}

MdlModel parse_mdl_model(const std::string& text) {
  const json j = parse_text(text);
  const json& lambda = require_field(j, "lambda");
  if (!lambda.is_array() || lambda.empty()) {
    throw ValidationError("field 'lambda' must be a nonempty array of labels");
  }
  std::vector<std::string> lambda_labels;
  for (const auto& l : lambda) {
    lambda_labels.push_back(l.is_string() ? l.get<std::string>() : l.dump());
  }
  const std::size_t nl = lambda_labels.size();

  const json& dist = require_field(j, "dist");
  if (!dist.is_object() || dist.empty()) {
    throw ValidationError("field 'dist' must map \"s,t\" keys to probability vectors");
  }
  std::set<int> s_set, t_set;
  std::vector<std::pair<std::pair<int, int>, std::vector<double>>> entries;
  for (const auto& [key, value] : dist.items()) {
    const auto comma = key.find(',');
    if (comma == std::string::npos) {
      throw ValidationError("field 'dist': key '" + key + "' is not of the form \"s,t\"");
    }
    int s = 0, t = 0;
    try {
      s = std::stoi(key.substr(0, comma));
      t = std::stoi(key.substr(comma + 1));
    } catch (const std::exception&) {
      throw ValidationError("field 'dist': key '" + key + "' is not of the form \"s,t\"");
    }
    auto probs = parse_double_array(value, "dist");
    if (probs.size() != nl) {
      throw ValidationError("field 'dist': entry '" + key + "' length does not match |lambda|");
    }
    s_set.insert(s);
    t_set.insert(t);
    entries.push_back({{s, t}, std::move(probs)});
  }
  std::vector<int> s_labels(s_set.begin(), s_set.end());
  std::vector<int> t_labels(t_set.begin(), t_set.end());
  if (entries.size() != s_labels.size() * t_labels.size()) {
    throw ValidationError("field 'dist' must cover the full S x T grid");
  }

  std::vector<std::vector<double>> cond(s_labels.size() * t_labels.size());
  for (auto& [key, probs] : entries) {
    const auto si = static_cast<std::size_t>(
        std::find(s_labels.begin(), s_labels.end(), key.first) - s_labels.begin());
    const auto ti = static_cast<std::size_t>(
        std::find(t_labels.begin(), t_labels.end(), key.second) - t_labels.begin());
    cond[si * t_labels.size() + ti] = std::move(probs);
  }

  const bool setting_dependent =
      j.contains("setting_dependent") && j.at("setting_dependent").get<bool>();

  auto parse_response = [&](const char* field, std::size_t n_settings) {
    const json& r = require_field(j, field);
    if (!r.is_array() || r.size() != nl) {
      throw ValidationError(std::string("field '") + field + "' needs one entry per lambda");
    }
    std::vector<std::vector<int>> rows(nl);
    for (std::size_t li = 0; li < nl; ++li) {
      if (r[li].is_array()) {
        rows[li] = parse_int_array(r[li], field);
        if (rows[li].size() != n_settings) {
          throw ValidationError(std::string("field '") + field +
                                "' row length must equal the setting count");
        }
      } else if (r[li].is_number_integer()) {
        rows[li].assign(n_settings, r[li].get<int>());
      } else {
        throw ValidationError(std::string("field '") + field +
                              "' entries must be integers or integer arrays");
      }
    }
    return rows;
  };
  auto f_rows = parse_response("f", s_labels.size());
  auto g_rows = parse_response("g", t_labels.size());

  auto infer_labels = [&](const json* explicit_labels, const std::vector<std::vector<int>>& rows,
                          const char* field) {
    if (explicit_labels != nullptr) return parse_int_array(*explicit_labels, field);
    std::set<int> seen;
    for (const auto& row : rows) seen.insert(row.begin(), row.end());
    return std::vector<int>(seen.begin(), seen.end());
  };
  std::vector<int> x_labels = infer_labels(
      j.contains("x_labels") ? &j.at("x_labels") : nullptr, f_rows, "x_labels");
  std::vector<int> y_labels = infer_labels(
      j.contains("y_labels") ? &j.at("y_labels") : nullptr, g_rows, "y_labels");

  return MdlModel(std::move(lambda_labels), std::move(s_labels), std::move(t_labels),
                  std::move(x_labels), std::move(y_labels), std::move(cond), std::move(f_rows),
                  std::move(g_rows), setting_dependent);
}

CorrelationTable parse_correlation_table(const std::string& text) {
  const json j = parse_text(text);
  auto x = parse_int_array(require_field(j, "x_labels"), "x_labels");
  auto y = parse_int_array(require_field(j, "y_labels"), "y_labels");
  auto s = parse_int_array(require_field(j, "s_labels"), "s_labels");
  auto t = parse_int_array(require_field(j, "t_labels"), "t_labels");
  const json& values = require_field(j, "values");
  std::vector<double> flat;
  flat.reserve(x.size() * y.size() * s.size() * t.size());
  try {
    for (std::size_t si = 0; si < s.size(); ++si) {
      for (std::size_t ti = 0; ti < t.size(); ++ti) {
        for (std::size_t xi = 0; xi < x.size(); ++xi) {
          for (std::size_t yi = 0; yi < y.size(); ++yi) {
            flat.push_back(values.at(si).at(ti).at(xi).at(yi).get<double>());
          }
        }
      }
    }
  } catch (const json::exception&) {
    throw ValidationError("field 'values' must be a [s][t][x][y] nested array of numbers");
  }
  return CorrelationTable(std::move(x), std::move(y), std::move(s), std::move(t),
                          std::move(flat));
}

SettingPrior parse_setting_prior(const std::string& text) {
  const json j = parse_text(text);
  auto s = parse_int_array(require_field(j, "s_labels"), "s_labels");
  auto t = parse_int_array(require_field(j, "t_labels"), "t_labels");
  const json& p = require_field(j, "p");
  std::vector<double> flat;
  try {
    for (std::size_t si = 0; si < s.size(); ++si) {
      for (std::size_t ti = 0; ti < t.size(); ++ti) {
        flat.push_back(p.at(si).at(ti).get<double>());
      }
    }
  } catch (const json::exception&) {
    throw ValidationError("field 'p' must be a [s][t] nested array of numbers");
  }
  return SettingPrior(std::move(s), std::move(t), std::move(flat));
}

namespace {

json table_to_json(const CorrelationTable& table) {
  json values = json::array();
  for (std::size_t si = 0; si < table.num_s(); ++si) {
    json per_t = json::array();
    for (std::size_t ti = 0; ti < table.num_t(); ++ti) {
      json per_x = json::array();
      for (std::size_t xi = 0; xi < table.num_x(); ++xi) {
        json per_y = json::array();
        for (std::size_t yi = 0; yi < table.num_y(); ++yi) {
          per_y.push_back(table.at_index(xi, yi, si, ti));
        }
        per_x.push_back(std::move(per_y));
      }
      per_t.push_back(std::move(per_x));
    }
    values.push_back(std::move(per_t));
  }
  return json{{"x_labels", table.x_labels()},
              {"y_labels", table.y_labels()},
              {"s_labels", table.s_labels()},
              {"t_labels", table.t_labels()},
              {"values", std::move(values)}};
}

json model_to_json(const MdlModel& model) {
  json dist = json::object();
  for (std::size_t si = 0; si < model.num_s(); ++si) {
    for (std::size_t ti = 0; ti < model.num_t(); ++ti) {
      const std::string key = std::to_string(model.s_labels()[si]) + "," +
                              std::to_string(model.t_labels()[ti]);
      dist[key] = model.cond_dist(si, ti);
    }
  }
  json f = json::array(), g = json::array();
  for (std::size_t li = 0; li < model.num_lambda(); ++li) {
    if (model.setting_dependent_responses()) {
      f.push_back(model.alice_responses()[li]);
      g.push_back(model.bob_responses()[li]);
    } else {
      f.push_back(model.alice_outcome(li, 0));
      g.push_back(model.bob_outcome(li, 0));
    }
  }
  return json{{"lambda", model.lambda_labels()},
              {"dist", std::move(dist)},
              {"f", std::move(f)},
              {"g", std::move(g)},
              {"setting_dependent", model.setting_dependent_responses()},
              {"x_labels", model.x_labels()},
              {"y_labels", model.y_labels()}};
}

json prior_to_json(const SettingPrior& prior) {
  json rows = json::array();
  for (std::size_t si = 0; si < prior.s_labels().size(); ++si) {
    json row = json::array();
    for (std::size_t ti = 0; ti < prior.t_labels().size(); ++ti) {
      row.push_back(prior.at_index(si, ti));
    }
    rows.push_back(std::move(row));
  }
  return json{{"s_labels", prior.s_labels()},
              {"t_labels", prior.t_labels()},
              {"p", std::move(rows)}};
}

std::string format_sig12(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

}  // namespace

std::string to_json_string(const CorrelationTable& table) { return table_to_json(table).dump(2); }

std::string to_json_string(const MdlModel& model) { return model_to_json(model).dump(2); }

std::string to_json_string(const SettingPrior& prior) { return prior_to_json(prior).dump(2); }

std::string to_json_string(const MetricsReport& report) {
  json capacity{{"bits", report.capacity.bits},
                {"lower_bound", report.capacity.lower_bound},
                {"upper_bound", report.capacity.upper_bound},
                {"iterations", report.capacity.iterations},
                {"argmax", prior_to_json(report.capacity.argmax)}};
  if (report.capacity.p_star) {
    capacity["P_star"] = *report.capacity.p_star;
  } else {
    capacity["P_star"] = nullptr;
  }
  json j{{"M", report.m_value},
         {"F", report.free_will},
         {"H_at_prior", report.h_at_prior},
         {"capacity", std::move(capacity)}};
  return j.dump(2);
}

std::string to_json_string(const LpSolution& solution) {
  json j{{"status", to_string(solution.status)},
         {"M_star", solution.m_star},
         {"F", 1.0 - solution.m_star / 2.0},
         {"lp_iterations", solution.lp_iterations}};
  j["model"] = solution.model ? model_to_json(*solution.model) : json(nullptr);
  return j.dump(2);
}

std::string to_csv_string(const CorrelationTable& table) {
  std::string out = "s,t";
  for (std::size_t xi = 0; xi < table.num_x(); ++xi) {
    for (std::size_t yi = 0; yi < table.num_y(); ++yi) {
      out += ",p_" + std::to_string(table.x_labels()[xi]) + "_" +
             std::to_string(table.y_labels()[yi]);
    }
  }
  out += "\n";
  for (std::size_t si = 0; si < table.num_s(); ++si) {
    for (std::size_t ti = 0; ti < table.num_t(); ++ti) {
      out += std::to_string(table.s_labels()[si]) + "," + std::to_string(table.t_labels()[ti]);
      for (std::size_t xi = 0; xi < table.num_x(); ++xi) {
        for (std::size_t yi = 0; yi < table.num_y(); ++yi) {
          out += "," + format_sig12(table.at_index(xi, yi, si, ti));
        }
      }
      out += "\n";
    }
  }
  return out;
}

std::string curve_to_csv(const std::vector<std::pair<double, double>>& curve) {
  std::string out = "P,H_bits\n";
  for (const auto& [p, h] : curve) {
    out += format_sig12(p) + "," + format_sig12(h) + "\n";
  }
  return out;
}

std::string transcript_to_jsonl(const Transcript& transcript) {
  std::string out;
  for (const auto& m : transcript.messages) {
    json j{{"direction", to_string(m.direction)},
           {"kind", m.kind},
           {"payload", m.payload},
           {"bits", m.bits},
           {"bit_cost", m.bit_cost}};
    out += j.dump() + "\n";
  }
  return out;
}

}  // namespace semiq
