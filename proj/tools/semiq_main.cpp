// Command-line front end: loads game/model specs, runs the computations and
// emits tables, curves, transcripts and solver results in stable formats.
//
// Exit codes: 0 success, 1 computation error, 2 input/validation error.

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "semiq/errors.hpp"
#include "semiq/game.hpp"
#include "semiq/json_io.hpp"
#include "semiq/mdl.hpp"
#include "semiq/metrics.hpp"
#include "semiq/minm.hpp"
#include "semiq/rng.hpp"
#include "semiq/steering.hpp"

namespace {

using namespace semiq;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open input file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot open output file '" + path + "'");
  out << content;
}

std::uint64_t default_seed() {
  if (const char* env = std::getenv("SEMIQ_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw ValidationError("SEMIQ_SEED must be an unsigned integer");
    }
  }
  return 12345;
}

GameSpec load_game(const std::string& builtin, const std::string& input) {
  if (!builtin.empty()) {
    if (builtin == "tetrahedron") return tetrahedron_game();
    if (builtin == "steering-demo") return steering_demo_game();
    throw ValidationError("unknown builtin game '" + builtin +
                          "' (available: tetrahedron, steering-demo)");
  }
  if (input.empty()) throw ValidationError("need --builtin or --input");
  return parse_game_spec(read_file(input));
}

MdlModel load_model(const std::string& builtin, const std::string& input) {
  if (!builtin.empty()) {
    if (builtin == "paper") return paper_model();
    throw ValidationError("unknown builtin model '" + builtin + "' (available: paper)");
  }
  if (input.empty()) throw ValidationError("need --builtin or --input");
  return parse_mdl_model(read_file(input));
}

CorrelationTable load_table(const std::string& builtin, const std::string& input) {
  if (!builtin.empty()) {
    if (builtin == "tetrahedron") return correlation(tetrahedron_game());
    throw ValidationError("unknown builtin target '" + builtin + "' (available: tetrahedron)");
  }
  if (input.empty()) throw ValidationError("need --builtin or --input");
  return parse_correlation_table(read_file(input));
}

SettingPrior load_prior(const std::string& spec, const MdlModel& model) {
  if (spec.empty() || spec == "uniform") {
    return SettingPrior::uniform(model.s_labels(), model.t_labels());
  }
  SettingPrior prior = parse_setting_prior(read_file(spec));
  return prior;
}

struct CommonOpts {
  std::string builtin;
  std::string input;
  std::string output;
  std::string format = "csv";
  std::uint64_t seed = 0;
  bool seed_set = false;
  long samples = 0;
  int threads = 1;

  std::uint64_t resolved_seed() const { return seed_set ? seed : default_seed(); }
};

void add_io_options(CLI::App* cmd, CommonOpts& opts, bool with_format) {
  auto* b = cmd->add_option("--builtin", opts.builtin, "Use an embedded spec");
  auto* i = cmd->add_option("--input", opts.input, "Path to a JSON spec");
  b->excludes(i);
  i->excludes(b);
  cmd->add_option("-o,--output", opts.output, "Output path (default: stdout)");
  if (with_format) {
    cmd->add_option("--format", opts.format, "Output format: csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
  }
}

void add_seed_option(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option_function<std::uint64_t>(
         "--seed",
         [&opts](const std::uint64_t& v) {
           opts.seed = v;
           opts.seed_set = true;
         },
         "RNG seed (default: SEMIQ_SEED env var, else 12345)");
}

// Accepts either a builtin game name or a spec path.
GameSpec load_game_flex(const std::string& ref) {
  if (ref == "tetrahedron" || ref == "steering-demo") return load_game(ref, "");
  return load_game("", ref);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"semiq: semi-quantum nonlocal game simulator and analysis toolkit"};
  app.require_subcommand(1);

  CommonOpts corr_opts;
  auto* corr = app.add_subcommand("correlations", "Compute the quantum correlation table");
  add_io_options(corr, corr_opts, true);

  CommonOpts mdl_opts;
  std::string verify_against;
  auto* mdl = app.add_subcommand("mdl", "Evaluate a measurement-dependent local model");
  add_io_options(mdl, mdl_opts, true);
  mdl->add_option("--verify-against", verify_against,
                  "Game spec (builtin name or path) to compare the model table against");
  mdl->add_option("--samples", mdl_opts.samples,
                  "Also estimate the table from this many samples per setting pair");
  mdl->add_option("--threads", mdl_opts.threads, "Worker thread cap for sampling");
  add_seed_option(mdl, mdl_opts);

  CommonOpts metrics_opts;
  std::string prior_spec = "uniform";
  auto* metrics = app.add_subcommand("metrics", "Measurement-dependence metrics of a model");
  add_io_options(metrics, metrics_opts, false);
  metrics->add_option("--prior", prior_spec, "Setting prior: 'uniform' or a JSON path");

  CommonOpts curve_opts;
  int grid_points = 101;
  auto* curve_cmd = app.add_subcommand("curve", "Mutual information vs same-label mass P");
  add_io_options(curve_cmd, curve_opts, true);
  curve_opts.format = "csv";
  curve_cmd->add_option("--grid", grid_points, "Number of grid points (default 101)")
      ->check(CLI::PositiveNumber);

  CommonOpts steer_opts;
  long rounds = 10000;
  std::string variant_name = "one_way";
  std::string rounds_csv_path;
  std::string transcript_path;
  auto* steer = app.add_subcommand("steering", "Simulate the LOCC steering-game protocol");
  add_io_options(steer, steer_opts, false);
  steer->add_option("--rounds", rounds, "Sampled rounds per setting pair (default 10000)")
      ->check(CLI::PositiveNumber);
  steer->add_option("--variant", variant_name, "one_way or two_way")
      ->check(CLI::IsMember({"one_way", "two_way"}));
  steer->add_option("--rounds-csv", rounds_csv_path,
                    "Also stream every sampled round as CSV s,t,x,y to this path");
  steer->add_option("--transcript-jsonl", transcript_path,
                    "Write one sample round's transcript as JSON lines to this path");
  steer->add_option("--threads", steer_opts.threads, "Worker thread cap for sampling");
  add_seed_option(steer, steer_opts);

  CommonOpts minm_opts;
  std::string mode_name = "lambda_only";
  auto* minm = app.add_subcommand("minm", "Minimal measurement dependence via linear programming");
  add_io_options(minm, minm_opts, false);
  minm->add_option("--mode", mode_name, "lambda_only or setting_dependent")
      ->check(CLI::IsMember({"lambda_only", "setting_dependent"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (corr->parsed()) {
      const GameSpec game = load_game(corr_opts.builtin, corr_opts.input);
      std::vector<std::string> warnings;
      classify(game, &warnings);
      for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
      const CorrelationTable table = correlation(game);
      write_output(corr_opts.output, corr_opts.format == "json" ? to_json_string(table) + "\n"
                                                                : to_csv_string(table));
      return 0;
    }

    if (mdl->parsed()) {
      const MdlModel model = load_model(mdl_opts.builtin, mdl_opts.input);
      const CorrelationTable table = model_table(model);
      RandomStream rng(mdl_opts.resolved_seed());

      double verify_dev = -1.0;
      if (!verify_against.empty()) {
        const GameSpec game = load_game_flex(verify_against);
        verify_dev = table.max_abs_difference(correlation(game));
      }

      double empirical_dev = -1.0;
      std::string empirical_json;
      if (mdl_opts.samples > 0) {
        const CorrelationTable emp =
            empirical_table(model, mdl_opts.samples, rng, mdl_opts.threads);
        empirical_dev = emp.max_abs_difference(table);
        empirical_json = to_json_string(emp);
      }

      if (mdl_opts.format == "json") {
        std::string out = "{\n  \"table\": " + to_json_string(table);
        if (verify_dev >= 0.0) {
          out += ",\n  \"verification\": {\"against\": \"" + verify_against +
                 "\", \"max_abs_deviation\": " + std::to_string(verify_dev) + "}";
        }
        if (empirical_dev >= 0.0) {
          out += ",\n  \"empirical\": {\"samples_per_setting\": " +
                 std::to_string(mdl_opts.samples) +
                 ", \"max_abs_deviation_from_exact\": " + std::to_string(empirical_dev) +
                 ", \"table\": " + empirical_json + "}";
        }
        out += "\n}\n";
        write_output(mdl_opts.output, out);
      } else {
        std::string out = to_csv_string(table);
        if (verify_dev >= 0.0) {
          out += "# verify_against=" + verify_against +
                 " max_abs_deviation=" + std::to_string(verify_dev) + "\n";
        }
        if (empirical_dev >= 0.0) {
          out += "# samples_per_setting=" + std::to_string(mdl_opts.samples) +
                 " empirical_max_abs_deviation=" + std::to_string(empirical_dev) + "\n";
        }
        write_output(mdl_opts.output, out);
      }
      return 0;
    }

    if (metrics->parsed()) {
      const MdlModel model = load_model(metrics_opts.builtin, metrics_opts.input);
      const SettingPrior prior = load_prior(prior_spec, model);
      const MetricsReport report = metrics_report(model, prior);
      write_output(metrics_opts.output, to_json_string(report) + "\n");
      return 0;
    }

    if (curve_cmd->parsed()) {
      const MdlModel model = load_model(curve_opts.builtin, curve_opts.input);
      const auto points = mi_curve(model, grid_points);
      if (curve_opts.format == "json") {
        std::string out = "[\n";
        for (std::size_t i = 0; i < points.size(); ++i) {
          out += "  {\"P\": " + std::to_string(points[i].first) +
                 ", \"H_bits\": " + std::to_string(points[i].second) + "}";
          out += (i + 1 < points.size()) ? ",\n" : "\n";
        }
        out += "]\n";
        write_output(curve_opts.output, out);
      } else {
        write_output(curve_opts.output, curve_to_csv(points));
      }
      return 0;
    }

    if (steer->parsed()) {
      const GameSpec game = load_game(steer_opts.builtin, steer_opts.input);
      const ProtocolVariant variant =
          variant_name == "two_way" ? ProtocolVariant::kTwoWay : ProtocolVariant::kOneWay;
      ProtocolConfig config(game, variant);
      LoccSimulator sim(std::move(config));
      RandomStream rng(steer_opts.resolved_seed());

      const CorrelationTable exact = sim.exact_table();

      CorrelationTable empirical = exact;  // replaced below
      if (!rounds_csv_path.empty()) {
        // Slow path: full per-round protocol runs, streamed as they happen.
        std::ofstream rounds_out(rounds_csv_path, std::ios::binary);
        if (!rounds_out) {
          throw ValidationError("cannot open rounds CSV path '" + rounds_csv_path + "'");
        }
        rounds_out << "s,t,x,y\n";
        const auto& g = sim.config().game;
        std::vector<double> counts(exact.values().size(), 0.0);
        const std::size_t n_t = g.t_labels().size();
        const std::size_t n_x = g.x_labels().size();
        const std::size_t n_y = g.y_labels().size();
        for (std::size_t si = 0; si < g.s_labels().size(); ++si) {
          for (std::size_t ti = 0; ti < n_t; ++ti) {
            RandomStream cell_rng = rng.split(si * n_t + ti);
            for (long r = 0; r < rounds; ++r) {
              const RoundResult res =
                  sim.run_round(g.s_labels()[si], g.t_labels()[ti], cell_rng);
              rounds_out << g.s_labels()[si] << "," << g.t_labels()[ti] << "," << res.x << ","
                         << res.y << "\n";
              std::size_t xi = 0, yi = 0;
              while (g.x_labels()[xi] != res.x) ++xi;
              while (g.y_labels()[yi] != res.y) ++yi;
              counts[((si * n_t + ti) * n_x + xi) * n_y + yi] += 1.0;
            }
          }
        }
        for (auto& c : counts) c /= static_cast<double>(rounds);
        empirical = CorrelationTable(g.x_labels(), g.y_labels(), g.s_labels(), g.t_labels(),
                                     std::move(counts));
      } else {
        empirical = sim.empirical_table(rounds, rng, steer_opts.threads);
      }

      if (!transcript_path.empty()) {
        RandomStream transcript_rng = rng.split(0xffffffffULL);
        const RoundResult res = sim.run_round(sim.config().game.s_labels().front(),
                                              sim.config().game.t_labels().front(),
                                              transcript_rng);
        write_output(transcript_path, transcript_to_jsonl(res.transcript));
      }

      const long cells =
          static_cast<long>(sim.config().game.s_labels().size() *
                            sim.config().game.t_labels().size());
      std::string out = "{\n";
      out += "  \"variant\": \"" + std::string(to_string(variant)) + "\",\n";
      out += "  \"rounds_per_setting\": " + std::to_string(rounds) + ",\n";
      out += "  \"total_rounds\": " + std::to_string(rounds * cells) + ",\n";
      out += "  \"forward_bits_per_round\": " + std::to_string(sim.forward_bits_per_round()) +
             ",\n";
      out += "  \"backward_bits_per_round\": " + std::to_string(sim.backward_bits_per_round()) +
             ",\n";
      out += "  \"total_forward_bits\": " +
             std::to_string(rounds * cells * sim.forward_bits_per_round()) + ",\n";
      out += "  \"total_backward_bits\": " +
             std::to_string(rounds * cells * sim.backward_bits_per_round()) + ",\n";
      out += "  \"max_abs_deviation\": " + std::to_string(empirical.max_abs_difference(exact)) +
             ",\n";
      out += "  \"exact_table\": " + to_json_string(exact) + ",\n";
      out += "  \"empirical_table\": " + to_json_string(empirical) + "\n}\n";
      write_output(steer_opts.output, out);
      return 0;
    }

    if (minm->parsed()) {
      const CorrelationTable target = load_table(minm_opts.builtin, minm_opts.input);
      const LpSolution solution = min_M(target, strategy_mode_from_string(mode_name));
      write_output(minm_opts.output, to_json_string(solution) + "\n");
      return 0;
    }
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  std::cerr << "error: no subcommand\n";
  return 2;
}
