#pragma once

#include <string>
#include <utility>
#include <vector>

#include "semiq/game.hpp"
#include "semiq/mdl.hpp"
#include "semiq/metrics.hpp"
#include "semiq/minm.hpp"
#include "semiq/steering.hpp"

namespace semiq {

// JSON conventions: complex numbers are two-element arrays [re, im] (bare
// numbers are accepted as real entries on input); matrices are nested
// row-major arrays. Parse failures raise ValidationError naming the field.

// Game spec:
//   {"shared_state": matrix,
//    "alice_inputs": {"format": "matrix"|"bloch", "states": [...],
//                     "labels": [ints]?},
//    "bob_inputs": ..., "alice_povm": [matrix, ...]?, "bob_povm": ...?}
// Omitted POVMs default to the Bell-projection POVM of the inferred
// dimension; omitted labels default to 1..n.
GameSpec parse_game_spec(const std::string& text);

// Model: {"lambda": [names], "dist": {"s,t": [probs]}, "f": ..., "g": ...,
//         "setting_dependent": bool, "x_labels"?: [...], "y_labels"?: [...]}
// f and g are flat outcome arrays (one per λ) or per-setting rows.
MdlModel parse_mdl_model(const std::string& text);

// Table: {"x_labels", "y_labels", "s_labels", "t_labels",
//         "values": [s][t][x][y]}
CorrelationTable parse_correlation_table(const std::string& text);

// Prior: {"s_labels", "t_labels", "p": [s][t]}
SettingPrior parse_setting_prior(const std::string& text);

std::string to_json_string(const CorrelationTable& table);
std::string to_json_string(const MdlModel& model);
std::string to_json_string(const SettingPrior& prior);
std::string to_json_string(const MetricsReport& report);
std::string to_json_string(const LpSolution& solution);

// CSV with 12 significant digits: header s,t,p_<x>_<y>,... one row per
// setting pair.
std::string to_csv_string(const CorrelationTable& table);

// Header P,H_bits.
std::string curve_to_csv(const std::vector<std::pair<double, double>>& curve);

// One JSON object per line, protocol order.
std::string transcript_to_jsonl(const Transcript& transcript);

}  // namespace semiq
