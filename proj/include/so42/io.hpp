#pragma once

// JSON / CSV serialization of tables, matrices, schedules, trajectories and
// reports.

#include <filesystem>
#include <ostream>
#include <string>

#include <Eigen/Core>
#include <json.hpp>

#include "so42/algebra.hpp"
#include "so42/classical.hpp"
#include "so42/controllability.hpp"
#include "so42/representation.hpp"
#include "so42/simulator.hpp"

namespace so42::io {

using json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

/// {schema_version, metric_signature, basis, entries: [[a, b, c, f], ...]}
/// with one entry per nonzero f_ab^c.
json structure_table_json(const StructureTable& table = StructureTable::so42());

/// {dim, tag, entries: [[row, col, re, im], ...]} (nonzero entries only).
json matrix_json(const Eigen::MatrixXcd& m, const std::string& tag = "none");
Eigen::MatrixXcd matrix_from_json(const json& j);

/// "row,col,re,im" lines with a header.
void write_matrix_csv(std::ostream& os, const Eigen::MatrixXcd& m);

/// Schedule document: [{"duration": 0.5, "u": {"L1": 0.2, "C": -1}}, ...].
/// Throws std::invalid_argument on unknown generators or malformed entries.
sim::PulseSchedule schedule_from_json(const json& j);
json schedule_json(const sim::PulseSchedule& s);
sim::PulseSchedule read_schedule(const std::filesystem::path& path);

/// time, P(n=1..n_max), <H>, <L3>, <D>, norm_defect.
void write_trajectory_csv(std::ostream& os, const control::ControlSystem& sys, const rep::RepSet& rep,
                          const sim::Trajectory& traj);

json to_json(const classical::RelationReport& r);
json to_json(const rep::ResidualReport& r);
json to_json(const rep::CasimirReport& r);
json to_json(const control::ControllabilityReport& r);

/// Writes `j` pretty-printed with a trailing newline.
void write_json(const std::filesystem::path& path, const json& j);

} // namespace so42::io
