#include "so42/io.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <stdexcept>

namespace so42::io {

namespace {

// JSON has no infinity; keep the report well-formed.
json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json names(const std::vector<GeneratorId>& ids)
{
  json out = json::array();
  for (auto g : ids) out.push_back(std::string(name(g)));
  return out;
}

} // namespace

json structure_table_json(const StructureTable& table)
{
  json j;
  j["schema_version"] = kSchemaVersion;
  j["metric_signature"] = StructureTable::metric_signature();
  json basis = json::array();
  for (auto g : all_generators()) basis.push_back(std::string(name(g)));
  j["basis"] = basis;
  j["convention"] = "[X'_a, X'_b] = sum_c f_ab^c X'_c with X' = -iX";
  json entries = json::array();
  for (auto a : all_generators())
    for (auto b : all_generators())
      for (auto c : all_generators())
        if (int f = table.coefficient(a, b, c); f != 0)
          entries.push_back({std::string(name(a)), std::string(name(b)), std::string(name(c)), f});
  j["entries"] = entries;
  return j;
}

json matrix_json(const Eigen::MatrixXcd& m, const std::string& tag)
{
  json j;
  j["dim"] = m.rows();
  j["tag"] = tag;
  json entries = json::array();
  for (Eigen::Index c = 0; c < m.cols(); ++c)
    for (Eigen::Index r = 0; r < m.rows(); ++r)
      if (m(r, c) != std::complex<double>(0.0)) entries.push_back({r, c, m(r, c).real(), m(r, c).imag()});
  j["entries"] = entries;
  return j;
}

Eigen::MatrixXcd matrix_from_json(const json& j)
{
  const auto dim = j.at("dim").get<Eigen::Index>();
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& e : j.at("entries")) {
    const auto r = e.at(0).get<Eigen::Index>();
    const auto c = e.at(1).get<Eigen::Index>();
    if (r < 0 || c < 0 || r >= dim || c >= dim) throw std::invalid_argument("matrix entry out of range");
    m(r, c) = {e.at(2).get<double>(), e.at(3).get<double>()};
  }
  return m;
}

void write_matrix_csv(std::ostream& os, const Eigen::MatrixXcd& m)
{
  os << "row,col,re,im\n" << std::setprecision(17);
  for (Eigen::Index c = 0; c < m.cols(); ++c)
    for (Eigen::Index r = 0; r < m.rows(); ++r)
      if (m(r, c) != std::complex<double>(0.0)) os << r << ',' << c << ',' << m(r, c).real() << ',' << m(r, c).imag() << '\n';
}

sim::PulseSchedule schedule_from_json(const json& j)
{
  if (!j.is_array()) throw std::invalid_argument("schedule must be a JSON list of segments");
  sim::PulseSchedule s;
  for (const auto& item : j) {
    if (!item.is_object() || !item.contains("duration")) throw std::invalid_argument("segment needs a duration");
    sim::Segment seg;
    seg.duration = item.at("duration").get<double>();
    if (item.contains("u")) {
      for (const auto& [key, value] : item.at("u").items()) {
        const auto g = parse_generator(key);
        if (!g) throw std::invalid_argument("unknown generator in schedule: " + key);
        seg.u[index(*g)] = value.get<double>();
      }
    }
    s.segments.push_back(seg);
  }
  s.validate();
  return s;
}

json schedule_json(const sim::PulseSchedule& s)
{
  json out = json::array();
  for (const auto& seg : s.segments) {
    json u = json::object();
    for (auto g : all_generators())
      if (seg.u[index(g)] != 0.0) u[std::string(name(g))] = seg.u[index(g)];
    out.push_back({{"duration", seg.duration}, {"u", u}});
  }
  return out;
}

sim::PulseSchedule read_schedule(const std::filesystem::path& path)
{
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open schedule file " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("schedule file " + path.string() + ": " + e.what());
  }
  return schedule_from_json(j);
}

void write_trajectory_csv(std::ostream& os, const control::ControlSystem& sys, const rep::RepSet& rep,
                          const sim::Trajectory& traj)
{
  os << "time";
  for (int n = 1; n <= sys.n_max; ++n) os << ",P_n" << n;
  os << ",H,L3,D,norm_defect\n" << std::setprecision(12);
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    const auto& psi = traj.states[i];
    os << traj.times[i];
    for (double p : sim::shell_populations(sys, psi)) os << ',' << p;
    os << ',' << sim::observable_expectation(psi, rep.hamiltonian) << ','
       << sim::observable_expectation(psi, rep.generators[index(GeneratorId::L3)]) << ','
       << sim::observable_expectation(psi, rep.generators[index(GeneratorId::D)]) << ',' << traj.norm_defects[i]
       << '\n';
  }
}

json to_json(const classical::RelationReport& r)
{
  json j;
  j["energy_sign"] = classical::to_string(r.energy_sign);
  j["seed"] = r.seed;
  j["samples"] = r.n_samples;
  j["rejected"] = r.rejected;
  j["tolerance"] = r.tolerance;
  j["convention"] = r.convention;
  j["radial_term"] = classical::to_string(r.realization.radial_term);
  j["flipped"] = names(r.flipped);
  j["variant_found"] = r.variant_found;
  j["max_relation_residual"] = r.max_relation_residual;
  j["max_constant_of_motion"] = r.max_constant_of_motion;
  j["max_time_derivative"] = r.max_time_derivative;
  json rel = json::array();
  for (const auto& x : r.relations)
    rel.push_back({{"a", std::string(name(x.a))}, {"b", std::string(name(x.b))}, {"scaled", x.max_scaled},
                   {"absolute", x.max_abs}});
  j["relations"] = rel;
  json com = json::object();
  for (auto g : all_generators()) com[std::string(name(g))] = r.constant_of_motion[index(g)];
  j["constant_of_motion"] = com;
  j["passed"] = r.passed;
  return j;
}

json to_json(const rep::ResidualReport& r)
{
  json j;
  j["max_residual"] = r.max_residual;
  j["tolerance"] = r.tolerance;
  j["pairs"] = r.pairs.size();
  j["passed"] = r.passed;
  return j;
}

json to_json(const rep::CasimirReport& r)
{
  return {{"l_dot_a", r.l_dot_a}, {"quadratic", r.quadratic}, {"tolerance", r.tolerance}, {"passed", r.passed}};
}

json to_json(const control::ControllabilityReport& r)
{
  json j;
  j["b1_residual"] = r.b1_residual;
  j["ideal_condition_ok"] = r.ideal_condition_ok;
  j["orbit_dim"] = r.orbit_dim;
  j["rank_gap"] = finite_or_null(r.rank_gap);
  j["verdict"] = r.verdict;
  j["lie_dim"] = r.lie_dim;
  j["lie_depth"] = r.lie_depth;
  j["probe_dims"] = r.probe_dims;
  j["orbit_constant"] = r.orbit_constant;
  j["rank_ambiguous"] = r.rank_ambiguous;
  j["probes"] = r.probes;
  j["seed"] = r.seed;
  return j;
}

void write_json(const std::filesystem::path& path, const json& j)
{
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

} // namespace so42::io
