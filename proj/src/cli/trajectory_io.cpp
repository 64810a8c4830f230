#include "dirac/trajectory_io.hpp"

#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

namespace dirac {

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

namespace {

double multiplier(const StepDiagnostics* d, int i) {
  if (d == nullptr || i >= d->multipliers.size()) return 0.0;
  return d->multipliers[i];
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, sep)) out.push_back(cell);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

double parse_double(const std::string& s) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw DiracError(ErrorCode::kConfigError, "malformed number '" + s + "' in trajectory CSV");
  }
  return v;
}

}  // namespace

void write_trajectory_csv(const Trajectory& traj, int m, std::ostream& out) {
  const Eigen::Index n = traj.points.empty() ? 0 : traj.points.front().dim();
  out << "k";
  for (Eigen::Index i = 0; i < n; ++i) out << ",q_" << i;
  for (Eigen::Index i = 0; i < n; ++i) out << ",p_" << i;
  out << ",newton_iters,residual_norm,constraint_violation";
  for (int i = 0; i < m; ++i) out << ",lambda_" << i;
  out << '\n';
  for (std::size_t k = 0; k < traj.points.size(); ++k) {
    const PhasePoint& z = traj.points[k];
    const StepDiagnostics* d = k > 0 && k - 1 < traj.diagnostics.size() ? &traj.diagnostics[k - 1] : nullptr;
    out << k;
    for (Eigen::Index i = 0; i < n; ++i) out << ',' << format_double(z.q()[i]);
    for (Eigen::Index i = 0; i < n; ++i) out << ',' << format_double(z.p()[i]);
    out << ',' << (d ? d->newton_iters : 0) << ',' << format_double(d ? d->residual_norm : 0.0) << ','
        << format_double(d ? d->constraint_violation : 0.0);
    for (int i = 0; i < m; ++i) out << ',' << format_double(multiplier(d, i));
    out << '\n';
  }
}

Trajectory read_trajectory_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw DiracError(ErrorCode::kConfigError, "empty trajectory CSV");
  const std::vector<std::string> header = split(line, ',');
  int n = 0, m = 0;
  for (const auto& h : header) {
    if (h.rfind("q_", 0) == 0) ++n;
    if (h.rfind("lambda_", 0) == 0) ++m;
  }
  const std::size_t expected = 1 + 2 * static_cast<std::size_t>(n) + 3 + static_cast<std::size_t>(m);
  if (n == 0 || header.size() != expected) throw DiracError(ErrorCode::kConfigError, "unexpected trajectory CSV header");

  Trajectory traj;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const std::vector<std::string> cells = split(line, ',');
    if (cells.size() != expected) throw DiracError(ErrorCode::kConfigError, "trajectory CSV row has wrong width");
    Vector q(n), p(n);
    for (int i = 0; i < n; ++i) {
      q[i] = parse_double(cells[1 + i]);
      p[i] = parse_double(cells[1 + n + i]);
    }
    const std::size_t k = traj.points.size();
    traj.points.emplace_back(q, p);
    if (k > 0) {
      StepDiagnostics d;
      d.newton_iters = static_cast<int>(parse_double(cells[1 + 2 * n]));
      d.residual_norm = parse_double(cells[2 + 2 * n]);
      d.constraint_violation = parse_double(cells[3 + 2 * n]);
      d.multipliers = Vector(m);
      for (int i = 0; i < m; ++i) d.multipliers[i] = parse_double(cells[4 + 2 * n + i]);
      traj.diagnostics.push_back(std::move(d));
    }
  }
  return traj;
}

nlohmann::json trajectory_to_json(const Trajectory& traj, int m) {
  auto vec = [](const Vector& v) { return std::vector<double>(v.data(), v.data() + v.size()); };
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t k = 0; k < traj.points.size(); ++k) {
    const StepDiagnostics* d = k > 0 && k - 1 < traj.diagnostics.size() ? &traj.diagnostics[k - 1] : nullptr;
    std::vector<double> lambda(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) lambda[static_cast<std::size_t>(i)] = multiplier(d, i);
    rows.push_back({{"k", k},
                    {"q", vec(traj.points[k].q())},
                    {"p", vec(traj.points[k].p())},
                    {"newton_iters", d ? d->newton_iters : 0},
                    {"residual_norm", d ? d->residual_norm : 0.0},
                    {"constraint_violation", d ? d->constraint_violation : 0.0},
                    {"lambda", lambda}});
  }
  return rows;
}

}  // namespace dirac
