#include "cheb/report.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace cheb {

void CheckReport::add_trial(std::size_t trial, int dim, double m, double raw,
                            const nlohmann::json &instance) {
  if (records.empty()) {
    min_margin = m;
    max_margin = m;
  } else {
    min_margin = std::min(min_margin, m);
    max_margin = std::max(max_margin, m);
  }
  records.push_back({trial, dim, m});
  if (m < -tolerance)
    violations.push_back({trial, m, raw, instance});
}

nlohmann::json to_json(const CheckReport &r, bool include_elapsed) {
  nlohmann::json j;
  j["suite_id"] = r.suite_id;
  j["trials"] = r.trials;
  j["dims"] = r.dims;
  j["seed"] = r.seed;
  j["tolerance"] = r.tolerance;
  if (!r.form.empty())
    j["form"] = r.form;
  j["min_margin"] = r.min_margin;
  j["max_margin"] = r.max_margin;
  nlohmann::json v = nlohmann::json::array();
  for (const auto &x : r.violations)
    v.push_back({{"trial", x.trial},
                 {"margin", x.margin},
                 {"raw_margin", x.raw_margin},
                 {"instance", x.instance}});
  j["violations"] = std::move(v);
  if (r.worst_residual != 0.0)
    j["worst_residual"] = r.worst_residual;
  if (r.printed_form_violations)
    j["printed_form_violations"] = *r.printed_form_violations;
  if (!r.notes.empty())
    j["notes"] = r.notes;
  if (!r.config.is_null())
    j["config"] = r.config;
  if (include_elapsed)
    j["elapsed_s"] = r.elapsed_s;
  return j;
}

std::string to_csv(const CheckReport &r) {
  std::ostringstream os;
  os.precision(17);
  os << "trial,dim,margin\n";
  for (const auto &t : r.records)
    os << t.trial << ',' << t.dim << ',' << t.margin << '\n';
  return os.str();
}

void write_file_atomic(const std::filesystem::path &path, const std::string &content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out)
      throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    out << content;
    out.flush();
    if (!out)
      throw std::runtime_error("write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw std::runtime_error("cannot rename into " + path.string());
  }
}

} // namespace cheb
