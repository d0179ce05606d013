#include "deepvqe/results.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <json.hpp>
#include <sstream>

#include "deepvqe/errors.hpp"

namespace deepvqe {

namespace {

std::string format(double v) {
  std::ostringstream out;
  out << std::setprecision(17) << v;
  return out.str();
}

std::string format(const std::optional<double>& v) { return v ? format(*v) : std::string(); }

std::string epsilon_used(const RunRecord& r) {
  if (r.epsilon) return format(*r.epsilon);
  std::string s;
  for (std::size_t i = 0; i < r.epsilon_adapt.size(); ++i) s += (i ? ";" : "") + format(r.epsilon_adapt[i]);
  return s;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

nlohmann::json optional_json(const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(); }

}  // namespace

void check_sandwich(const RunRecord& r, double tol) {
  if (!r.e_deepvqe) return;
  const double e = *r.e_deepvqe;
  std::ostringstream where;
  where << r.strategy << " at x=" << r.x;
  if (r.e_fci && e < *r.e_fci - tol)
    throw NumericalError("deep VQE energy below FCI for " + where.str() + " (" + format(e) + " < " + format(*r.e_fci) + ")");
  if (r.e_subsystems && e > *r.e_subsystems + tol)
    throw NumericalError("deep VQE energy above the combined-subsystem energy for " + where.str() + " (" + format(e) +
                         " > " + format(*r.e_subsystems) + ")");
}

std::vector<RunRecord> sorted_records(std::vector<RunRecord> records) {
  std::stable_sort(records.begin(), records.end(), [](const RunRecord& a, const RunRecord& b) {
    if (a.x != b.x) return a.x < b.x;
    return a.strategy < b.strategy;
  });
  return records;
}

void write_csv(std::ostream& out, const std::vector<RunRecord>& records) {
  out << "x,strategy,start_label,e_deepvqe,e_fci,e_subsystems,e_hf,n_tot,epsilon_used,dims\n";
  for (const auto& r : records) {
    std::string dims;
    for (std::size_t i = 0; i < r.dims.size(); ++i) dims += (i ? ";" : "") + std::to_string(r.dims[i]);
    out << format(r.x) << ',' << csv_field(r.strategy) << ',' << csv_field(r.start_label) << ','
        << format(r.e_deepvqe) << ',' << format(r.e_fci) << ',' << format(r.e_subsystems) << ',' << format(r.e_hf)
        << ',' << r.n_tot << ',' << epsilon_used(r) << ',' << dims << '\n';
  }
}

void write_json(std::ostream& out, const std::vector<RunRecord>& records) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : records) {
    nlohmann::json j;
    j["x"] = r.x;
    j["strategy"] = r.strategy;
    j["start_label"] = r.start_label;
    j["e_deepvqe"] = optional_json(r.e_deepvqe);
    j["e_fci"] = optional_json(r.e_fci);
    j["e_subsystems"] = optional_json(r.e_subsystems);
    j["e_hf"] = optional_json(r.e_hf);
    j["n_tot"] = r.n_tot;
    j["dims"] = r.dims;
    j["qubits"] = r.qubits;
    j["epsilon"] = optional_json(r.epsilon);
    j["epsilon_adapt"] = r.epsilon_adapt;
    j["n_interactions"] = r.n_interactions;
    j["matvecs"] = r.matvecs;
    j["max_reconstruction_error"] = r.max_reconstruction_error;
    j["wall_seconds"] = r.wall_seconds;
    arr.push_back(std::move(j));
  }
  out << arr.dump(2) << "\n";
}

void emit_results(const std::filesystem::path& directory, const std::string& stem, const std::vector<RunRecord>& records) {
  if (records.empty()) throw ValidationError("no results to emit");
  for (const auto& r : records) check_sandwich(r);
  const auto sorted = sorted_records(records);
  std::error_code ec;
  std::filesystem::create_directories(directory, ec);
  const auto csv_path = directory / (stem + ".csv");
  const auto json_path = directory / (stem + ".json");
  std::ofstream csv(csv_path, std::ios::binary);
  if (!csv) throw ValidationError("cannot write " + csv_path.string());
  write_csv(csv, sorted);
  std::ofstream json(json_path, std::ios::binary);
  if (!json) throw ValidationError("cannot write " + json_path.string());
  write_json(json, sorted);
  if (!csv || !json) throw ValidationError("failed writing results to " + directory.string());
}

}  // namespace deepvqe
