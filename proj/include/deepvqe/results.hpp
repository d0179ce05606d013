#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "deepvqe/pipeline.hpp"

namespace deepvqe {

/// E_FCI - tol <= E_deepVQE <= E_subsystems + tol for whichever energies are
/// present. Throws NumericalError naming the record otherwise.
void check_sandwich(const RunRecord& record, double tolerance = 1e-9);

/// Records sorted by x and then by strategy string.
std::vector<RunRecord> sorted_records(std::vector<RunRecord> records);

/// Columns: x, strategy, start_label, e_deepvqe, e_fci, e_subsystems, e_hf,
/// n_tot, epsilon_used, dims. Missing energies are empty fields.
void write_csv(std::ostream& out, const std::vector<RunRecord>& records);
/// Array of records with every RunRecord field; wall time included.
void write_json(std::ostream& out, const std::vector<RunRecord>& records);

/// Validates every record, sorts, and writes <stem>.csv and <stem>.json into
/// `directory`. Nothing is written when a record fails validation.
void emit_results(const std::filesystem::path& directory, const std::string& stem, const std::vector<RunRecord>& records);

}  // namespace deepvqe
