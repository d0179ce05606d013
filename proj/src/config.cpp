#include "deepvqe/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "deepvqe/errors.hpp"

namespace deepvqe {

namespace pt = boost::property_tree;

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

std::vector<int> parse_int_list(const std::string& text) {
  std::string cleaned = text;
  for (char& c : cleaned)
    if (c == ',' || c == '(' || c == ')') c = ' ';
  std::istringstream in(cleaned);
  std::vector<int> out;
  std::string tok;
  while (in >> tok) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != tok.size()) throw ValidationError("expected an integer, got '" + tok + "'");
    out.push_back(v);
  }
  return out;
}

double parse_double(const std::string& text) {
  std::size_t used = 0;
  double v = 0.0;
  const std::string t = trim(text);
  try {
    v = std::stod(t, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != t.size()) throw ValidationError("expected a number, got '" + text + "'");
  return v;
}

bool parse_bool(const std::string& text) {
  const std::string t = lower(trim(text));
  if (t == "true" || t == "yes" || t == "on" || t == "1") return true;
  if (t == "false" || t == "no" || t == "off" || t == "0") return false;
  throw ValidationError("expected a boolean, got '" + text + "'");
}

std::string format_double(double v) {
  std::ostringstream out;
  out << v;
  return out.str();
}

template <class T, class F>
void read_key(const pt::ptree& section, const std::string& key, T& target, F&& convert) {
  if (auto v = section.get_optional<std::string>(key)) target = convert(*v);
}

void reject_unknown(const pt::ptree& section, const std::string& name, const std::set<std::string>& known) {
  for (const auto& [key, value] : section) {
    (void)value;
    if (!known.count(key)) throw ValidationError("unknown key '" + key + "' in [" + name + "]");
  }
}

}  // namespace

std::vector<int> parse_start_counts(const std::string& text) {
  const std::string t = trim(text);
  if (t.empty()) throw ValidationError("empty start-count label");
  const bool digits_only = t.find_first_not_of("0123456789") == std::string::npos;
  std::vector<int> out;
  if (digits_only) {
    for (char c : t) out.push_back(c - '0');
  } else {
    out = parse_int_list(t);
  }
  if (out.empty()) throw ValidationError("empty start-count label");
  for (int l : out)
    if (l < 1) throw ValidationError("start counts must be positive in '" + text + "'");
  return out;
}

BasisStrategy parse_strategy(const std::string& text) {
  const std::string t = trim(text);
  const auto open = t.find('(');
  const auto close = t.rfind(')');
  if (open == std::string::npos || close == std::string::npos || close < open)
    throw ValidationError("strategy must look like Kind(counts), got '" + text + "'");
  BasisStrategy s;
  s.kind = parse_basis_kind(trim(t.substr(0, open)));
  std::string inner = t.substr(open + 1, close - open - 1);
  std::vector<std::string> parts;
  std::istringstream in(inner);
  for (std::string part; std::getline(in, part, ';');) parts.push_back(trim(part));
  if (parts.empty() || parts[0].empty()) throw ValidationError("strategy '" + text + "' has no start counts");
  s.start_counts = parse_start_counts(parts[0]);
  for (std::size_t k = 1; k < parts.size(); ++k) {
    const auto eq = parts[k].find('=');
    if (eq == std::string::npos) throw ValidationError("expected key=value in '" + parts[k] + "'");
    const std::string key = lower(trim(parts[k].substr(0, eq)));
    const std::string value = trim(parts[k].substr(eq + 1));
    if (key == "eps" || key == "epsilon") {
      s.epsilon = parse_double(value);
    } else if (key == "qubits") {
      const auto v = parse_int_list(value);
      if (v.size() != 1) throw ValidationError("qubits takes one integer");
      s.total_qubit_budget = v[0];
    } else if (key == "budgets") {
      s.qubit_budgets = parse_int_list(value);
    } else if (key == "gs_tol") {
      s.gs_tolerance = parse_double(value);
    } else {
      throw ValidationError("unknown strategy option '" + key + "'");
    }
  }
  return s;
}

std::string describe_strategy(const BasisStrategy& s) {
  std::string out = s.label();
  out.pop_back();
  if (s.epsilon) out += ";eps=" + format_double(*s.epsilon);
  if (s.total_qubit_budget) out += ";qubits=" + std::to_string(*s.total_qubit_budget);
  if (!s.qubit_budgets.empty()) {
    out += ";budgets=";
    for (std::size_t i = 0; i < s.qubit_budgets.size(); ++i) out += (i ? "," : "") + std::to_string(s.qubit_budgets[i]);
  }
  if (s.gs_tolerance != 1e-8) out += ";gs_tol=" + format_double(s.gs_tolerance);
  return out + ")";
}

std::vector<std::vector<int>> parse_groups(const std::string& text) {
  std::vector<std::vector<int>> groups;
  std::istringstream in(text);
  for (std::string part; std::getline(in, part, '|');) {
    auto g = parse_int_list(part);
    if (g.empty()) throw ValidationError("empty orbital group in '" + text + "'");
    groups.push_back(std::move(g));
  }
  return groups;
}

std::vector<double> parse_real_list(const std::string& text) {
  std::string cleaned = text;
  for (char& c : cleaned)
    if (c == ',') c = ' ';
  std::istringstream in(cleaned);
  std::vector<double> out;
  for (std::string tok; in >> tok;) out.push_back(parse_double(tok));
  return out;
}

void RunConfig::validate() const {
  if (geometry.empty() == fcidump.empty()) throw ValidationError("exactly one of geometry and fcidump must be given");
  if (stretch_factors.empty()) throw ValidationError("stretch factor set is empty");
  for (double x : stretch_factors)
    if (!(x > 0.0)) throw ValidationError("stretch factors must be positive");
  if (groups.empty()) throw ValidationError("no orbital groups given");
  std::set<int> seen;
  for (const auto& g : groups)
    for (int p : g)
      if (p < 0 || !seen.insert(p).second) throw ValidationError("orbital groups must be disjoint and non-negative");
  if (strategies.empty()) throw ValidationError("no basis strategies given");
  for (const auto& s : strategies) s.validate(static_cast<int>(groups.size()));
  if (threads < 1) throw ValidationError("thread count must be positive");
}

RunConfig parse_config(std::istream& in, const std::filesystem::path& base) {
  pt::ptree tree;
  try {
    pt::ini_parser::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ParseError(e.message(), e.line());
  }
  auto resolve = [&](const std::string& p) {
    std::filesystem::path path(trim(p));
    return path.is_relative() && !base.empty() ? base / path : path;
  };
  auto as_double = [](const std::string& v) { return parse_double(v); };
  auto as_int = [](const std::string& v) {
    const auto l = parse_int_list(v);
    if (l.size() != 1) throw ValidationError("expected one integer, got '" + v + "'");
    return l[0];
  };

  RunConfig cfg;
  const pt::ptree empty;
  static const std::set<std::string> sections{"input",  "strategies", "references", "subsystem", "fci",
                                              "rhf",    "effective",  "output",     "run"};
  for (const auto& [name, section] : tree) {
    (void)section;
    if (!sections.count(name)) throw ValidationError("unknown section [" + name + "]");
  }

  const auto& input = tree.get_child("input", empty);
  reject_unknown(input, "input", {"geometry", "fcidump", "stretch", "groups"});
  if (auto v = input.get_optional<std::string>("geometry")) cfg.geometry = resolve(*v);
  if (auto v = input.get_optional<std::string>("fcidump")) cfg.fcidump = resolve(*v);
  read_key(input, "stretch", cfg.stretch_factors, parse_real_list);
  read_key(input, "groups", cfg.groups, parse_groups);
  if (!cfg.fcidump.empty() && !input.get_optional<std::string>("stretch")) cfg.stretch_factors = {1.0};

  for (const auto& [key, value] : tree.get_child("strategies", empty)) {
    (void)key;
    cfg.strategies.push_back(parse_strategy(value.data()));
  }

  const auto& refs = tree.get_child("references", empty);
  reject_unknown(refs, "references", {"fci", "rhf", "combined"});
  read_key(refs, "fci", cfg.reference_fci, parse_bool);
  read_key(refs, "rhf", cfg.reference_rhf, parse_bool);
  read_key(refs, "combined", cfg.reference_combined, parse_bool);

  const auto& sub = tree.get_child("subsystem", empty);
  reject_unknown(sub, "subsystem",
                 {"degeneracy_tolerance", "dense_max_qubits", "sz_order", "gs_tolerance", "edge_selection",
                  "edge_tie_tolerance", "lanczos_tolerance"});
  read_key(sub, "degeneracy_tolerance", cfg.subsystem.degeneracy_tolerance, as_double);
  read_key(sub, "dense_max_qubits", cfg.subsystem.dense_max_qubits, as_int);
  read_key(sub, "lanczos_tolerance", cfg.subsystem.lanczos.tolerance, as_double);
  if (auto v = sub.get_optional<std::string>("sz_order")) {
    const std::string o = lower(trim(*v));
    if (o == "ascending") {
      cfg.subsystem.sz_order = SzOrder::Ascending;
    } else if (o == "descending") {
      cfg.subsystem.sz_order = SzOrder::Descending;
    } else {
      throw ValidationError("sz_order must be ascending or descending");
    }
  }
  std::optional<double> gs_tol, tie_tol;
  std::optional<EdgeSelection> selection;
  if (auto v = sub.get_optional<std::string>("gs_tolerance")) gs_tol = parse_double(*v);
  if (auto v = sub.get_optional<std::string>("edge_tie_tolerance")) tie_tol = parse_double(*v);
  if (auto v = sub.get_optional<std::string>("edge_selection")) {
    const std::string o = lower(trim(*v));
    if (o == "near-tie-union") {
      selection = EdgeSelection::NearTieUnion;
    } else if (o == "single-strongest") {
      selection = EdgeSelection::SingleStrongest;
    } else {
      throw ValidationError("edge_selection must be near-tie-union or single-strongest");
    }
  }
  for (auto& s : cfg.strategies) {
    if (gs_tol && s.gs_tolerance == 1e-8) s.gs_tolerance = *gs_tol;
    if (tie_tol) s.edge_tie_tolerance = *tie_tol;
    if (selection) s.edge_selection = *selection;
  }

  const auto& fci = tree.get_child("fci", empty);
  reject_unknown(fci, "fci", {"memory_budget_mb", "lanczos_tolerance"});
  if (auto v = fci.get_optional<std::string>("memory_budget_mb"))
    cfg.fci.memory_budget_bytes = static_cast<std::size_t>(parse_double(*v) * 1024.0 * 1024.0);
  read_key(fci, "lanczos_tolerance", cfg.fci.lanczos.tolerance, as_double);

  const auto& rhf = tree.get_child("rhf", empty);
  reject_unknown(rhf, "rhf", {"damping", "max_iterations", "energy_tolerance", "density_tolerance"});
  read_key(rhf, "damping", cfg.rhf.damping, as_double);
  read_key(rhf, "max_iterations", cfg.rhf.max_iterations, as_int);
  read_key(rhf, "energy_tolerance", cfg.rhf.energy_tolerance, as_double);
  read_key(rhf, "density_tolerance", cfg.rhf.density_tolerance, as_double);

  const auto& eff = tree.get_child("effective", empty);
  reject_unknown(eff, "effective", {"solve", "max_dimension", "dense_max_dimension", "lanczos_tolerance",
                                    "max_matvecs"});
  read_key(eff, "solve", cfg.solve_effective, parse_bool);
  if (auto v = eff.get_optional<std::string>("max_dimension"))
    cfg.effective.max_dimension = static_cast<std::size_t>(parse_double(*v));
  read_key(eff, "dense_max_dimension", cfg.effective.dense_max_dimension, as_int);
  read_key(eff, "lanczos_tolerance", cfg.effective.lanczos.tolerance, as_double);
  if (auto v = eff.get_optional<std::string>("max_matvecs"))
    cfg.effective.lanczos.max_matvecs = static_cast<long>(parse_double(*v));

  const auto& out = tree.get_child("output", empty);
  reject_unknown(out, "output", {"directory", "stem"});
  if (auto v = out.get_optional<std::string>("directory")) cfg.output_directory = resolve(*v);
  if (auto v = out.get_optional<std::string>("stem")) cfg.output_stem = trim(*v);

  const auto& run = tree.get_child("run", empty);
  reject_unknown(run, "run", {"threads"});
  read_key(run, "threads", cfg.threads, as_int);

  cfg.validate();
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config " + path.string());
  return parse_config(in, path.parent_path());
}

}  // namespace deepvqe
