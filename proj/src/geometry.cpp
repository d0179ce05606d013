#include "deepvqe/geometry.hpp"

#include <array>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

#include "deepvqe/errors.hpp"

namespace deepvqe {

namespace {

constexpr std::array<const char*, 18> kElements = {
    "H", "He", "Li", "Be", "B", "C", "N", "O", "F",
    "Ne", "Na", "Mg", "Al", "Si", "P", "S", "Cl", "Ar"};

std::string normalize_symbol(std::string s) {
  for (std::size_t i = 0; i < s.size(); ++i) {
    s[i] = static_cast<char>(i == 0 ? std::toupper(static_cast<unsigned char>(s[i]))
                                    : std::tolower(static_cast<unsigned char>(s[i])));
  }
  return s;
}

}  // namespace

int nuclear_charge(const std::string& symbol) {
  const std::string norm = normalize_symbol(symbol);
  for (std::size_t z = 0; z < kElements.size(); ++z) {
    if (norm == kElements[z]) return static_cast<int>(z + 1);
  }
  throw ValidationError("unknown element symbol '" + symbol + "'");
}

int MoleculeGeometry::total_charge() const {
  int z = 0;
  for (const auto& a : atoms) z += a.charge;
  return z;
}

void MoleculeGeometry::validate() const {
  if (!(stretching_factor > 0.0)) {
    throw ValidationError("stretching factor must be positive");
  }
  for (std::size_t a = 0; a < atoms.size(); ++a) {
    for (std::size_t b = a + 1; b < atoms.size(); ++b) {
      if ((atoms[a].position - atoms[b].position).norm() <= 0.0) {
        throw ValidationError("atoms " + std::to_string(a) + " and " + std::to_string(b) +
                              " coincide");
      }
    }
  }
}

MoleculeGeometry apply_stretching(const MoleculeGeometry& geometry, double factor) {
  if (!(factor > 0.0)) throw ValidationError("stretching factor must be positive");
  MoleculeGeometry out = geometry;
  for (auto& atom : out.atoms) atom.position *= factor;
  out.stretching_factor = geometry.stretching_factor * factor;
  return out;
}

MoleculeGeometry read_xyz(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  auto next_line = [&]() -> bool {
    if (!std::getline(in, line)) return false;
    ++line_no;
    return true;
  };
  if (!next_line()) throw ParseError("empty XYZ input", 1);
  std::size_t count = 0;
  {
    std::istringstream ss(line);
    if (!(ss >> count)) throw ParseError("expected atom count", line_no);
  }
  if (!next_line()) throw ParseError("missing comment line", line_no + 1);

  MoleculeGeometry geometry;
  geometry.atoms.reserve(count);
  while (geometry.atoms.size() < count) {
    if (!next_line()) throw ParseError("unexpected end of XYZ input", line_no + 1);
    std::istringstream ss(line);
    Atom atom;
    double x = 0, y = 0, z = 0;
    if (!(ss >> atom.symbol >> x >> y >> z)) {
      throw ParseError("expected 'element x y z'", line_no);
    }
    try {
      atom.charge = nuclear_charge(atom.symbol);
    } catch (const ValidationError& e) {
      throw ParseError(e.what(), line_no);
    }
    atom.symbol = normalize_symbol(atom.symbol);
    atom.position = Eigen::Vector3d(x, y, z);
    geometry.atoms.push_back(std::move(atom));
  }
  geometry.validate();
  return geometry;
}

MoleculeGeometry read_xyz(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open XYZ file " + path.string());
  return read_xyz(in);
}

void write_xyz(std::ostream& out, const MoleculeGeometry& geometry, const std::string& comment) {
  out << geometry.atoms.size() << '\n' << comment << '\n';
  out << std::fixed << std::setprecision(10);
  for (const auto& a : geometry.atoms) {
    out << a.symbol << ' ' << a.position.x() << ' ' << a.position.y() << ' ' << a.position.z()
        << '\n';
  }
}

double nuclear_repulsion(const MoleculeGeometry& geometry) {
  double e = 0.0;
  const auto& atoms = geometry.atoms;
  for (std::size_t a = 0; a < atoms.size(); ++a) {
    for (std::size_t b = a + 1; b < atoms.size(); ++b) {
      const double r = (atoms[a].position - atoms[b].position).norm() * kBohrPerAngstrom;
      e += atoms[a].charge * atoms[b].charge / r;
    }
  }
  return e;
}

}  // namespace deepvqe
