#pragma once

#include <Eigen/Core>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace deepvqe {

/// 1 Å expressed in bohr.
inline constexpr double kBohrPerAngstrom = 1.0 / 0.52917721092;

struct Atom {
  std::string symbol;
  int charge = 0;                // nuclear charge Z
  Eigen::Vector3d position;      // ångström
};

/// Nuclear geometry in ångström plus the uniform stretching factor that was
/// applied to produce it (1.0 for geometries read from disk).
struct MoleculeGeometry {
  std::vector<Atom> atoms;
  double stretching_factor = 1.0;

  std::size_t size() const noexcept { return atoms.size(); }
  int total_charge() const;
  /// Throws ValidationError when two atoms coincide or the stretch is not positive.
  void validate() const;
};

/// Nuclear charge for an element symbol (H through Ar); throws on unknown symbols.
int nuclear_charge(const std::string& symbol);

/// Scale every Cartesian coordinate by `factor`.
MoleculeGeometry apply_stretching(const MoleculeGeometry& geometry, double factor);

MoleculeGeometry read_xyz(std::istream& in);
MoleculeGeometry read_xyz(const std::filesystem::path& path);
void write_xyz(std::ostream& out, const MoleculeGeometry& geometry, const std::string& comment = "");

/// Nuclear repulsion energy in hartree.
double nuclear_repulsion(const MoleculeGeometry& geometry);

}  // namespace deepvqe
