#pragma once

#include <filesystem>
#include <iosfwd>

#include "deepvqe/integral_set.hpp"

namespace deepvqe {

/// Reads the FCIDUMP text format: a namelist header carrying NORB, NELEC and
/// optionally MS2, then "value i j k l" records with 1-based chemist-order
/// indices. The core energy sits at 0 0 0 0. Fortran exponents ("1.0D-3")
/// are accepted. Malformed input raises ParseError with the line number.
IntegralSet read_fcidump(std::istream& in);
IntegralSet read_fcidump(const std::filesystem::path& path);

/// Writes every symmetry-unique nonzero element with round-trip precision.
void write_fcidump(std::ostream& out, const IntegralSet& integrals);
void write_fcidump(const std::filesystem::path& path, const IntegralSet& integrals);

}  // namespace deepvqe
