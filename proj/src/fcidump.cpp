#include "deepvqe/fcidump.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>
#include <string>

#include "deepvqe/errors.hpp"

namespace deepvqe {

namespace {

std::string upper(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::toupper(c); });
  return s;
}

bool parse_double(std::string token, double& value) {
  std::replace_if(token.begin(), token.end(), [](char c) { return c == 'D' || c == 'd'; }, 'E');
  const char* first = token.data();
  const char* last = first + token.size();
  if (!token.empty() && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  return ec == std::errc() && ptr == last;
}

bool parse_int(const std::string& token, int& value) {
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  return ec == std::errc() && ptr == token.data() + token.size();
}

// Extracts KEY=value pairs from the namelist header. ORBSYM lists are skipped.
std::map<std::string, std::string> parse_header(const std::string& text, std::size_t line) {
  std::map<std::string, std::string> kv;
  std::string flat = text;
  std::replace(flat.begin(), flat.end(), ',', ' ');
  std::istringstream ss(flat);
  std::string token, pending_key;
  while (ss >> token) {
    const std::string u = upper(token);
    if (u == "&FCI" || u == "&END" || u == "/" || u == "$FCI" || u == "$END") continue;
    const auto eq = u.find('=');
    if (eq != std::string::npos) {
      pending_key = u.substr(0, eq);
      const std::string rest = u.substr(eq + 1);
      if (!rest.empty()) {
        kv[pending_key] = rest;
        pending_key.clear();
      }
    } else if (!pending_key.empty()) {
      kv[pending_key] = u;
      pending_key.clear();
    }
  }
  if (!kv.count("NORB")) throw ParseError("FCIDUMP header lacks NORB", line);
  if (!kv.count("NELEC")) throw ParseError("FCIDUMP header lacks NELEC", line);
  return kv;
}

}  // namespace

IntegralSet read_fcidump(std::istream& in) {
  std::string line_text, header;
  std::size_t line = 0;
  bool header_done = false;
  while (std::getline(in, line_text)) {
    ++line;
    header += ' ' + line_text;
    const std::string u = upper(line_text);
    const auto first = u.find_first_not_of(" \t\r");
    if (u.find("&END") != std::string::npos || u.find("$END") != std::string::npos ||
        (first != std::string::npos && u[first] == '/')) {
      header_done = true;
      break;
    }
  }
  if (!header_done) throw ParseError("FCIDUMP header is not terminated", line);
  const auto kv = parse_header(header, line);

  int norb = 0, nelec = 0, ms2 = 0;
  if (!parse_int(kv.at("NORB"), norb) || norb <= 0) throw ParseError("invalid NORB", line);
  if (!parse_int(kv.at("NELEC"), nelec) || nelec < 0) throw ParseError("invalid NELEC", line);
  if (kv.count("MS2") && !parse_int(kv.at("MS2"), ms2)) throw ParseError("invalid MS2", line);

  IntegralSet ints(norb);
  ints.n_electrons = nelec;
  ints.ms2 = ms2;
  ints.orbital_basis_label = "fcidump";

  while (std::getline(in, line_text)) {
    ++line;
    std::istringstream ss(line_text);
    std::string tokens[6];
    int count = 0;
    while (count < 6 && ss >> tokens[count]) ++count;
    if (count == 0) continue;
    if (count != 5) throw ParseError("expected 'value i j k l'", line);
    double v = 0.0;
    if (!parse_double(tokens[0], v)) throw ParseError("non-numeric value '" + tokens[0] + "'", line);
    int idx[4];
    for (int t = 0; t < 4; ++t) {
      if (!parse_int(tokens[t + 1], idx[t])) throw ParseError("non-integer index '" + tokens[t + 1] + "'", line);
      if (idx[t] < 0 || idx[t] > norb) throw ParseError("index out of range", line);
    }
    const int i = idx[0] - 1, j = idx[1] - 1, k = idx[2] - 1, l = idx[3] - 1;
    if (idx[0] == 0 && idx[1] == 0 && idx[2] == 0 && idx[3] == 0) {
      ints.e_nuc = v;
    } else if (idx[0] > 0 && idx[1] > 0 && idx[2] == 0 && idx[3] == 0) {
      ints.h1(i, j) = ints.h1(j, i) = v;
    } else if (idx[0] > 0 && idx[1] > 0 && idx[2] > 0 && idx[3] > 0) {
      const int perm[8][4] = {{i, j, k, l}, {j, i, k, l}, {i, j, l, k}, {j, i, l, k},
                              {k, l, i, j}, {l, k, i, j}, {k, l, j, i}, {l, k, j, i}};
      for (const auto& q : perm) ints.set_chem(q[0], q[1], q[2], q[3], v);
    } else if (idx[0] > 0 && idx[1] == 0 && idx[2] == 0 && idx[3] == 0) {
      continue;  // orbital energy record, not needed
    } else {
      throw ParseError("unrecognised index pattern", line);
    }
  }
  return ints;
}

IntegralSet read_fcidump(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open FCIDUMP file " + path.string());
  return read_fcidump(in);
}

void write_fcidump(std::ostream& out, const IntegralSet& ints) {
  const int n = ints.n_spatial();
  out << "&FCI NORB=" << n << ",NELEC=" << ints.n_electrons << ",MS2=" << ints.ms2 << ",\n ORBSYM=";
  for (int i = 0; i < n; ++i) out << "1,";
  out << "\n ISYM=1,\n&END\n";
  out << std::setprecision(17) << std::scientific;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j)
      for (int k = 0; k <= i; ++k)
        for (int l = 0; l <= k; ++l) {
          if (i * (i + 1) / 2 + j < k * (k + 1) / 2 + l) continue;
          const double v = ints.chem(i, j, k, l);
          if (v != 0.0) out << v << ' ' << i + 1 << ' ' << j + 1 << ' ' << k + 1 << ' ' << l + 1 << '\n';
        }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j)
      if (ints.h1(i, j) != 0.0) out << ints.h1(i, j) << ' ' << i + 1 << ' ' << j + 1 << " 0 0\n";
  out << ints.e_nuc << " 0 0 0 0\n";
}

void write_fcidump(const std::filesystem::path& path, const IntegralSet& ints) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write FCIDUMP file " + path.string());
  write_fcidump(out, ints);
  if (!out) throw ValidationError("failed writing FCIDUMP file " + path.string());
}

}  // namespace deepvqe
