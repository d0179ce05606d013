#include "deepvqe/effective_hamiltonian.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <random>
#include <sstream>
#include <unordered_map>

#include "deepvqe/errors.hpp"
#include "deepvqe/product_operator.hpp"
#include "deepvqe/state_vector.hpp"
#include "deepvqe/subsystem_solver.hpp"

namespace deepvqe {

namespace {

constexpr double kHermitianTolerance = 1e-10;

Eigen::Index register_qubits(Eigen::Index rows) {
  Eigen::Index n = 0;
  while ((Eigen::Index{1} << n) < rows) ++n;
  if ((Eigen::Index{1} << n) != rows) throw ValidationError("basis vectors must have length 2^n");
  return n;
}

Eigen::MatrixXcd hermitize(const Eigen::MatrixXcd& m, const char* what) {
  const double err = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (err > kHermitianTolerance) {
    std::ostringstream msg;
    msg << what << " is not Hermitian (deviation " << err << ")";
    throw NumericalError(msg.str());
  }
  return 0.5 * (m + m.adjoint());
}

void write_matrix(std::ostream& out, const Eigen::MatrixXcd& m) {
  const std::int32_t dims[2] = {static_cast<std::int32_t>(m.rows()), static_cast<std::int32_t>(m.cols())};
  out.write(reinterpret_cast<const char*>(dims), sizeof(dims));
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      const double re = m(i, j).real(), im = m(i, j).imag();
      out.write(reinterpret_cast<const char*>(&re), sizeof(double));
      out.write(reinterpret_cast<const char*>(&im), sizeof(double));
    }
}

Eigen::MatrixXcd read_matrix(std::istream& in) {
  std::int32_t dims[2];
  if (!in.read(reinterpret_cast<char*>(dims), sizeof(dims)) || dims[0] < 0 || dims[1] < 0)
    throw ParseError("truncated matrix record", 0);
  Eigen::MatrixXcd m(dims[0], dims[1]);
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      double re = 0.0, im = 0.0;
      in.read(reinterpret_cast<char*>(&re), sizeof(double));
      in.read(reinterpret_cast<char*>(&im), sizeof(double));
      if (!in) throw ParseError("truncated matrix record", 0);
      m(i, j) = cplx(re, im);
    }
  return m;
}

template <class Scalar>
EffectiveSolution solve_with(const EffectiveHamiltonian& eff, const EffectiveSolveOptions& opt) {
  using Op = ProductOperator<Scalar>;
  using Vec = typename Op::Vec;
  using Mat = typename Op::Mat;
  const Op op(eff);
  const Eigen::Index dim = op.dimension();
  EffectiveSolution sol;
  sol.real_arithmetic = std::is_same_v<Scalar, double>;

  if (dim <= opt.dense_max_dimension) {
    Mat h(dim, dim);
    Vec e = Vec::Zero(dim), col(dim);
    for (Eigen::Index j = 0; j < dim; ++j) {
      e.setZero();
      e[j] = Scalar(1);
      op.apply(e, col);
      h.col(j) = col;
    }
    Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (h + h.adjoint()));
    sol.energy = es.eigenvalues()[0];
    sol.coefficients = es.eigenvectors().col(0).template cast<cplx>();
    sol.matvecs = dim;
  } else {
    // Product of the subsystem ground states plus seeded noise.
    Vec start = Vec::Ones(1);
    for (int i = 0; i < eff.n_subsystems(); ++i) {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(eff.local[i]);
      Vec g;
      if constexpr (std::is_same_v<Scalar, double>) {
        g = es.eigenvectors().col(0).real();
        if (g.norm() < 1e-6) g = es.eigenvectors().col(0).imag();
      } else {
        g = es.eigenvectors().col(0);
      }
      Vec next(start.size() * g.size());
      for (Eigen::Index a = 0; a < start.size(); ++a) next.segment(a * g.size(), g.size()) = start[a] * g;
      start = std::move(next);
    }
    std::mt19937_64 rng(opt.lanczos.seed);
    std::uniform_real_distribution<double> ud(-1.0, 1.0);
    for (Eigen::Index a = 0; a < dim; ++a) start[a] += opt.start_noise * ud(rng);
    auto res = lanczos_lowest<Scalar>(op, dim, 1, start, opt.lanczos);
    sol.energy = res.values[0];
    sol.coefficients = res.vectors.col(0).template cast<cplx>();
    sol.matvecs = res.matvecs;
  }
  Eigen::VectorXcd c = sol.coefficients;
  fix_phase(c);
  sol.coefficients = c;
  return sol;
}

}  // namespace

std::size_t EffectiveHamiltonian::product_dimension() const {
  std::size_t d = 1;
  for (int k : dims) d *= static_cast<std::size_t>(k);
  return d;
}

std::vector<int> EffectiveHamiltonian::qubits() const {
  std::vector<int> m;
  for (int k : dims) m.push_back(qubits_for_dimension(k));
  return m;
}

int EffectiveHamiltonian::total_qubits() const {
  const auto m = qubits();
  return std::accumulate(m.begin(), m.end(), 0);
}

Eigen::MatrixXcd EffectiveHamiltonian::factor(int i, int index) const {
  if (index < 0) return Eigen::MatrixXcd::Identity(dims.at(i), dims.at(i));
  return factor_matrices.at(i).at(index);
}

Eigen::MatrixXcd project_operator(const QubitHamiltonian& op, const Eigen::MatrixXcd& basis) {
  if (op.n_qubits() != register_qubits(basis.rows()))
    throw ValidationError("operator register does not match the basis vectors");
  Eigen::MatrixXcd hb(basis.rows(), basis.cols());
  for (Eigen::Index l = 0; l < basis.cols(); ++l) hb.col(l) = deepvqe::apply(op, Eigen::VectorXcd(basis.col(l)));
  return basis.adjoint() * hb;
}

Eigen::MatrixXcd project_operator(const PauliString& op, const Eigen::MatrixXcd& basis) {
  const Eigen::Index n = register_qubits(basis.rows());
  if (n < kMaxQubits && (op.support() >> n) != 0) throw ValidationError("operator acts outside the subsystem");
  Eigen::MatrixXcd pb(basis.rows(), basis.cols());
  for (Eigen::Index l = 0; l < basis.cols(); ++l) pb.col(l) = deepvqe::apply(op, Eigen::VectorXcd(basis.col(l)));
  return basis.adjoint() * pb;
}

EffectiveHamiltonian assemble(const PartitionedHamiltonian& ph, const std::vector<SubsystemBasis>& bases) {
  const int m = ph.partition.n_subsystems();
  if (static_cast<int>(bases.size()) != m) throw ValidationError("one basis per subsystem is required");
  EffectiveHamiltonian eff;
  eff.constant = ph.constant;
  eff.factor_strings.resize(m);
  eff.factor_matrices.resize(m);
  for (int i = 0; i < m; ++i) {
    if (bases[i].dimension() < 1) throw ValidationError("empty subsystem basis");
    if (bases[i].vectors.rows() != (Eigen::Index{1} << ph.partition.size(i)))
      throw ValidationError("basis vectors do not match the subsystem size");
    eff.dims.push_back(bases[i].dimension());
    eff.local.push_back(hermitize(project_operator(ph.locals[i], bases[i].vectors), "projected local Hamiltonian"));
  }
  std::vector<std::unordered_map<PauliString, int, PauliStringHash>> index(m);
  for (const auto& term : ph.interactions) {
    EffectiveHamiltonian::Term t;
    t.lambda = term.lambda;
    t.factors.assign(m, -1);
    for (int i = 0; i < m; ++i) {
      const PauliString& p = term.factors[i];
      if (p.is_identity()) continue;
      auto [it, inserted] = index[i].try_emplace(p, static_cast<int>(eff.factor_strings[i].size()));
      if (inserted) {
        eff.factor_strings[i].push_back(p);
        eff.factor_matrices[i].push_back(hermitize(project_operator(p, bases[i].vectors), "projected factor"));
      }
      t.factors[i] = it->second;
    }
    eff.interactions.push_back(std::move(t));
  }
  return eff;
}

double DiagonalizedFactor::reconstruction_error(const Eigen::MatrixXcd& v) const {
  return (unitary.adjoint() * eigenvalues.asDiagonal() * unitary - v).cwiseAbs().maxCoeff();
}

DiagonalizedFactor diagonalize_factor(const Eigen::MatrixXcd& v, double normal_tol) {
  if (v.rows() != v.cols()) throw ValidationError("factor must be square");
  const Eigen::Index k = v.rows();
  if (k == 0) return {};
  if ((v * v.adjoint() - v.adjoint() * v).cwiseAbs().maxCoeff() > normal_tol)
    throw NumericalError("factor matrix is not normal");

  Eigen::VectorXcd values(k);
  Eigen::MatrixXcd vectors(k, k);
  if ((v - v.adjoint()).cwiseAbs().maxCoeff() <= normal_tol) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (v + v.adjoint()));
    values = es.eigenvalues().cast<cplx>();
    vectors = es.eigenvectors();
  } else {
    // Schur form of a normal matrix is diagonal.
    Eigen::ComplexSchur<Eigen::MatrixXcd> cs(v);
    values = cs.matrixT().diagonal();
    vectors = cs.matrixU();
  }
  std::vector<Eigen::Index> order(k);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    if (values[a].real() != values[b].real()) return values[a].real() > values[b].real();
    return values[a].imag() > values[b].imag();
  });
  DiagonalizedFactor out;
  out.eigenvalues.resize(k);
  Eigen::MatrixXcd q(k, k);
  for (Eigen::Index j = 0; j < k; ++j) {
    out.eigenvalues[j] = values[order[j]];
    Eigen::VectorXcd col = vectors.col(order[j]);
    fix_phase(col);
    q.col(j) = col;
  }
  out.unitary = q.adjoint();
  return out;
}

EffectiveSolution solve_effective(const EffectiveHamiltonian& eff, const EffectiveSolveOptions& options) {
  if (eff.n_subsystems() == 0) throw ValidationError("effective Hamiltonian has no subsystems");
  const std::size_t dim = eff.product_dimension();
  if (dim > options.max_dimension) {
    std::ostringstream msg;
    msg << "product dimension " << dim << " exceeds the limit " << options.max_dimension;
    throw ValidationError(msg.str());
  }
  if (ProductOperator<double>::real_compatible(eff)) return solve_with<double>(eff, options);
  return solve_with<cplx>(eff, options);
}

double combined_subsystem_energy(const PartitionedHamiltonian& ph, const std::vector<Eigen::VectorXcd>& ground_states) {
  const int m = ph.partition.n_subsystems();
  if (static_cast<int>(ground_states.size()) != m) throw ValidationError("one ground state per subsystem is required");
  double e = ph.constant;
  for (int i = 0; i < m; ++i) e += expectation(ph.locals[i], ground_states[i]);
  std::vector<std::unordered_map<PauliString, cplx, PauliStringHash>> cache(m);
  for (const auto& term : ph.interactions) {
    cplx p = term.lambda;
    for (int i = 0; i < m; ++i) {
      const PauliString& f = term.factors[i];
      if (f.is_identity()) continue;
      auto it = cache[i].find(f);
      if (it == cache[i].end())
        it = cache[i].emplace(f, ground_states[i].dot(deepvqe::apply(f, ground_states[i]))).first;
      p *= it->second;
    }
    e += p.real();
  }
  return e;
}

MeasurementPlan emit_measurement_plan(const EffectiveHamiltonian& eff) {
  MeasurementPlan plan;
  plan.factor_strings = eff.factor_strings;
  plan.tables.resize(eff.n_subsystems());
  for (int i = 0; i < eff.n_subsystems(); ++i)
    for (const auto& v : eff.factor_matrices[i]) {
      plan.tables[i].push_back(diagonalize_factor(v));
      plan.max_reconstruction_error = std::max(plan.max_reconstruction_error, plan.tables[i].back().reconstruction_error(v));
    }
  for (const auto& t : eff.interactions) plan.entries.push_back({t.lambda, t.factors});
  return plan;
}

void write_measurement_plan(std::ostream& out, const MeasurementPlan& plan) {
  out << std::setprecision(17);
  out << "# measurement plan subsystems " << plan.tables.size() << " entries " << plan.entries.size() << "\n";
  for (std::size_t i = 0; i < plan.tables.size(); ++i) {
    for (std::size_t f = 0; f < plan.tables[i].size(); ++f) {
      const auto& d = plan.tables[i][f];
      out << "factor " << i << " " << f << " " << to_word(plan.factor_strings[i][f]) << "\n  eigenvalues";
      for (Eigen::Index k = 0; k < d.eigenvalues.size(); ++k)
        out << " " << d.eigenvalues[k].real() << (d.eigenvalues[k].imag() < 0 ? "" : "+") << d.eigenvalues[k].imag()
            << "i";
      out << "\n";
      for (Eigen::Index r = 0; r < d.unitary.rows(); ++r) {
        out << "  U";
        for (Eigen::Index c = 0; c < d.unitary.cols(); ++c)
          out << " " << d.unitary(r, c).real() << (d.unitary(r, c).imag() < 0 ? "" : "+") << d.unitary(r, c).imag()
              << "i";
        out << "\n";
      }
    }
  }
  for (const auto& e : plan.entries) {
    out << "entry " << e.lambda;
    for (int f : e.factors) out << " " << f;
    out << "\n";
  }
}

Eigen::MatrixXcd padded_local(const EffectiveHamiltonian& eff, int i, double penalty) {
  const int k = eff.dims.at(i);
  const Eigen::Index p = Eigen::Index{1} << qubits_for_dimension(k);
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(p, p);
  out.topLeftCorner(k, k) = eff.local.at(i);
  for (Eigen::Index j = k; j < p; ++j) out(j, j) = penalty;
  return out;
}

Eigen::MatrixXcd padded_factor(const EffectiveHamiltonian& eff, int i, int index) {
  const int k = eff.dims.at(i);
  const Eigen::Index p = Eigen::Index{1} << qubits_for_dimension(k);
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(p, p);
  out.topLeftCorner(k, k) = eff.factor(i, index);
  return out;
}

void write_effective_hamiltonian(const std::filesystem::path& dir, const EffectiveHamiltonian& eff) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream h(dir / "header.txt");
    h << std::setprecision(17);
    h << "subsystems " << eff.n_subsystems() << "\ndims";
    for (int k : eff.dims) h << " " << k;
    h << "\nqubits";
    for (int q : eff.qubits()) h << " " << q;
    h << "\ntotal_qubits " << eff.total_qubits() << "\nconstant " << eff.constant << "\nfactors";
    for (const auto& f : eff.factor_strings) h << " " << f.size();
    h << "\n";
    for (int i = 0; i < eff.n_subsystems(); ++i)
      for (const auto& p : eff.factor_strings[i]) h << "factor " << i << " " << to_word(p) << "\n";
    if (!h) throw ValidationError("cannot write " + (dir / "header.txt").string());
  }
  {
    std::ofstream b(dir / "matrices.bin", std::ios::binary);
    for (const auto& m : eff.local) write_matrix(b, m);
    for (const auto& per : eff.factor_matrices)
      for (const auto& m : per) write_matrix(b, m);
    if (!b) throw ValidationError("cannot write " + (dir / "matrices.bin").string());
  }
  {
    std::ofstream t(dir / "interactions.txt");
    t << std::setprecision(17) << "# lambda factor indices (-1 identity)\n";
    for (const auto& term : eff.interactions) {
      t << term.lambda;
      for (int f : term.factors) t << " " << f;
      t << "\n";
    }
    if (!t) throw ValidationError("cannot write " + (dir / "interactions.txt").string());
  }
}

EffectiveHamiltonian read_effective_hamiltonian(const std::filesystem::path& dir) {
  EffectiveHamiltonian eff;
  std::ifstream h(dir / "header.txt");
  if (!h) throw ValidationError("cannot open " + (dir / "header.txt").string());
  std::string key;
  int m = 0;
  std::vector<std::size_t> n_factors;
  std::string line;
  int line_no = 0;
  while (std::getline(h, line)) {
    ++line_no;
    std::istringstream ls(line);
    if (!(ls >> key)) continue;
    if (key == "subsystems") {
      ls >> m;
    } else if (key == "dims") {
      for (int k; ls >> k;) eff.dims.push_back(k);
    } else if (key == "constant") {
      ls >> eff.constant;
    } else if (key == "factors") {
      for (std::size_t k; ls >> k;) n_factors.push_back(k);
      eff.factor_strings.resize(n_factors.size());
    } else if (key == "factor") {
      int i = 0;
      ls >> i;
      std::string rest;
      std::getline(ls, rest);
      rest.erase(0, rest.find_first_not_of(' '));
      if (i < 0 || i >= m || eff.dims.size() != static_cast<std::size_t>(m))
        throw ParseError("factor line references an unknown subsystem", line_no);
      eff.factor_strings.at(i).push_back(parse_word(rest, 64));
    }
  }
  if (m < 1 || static_cast<int>(eff.dims.size()) != m || static_cast<int>(n_factors.size()) != m)
    throw ParseError("incomplete effective Hamiltonian header", line_no);

  std::ifstream b(dir / "matrices.bin", std::ios::binary);
  if (!b) throw ValidationError("cannot open " + (dir / "matrices.bin").string());
  for (int i = 0; i < m; ++i) eff.local.push_back(read_matrix(b));
  eff.factor_matrices.resize(m);
  for (int i = 0; i < m; ++i)
    for (std::size_t f = 0; f < n_factors[i]; ++f) eff.factor_matrices[i].push_back(read_matrix(b));

  std::ifstream t(dir / "interactions.txt");
  if (!t) throw ValidationError("cannot open " + (dir / "interactions.txt").string());
  line_no = 0;
  while (std::getline(t, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    EffectiveHamiltonian::Term term;
    ls >> term.lambda;
    for (int f; ls >> f;) term.factors.push_back(f);
    if (static_cast<int>(term.factors.size()) != m) throw ParseError("interaction row has the wrong width", line_no);
    for (int i = 0; i < m; ++i)
      if (term.factors[i] >= static_cast<int>(n_factors[i])) throw ParseError("factor index out of range", line_no);
    eff.interactions.push_back(std::move(term));
  }
  return eff;
}

}  // namespace deepvqe
