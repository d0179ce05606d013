#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "deepvqe/errors.hpp"
#include "deepvqe/matrix_representation.hpp"
#include "deepvqe/state_vector.hpp"

using namespace deepvqe;

namespace {

Eigen::VectorXcd random_vector(std::mt19937_64& rng, Eigen::Index n) {
  std::normal_distribution<double> nd;
  Eigen::VectorXcd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = cplx(nd(rng), nd(rng));
  return v.normalized();
}

}  // namespace

TEST(StateVector, PauliActionOnBasisStates) {
  // X0 |0> = |1>; Y0 |0> = i |1>; Z1 |2> = -|2>.
  const auto e0 = StateVector::basis_state(2, 0).amplitudes;
  const auto e2 = StateVector::basis_state(2, 2).amplitudes;
  EXPECT_EQ(deepvqe::apply(parse_word("X0", 2), e0)[1], cplx(1, 0));
  EXPECT_EQ(deepvqe::apply(parse_word("Y0", 2), e0)[1], cplx(0, 1));
  EXPECT_EQ(deepvqe::apply(parse_word("Z1", 2), e2)[2], cplx(-1, 0));
}

TEST(StateVector, HamiltonianActionMatchesDenseMatrix) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1, 1);
  const int n = 5;
  std::vector<QubitTerm> terms;
  for (int t = 0; t < 40; ++t) terms.push_back({PauliString{rng() & 31u, rng() & 31u}, u(rng)});
  const auto h = QubitHamiltonian::from_terms(n, terms);
  const auto v = random_vector(rng, 32);
  EXPECT_LT((deepvqe::apply(h, v) - dense_matrix(h) * v).cwiseAbs().maxCoeff(), 1e-13);
  const Eigen::MatrixXcd sparse = Eigen::MatrixXcd(sparse_matrix(h));
  EXPECT_LT((sparse - dense_matrix(h)).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_NEAR(expectation(h, v), (v.adjoint() * dense_matrix(h) * v)(0, 0).real(), 1e-13);
}

TEST(StateVector, SubsetMatrixUsesLocalOrder) {
  const int n = 4;
  const auto h = QubitHamiltonian::from_terms(n, {{parse_word("X1 Z3", n), 0.5}});
  const Eigen::MatrixXcd sub = dense_matrix(h, {1, 3});
  EXPECT_LT((sub - 0.5 * dense_matrix(parse_word("X0 Z1", 2), 2)).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_THROW(dense_matrix(h, {0, 1}), ValidationError);
  EXPECT_EQ(restrict_to(parse_word("X1 Z3", n), {1, 3}), parse_word("X0 Z1", 2));
}

TEST(StateVector, BinaryRoundTripAndNormalization) {
  std::mt19937_64 rng(9);
  const StateVector s(3, random_vector(rng, 8));
  std::stringstream buf;
  write_state(buf, s);
  const auto back = read_state(buf);
  EXPECT_EQ(back.n_qubits, 3);
  EXPECT_EQ((back.amplitudes - s.amplitudes).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_NO_THROW(s.check_normalized());
  const StateVector bad(3, 2.0 * s.amplitudes);
  EXPECT_THROW(bad.check_normalized(), ValidationError);
  EXPECT_THROW(StateVector(3, Eigen::VectorXcd::Ones(5)), ValidationError);
}
