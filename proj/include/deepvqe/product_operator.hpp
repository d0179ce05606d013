#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>
#include <map>
#include <memory>
#include <vector>

#include "deepvqe/effective_hamiltonian.hpp"

namespace deepvqe {

/// Matrix-free action of an EffectiveHamiltonian on the product space.
///
/// Interactions are grouped by the set of subsystems they touch. Each group
/// becomes a prefix tree over its factors in a cost-optimal mode order; the
/// last one or two modes of every path are summed into a single dense leaf
/// operator. With Scalar = double every factor is stored as i^{-y} V (y the
/// string's Y count), which is real for real bases; the phases are folded
/// into the coefficients.
template <class Scalar>
class ProductOperator {
 public:
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using SpMat = Eigen::SparseMatrix<Scalar, Eigen::RowMajor>;

  explicit ProductOperator(const EffectiveHamiltonian& eff);

  /// Whether `eff` can use the real-arithmetic representation.
  static bool real_compatible(const EffectiveHamiltonian& eff, double tol = 1e-12);

  Eigen::Index dimension() const noexcept { return dim_; }
  /// Multiply-adds per product, as predicted by the cost model.
  double estimated_cost() const noexcept { return cost_; }

  /// y = H x. Uses internal scratch buffers, so one instance must not be
  /// shared between threads.
  void apply(const Vec& x, Vec& y) const;
  void operator()(const Vec& x, Vec& y) const { apply(x, y); }

 private:
  struct Factor {
    Mat dense;
    SpMat sparse;
    bool use_sparse = false;
    double nnz = 0.0;
  };
  struct Node {
    std::map<int, Node> children;
    int leaf = -1;
  };
  struct Leaf {
    Mat w;
  };
  struct Group {
    std::vector<int> order;  // mode order: prefix modes, then leaf mode(s)
    bool pair_leaf = false;
    Node root;
    std::vector<Leaf> leaves;
  };

  void apply_mode(const Factor& f, int mode, const Scalar* in, Scalar* out, bool accumulate) const;
  void apply_dense_mode(const Mat& a, Eigen::Index outer, Eigen::Index k, Eigen::Index inner, const Scalar* in,
                        Scalar* out, bool accumulate) const;
  void apply_pair(const Mat& w, int a, int b, const Scalar* in, Scalar* out) const;
  void walk(const Group& g, const Node& node, int level, const Scalar* in, Scalar* out) const;

  std::vector<int> dims_;
  Eigen::Index dim_ = 0;
  double constant_ = 0.0;
  std::vector<Factor> locals_;
  std::vector<std::vector<Factor>> factors_;
  std::vector<Group> groups_;
  double cost_ = 0.0;
  mutable std::vector<Vec> scratch_;
  mutable Vec perm_in_, perm_out_;
};

extern template class ProductOperator<double>;
extern template class ProductOperator<cplx>;

}  // namespace deepvqe
