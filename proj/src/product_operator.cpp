#include "deepvqe/product_operator.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <set>

#include "deepvqe/errors.hpp"

namespace deepvqe {

namespace {

constexpr double kSparseFill = 0.35;
constexpr std::size_t kPairLeafBudgetBytes = std::size_t{768} << 20;

template <class Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> convert(const Eigen::MatrixXcd& m, int y_count) {
  if constexpr (std::is_same_v<Scalar, double>) {
    return (m * i_power(-y_count)).real();
  } else {
    return m;
  }
}

template <class Mat>
Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

}  // namespace

template <class Scalar>
bool ProductOperator<Scalar>::real_compatible(const EffectiveHamiltonian& eff, double tol) {
  for (const auto& h : eff.local)
    if (h.size() && h.imag().cwiseAbs().maxCoeff() > tol) return false;
  for (int i = 0; i < eff.n_subsystems(); ++i)
    for (std::size_t f = 0; f < eff.factor_matrices[i].size(); ++f) {
      const Eigen::MatrixXcd r = eff.factor_matrices[i][f] * i_power(-eff.factor_strings[i][f].y_count());
      if (r.size() && r.imag().cwiseAbs().maxCoeff() > tol) return false;
    }
  for (const auto& t : eff.interactions) {
    int y = 0;
    for (int i = 0; i < eff.n_subsystems(); ++i)
      if (t.factors[i] >= 0) y += eff.factor_strings[i][t.factors[i]].y_count();
    if (y % 2 != 0) return false;
  }
  return true;
}

template <class Scalar>
ProductOperator<Scalar>::ProductOperator(const EffectiveHamiltonian& eff)
    : dims_(eff.dims), constant_(eff.constant) {
  if constexpr (std::is_same_v<Scalar, double>) {
    if (!real_compatible(eff)) throw ValidationError("effective Hamiltonian needs complex arithmetic");
  }
  const int m = eff.n_subsystems();
  dim_ = 1;
  for (int k : dims_) dim_ *= k;
  const double d = static_cast<double>(dim_);

  auto make_factor = [](Mat dense) {
    Factor f;
    const Eigen::Index k = dense.rows();
    f.nnz = static_cast<double>((dense.array() != Scalar(0)).count());
    f.use_sparse = f.nnz <= kSparseFill * static_cast<double>(k * k);
    if (f.use_sparse) f.sparse = dense.sparseView();
    f.dense = std::move(dense);
    return f;
  };
  auto node_cost = [&](int mode, const Factor& f) {
    return f.use_sparse ? d * f.nnz / dims_[mode] : d * dims_[mode];
  };

  for (int i = 0; i < m; ++i) {
    locals_.push_back(make_factor(convert<Scalar>(eff.local[i], 0)));
    cost_ += node_cost(i, locals_.back());
  }
  factors_.resize(m);
  for (int i = 0; i < m; ++i)
    for (std::size_t f = 0; f < eff.factor_matrices[i].size(); ++f) {
      factors_[i].push_back(
          make_factor(convert<Scalar>(eff.factor_matrices[i][f], eff.factor_strings[i][f].y_count())));
    }

  // Coefficients with the factor phases folded in.
  std::vector<Scalar> coeff(eff.interactions.size());
  for (std::size_t t = 0; t < eff.interactions.size(); ++t) {
    const auto& term = eff.interactions[t];
    if constexpr (std::is_same_v<Scalar, double>) {
      int y = 0;
      for (int i = 0; i < m; ++i)
        if (term.factors[i] >= 0) y += eff.factor_strings[i][term.factors[i]].y_count();
      coeff[t] = term.lambda * i_power(y).real();
    } else {
      coeff[t] = term.lambda;
    }
  }

  // Group terms by the set of subsystems they touch.
  std::map<std::uint64_t, std::vector<std::size_t>> by_set;
  for (std::size_t t = 0; t < eff.interactions.size(); ++t) {
    std::uint64_t mask = 0;
    for (int i = 0; i < m; ++i)
      if (eff.interactions[t].factors[i] >= 0) mask |= std::uint64_t{1} << i;
    by_set[mask].push_back(t);
  }

  std::size_t pair_bytes = 0;
  for (const auto& [mask, terms] : by_set) {
    std::vector<int> modes;
    for (int i = 0; i < m; ++i)
      if ((mask >> i) & 1u) modes.push_back(i);
    const int s = static_cast<int>(modes.size());

    auto evaluate = [&](const std::vector<int>& order, bool pair) {
      const int npre = s - (pair ? 2 : 1);
      double c = 0.0;
      std::size_t leaves = 1;
      for (int lvl = 0; lvl < npre; ++lvl) {
        std::set<std::vector<int>> prefixes;
        std::map<int, int> last_factor_count;
        for (std::size_t t : terms) {
          std::vector<int> key;
          for (int l = 0; l <= lvl; ++l) key.push_back(eff.interactions[t].factors[order[l]]);
          if (prefixes.insert(key).second) c += node_cost(order[lvl], factors_[order[lvl]][key.back()]);
        }
        leaves = prefixes.size();
      }
      if (pair) {
        const int a = order[s - 2], b = order[s - 1];
        c += leaves * d * dims_[a] * dims_[b] + (std::abs(a - b) == 1 ? 0.0 : 2.0 * leaves * d);
      } else {
        c += leaves * d * dims_[order[s - 1]];
      }
      return std::pair<double, std::size_t>{c, leaves};
    };

    std::vector<int> best_order;
    bool best_pair = false;
    double best_cost = INFINITY;
    std::vector<int> order = modes;
    auto consider = [&](const std::vector<int>& ord) {
      for (bool pair : {false, true}) {
        if (pair && s < 2) continue;
        const auto [c, leaves] = evaluate(ord, pair);
        if (pair) {
          const std::size_t kk = static_cast<std::size_t>(dims_[ord[s - 2]]) * dims_[ord[s - 1]];
          if (pair_bytes + leaves * kk * kk * sizeof(Scalar) > kPairLeafBudgetBytes) continue;
        }
        if (c < best_cost) {
          best_cost = c;
          best_order = ord;
          best_pair = pair;
        }
      }
    };
    if (s <= 6) {
      do consider(order);
      while (std::next_permutation(order.begin(), order.end()));
    } else {
      // Heuristic: fewest distinct factors first.
      std::vector<std::pair<std::size_t, int>> counts;
      for (int i : modes) {
        std::set<int> distinct;
        for (std::size_t t : terms) distinct.insert(eff.interactions[t].factors[i]);
        counts.emplace_back(distinct.size(), i);
      }
      std::sort(counts.begin(), counts.end());
      order.clear();
      for (const auto& c : counts) order.push_back(c.second);
      consider(order);
    }

    Group g;
    g.order = best_order;
    g.pair_leaf = best_pair;
    if (g.pair_leaf && g.order[s - 2] > g.order[s - 1]) std::swap(g.order[s - 2], g.order[s - 1]);
    const int npre = s - (g.pair_leaf ? 2 : 1);
    for (std::size_t t : terms) {
      const auto& f = eff.interactions[t].factors;
      Node* node = &g.root;
      for (int l = 0; l < npre; ++l) node = &node->children[f[g.order[l]]];
      if (node->leaf < 0) {
        node->leaf = static_cast<int>(g.leaves.size());
        Leaf leaf;
        if (g.pair_leaf) {
          const int a = g.order[s - 2], b = g.order[s - 1];
          leaf.w = Mat::Zero(dims_[a] * dims_[b], dims_[a] * dims_[b]);
          pair_bytes += static_cast<std::size_t>(leaf.w.size()) * sizeof(Scalar);
        } else {
          leaf.w = Mat::Zero(dims_[g.order[s - 1]], dims_[g.order[s - 1]]);
        }
        g.leaves.push_back(std::move(leaf));
      }
      Mat& w = g.leaves[node->leaf].w;
      if (g.pair_leaf) {
        const int a = g.order[s - 2], b = g.order[s - 1];
        w += coeff[t] * kron(factors_[a][f[a]].dense, factors_[b][f[b]].dense);
      } else {
        const int a = g.order[s - 1];
        w += coeff[t] * factors_[a][f[a]].dense;
      }
    }
    cost_ += best_cost;
    groups_.push_back(std::move(g));
  }

  scratch_.assign(std::max(1, m), Vec(dim_));
}

template <class Scalar>
void ProductOperator<Scalar>::apply_dense_mode(const Mat& a, Eigen::Index outer, Eigen::Index k, Eigen::Index inner,
                                               const Scalar* in, Scalar* out, bool accumulate) const {
  using RowMat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  if (inner == 1) {
    Eigen::Map<const RowMat> x(in, outer, k);
    Eigen::Map<RowMat> y(out, outer, k);
    if (accumulate) {
      y.noalias() += x * a.transpose();
    } else {
      y.noalias() = x * a.transpose();
    }
    return;
  }
  for (Eigen::Index o = 0; o < outer; ++o) {
    Eigen::Map<const RowMat> x(in + o * k * inner, k, inner);
    Eigen::Map<RowMat> y(out + o * k * inner, k, inner);
    if (accumulate) {
      y.noalias() += a * x;
    } else {
      y.noalias() = a * x;
    }
  }
}

template <class Scalar>
void ProductOperator<Scalar>::apply_mode(const Factor& f, int mode, const Scalar* in, Scalar* out,
                                         bool accumulate) const {
  using RowMat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  Eigen::Index outer = 1, inner = 1;
  for (int l = 0; l < mode; ++l) outer *= dims_[l];
  for (int l = mode + 1; l < static_cast<int>(dims_.size()); ++l) inner *= dims_[l];
  const Eigen::Index k = dims_[mode];
  if (!f.use_sparse) {
    apply_dense_mode(f.dense, outer, k, inner, in, out, accumulate);
    return;
  }
  if (inner == 1) {
    Eigen::Map<const RowMat> x(in, outer, k);
    Eigen::Map<RowMat> y(out, outer, k);
    if (accumulate) {
      y.noalias() += x * f.sparse.transpose();
    } else {
      y.noalias() = x * f.sparse.transpose();
    }
    return;
  }
  for (Eigen::Index o = 0; o < outer; ++o) {
    Eigen::Map<const RowMat> x(in + o * k * inner, k, inner);
    Eigen::Map<RowMat> y(out + o * k * inner, k, inner);
    if (accumulate) {
      y.noalias() += f.sparse * x;
    } else {
      y.noalias() = f.sparse * x;
    }
  }
}

template <class Scalar>
void ProductOperator<Scalar>::apply_pair(const Mat& w, int a, int b, const Scalar* in, Scalar* out) const {
  const int m = static_cast<int>(dims_.size());
  if (b == a + 1) {
    Eigen::Index outer = 1, inner = 1;
    for (int l = 0; l < a; ++l) outer *= dims_[l];
    for (int l = b + 1; l < m; ++l) inner *= dims_[l];
    apply_dense_mode(w, outer, Eigen::Index{dims_[a]} * dims_[b], inner, in, out, true);
    return;
  }
  // Gather modes (a, b) to the end, multiply, scatter back.
  std::vector<int> order;
  for (int l = 0; l < m; ++l)
    if (l != a && l != b) order.push_back(l);
  order.push_back(a);
  order.push_back(b);
  std::vector<Eigen::Index> stride(m, 1);
  for (int l = m - 2; l >= 0; --l) stride[l] = stride[l + 1] * dims_[l + 1];
  perm_in_.resize(dim_);
  perm_out_.resize(dim_);
  std::vector<int> idx(m, 0);
  Eigen::Index src = 0;
  for (Eigen::Index p = 0; p < dim_; ++p) {
    perm_in_[p] = in[src];
    for (int l = m - 1; l >= 0; --l) {
      const int mode = order[l];
      if (++idx[l] < dims_[mode]) {
        src += stride[mode];
        break;
      }
      src -= stride[mode] * (dims_[mode] - 1);
      idx[l] = 0;
    }
  }
  const Eigen::Index kk = Eigen::Index{dims_[a]} * dims_[b];
  apply_dense_mode(w, dim_ / kk, kk, 1, perm_in_.data(), perm_out_.data(), false);
  std::fill(idx.begin(), idx.end(), 0);
  src = 0;
  for (Eigen::Index p = 0; p < dim_; ++p) {
    out[src] += perm_out_[p];
    for (int l = m - 1; l >= 0; --l) {
      const int mode = order[l];
      if (++idx[l] < dims_[mode]) {
        src += stride[mode];
        break;
      }
      src -= stride[mode] * (dims_[mode] - 1);
      idx[l] = 0;
    }
  }
}

template <class Scalar>
void ProductOperator<Scalar>::walk(const Group& g, const Node& node, int level, const Scalar* in, Scalar* out) const {
  if (node.leaf >= 0) {
    const int s = static_cast<int>(g.order.size());
    const Mat& w = g.leaves[node.leaf].w;
    if (g.pair_leaf) {
      apply_pair(w, g.order[s - 2], g.order[s - 1], in, out);
    } else {
      const int mode = g.order[s - 1];
      Eigen::Index outer = 1, inner = 1;
      for (int l = 0; l < mode; ++l) outer *= dims_[l];
      for (int l = mode + 1; l < static_cast<int>(dims_.size()); ++l) inner *= dims_[l];
      apply_dense_mode(w, outer, dims_[mode], inner, in, out, true);
    }
    return;
  }
  const int mode = g.order[level];
  Scalar* buf = scratch_[level].data();
  for (const auto& [fid, child] : node.children) {
    apply_mode(factors_[mode][fid], mode, in, buf, false);
    walk(g, child, level + 1, buf, out);
  }
}

template <class Scalar>
void ProductOperator<Scalar>::apply(const Vec& x, Vec& y) const {
  if (x.size() != dim_) throw ValidationError("vector length does not match the product space");
  y = constant_ * x;
  for (std::size_t i = 0; i < locals_.size(); ++i) apply_mode(locals_[i], static_cast<int>(i), x.data(), y.data(), true);
  for (const auto& g : groups_) walk(g, g.root, 0, x.data(), y.data());
}

template class ProductOperator<double>;
template class ProductOperator<cplx>;

}  // namespace deepvqe
