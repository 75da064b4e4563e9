#include "llb/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <numeric>
#include <string>

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

namespace llb {

SparseMatrix::SparseMatrix(Index rows, Index cols, std::vector<Index> row_ptr,
                           std::vector<Index> col_idx, std::vector<double> values)
    : rows_(rows),
      cols_(cols),
      row_ptr_(std::move(row_ptr)),
      col_idx_(std::move(col_idx)),
      values_(std::move(values)) {
  if (rows < 0 || cols < 0) throw std::invalid_argument("SparseMatrix: negative dimension");
  if (row_ptr_.size() != static_cast<std::size_t>(rows) + 1 || row_ptr_.front() != 0 ||
      static_cast<std::size_t>(row_ptr_.back()) != col_idx_.size() ||
      col_idx_.size() != values_.size())
    throw std::invalid_argument("SparseMatrix: inconsistent CSR arrays");
  for (Index r = 0; r < rows; ++r) {
    const auto b = static_cast<std::size_t>(row_ptr_[r]), e = static_cast<std::size_t>(row_ptr_[r + 1]);
    if (b > e) throw std::invalid_argument("SparseMatrix: row offsets not monotone");
    for (std::size_t k = b; k < e; ++k) {
      if (col_idx_[k] < 0 || col_idx_[k] >= cols)
        throw std::invalid_argument("SparseMatrix: column index out of range");
      if (k > b && col_idx_[k] <= col_idx_[k - 1])
        throw std::invalid_argument("SparseMatrix: columns not sorted/unique in row " + std::to_string(r));
    }
  }
}

SparseMatrix SparseMatrix::from_triplets(Index rows, Index cols, std::vector<Triplet> triplets) {
  std::sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  std::vector<Index> row_ptr(static_cast<std::size_t>(rows) + 1, 0);
  std::vector<Index> col_idx;
  std::vector<double> values;
  for (std::size_t i = 0; i < triplets.size();) {
    const Triplet& t = triplets[i];
    if (t.row < 0 || t.row >= rows || t.col < 0 || t.col >= cols)
      throw std::invalid_argument("SparseMatrix::from_triplets: index out of range");
    double sum = 0.0;
    std::size_t j = i;
    while (j < triplets.size() && triplets[j].row == t.row && triplets[j].col == t.col) sum += triplets[j++].value;
    col_idx.push_back(t.col);
    values.push_back(sum);
    ++row_ptr[static_cast<std::size_t>(t.row) + 1];
    i = j;
  }
  std::partial_sum(row_ptr.begin(), row_ptr.end(), row_ptr.begin());
  return SparseMatrix(rows, cols, std::move(row_ptr), std::move(col_idx), std::move(values));
}

SparseMatrix SparseMatrix::identity(Index n) {
  std::vector<Index> row_ptr(static_cast<std::size_t>(n) + 1);
  std::iota(row_ptr.begin(), row_ptr.end(), 0);
  std::vector<Index> col(static_cast<std::size_t>(n));
  std::iota(col.begin(), col.end(), 0);
  return SparseMatrix(n, n, std::move(row_ptr), std::move(col), std::vector<double>(static_cast<std::size_t>(n), 1.0));
}

std::ptrdiff_t SparseMatrix::find(Index r, Index c) const {
  const auto b = col_idx_.begin() + row_ptr_[static_cast<std::size_t>(r)];
  const auto e = col_idx_.begin() + row_ptr_[static_cast<std::size_t>(r) + 1];
  const auto it = std::lower_bound(b, e, c);
  if (it == e || *it != c) return -1;
  return it - col_idx_.begin();
}

double SparseMatrix::coeff(Index r, Index c) const {
  const auto pos = find(r, c);
  return pos < 0 ? 0.0 : values_[static_cast<std::size_t>(pos)];
}

bool SparseMatrix::same_pattern(const SparseMatrix& other) const {
  return rows_ == other.rows_ && cols_ == other.cols_ && row_ptr_ == other.row_ptr_ &&
         col_idx_ == other.col_idx_;
}

SparseMatrix SparseMatrix::transpose() const {
  std::vector<Triplet> t;
  t.reserve(nnz());
  for (Index r = 0; r < rows_; ++r)
    for (Index k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
      t.push_back({col_idx_[static_cast<std::size_t>(k)], r, values_[static_cast<std::size_t>(k)]});
  return from_triplets(cols_, rows_, std::move(t));
}

double SparseMatrix::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

std::vector<double> SparseMatrix::diagonal() const {
  std::vector<double> d(static_cast<std::size_t>(std::min(rows_, cols_)), 0.0);
  for (Index r = 0; r < static_cast<Index>(d.size()); ++r) d[static_cast<std::size_t>(r)] = coeff(r, r);
  return d;
}

std::vector<double> SparseMatrix::to_dense() const {
  std::vector<double> d(static_cast<std::size_t>(rows_) * static_cast<std::size_t>(cols_), 0.0);
  for (Index r = 0; r < rows_; ++r)
    for (Index k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
      d[static_cast<std::size_t>(r) * static_cast<std::size_t>(cols_) +
        static_cast<std::size_t>(col_idx_[static_cast<std::size_t>(k)])] = values_[static_cast<std::size_t>(k)];
  return d;
}

void spmv(const SparseMatrix& a, std::span<const double> x, std::span<double> y) {
  if (x.size() != static_cast<std::size_t>(a.cols()) || y.size() != static_cast<std::size_t>(a.rows()))
    throw std::invalid_argument("spmv: dimension mismatch");
  const auto rp = a.row_ptr();
  const auto ci = a.col_idx();
  const auto v = a.values();
  for (std::size_t r = 0; r < y.size(); ++r) {
    double s = 0.0;
    for (auto k = static_cast<std::size_t>(rp[r]); k < static_cast<std::size_t>(rp[r + 1]); ++k)
      s += v[k] * x[static_cast<std::size_t>(ci[k])];
    y[r] = s;
  }
}

std::vector<double> spmv(const SparseMatrix& a, std::span<const double> x) {
  std::vector<double> y(static_cast<std::size_t>(a.rows()));
  spmv(a, x, y);
  return y;
}

SparseMatrix add(double alpha, const SparseMatrix& a, double beta, const SparseMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw std::invalid_argument("add: dimension mismatch");
  if (a.same_pattern(b)) {
    std::vector<double> v(a.nnz());
    for (std::size_t k = 0; k < v.size(); ++k) v[k] = alpha * a.values()[k] + beta * b.values()[k];
    return SparseMatrix(a.rows(), a.cols(), {a.row_ptr().begin(), a.row_ptr().end()},
                        {a.col_idx().begin(), a.col_idx().end()}, std::move(v));
  }
  std::vector<Index> row_ptr(static_cast<std::size_t>(a.rows()) + 1, 0);
  std::vector<Index> cols;
  std::vector<double> vals;
  for (Index r = 0; r < a.rows(); ++r) {
    auto ka = static_cast<std::size_t>(a.row_ptr()[r]);
    const auto ea = static_cast<std::size_t>(a.row_ptr()[r + 1]);
    auto kb = static_cast<std::size_t>(b.row_ptr()[r]);
    const auto eb = static_cast<std::size_t>(b.row_ptr()[r + 1]);
    while (ka < ea || kb < eb) {
      const Index ca = ka < ea ? a.col_idx()[ka] : a.cols();
      const Index cb = kb < eb ? b.col_idx()[kb] : b.cols();
      if (ca == cb) {
        cols.push_back(ca);
        vals.push_back(alpha * a.values()[ka++] + beta * b.values()[kb++]);
      } else if (ca < cb) {
        cols.push_back(ca);
        vals.push_back(alpha * a.values()[ka++]);
      } else {
        cols.push_back(cb);
        vals.push_back(beta * b.values()[kb++]);
      }
    }
    row_ptr[static_cast<std::size_t>(r) + 1] = static_cast<Index>(cols.size());
  }
  return SparseMatrix(a.rows(), a.cols(), std::move(row_ptr), std::move(cols), std::move(vals));
}

SparseMatrix expand_blockdiag3(const SparseMatrix& s) {
  std::vector<Index> row_ptr(static_cast<std::size_t>(3 * s.rows()) + 1, 0);
  std::vector<Index> cols;
  std::vector<double> vals;
  cols.reserve(3 * s.nnz());
  vals.reserve(3 * s.nnz());
  for (Index r = 0; r < s.rows(); ++r)
    for (Index c = 0; c < 3; ++c) {
      for (Index k = s.row_ptr()[r]; k < s.row_ptr()[r + 1]; ++k) {
        cols.push_back(3 * s.col_idx()[static_cast<std::size_t>(k)] + c);
        vals.push_back(s.values()[static_cast<std::size_t>(k)]);
      }
      row_ptr[static_cast<std::size_t>(3 * r + c) + 1] = static_cast<Index>(cols.size());
    }
  return SparseMatrix(3 * s.rows(), 3 * s.cols(), std::move(row_ptr), std::move(cols), std::move(vals));
}

void spmv_blockdiag3(const SparseMatrix& s, std::span<const double> x, std::span<double> y) {
  if (x.size() != 3 * static_cast<std::size_t>(s.cols()) || y.size() != 3 * static_cast<std::size_t>(s.rows()))
    throw std::invalid_argument("spmv_blockdiag3: dimension mismatch");
  const auto rp = s.row_ptr();
  const auto ci = s.col_idx();
  const auto v = s.values();
  for (std::size_t r = 0; r < static_cast<std::size_t>(s.rows()); ++r) {
    double s0 = 0.0, s1 = 0.0, s2 = 0.0;
    for (auto k = static_cast<std::size_t>(rp[r]); k < static_cast<std::size_t>(rp[r + 1]); ++k) {
      const auto c = 3 * static_cast<std::size_t>(ci[k]);
      s0 += v[k] * x[c];
      s1 += v[k] * x[c + 1];
      s2 += v[k] * x[c + 2];
    }
    y[3 * r] = s0;
    y[3 * r + 1] = s1;
    y[3 * r + 2] = s2;
  }
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

namespace {

// ILU(0) over 3x3 blocks: the block pattern is the union of block columns of the three
// scalar rows of each block row. Factors are stored in place, diagonal blocks inverted.
class BlockIlu0 {
 public:
  explicit BlockIlu0(const SparseMatrix& a) : nb_(static_cast<std::size_t>(a.rows() / 3)) {
    row_ptr_.assign(nb_ + 1, 0);
    std::vector<Index> cols;
    for (std::size_t i = 0; i < nb_; ++i) {
      cols.clear();
      for (std::size_t r = 3 * i; r < 3 * i + 3; ++r)
        for (auto k = static_cast<std::size_t>(a.row_ptr()[r]); k < static_cast<std::size_t>(a.row_ptr()[r + 1]); ++k)
          cols.push_back(a.col_idx()[k] / 3);
      cols.push_back(static_cast<Index>(i));
      std::sort(cols.begin(), cols.end());
      cols.erase(std::unique(cols.begin(), cols.end()), cols.end());
      col_.insert(col_.end(), cols.begin(), cols.end());
      row_ptr_[i + 1] = static_cast<Index>(col_.size());
    }
    val_.assign(col_.size() * 9, 0.0);
    diag_.resize(nb_);
    for (std::size_t i = 0; i < nb_; ++i) {
      for (std::size_t r = 0; r < 3; ++r) {
        const std::size_t row = 3 * i + r;
        for (auto k = static_cast<std::size_t>(a.row_ptr()[row]); k < static_cast<std::size_t>(a.row_ptr()[row + 1]); ++k) {
          const Index c = a.col_idx()[k];
          const std::size_t pos = block_pos(i, c / 3);
          val_[9 * pos + 3 * r + static_cast<std::size_t>(c % 3)] = a.values()[k];
        }
      }
      diag_[i] = block_pos(i, static_cast<Index>(i));
    }
    factor();
  }

  void apply(std::span<const double> in, std::span<double> out) const {
    // L y = in (unit block-lower), then U x = y.
    for (std::size_t i = 0; i < nb_; ++i) {
      double y[3] = {in[3 * i], in[3 * i + 1], in[3 * i + 2]};
      for (auto p = static_cast<std::size_t>(row_ptr_[i]); p < diag_[i]; ++p) {
        const double* l = &val_[9 * p];
        const double* x = &out[3 * static_cast<std::size_t>(col_[p])];
        for (int r = 0; r < 3; ++r) y[r] -= l[3 * r] * x[0] + l[3 * r + 1] * x[1] + l[3 * r + 2] * x[2];
      }
      out[3 * i] = y[0];
      out[3 * i + 1] = y[1];
      out[3 * i + 2] = y[2];
    }
    for (std::size_t i = nb_; i-- > 0;) {
      double y[3] = {out[3 * i], out[3 * i + 1], out[3 * i + 2]};
      for (auto p = diag_[i] + 1; p < static_cast<std::size_t>(row_ptr_[i + 1]); ++p) {
        const double* u = &val_[9 * p];
        const double* x = &out[3 * static_cast<std::size_t>(col_[p])];
        for (int r = 0; r < 3; ++r) y[r] -= u[3 * r] * x[0] + u[3 * r + 1] * x[1] + u[3 * r + 2] * x[2];
      }
      const double* d = &val_[9 * diag_[i]];
      for (int r = 0; r < 3; ++r) out[3 * i + static_cast<std::size_t>(r)] = d[3 * r] * y[0] + d[3 * r + 1] * y[1] + d[3 * r + 2] * y[2];
    }
  }

 private:
  std::size_t block_pos(std::size_t row, Index col) const {
    const auto b = col_.begin() + row_ptr_[row];
    const auto e = col_.begin() + row_ptr_[row + 1];
    return static_cast<std::size_t>(std::lower_bound(b, e, col) - col_.begin());
  }

  static void mul(const double* a, const double* b, double* c) {
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) c[3 * i + j] = a[3 * i] * b[j] + a[3 * i + 1] * b[3 + j] + a[3 * i + 2] * b[6 + j];
  }

  static void invert(double* m) {
    const double a = m[0], b = m[1], c = m[2], d = m[3], e = m[4], f = m[5], g = m[6], h = m[7], k = m[8];
    const double c0 = e * k - f * h, c1 = f * g - d * k, c2 = d * h - e * g;
    const double det = a * c0 + b * c1 + c * c2;
    if (det == 0.0 || !std::isfinite(det)) throw SolveError("block ILU(0): singular pivot block", {});
    const double inv = 1.0 / det;
    m[0] = c0 * inv;
    m[1] = (c * h - b * k) * inv;
    m[2] = (b * f - c * e) * inv;
    m[3] = c1 * inv;
    m[4] = (a * k - c * g) * inv;
    m[5] = (c * d - a * f) * inv;
    m[6] = c2 * inv;
    m[7] = (b * g - a * h) * inv;
    m[8] = (a * e - b * d) * inv;
  }

  void factor() {
    std::vector<std::ptrdiff_t> marker(nb_, -1);
    double tmp[9];
    for (std::size_t i = 0; i < nb_; ++i) {
      for (auto p = static_cast<std::size_t>(row_ptr_[i]); p < static_cast<std::size_t>(row_ptr_[i + 1]); ++p)
        marker[static_cast<std::size_t>(col_[p])] = static_cast<std::ptrdiff_t>(p);
      for (auto p = static_cast<std::size_t>(row_ptr_[i]); p < diag_[i]; ++p) {
        const auto k = static_cast<std::size_t>(col_[p]);
        // L_ik = A_ik * inv(U_kk)
        mul(&val_[9 * p], &val_[9 * diag_[k]], tmp);
        std::copy(tmp, tmp + 9, &val_[9 * p]);
        for (auto q = diag_[k] + 1; q < static_cast<std::size_t>(row_ptr_[k + 1]); ++q) {
          const auto target = marker[static_cast<std::size_t>(col_[q])];
          if (target < 0) continue;
          mul(&val_[9 * p], &val_[9 * q], tmp);
          double* dst = &val_[9 * static_cast<std::size_t>(target)];
          for (int t = 0; t < 9; ++t) dst[t] -= tmp[t];
        }
      }
      invert(&val_[9 * diag_[i]]);
      for (auto p = static_cast<std::size_t>(row_ptr_[i]); p < static_cast<std::size_t>(row_ptr_[i + 1]); ++p)
        marker[static_cast<std::size_t>(col_[p])] = -1;
    }
  }

  std::size_t nb_;
  std::vector<Index> row_ptr_;
  std::vector<Index> col_;
  std::vector<double> val_;
  std::vector<std::size_t> diag_;
};

class SparseLuFactor {
 public:
  explicit SparseLuFactor(const SparseMatrix& a) {
    std::vector<Eigen::Triplet<double, Index>> t;
    t.reserve(a.nnz());
    for (Index r = 0; r < a.rows(); ++r)
      for (Index k = a.row_ptr()[r]; k < a.row_ptr()[r + 1]; ++k)
        t.emplace_back(r, a.col_idx()[static_cast<std::size_t>(k)], a.values()[static_cast<std::size_t>(k)]);
    Eigen::SparseMatrix<double, Eigen::ColMajor, Index> m(a.rows(), a.cols());
    m.setFromTriplets(t.begin(), t.end());
    lu_.compute(m);
    if (lu_.info() != Eigen::Success) throw SolveError("sparse LU: factorization failed (" + lu_.lastErrorMessage() + ")", {});
  }

  void apply(std::span<const double> in, std::span<double> out) const {
    const Eigen::Map<const Eigen::VectorXd> b(in.data(), static_cast<Eigen::Index>(in.size()));
    Eigen::Map<Eigen::VectorXd>(out.data(), static_cast<Eigen::Index>(out.size())) = lu_.solve(b);
  }

 private:
  Eigen::SparseLU<Eigen::SparseMatrix<double, Eigen::ColMajor, Index>> lu_;
};

}  // namespace

struct FactorCache::Impl {
  std::unique_ptr<SparseLuFactor> lu;
  Index size = 0;
  int factorizations = 0;
};

FactorCache::FactorCache() : impl_(std::make_unique<Impl>()) {}
FactorCache::~FactorCache() = default;
FactorCache::FactorCache(FactorCache&&) noexcept = default;
FactorCache& FactorCache::operator=(FactorCache&&) noexcept = default;
bool FactorCache::empty() const { return !impl_->lu; }
void FactorCache::clear() {
  impl_->lu.reset();
  impl_->size = 0;
}
int FactorCache::factorizations() const { return impl_->factorizations; }

namespace {

using PrecondFn = std::function<void(std::span<const double>, std::span<double>)>;

// Restarted GMRES, right-preconditioned, continuing from x and accumulating into `report`.
// Returns once the true relative residual is <= tol or `budget` iterations have been spent.
bool gmres(const SparseMatrix& a, std::span<const double> b, std::span<double> x, double bnorm, double tol,
           int restart, int budget, const PrecondFn& precondition, SolveReport& report) {
  const auto n = b.size();
  const int m = std::max(1, restart);
  std::vector<std::vector<double>> basis(static_cast<std::size_t>(m) + 1, std::vector<double>(n));
  std::vector<double> hess(static_cast<std::size_t>((m + 1) * m), 0.0);  // column-major (m+1) x m
  std::vector<double> cs(static_cast<std::size_t>(m)), sn(static_cast<std::size_t>(m));
  std::vector<double> g(static_cast<std::size_t>(m) + 1);
  std::vector<double> r(n), z(n), w(n);
  auto h = [&](int i, int j) -> double& { return hess[static_cast<std::size_t>(j * (m + 1) + i)]; };

  auto true_residual = [&] {
    spmv(a, x, r);
    for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - r[i];
    return norm2(r);
  };

  double rnorm = true_residual();
  report.relative_residual = rnorm / bnorm;
  // Inner iterations aim a little below tol so the recomputed residual usually passes first time.
  const double inner_target = 0.5 * tol * bnorm;
  int spent = 0;

  while (report.relative_residual > tol) {
    if (spent >= budget) return false;
    for (std::size_t i = 0; i < n; ++i) basis[0][i] = r[i] / rnorm;
    std::fill(g.begin(), g.end(), 0.0);
    g[0] = rnorm;
    int k = 0;
    for (; k < m && spent < budget; ++k) {
      ++spent;
      ++report.iterations;
      const auto& vk = basis[static_cast<std::size_t>(k)];
      precondition(vk, z);
      spmv(a, z, w);
      for (int i = 0; i <= k; ++i) {
        const double hij = dot(w, basis[static_cast<std::size_t>(i)]);
        h(i, k) = hij;
        const auto& vi = basis[static_cast<std::size_t>(i)];
        for (std::size_t t = 0; t < n; ++t) w[t] -= hij * vi[t];
      }
      const double wnorm = norm2(w);
      h(k + 1, k) = wnorm;
      if (wnorm > 0.0) {
        auto& next = basis[static_cast<std::size_t>(k) + 1];
        for (std::size_t t = 0; t < n; ++t) next[t] = w[t] / wnorm;
      }
      for (int i = 0; i < k; ++i) {
        const double t0 = cs[static_cast<std::size_t>(i)] * h(i, k) + sn[static_cast<std::size_t>(i)] * h(i + 1, k);
        const double t1 = -sn[static_cast<std::size_t>(i)] * h(i, k) + cs[static_cast<std::size_t>(i)] * h(i + 1, k);
        h(i, k) = t0;
        h(i + 1, k) = t1;
      }
      const double denom = std::hypot(h(k, k), h(k + 1, k));
      cs[static_cast<std::size_t>(k)] = h(k, k) / denom;
      sn[static_cast<std::size_t>(k)] = h(k + 1, k) / denom;
      h(k, k) = denom;
      h(k + 1, k) = 0.0;
      g[static_cast<std::size_t>(k) + 1] = -sn[static_cast<std::size_t>(k)] * g[static_cast<std::size_t>(k)];
      g[static_cast<std::size_t>(k)] *= cs[static_cast<std::size_t>(k)];
      if (std::abs(g[static_cast<std::size_t>(k) + 1]) <= inner_target || wnorm == 0.0) {
        ++k;
        break;
      }
    }
    // Back substitution for the least-squares coefficients.
    std::vector<double> y(static_cast<std::size_t>(k));
    for (int i = k - 1; i >= 0; --i) {
      double s = g[static_cast<std::size_t>(i)];
      for (int j = i + 1; j < k; ++j) s -= h(i, j) * y[static_cast<std::size_t>(j)];
      y[static_cast<std::size_t>(i)] = s / h(i, i);
    }
    std::fill(z.begin(), z.end(), 0.0);
    for (int j = 0; j < k; ++j) {
      const auto& vj = basis[static_cast<std::size_t>(j)];
      const double yj = y[static_cast<std::size_t>(j)];
      for (std::size_t t = 0; t < n; ++t) z[t] += yj * vj[t];
    }
    precondition(z, w);
    for (std::size_t t = 0; t < n; ++t) x[t] += w[t];
    rnorm = true_residual();
    report.relative_residual = rnorm / bnorm;
  }
  return true;
}

}  // namespace

SolveReport solve(const SparseMatrix& a, std::span<const double> b, std::span<double> x,
                  const SolverOptions& options) {
  return solve(a, b, x, options, nullptr);
}

SolveReport solve(const SparseMatrix& a, std::span<const double> b, std::span<double> x,
                  const SolverOptions& options, FactorCache* cache) {
  const auto n = static_cast<std::size_t>(a.rows());
  if (a.rows() != a.cols() || b.size() != n || x.size() != n)
    throw std::invalid_argument("solve: dimension mismatch");

  SolveReport report;
  const double bnorm = norm2(b);
  if (bnorm == 0.0) {
    std::fill(x.begin(), x.end(), 0.0);
    report.converged = true;
    return report;
  }

  auto run = [&](const PrecondFn& p, int budget) {
    return gmres(a, b, x, bnorm, options.tol, options.restart, budget, p, report);
  };
  auto jacobi = [&] {
    std::vector<double> inv_diag = a.diagonal();
    for (double& d : inv_diag) d = d != 0.0 ? 1.0 / d : 1.0;
    return [inv = std::move(inv_diag)](std::span<const double> in, std::span<double> out) {
      for (std::size_t i = 0; i < in.size(); ++i) out[i] = inv[i] * in[i];
    };
  };
  auto with_lu = [&](int budget) {
    const SparseLuFactor lu(a);
    return run([&lu](std::span<const double> in, std::span<double> out) { lu.apply(in, out); }, budget);
  };
  auto with_ilu = [&](int budget) {
    const BlockIlu0 ilu(a);
    return run([&ilu](std::span<const double> in, std::span<double> out) { ilu.apply(in, out); }, budget);
  };

  const bool blocked = n % 3 == 0;
  bool converged = false;
  switch (options.preconditioner) {
    case Preconditioner::jacobi: converged = run(jacobi(), options.max_iter); break;
    case Preconditioner::block_ilu0:
      converged = blocked ? with_ilu(options.max_iter) : run(jacobi(), options.max_iter);
      break;
    case Preconditioner::sparse_lu: converged = with_lu(options.max_iter); break;
    case Preconditioner::automatic: {
      const int trial = std::min(options.max_iter, automatic_trial_iterations);
      if (cache != nullptr) {
        FactorCache::Impl& c = *cache->impl_;
        auto lagged = [&c](std::span<const double> in, std::span<double> out) { c.lu->apply(in, out); };
        if (c.lu && c.size == a.rows()) converged = run(lagged, trial);
        if (!converged && report.iterations < options.max_iter) {
          c.lu = std::make_unique<SparseLuFactor>(a);
          c.size = a.rows();
          ++c.factorizations;
          converged = run(lagged, options.max_iter - report.iterations);
        }
      } else {
        converged = blocked ? with_ilu(trial) : run(jacobi(), trial);
        if (!converged && report.iterations < options.max_iter)
          converged = with_lu(options.max_iter - report.iterations);
      }
      break;
    }
  }
  if (!converged) {
    throw SolveError("solve: GMRES did not converge in " + std::to_string(report.iterations) +
                         " iterations (relative residual " + std::to_string(report.relative_residual) + ")",
                     report);
  }
  report.converged = true;
  return report;
}

std::vector<double> dense_lu_solve(DenseMatrix a, std::vector<double> b) {
  const std::size_t n = a.rows;
  if (a.cols != n || b.size() != n) throw std::invalid_argument("dense_lu_solve: dimension mismatch");
  double scale = 0.0;
  for (double v : a.data) scale = std::max(scale, std::abs(v));
  const double tiny = scale * static_cast<double>(n) * 1e-15;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(a(i, k)) > std::abs(a(piv, k))) piv = i;
    if (!(std::abs(a(piv, k)) > tiny)) throw SingularMatrixError("dense_lu_solve: matrix is singular");
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
      std::swap(b[k], b[piv]);
    }
    const double inv = 1.0 / a(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      const double f = a(i, k) * inv;
      if (f == 0.0) continue;
      a(i, k) = f;
      for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= f * a(k, j);
      b[i] -= f * b[k];
    }
  }
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= a(i, j) * b[j];
    b[i] = s / a(i, i);
  }
  return b;
}

}  // namespace llb
