#include "bandlinalg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "errors.hpp"

namespace paradin {

thread_local std::uint64_t band_op_count = 0;

BandedMatrix::BandedMatrix(int n_, int bw_) : n(n_), bw(bw_) {
  if (n < 1 || bw < 0 || bw > n - 1)
    throw InvalidArgument("BandedMatrix: need n >= 1 and 0 <= bw <= n-1");
  a.assign(static_cast<size_t>(n) * (2 * bw + 1), 0.0);
}

BandedMatrix BandedMatrix::identity(int n) {
  BandedMatrix I(n, 0);
  for (int i = 0; i < n; ++i) I.ref(i, i) = 1.0;
  return I;
}

int product_bandwidth(int n, int bwa, int bwb) { return std::min(n - 1, bwa + bwb); }

BandedMatrix band_mul(const BandedMatrix& A, const BandedMatrix& B) {
  if (A.n != B.n) throw InvalidArgument("band_mul: dimension mismatch");
  const int n = A.n;
  BandedMatrix C(n, product_bandwidth(n, A.bw, B.bw));
  for (int i = 0; i < n; ++i) {
    const int klo = std::max(0, i - A.bw);
    const int khi = std::min(n - 1, i + A.bw);
    for (int j = std::max(0, i - C.bw); j <= std::min(n - 1, i + C.bw); ++j) {
      double s = 0.0;
      const int lo = std::max(klo, j - B.bw);
      const int hi = std::min(khi, j + B.bw);
      for (int k = lo; k <= hi; ++k) s += A.at(i, k) * B.at(k, j);
      band_op_count += (hi >= lo) ? static_cast<std::uint64_t>(hi - lo + 1) : 0;
      C.ref(i, j) = s;
    }
  }
  return C;
}

std::vector<double> band_apply(const BandedMatrix& A, const std::vector<double>& x) {
  if (static_cast<int>(x.size()) != A.n) throw InvalidArgument("band_apply: size mismatch");
  std::vector<double> y(A.n, 0.0);
  for (int i = 0; i < A.n; ++i) {
    double s = 0.0;
    const int lo = std::max(0, i - A.bw);
    const int hi = std::min(A.n - 1, i + A.bw);
    for (int k = lo; k <= hi; ++k) s += A.at(i, k) * x[k];
    band_op_count += static_cast<std::uint64_t>(hi - lo + 1);
    y[i] = s;
  }
  return y;
}

BandedLU lu_factor(const BandedMatrix& A) {
  const int n = A.n;
  const int bw = A.bw;
  double max_row_norm = 0.0;
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int c = 0; c < A.width(); ++c) s += std::abs(A.row(i)[c]);
    max_row_norm = std::max(max_row_norm, s);
  }
  const double pivot_floor = 1e-14 * max_row_norm;

  BandedLU lu;
  lu.n = n;
  lu.bw = bw;
  lu.a = A.a;
  auto at = [&](int i, int j) -> double& { return lu.row(i)[j - i + bw]; };

  for (int k = 0; k < n; ++k) {
    const double piv = at(k, k);
    if (!(std::abs(piv) > pivot_floor)) {
      char msg[160];
      std::snprintf(msg, sizeof msg,
                    "lu_factor: pivot %.3e at row %d below floor %.3e"
                    " (no pivoting; consider smaller blocks)",
                    piv, k, pivot_floor);
      throw SingularMatrix(msg, k);
    }
    const int iend = std::min(n - 1, k + bw);
    for (int i = k + 1; i <= iend; ++i) {
      const double m = at(i, k) / piv;
      at(i, k) = m;
      const int jend = std::min(n - 1, k + bw);
      for (int j = k + 1; j <= jend; ++j) at(i, j) -= m * at(k, j);
      band_op_count += static_cast<std::uint64_t>(jend - k);
    }
  }
  return lu;
}

std::vector<double> lu_solve(const BandedLU& lu, const std::vector<double>& b) {
  if (static_cast<int>(b.size()) != lu.n) throw InvalidArgument("lu_solve: size mismatch");
  const int n = lu.n;
  const int bw = lu.bw;
  auto at = [&](int i, int j) { return lu.row(i)[j - i + bw]; };
  std::vector<double> x = b;
  for (int i = 0; i < n; ++i) {
    double s = x[i];
    const int lo = std::max(0, i - bw);
    for (int k = lo; k < i; ++k) s -= at(i, k) * x[k];
    band_op_count += static_cast<std::uint64_t>(i - lo);
    x[i] = s;
  }
  for (int i = n - 1; i >= 0; --i) {
    double s = x[i];
    const int hi = std::min(n - 1, i + bw);
    for (int k = i + 1; k <= hi; ++k) s -= at(i, k) * x[k];
    band_op_count += static_cast<std::uint64_t>(hi - i);
    x[i] = s / at(i, i);
  }
  return x;
}

std::vector<double> lu_solve_transpose(const BandedLU& lu, const std::vector<double>& b) {
  if (static_cast<int>(b.size()) != lu.n)
    throw InvalidArgument("lu_solve_transpose: size mismatch");
  const int n = lu.n;
  const int bw = lu.bw;
  auto at = [&](int i, int j) { return lu.row(i)[j - i + bw]; };
  // A = L U, so A^T x = b means U^T y = b then L^T x = y.
  std::vector<double> x = b;
  for (int i = 0; i < n; ++i) {
    double s = x[i];
    const int lo = std::max(0, i - bw);
    for (int k = lo; k < i; ++k) s -= at(k, i) * x[k];
    x[i] = s / at(i, i);
  }
  for (int i = n - 1; i >= 0; --i) {
    double s = x[i];
    const int hi = std::min(n - 1, i + bw);
    for (int k = i + 1; k <= hi; ++k) s -= at(k, i) * x[k];
    x[i] = s;
  }
  return x;
}

double condition_estimate(const BandedMatrix& A) {
  const int n = A.n;
  double norm1 = 0.0;
  for (int j = 0; j < n; ++j) {
    double s = 0.0;
    const int lo = std::max(0, j - A.bw);
    const int hi = std::min(n - 1, j + A.bw);
    for (int i = lo; i <= hi; ++i) s += std::abs(A.at(i, j));
    norm1 = std::max(norm1, s);
  }
  const BandedLU lu = lu_factor(A);
  // Hager's estimator for ||A^{-1}||_1.
  std::vector<double> x(n, 1.0 / n);
  double est = 0.0;
  for (int iter = 0; iter < 5; ++iter) {
    const std::vector<double> y = lu_solve(lu, x);
    double ynorm = 0.0;
    for (double v : y) ynorm += std::abs(v);
    est = std::max(est, ynorm);
    std::vector<double> xi(n);
    for (int i = 0; i < n; ++i) xi[i] = (y[i] >= 0.0) ? 1.0 : -1.0;
    const std::vector<double> z = lu_solve_transpose(lu, xi);
    int jmax = 0;
    for (int i = 1; i < n; ++i)
      if (std::abs(z[i]) > std::abs(z[jmax])) jmax = i;
    if (std::abs(z[jmax]) <= 2.0 * ynorm / 3.0 && iter > 0) break;
    x.assign(n, 0.0);
    x[jmax] = 1.0;
  }
  return norm1 * est;
}

std::vector<std::pair<int, int>> row_partition(int n, int cores) {
  if (n < 1 || cores < 1) throw InvalidArgument("row_partition: need n >= 1, cores >= 1");
  std::vector<std::pair<int, int>> parts(cores);
  if (cores > n) {
    for (int s = 0; s < cores; ++s)
      parts[s] = (s < n) ? std::make_pair(s, s + 1) : std::make_pair(n, n);
    return parts;
  }
  const int m = n / cores;
  for (int s = 0; s < cores; ++s)
    parts[s] = {s * m, (s == cores - 1) ? n : (s + 1) * m};
  return parts;
}

RowsBlock chain_seed(const BandedMatrix& A1, const std::vector<double>& r1, int row_begin,
                     int row_end) {
  RowsBlock blk;
  blk.n = A1.n;
  blk.bw = A1.bw;
  blk.row_begin = row_begin;
  blk.row_end = row_end;
  blk.rows.assign(static_cast<size_t>(blk.nrows()) * A1.width(), 0.0);
  blk.rhs.resize(blk.nrows());
  for (int i = row_begin; i < row_end; ++i) {
    std::copy(A1.row(i), A1.row(i) + A1.width(), blk.row(i));
    blk.rhs[i - row_begin] = r1[i];
  }
  return blk;
}

void chain_advance(RowsBlock& blk, const BandedMatrix& Al, const std::vector<double>& rl) {
  if (Al.n != blk.n) throw InvalidArgument("chain_advance: dimension mismatch");
  const int n = blk.n;
  // rhs first, with the previous rows: rtilde^l = P^{l-1} r_l + rtilde^{l-1}.
  for (int i = blk.row_begin; i < blk.row_end; ++i) {
    double s = 0.0;
    const int lo = std::max(0, i - blk.bw);
    const int hi = std::min(n - 1, i + blk.bw);
    for (int k = lo; k <= hi; ++k) s += blk.at(i, k) * rl[k];
    band_op_count += static_cast<std::uint64_t>(hi - lo + 1);
    blk.rhs[i - blk.row_begin] = s + blk.rhs[i - blk.row_begin];
  }
  // rows next: P^l = P^{l-1} A_l, bandwidth grows additively up to n-1.
  const int bwc = product_bandwidth(n, blk.bw, Al.bw);
  std::vector<double> out(static_cast<size_t>(blk.nrows()) * (2 * bwc + 1), 0.0);
  for (int i = blk.row_begin; i < blk.row_end; ++i) {
    double* orow = out.data() + static_cast<size_t>(i - blk.row_begin) * (2 * bwc + 1);
    const int klo = std::max(0, i - blk.bw);
    const int khi = std::min(n - 1, i + blk.bw);
    for (int j = std::max(0, i - bwc); j <= std::min(n - 1, i + bwc); ++j) {
      double s = 0.0;
      const int lo = std::max(klo, j - Al.bw);
      const int hi = std::min(khi, j + Al.bw);
      for (int k = lo; k <= hi; ++k) s += blk.at(i, k) * Al.at(k, j);
      band_op_count += (hi >= lo) ? static_cast<std::uint64_t>(hi - lo + 1) : 0;
      orow[j - i + bwc] = s;
    }
  }
  blk.bw = bwc;
  blk.rows = std::move(out);
}

void assemble_rows(const std::vector<RowsBlock>& blocks, BandedMatrix& P,
                   std::vector<double>& rtilde) {
  if (blocks.empty()) throw InvalidArgument("assemble_rows: no blocks");
  const int n = blocks.front().n;
  const int bw = blocks.front().bw;
  int covered = 0;
  for (const RowsBlock& b : blocks) {
    if (b.n != n || (b.nrows() > 0 && b.bw != bw))
      throw InvalidArgument("assemble_rows: inconsistent blocks");
    if (b.row_begin != covered) throw InvalidArgument("assemble_rows: rows do not tile");
    covered = b.row_end;
  }
  if (covered != n) throw InvalidArgument("assemble_rows: rows do not cover matrix");
  P = BandedMatrix(n, bw);
  rtilde.assign(n, 0.0);
  for (const RowsBlock& b : blocks)
    for (int i = b.row_begin; i < b.row_end; ++i) {
      std::copy(b.row(i), b.row(i) + 2 * bw + 1, P.row(i));
      rtilde[i] = b.rhs[i - b.row_begin];
    }
}

std::vector<ChainLevel> product_chain(const std::vector<BandedMatrix>& A,
                                      const std::vector<std::vector<double>>& r, int cores) {
  const int L = static_cast<int>(A.size());
  if (L < 1) throw InvalidArgument("product_chain: empty chain");
  if (r.size() != A.size()) throw InvalidArgument("product_chain: A/r length mismatch");
  const int n = A.front().n;
  if (cores < 1) throw InvalidArgument("product_chain: cores must be >= 1");

  const auto parts = row_partition(n, cores);
  std::vector<RowsBlock> blocks(cores);
  for (int s = 0; s < cores; ++s)
    blocks[s] = chain_seed(A[0], r[0], parts[s].first, parts[s].second);

  std::vector<ChainLevel> out(L);
  assemble_rows(blocks, out[0].P, out[0].rtilde);
  for (int l = 1; l < L; ++l) {
    for (int s = 0; s < cores; ++s) chain_advance(blocks[s], A[l], r[l]);
    assemble_rows(blocks, out[l].P, out[l].rtilde);
  }
  return out;
}

}  // namespace paradin
