// Banded matrices stored dense-in-band, LU without pivoting, and the
// row-distributed prefix-product chain used by the decoupled all-at-once
// solvers.
//
// Storage: an n x n matrix with half-bandwidth bw keeps row i as the
// (2*bw + 1) entries for columns i-bw .. i+bw; positions outside [0, n) are
// stored as zeros and never read.  All accumulations run in ascending column
// index order so that results are bitwise reproducible regardless of which
// worker executes them.
#pragma once

#include <cstdint>
#include <vector>

namespace paradin {

// Multiply-add counter for the arithmetic-cost assertions; one per thread so
// concurrent workers do not race.
extern thread_local std::uint64_t band_op_count;

struct BandedMatrix {
  int n = 0;
  int bw = 0;
  std::vector<double> a;  // n rows x (2*bw+1)

  BandedMatrix() = default;
  BandedMatrix(int n_, int bw_);
  static BandedMatrix identity(int n);

  int width() const { return 2 * bw + 1; }
  double* row(int i) { return a.data() + static_cast<size_t>(i) * width(); }
  const double* row(int i) const { return a.data() + static_cast<size_t>(i) * width(); }
  // Value at (i, j); zero outside the band.
  double at(int i, int j) const {
    const int d = j - i;
    return (d < -bw || d > bw) ? 0.0 : row(i)[d + bw];
  }
  double& ref(int i, int j) { return row(i)[j - i + bw]; }
};

// Half-bandwidth of a product of matrices with half-bandwidths bwa and bwb.
int product_bandwidth(int n, int bwa, int bwb);

// C = A * B with the additive bandwidth rule, entries summed left to right
// over the in-band index range.
BandedMatrix band_mul(const BandedMatrix& A, const BandedMatrix& B);

// y = A * x.
std::vector<double> band_apply(const BandedMatrix& A, const std::vector<double>& x);

// LU factorization in band storage without pivoting.  A pivot whose magnitude
// falls below 1e-14 times the largest row 1-norm of the input raises
// SingularMatrix naming the offending row.
struct BandedLU {
  int n = 0;
  int bw = 0;
  std::vector<double> a;
  double* row(int i) { return a.data() + static_cast<size_t>(i) * (2 * bw + 1); }
  const double* row(int i) const { return a.data() + static_cast<size_t>(i) * (2 * bw + 1); }
};

BandedLU lu_factor(const BandedMatrix& A);
std::vector<double> lu_solve(const BandedLU& lu, const std::vector<double>& b);
// Solves A^T x = b using the factors of A (needed by the condition estimator).
std::vector<double> lu_solve_transpose(const BandedLU& lu, const std::vector<double>& b);

// 1-norm condition estimate: exact ||A||_1 times a Hager-style estimate of
// ||A^{-1}||_1 driven by lu solves.
double condition_estimate(const BandedMatrix& A);

// A contiguous slice of rows of a band matrix, with the matching slice of an
// accumulated right-hand side.  The unit each worker owns during a chain.
struct RowsBlock {
  int n = 0;
  int bw = 0;
  int row_begin = 0;  // inclusive
  int row_end = 0;    // exclusive
  std::vector<double> rows;  // (row_end-row_begin) x (2*bw+1)
  std::vector<double> rhs;   // row_end-row_begin

  int nrows() const { return row_end - row_begin; }
  double* row(int i) { return rows.data() + static_cast<size_t>(i - row_begin) * (2 * bw + 1); }
  const double* row(int i) const {
    return rows.data() + static_cast<size_t>(i - row_begin) * (2 * bw + 1);
  }
  double at(int i, int j) const {
    const int d = j - i;
    return (d < -bw || d > bw) ? 0.0 : row(i)[d + bw];
  }
};

// Row ranges for distributing n rows over `cores` workers: every worker gets
// floor(n/cores) rows and the last absorbs the remainder; when there are more
// workers than rows, the first n workers get one row each and the rest none.
std::vector<std::pair<int, int>> row_partition(int n, int cores);

// Seed block: the owned rows of P^1 = A1 and rhs slice of r1.
RowsBlock chain_seed(const BandedMatrix& A1, const std::vector<double>& r1, int row_begin,
                     int row_end);

// One chain step: given the owned rows of P^{l-1} and accumulated rhs, fold in
// level l.  The rhs update uses the *old* rows (P^{l-1} r_l + previous rhs),
// then the rows advance to P^l = P^{l-1} A_l with the bandwidth rule.
void chain_advance(RowsBlock& blk, const BandedMatrix& Al, const std::vector<double>& rl);

// Glue row blocks (ascending, tiling all n rows, equal bw) back into a full
// matrix and rhs.  Pure copies; no arithmetic.
void assemble_rows(const std::vector<RowsBlock>& blocks, BandedMatrix& P,
                   std::vector<double>& rtilde);

// Reference implementation of the distributed product chain: runs the per-core
// row recursions in a single thread, in exactly the arithmetic order the
// staged runtime version uses, and returns (P^l, rtilde^l) for l = 1..L.
struct ChainLevel {
  BandedMatrix P;
  std::vector<double> rtilde;
};
std::vector<ChainLevel> product_chain(const std::vector<BandedMatrix>& A,
                                      const std::vector<std::vector<double>>& r, int cores);

}  // namespace paradin
