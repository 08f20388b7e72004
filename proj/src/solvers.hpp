// The method ladder on top of the banded kernels and the staged runtime:
//
//   sequential_bdf1          backward Euler marched level by level
//   paradin_solve            all-at-once Newton, one decoupled product chain
//   block_jacobi_solve       chain per block, inter-block couplings iterated
//   parareal_linear_baseline classical Parareal on each Newton linear system,
//                            coarse sweep serialized on the host
//   paradin_parareal_solve   the combined method: the same Parareal iteration
//                            with both coarse and fine systems solved by
//                            decoupled chains across workers, optionally with
//                            a spatially coarsened coarse level
//
// Every nonlinear driver runs Newton on the full space-time system: assemble
// A_n = I + tau dF/du and r_n = -[(u_n - u_{n-1}) + tau F(u_n)] for all
// levels, solve the block-bidiagonal linear system by one of the strategies
// above, add the update, and stop when the space-time norm of the update
// falls below eps_newton.
//
// The linear layer is exposed separately so its algebraic identities (chain
// solves equal a direct all-at-once solve; block-Jacobi is exact in exactly M
// sweeps; Parareal is exact after M iterations and its first k+1 blocks are
// exact after k) can be exercised against dense oracles.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bandlinalg.hpp"
#include "discretize.hpp"
#include "mesh.hpp"
#include "model.hpp"
#include "norms.hpp"
#include "runtime.hpp"

namespace paradin {

struct NewtonConfig {
  double eps_newton = 1e-8;     // stop when the space-time update norm drops below
  int max_newton = 20;
  double safety_factor = 1e-2;  // eps_parareal = safety_factor * eps_newton
  int max_parareal = 0;         // cap on Parareal iterations; <= 0 means the block count
  NormKind norm_kind = NormKind::L2;

  double eps_parareal() const { return safety_factor * eps_newton; }
};

// Partition of the nt time levels into M blocks of J consecutive levels.
struct BlockLayout {
  int num_blocks = 1;  // M
  int block_len = 1;   // J, M*J == nt

  static BlockLayout for_grid(const GridSpec& g, int num_blocks);
  int first_level(int block) const { return block_len * (block - 1) + 1; }  // 1-based
  int last_level(int block) const { return block_len * block; }
  int block_of_level(int level) const { return (level - 1) / block_len + 1; }
};

struct SolveReport {
  SpaceTimeSolution solution;
  int newton_iters = 0;
  std::vector<int> parareal_iters_per_newton;
  int jacobi_iters = 0;                // total sweeps over all Newton iterations
  std::vector<double> update_norms;    // space-time update norm per Newton iteration
  double final_update_norm = 0.0;
  double wall_seconds = 0.0;
  ExecMode mode = ExecMode::Emulated;
  std::uint64_t max_worker_band_ops = 0;  // largest per-worker multiply-add count in one stage
  std::vector<std::string> warnings;
};

// One Newton iteration's linearization: A[l], r[l] for time levels l+1.
struct LinearSystem {
  std::vector<BandedMatrix> A;
  std::vector<std::vector<double>> r;
};

LinearSystem assemble_linear_system(const ProblemSpec& p, const GridSpec& g,
                                    const SpaceTimeSolution& u);

// Coarse-in-time (and optionally coarse-in-space) companion system used by
// the Parareal layers: one backward-Euler step per block, linearized at the
// restriction of the current iterate's block-end level.  grid has nt = M, so
// grid.tau is the coarse step T_final / M.
struct CoarseSystem {
  GridSpec grid;
  int cs = 1;  // spatial coarsening factor; 1 means the fine spatial grid
  std::vector<BandedMatrix> A;
  std::vector<std::vector<double>> r;
};

CoarseSystem assemble_coarse_system(const ProblemSpec& p, const GridSpec& g,
                                    const BlockLayout& layout, const SpaceTimeSolution& u,
                                    int cs);

struct LinearReport {
  int parareal_iters = 0;               // coarse correction steps performed
  int jacobi_sweeps = 0;
  std::vector<double> coupling_deltas;  // norm of consecutive coupling differences
  std::uint64_t max_worker_band_ops = 0;
};

// Direct all-at-once solve by one product chain over all levels, distributed
// over one worker per level.
std::vector<std::vector<double>> linear_paradin(const LinearSystem& sys, const Topology& topo,
                                                LinearReport* rep = nullptr);

// Jacobi sweeps over blocks: each sweep solves every block's chain with the
// previous sweep's block-end updates as frozen couplings (zero on the first
// sweep).  Exact after exactly M sweeps.
std::vector<std::vector<double>> linear_block_jacobi(const LinearSystem& sys,
                                                     const BlockLayout& layout,
                                                     const GridSpec& g, NormKind kind,
                                                     double eps_stop, int max_sweeps,
                                                     const Topology& topo,
                                                     LinearReport* rep = nullptr);

// Parareal on the all-at-once system.  fused=true runs the combined scheme:
// one stage per iteration in which the block-end workers solve the coarse
// system by a decoupled chain among themselves, hand the resulting couplings
// to the next block's workers, and every worker then runs its block's fine
// chain.  fused=false is the classical baseline: the coarse solves run
// serially on the host between stage calls.  Both perform mathematically
// identical iterations.  Throws Divergence when the coupling differences grow
// (10x over three iterations, net growth at the cap, or non-finite values).
std::vector<std::vector<double>> linear_parareal(const LinearSystem& sys,
                                                 const BlockLayout& layout,
                                                 const CoarseSystem& coarse,
                                                 const GridSpec& fine_grid, NormKind kind,
                                                 double eps_stop, int max_iters, bool fused,
                                                 const Topology& topo,
                                                 LinearReport* rep = nullptr);

// Backward Euler marched forward in time, Newton per level (spatial-norm stop).
SolveReport sequential_bdf1(const ProblemSpec& p, const GridSpec& g, const NewtonConfig& cfg,
                            const Topology& topo = {});

// Sequential solve on a cf-coarsened grid (cf in each spatial direction and in
// time), prolonged spatially by cubic splines per coarse level and in time by
// cubic splines per node.  cf = 1 returns the fine sequential solution.
SpaceTimeSolution build_initial_guess(const ProblemSpec& p, const GridSpec& g, int cf,
                                      const NewtonConfig& cfg);

SolveReport paradin_solve(const ProblemSpec& p, const GridSpec& g, const NewtonConfig& cfg,
                          const SpaceTimeSolution& guess, const Topology& topo = {});

SolveReport block_jacobi_solve(const ProblemSpec& p, const GridSpec& g, const NewtonConfig& cfg,
                               const BlockLayout& layout, const SpaceTimeSolution& guess,
                               const Topology& topo = {});

SolveReport parareal_linear_baseline(const ProblemSpec& p, const GridSpec& g,
                                     const NewtonConfig& cfg, const BlockLayout& layout,
                                     const SpaceTimeSolution& guess, const Topology& topo = {},
                                     int cs = 1);

SolveReport paradin_parareal_solve(const ProblemSpec& p, const GridSpec& g,
                                   const NewtonConfig& cfg, const BlockLayout& layout,
                                   const SpaceTimeSolution& guess, const Topology& topo = {},
                                   int cs = 1);

}  // namespace paradin
