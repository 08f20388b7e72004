#include "solvers.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <utility>

#include "errors.hpp"

namespace paradin {
namespace {

double elapsed_seconds(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void send_rows(StageContext& cx, int dest, const RowsBlock& blk) {
  std::vector<double> data;
  data.reserve(blk.rows.size() + blk.rhs.size());
  data.insert(data.end(), blk.rows.begin(), blk.rows.end());
  data.insert(data.end(), blk.rhs.begin(), blk.rhs.end());
  cx.send(dest, MessageKind::RowBlock, std::move(data),
          {blk.n, blk.bw, blk.row_begin, blk.row_end});
}

RowsBlock decode_rows(const Message& m) {
  RowsBlock blk;
  blk.n = static_cast<int>(m.meta[0]);
  blk.bw = static_cast<int>(m.meta[1]);
  blk.row_begin = static_cast<int>(m.meta[2]);
  blk.row_end = static_cast<int>(m.meta[3]);
  const size_t nvals = static_cast<size_t>(blk.nrows()) * (2 * blk.bw + 1);
  blk.rows.assign(m.data.begin(), m.data.begin() + nvals);
  blk.rhs.assign(m.data.begin() + nvals, m.data.end());
  return blk;
}

// One decoupled chain over `nlev` levels shared by `nlev` workers.  Worker
// slot q is w_first + stride*q; the caller is slot `slot`.  Each slot owns the
// row slice row_partition(nunk, nlev)[slot] of the running prefix product and
// gathers the full rows of level `slot`, which it factors and solves.
// r0_extra, when present, is a coupling added to the level-0 right-hand side.
std::vector<double> run_block_chain(StageContext& cx, int w_first, int stride, int slot,
                                    int nlev, int nunk, const BandedMatrix* A,
                                    const std::vector<double>* r,
                                    const std::vector<double>* r0_extra) {
  const auto parts = row_partition(nunk, nlev);
  std::vector<double> r0 = r[0];
  if (r0_extra) {
    for (size_t i = 0; i < r0.size(); ++i) r0[i] += (*r0_extra)[i];
  }
  RowsBlock blk = chain_seed(A[0], r0, parts[slot].first, parts[slot].second);
  RowsBlock mine;
  for (int l = 0; l < nlev; ++l) {
    if (l > 0) chain_advance(blk, A[l], r[l]);
    if (l == slot) {
      mine = blk;
    } else {
      send_rows(cx, w_first + stride * l, blk);
    }
  }
  std::vector<RowsBlock> slices(nlev);
  for (int q = 0; q < nlev; ++q) {
    if (q == slot) {
      slices[q] = std::move(mine);
    } else {
      slices[q] = decode_rows(cx.recv(w_first + stride * q));
    }
  }
  BandedMatrix P;
  std::vector<double> rtilde;
  assemble_rows(slices, P, rtilde);
  const BandedLU lu = lu_factor(P);
  return lu_solve(lu, rtilde);
}

struct WorkerOut {
  std::vector<double> delta;   // update for the worker's own time level
  std::vector<double> lambda;  // coupling produced by block-end workers (fused stages)
  std::uint64_t ops = 0;
};

// One sweep of per-block chains.  inflow[b] (empty = none) is added to the
// first residual of block b; inflow[0] is never used.
std::vector<std::vector<double>> run_fine_sweep(const LinearSystem& sys,
                                                const BlockLayout& lay,
                                                const std::vector<std::vector<double>>& inflow,
                                                const Topology& topo, std::uint64_t* max_ops) {
  const int M = lay.num_blocks;
  const int J = lay.block_len;
  const int ns = sys.A[0].n;
  auto outs = run_stage_collect<WorkerOut>(topo, M * J, [&](StageContext& cx) {
    const std::uint64_t t0 = band_op_count;
    const int b = cx.id() / J;
    const int slot = cx.id() % J;
    const std::vector<double>* extra =
        (b > 0 && !inflow[b].empty()) ? &inflow[b] : nullptr;
    WorkerOut out;
    out.delta =
        run_block_chain(cx, b * J, 1, slot, J, ns, &sys.A[b * J], &sys.r[b * J], extra);
    out.ops = band_op_count - t0;
    return out;
  });
  std::vector<std::vector<double>> deltas(outs.size());
  for (size_t w = 0; w < outs.size(); ++w) {
    deltas[w] = std::move(outs[w].delta);
    if (max_ops) *max_ops = std::max(*max_ops, outs[w].ops);
  }
  return deltas;
}

// One fused Parareal stage: the M block-end workers solve the coarse
// bidiagonal system (rhs `crhs`) by a chain among themselves, add
// lambda_base when given (correction steps), send the resulting coupling to
// every worker of the next block, and all workers then run their block's
// fine chain with the received coupling folded into its first residual.
std::vector<std::vector<double>> run_parareal_stage(
    const LinearSystem& sys, const BlockLayout& lay, const CoarseSystem& coarse,
    const GridSpec& fine_grid, const std::vector<std::vector<double>>* crhs,
    const std::vector<std::vector<double>>* lambda_base, const Topology& topo,
    std::vector<std::vector<double>>& lam_out, std::uint64_t* max_ops) {
  const int M = lay.num_blocks;
  const int J = lay.block_len;
  const int ns = sys.A[0].n;
  const int nsc = coarse.A[0].n;
  auto outs = run_stage_collect<WorkerOut>(topo, M * J, [&](StageContext& cx) {
    const std::uint64_t t0 = band_op_count;
    const int b = cx.id() / J;
    const int slot = cx.id() % J;
    WorkerOut out;
    if (slot == J - 1) {
      out.lambda = run_block_chain(cx, J - 1, J, b, M, nsc, coarse.A.data(), crhs->data(),
                                   nullptr);
      if (lambda_base) {
        for (size_t i = 0; i < out.lambda.size(); ++i) out.lambda[i] += (*lambda_base)[b][i];
      }
      if (b + 1 < M) {
        for (int s = 0; s < J; ++s) {
          cx.send((b + 1) * J + s, MessageKind::CouplingVector,
                  std::vector<double>(out.lambda));
        }
      }
    }
    std::vector<double> inflow;
    const std::vector<double>* extra = nullptr;
    if (b > 0) {
      Message m = cx.recv(b * J - 1);
      if (coarse.cs > 1) {
        Field f;
        f.v = std::move(m.data);
        inflow = prolong_cubic_spline(f, coarse.grid, fine_grid, nullptr).v;
      } else {
        inflow = std::move(m.data);
      }
      extra = &inflow;
    }
    out.delta =
        run_block_chain(cx, b * J, 1, slot, J, ns, &sys.A[b * J], &sys.r[b * J], extra);
    out.ops = band_op_count - t0;
    return out;
  });
  std::vector<std::vector<double>> deltas(outs.size());
  lam_out.assign(M, {});
  for (size_t w = 0; w < outs.size(); ++w) {
    deltas[w] = std::move(outs[w].delta);
    if (max_ops) *max_ops = std::max(*max_ops, outs[w].ops);
  }
  for (int b = 0; b < M; ++b) lam_out[b] = std::move(outs[static_cast<size_t>(b) * J + J - 1].lambda);
  return deltas;
}

void check_layout(const LinearSystem& sys, const BlockLayout& lay) {
  const int L = static_cast<int>(sys.A.size());
  if (lay.num_blocks < 1 || lay.block_len < 1 || lay.num_blocks * lay.block_len != L)
    throw InvalidArgument("block layout does not tile the " + std::to_string(L) +
                          " time levels");
}

std::vector<Field> as_fields(const std::vector<std::vector<double>>& v) {
  std::vector<Field> f(v.size());
  for (size_t i = 0; i < v.size(); ++i) f[i].v = v[i];
  return f;
}

}  // namespace

BlockLayout BlockLayout::for_grid(const GridSpec& g, int num_blocks) {
  if (num_blocks < 1 || g.nt % num_blocks != 0)
    throw InvalidArgument("block count " + std::to_string(num_blocks) +
                          " must be a positive divisor of nt=" + std::to_string(g.nt));
  return BlockLayout{num_blocks, g.nt / num_blocks};
}

LinearSystem assemble_linear_system(const ProblemSpec& p, const GridSpec& g,
                                    const SpaceTimeSolution& u) {
  if (static_cast<int>(u.levels.size()) != g.nt || u.initial.size() != g.num_spatial())
    throw InvalidArgument("solution shape does not match the grid");
  LinearSystem sys;
  sys.A.reserve(g.nt);
  sys.r.reserve(g.nt);
  for (int n = 1; n <= g.nt; ++n) {
    const Field& un = u.levels[n - 1];
    const Field& up = (n == 1) ? u.initial : u.levels[n - 2];
    sys.A.push_back(assemble_jacobian(p, g, un, g.t(n), g.tau));
    sys.r.push_back(bdf1_residual(p, g, un, up, g.t(n), g.tau).v);
  }
  return sys;
}

CoarseSystem assemble_coarse_system(const ProblemSpec& p, const GridSpec& g,
                                    const BlockLayout& layout, const SpaceTimeSolution& u,
                                    int cs) {
  const int M = layout.num_blocks;
  const int J = layout.block_len;
  if (M * J != g.nt) throw InvalidArgument("block layout does not tile nt");
  if (cs < 1) throw InvalidArgument("spatial coarsening factor must be >= 1");
  CoarseSystem c;
  c.cs = cs;
  if (cs == 1) {
    c.grid = make_grid(g.x_left, g.x_right, g.y_left, g.y_right, g.t_final, g.nx, g.ny, M);
  } else {
    const GridSpec sp = nested_coarse_grid(g, cs);  // validates the nesting rule
    c.grid = make_grid(g.x_left, g.x_right, g.y_left, g.y_right, g.t_final, sp.nx, sp.ny, M);
  }
  auto restrict_field = [&](const Field& f) {
    return cs == 1 ? f : restrict_injection(f, g, cs);
  };
  Field prev = restrict_field(u.initial);
  c.A.reserve(M);
  c.r.reserve(M);
  for (int m = 1; m <= M; ++m) {
    const Field cur = restrict_field(u.levels[static_cast<size_t>(m) * J - 1]);
    const double tm = c.grid.t(m);
    c.A.push_back(assemble_jacobian(p, c.grid, cur, tm, c.grid.tau));
    c.r.push_back(bdf1_residual(p, c.grid, cur, prev, tm, c.grid.tau).v);
    prev = cur;
  }
  return c;
}

std::vector<std::vector<double>> linear_paradin(const LinearSystem& sys, const Topology& topo,
                                                LinearReport* rep) {
  if (sys.A.empty()) throw InvalidArgument("empty linear system");
  const BlockLayout lay{1, static_cast<int>(sys.A.size())};
  const std::vector<std::vector<double>> no_inflow(1);
  std::uint64_t ops = 0;
  auto deltas = run_fine_sweep(sys, lay, no_inflow, topo, &ops);
  if (rep) {
    *rep = LinearReport{};
    rep->max_worker_band_ops = ops;
  }
  return deltas;
}

std::vector<std::vector<double>> linear_block_jacobi(const LinearSystem& sys,
                                                     const BlockLayout& layout,
                                                     const GridSpec& g, NormKind kind,
                                                     double eps_stop, int max_sweeps,
                                                     const Topology& topo, LinearReport* rep) {
  check_layout(sys, layout);
  if (max_sweeps < 1) throw InvalidArgument("need at least one Jacobi sweep");
  const int M = layout.num_blocks;
  const int J = layout.block_len;
  std::vector<std::vector<double>> inflow(M);
  std::vector<std::vector<double>> prev_coup;
  std::vector<std::vector<double>> deltas;
  std::uint64_t ops = 0;
  int sweeps = 0;
  std::vector<double> dnorms;
  for (int s = 1; s <= max_sweeps; ++s) {
    deltas = run_fine_sweep(sys, layout, inflow, topo, &ops);
    sweeps = s;
    if (M == 1) break;
    std::vector<std::vector<double>> coup(M - 1);
    for (int b = 1; b < M; ++b) coup[b - 1] = deltas[static_cast<size_t>(b) * J - 1];
    if (!prev_coup.empty()) {
      std::vector<std::vector<double>> diff(M - 1);
      for (int i = 0; i < M - 1; ++i) {
        diff[i].resize(coup[i].size());
        for (size_t j = 0; j < coup[i].size(); ++j) diff[i][j] = coup[i][j] - prev_coup[i][j];
      }
      const double dv = space_time_norm(g, as_fields(diff), kind);
      dnorms.push_back(dv);
      if (!std::isfinite(dv))
        throw Divergence("block-Jacobi coupling change is not finite");
      if (dv < eps_stop) break;
    }
    prev_coup = std::move(coup);
    for (int b = 1; b < M; ++b) inflow[b] = prev_coup[b - 1];
  }
  if (rep) {
    *rep = LinearReport{};
    rep->jacobi_sweeps = sweeps;
    rep->coupling_deltas = std::move(dnorms);
    rep->max_worker_band_ops = ops;
  }
  return deltas;
}

std::vector<std::vector<double>> linear_parareal(const LinearSystem& sys,
                                                 const BlockLayout& layout,
                                                 const CoarseSystem& coarse,
                                                 const GridSpec& fine_grid, NormKind kind,
                                                 double eps_stop, int max_iters, bool fused,
                                                 const Topology& topo, LinearReport* rep) {
  check_layout(sys, layout);
  const int M = layout.num_blocks;
  const int J = layout.block_len;
  if (M == 1) return linear_paradin(sys, topo, rep);
  if (static_cast<int>(coarse.A.size()) != M)
    throw InvalidArgument("coarse system does not match the block count");
  if (max_iters < 1) throw InvalidArgument("need at least one Parareal iteration allowed");
  const int nsc = coarse.A[0].n;

  auto restrict_vec = [&](const std::vector<double>& v) {
    if (coarse.cs == 1) return v;
    Field f;
    f.v = v;
    return restrict_injection(f, fine_grid, coarse.cs).v;
  };
  auto prolong_vec = [&](const std::vector<double>& v) {
    if (coarse.cs == 1) return v;
    Field f;
    f.v = v;
    return prolong_cubic_spline(f, coarse.grid, fine_grid, nullptr).v;
  };

  std::uint64_t ops = 0;
  std::vector<std::vector<double>> deltas;
  std::vector<std::vector<double>> lam_prev(M), lam(M);
  std::vector<BandedLU> clu;
  if (!fused) {
    clu.reserve(M);
    for (const BandedMatrix& Ac : coarse.A) clu.push_back(lu_factor(Ac));
  }

  // Initialization: solve the coarse bidiagonal system for the starting
  // couplings, then one fine pass using them.
  if (fused) {
    deltas = run_parareal_stage(sys, layout, coarse, fine_grid, &coarse.r, nullptr, topo,
                                lam_prev, &ops);
  } else {
    std::vector<double> carry(nsc, 0.0);
    for (int b = 0; b < M; ++b) {
      std::vector<double> rhs = coarse.r[b];
      for (int i = 0; i < nsc; ++i) rhs[i] += carry[i];
      carry = lu_solve(clu[b], rhs);
      lam_prev[b] = carry;
    }
    std::vector<std::vector<double>> inflow(M);
    for (int b = 1; b < M; ++b) inflow[b] = prolong_vec(lam_prev[b - 1]);
    deltas = run_fine_sweep(sys, layout, inflow, topo, &ops);
  }

  std::vector<double> dnorms;
  int iters = 0;
  for (int k = 1;; ++k) {
    // Correction k: solve the coarse system for the coupling increment around
    // the restricted fine block-end updates, then fine pass k+1.
    std::vector<std::vector<double>> lambda_base(M);
    for (int b = 0; b < M; ++b)
      lambda_base[b] = restrict_vec(deltas[static_cast<size_t>(b + 1) * J - 1]);
    std::vector<std::vector<double>> d(M);
    d[0].assign(nsc, 0.0);
    for (int b = 1; b < M; ++b) {
      d[b] = restrict_vec(deltas[static_cast<size_t>(b) * J - 1]);
      for (int i = 0; i < nsc; ++i) d[b][i] -= lam_prev[b - 1][i];
    }
    if (fused) {
      deltas = run_parareal_stage(sys, layout, coarse, fine_grid, &d, &lambda_base, topo, lam,
                                  &ops);
    } else {
      for (int b = 0; b < M; ++b) {
        std::vector<double> rhs(nsc, 0.0);
        if (b > 0) {
          for (int i = 0; i < nsc; ++i) rhs[i] = lam[b - 1][i] - lam_prev[b - 1][i];
        }
        const std::vector<double> mu = lu_solve(clu[b], rhs);
        lam[b] = lambda_base[b];
        for (int i = 0; i < nsc; ++i) lam[b][i] += mu[i];
      }
      std::vector<std::vector<double>> inflow(M);
      for (int b = 1; b < M; ++b) inflow[b] = prolong_vec(lam[b - 1]);
      deltas = run_fine_sweep(sys, layout, inflow, topo, &ops);
    }
    std::vector<std::vector<double>> diff(M);
    for (int b = 0; b < M; ++b) {
      diff[b].resize(nsc);
      for (int i = 0; i < nsc; ++i) diff[b][i] = lam[b][i] - lam_prev[b][i];
    }
    const double dk = space_time_norm(coarse.grid, as_fields(diff), kind);
    dnorms.push_back(dk);
    iters = k;
    if (!std::isfinite(dk))
      throw Divergence("Parareal coupling difference is not finite at iteration " +
                       std::to_string(k));
    if (dnorms.size() >= 4 && dk > 10.0 * dnorms[dnorms.size() - 4]) {
      char msg[144];
      std::snprintf(msg, sizeof msg,
                    "Parareal coupling differences grew more than tenfold over three iterations "
                    "(%.3e -> %.3e)",
                    dnorms[dnorms.size() - 4], dk);
      throw Divergence(msg);
    }
    lam_prev = lam;
    if (dk < eps_stop) break;
    // Finite termination holds only when the coarse grid matches the fine one;
    // with spatial coarsening the transfer operators are not inverses and the
    // iteration must run until the tolerance or the cap.
    if (coarse.cs == 1 && k >= M) break;
    if (k >= max_iters) {
      if (dk > dnorms.front())
        throw Divergence("Parareal hit its iteration cap of " + std::to_string(max_iters) +
                         " with growing coupling differences");
      break;
    }
  }
  if (rep) {
    *rep = LinearReport{};
    rep->parareal_iters = iters;
    rep->coupling_deltas = std::move(dnorms);
    rep->max_worker_band_ops = ops;
  }
  return deltas;
}

namespace {

using LinearDispatch = std::function<std::vector<std::vector<double>>(
    const LinearSystem&, const SpaceTimeSolution&, LinearReport&)>;

SolveReport newton_solve(const ProblemSpec& p, const GridSpec& g, const NewtonConfig& cfg,
                         const SpaceTimeSolution& guess, const Topology& topo,
                         const LinearDispatch& linear, bool record_parareal,
                         std::vector<std::string> warnings) {
  const auto t0 = std::chrono::steady_clock::now();
  if (static_cast<int>(guess.levels.size()) != g.nt || guess.initial.size() != g.num_spatial())
    throw InvalidArgument("initial guess shape does not match the grid");
  if (cfg.eps_newton <= 0.0 || cfg.safety_factor <= 0.0 || cfg.safety_factor > 1.0)
    throw InvalidArgument("tolerances must be positive and the safety factor in (0, 1]");
  SolveReport rep;
  rep.mode = topo.mode;
  rep.warnings = std::move(warnings);
  SpaceTimeSolution u = guess;
  for (int it = 1; it <= cfg.max_newton; ++it) {
    const LinearSystem sys = assemble_linear_system(p, g, u);
    LinearReport lr;
    std::vector<std::vector<double>> deltas = linear(sys, u, lr);
    rep.max_worker_band_ops = std::max(rep.max_worker_band_ops, lr.max_worker_band_ops);
    if (record_parareal) rep.parareal_iters_per_newton.push_back(lr.parareal_iters);
    rep.jacobi_iters += lr.jacobi_sweeps;
    for (int l = 0; l < g.nt; ++l) {
      std::vector<double>& ul = u.levels[l].v;
      for (size_t i = 0; i < ul.size(); ++i) ul[i] += deltas[l][i];
    }
    const double nrm = space_time_norm(g, as_fields(deltas), cfg.norm_kind);
    rep.update_norms.push_back(nrm);
    rep.newton_iters = it;
    rep.final_update_norm = nrm;
    if (!std::isfinite(nrm)) throw Divergence("Newton update norm is not finite");
    if (nrm < cfg.eps_newton) {
      rep.solution = std::move(u);
      rep.wall_seconds = elapsed_seconds(t0);
      return rep;
    }
  }
  char msg[96];
  std::snprintf(msg, sizeof msg, "Newton did not reach %.3e within %d iterations",
                cfg.eps_newton, cfg.max_newton);
  throw IterationCap(msg);
}

std::vector<std::string> layout_warnings(const GridSpec& g, const BlockLayout& lay) {
  std::vector<std::string> w;
  const double root = std::sqrt(static_cast<double>(g.num_spatial()));
  if (lay.num_blocks > root)
    w.push_back("block count M=" + std::to_string(lay.num_blocks) +
                " exceeds sqrt(ns); the coarse level dominates the predicted cost");
  if (lay.block_len > root)
    w.push_back("block length J=" + std::to_string(lay.block_len) +
                " exceeds sqrt(ns); within-block chain products become dense");
  return w;
}

}  // namespace

SolveReport sequential_bdf1(const ProblemSpec& p, const GridSpec& g, const NewtonConfig& cfg,
                            const Topology& topo) {
  const auto t0 = std::chrono::steady_clock::now();
  if (cfg.eps_newton <= 0.0) throw InvalidArgument("eps_newton must be positive");
  SolveReport rep;
  rep.mode = topo.mode;
  SpaceTimeSolution u;
  u.initial = initial_field(p, g);
  u.levels.reserve(g.nt);
  Field prev = u.initial;
  for (int n = 1; n <= g.nt; ++n) {
    Field un = prev;
    bool converged = false;
    for (int it = 1; it <= cfg.max_newton && !converged; ++it) {
      const BandedMatrix A = assemble_jacobian(p, g, un, g.t(n), g.tau);
      const Field r = bdf1_residual(p, g, un, prev, g.t(n), g.tau);
      const BandedLU lu = lu_factor(A);
      Field d;
      d.v = lu_solve(lu, r.v);
      for (size_t i = 0; i < un.v.size(); ++i) un.v[i] += d.v[i];
      const double nrm = spatial_norm(g, d, cfg.norm_kind);
      ++rep.newton_iters;
      if (!std::isfinite(nrm))
        throw Divergence("Newton update is not finite at time level " + std::to_string(n));
      if (nrm < cfg.eps_newton) {
        converged = true;
        rep.final_update_norm = nrm;
      }
    }
    if (!converged)
      throw IterationCap("Newton did not converge at time level " + std::to_string(n));
    u.levels.push_back(un);
    prev = std::move(un);
  }
  rep.solution = std::move(u);
  rep.wall_seconds = elapsed_seconds(t0);
  return rep;
}

SpaceTimeSolution build_initial_guess(const ProblemSpec& p, const GridSpec& g, int cf,
                                      const NewtonConfig& cfg) {
  if (cf < 1) throw InvalidArgument("coarsening factor must be >= 1");
  if (cf == 1) return sequential_bdf1(p, g, cfg).solution;
  if (g.nt % cf != 0)
    throw InvalidArgument("coarsening factor " + std::to_string(cf) + " must divide nt=" +
                          std::to_string(g.nt));
  const GridSpec cg = coarsen_grid(g, cf, cf);
  const SolveReport coarse = sequential_bdf1(p, cg, cfg);
  const int ntc = cg.nt;

  // Spatial prolongation of each coarse level, edge knots from the Dirichlet data.
  std::vector<Field> levels_sp(ntc);
  for (int m = 1; m <= ntc; ++m) {
    const double tm = g.t(m * cf);
    const std::function<double(double, double)> bc = [&p, tm](double x, double y) {
      return exact_solution(p, x, y, tm);
    };
    levels_sp[m - 1] = prolong_cubic_spline(coarse.solution.levels[m - 1], cg, g, &bc);
  }

  SpaceTimeSolution out;
  out.initial = initial_field(p, g);
  out.levels.assign(g.nt, Field(g.num_spatial()));
  for (int m = 1; m <= ntc; ++m) out.levels[static_cast<size_t>(m) * cf - 1] = levels_sp[m - 1];

  // Time interpolation per node through (t=0, coarse levels); levels at coarse
  // multiples are copied above, never re-evaluated.
  std::vector<double> ts(ntc + 1);
  for (int m = 0; m <= ntc; ++m) ts[m] = g.t(m * cf);
  std::vector<double> tq;
  std::vector<int> qlevels;
  for (int n = 1; n <= g.nt; ++n) {
    if (n % cf != 0) {
      tq.push_back(g.t(n));
      qlevels.push_back(n);
    }
  }
  std::vector<double> ys(ntc + 1);
  for (int i = 0; i < g.num_spatial(); ++i) {
    ys[0] = out.initial.v[i];
    for (int m = 1; m <= ntc; ++m) ys[m] = levels_sp[m - 1].v[i];
    const std::vector<double> vals = natural_spline_eval(ts, ys, tq);
    for (size_t q = 0; q < qlevels.size(); ++q) out.levels[qlevels[q] - 1].v[i] = vals[q];
  }
  return out;
}

SolveReport paradin_solve(const ProblemSpec& p, const GridSpec& g, const NewtonConfig& cfg,
                          const SpaceTimeSolution& guess, const Topology& topo) {
  std::vector<std::string> warn;
  if (g.nt >= std::sqrt(static_cast<double>(g.num_spatial())))
    warn.push_back("nt=" + std::to_string(g.nt) +
                   " is not small against sqrt(ns); the prefix products densify and the "
                   "near-ideal speedup regime does not apply");
  try {
    return newton_solve(
        p, g, cfg, guess, topo,
        [&](const LinearSystem& sys, const SpaceTimeSolution&, LinearReport& lr) {
          return linear_paradin(sys, topo, &lr);
        },
        false, std::move(warn));
  } catch (const SingularMatrix& e) {
    throw SingularMatrix(std::string(e.what()) +
                             " (ill-conditioned prefix product; the block-Jacobi or "
                             "Parareal variants avoid long products)",
                         e.row());
  }
}

SolveReport block_jacobi_solve(const ProblemSpec& p, const GridSpec& g, const NewtonConfig& cfg,
                               const BlockLayout& layout, const SpaceTimeSolution& guess,
                               const Topology& topo) {
  if (layout.num_blocks * layout.block_len != g.nt)
    throw InvalidArgument("block layout does not tile nt");
  return newton_solve(
      p, g, cfg, guess, topo,
      [&](const LinearSystem& sys, const SpaceTimeSolution&, LinearReport& lr) {
        return linear_block_jacobi(sys, layout, g, cfg.norm_kind, cfg.eps_parareal(),
                                   layout.num_blocks, topo, &lr);
      },
      false, layout_warnings(g, layout));
}

namespace {

SolveReport parareal_driver(bool fused, const ProblemSpec& p, const GridSpec& g,
                            const NewtonConfig& cfg, const BlockLayout& layout,
                            const SpaceTimeSolution& guess, const Topology& topo, int cs) {
  if (layout.num_blocks * layout.block_len != g.nt)
    throw InvalidArgument("block layout does not tile nt");
  if (cs < 1) throw InvalidArgument("spatial coarsening factor must be >= 1");
  if (cs > 1 && !nesting_ok(g, cs))
    throw InvalidArgument("spatial coarsening " + std::to_string(cs) +
                          " violates the nesting rule: nx+1 and ny+1 must be divisible by it");
  const int kmax = cfg.max_parareal > 0 ? cfg.max_parareal : layout.num_blocks;
  return newton_solve(
      p, g, cfg, guess, topo,
      [&, kmax](const LinearSystem& sys, const SpaceTimeSolution& u, LinearReport& lr) {
        const CoarseSystem coarse = assemble_coarse_system(p, g, layout, u, cs);
        return linear_parareal(sys, layout, coarse, g, cfg.norm_kind, cfg.eps_parareal(), kmax,
                               fused, topo, &lr);
      },
      true, layout_warnings(g, layout));
}

}  // namespace

SolveReport parareal_linear_baseline(const ProblemSpec& p, const GridSpec& g,
                                     const NewtonConfig& cfg, const BlockLayout& layout,
                                     const SpaceTimeSolution& guess, const Topology& topo,
                                     int cs) {
  return parareal_driver(false, p, g, cfg, layout, guess, topo, cs);
}

SolveReport paradin_parareal_solve(const ProblemSpec& p, const GridSpec& g,
                                   const NewtonConfig& cfg, const BlockLayout& layout,
                                   const SpaceTimeSolution& guess, const Topology& topo,
                                   int cs) {
  return parareal_driver(true, p, g, cfg, layout, guess, topo, cs);
}

}  // namespace paradin
