// Bulk-synchronous execution of solver stages over logical workers.
//
// A stage is a closure run once per logical worker.  Workers exchange typed
// messages over ordered, lossless, in-memory point-to-point channels; a
// receive names its source explicitly.  Because every channel is FIFO and all
// arithmetic happens inside the workers in a fixed order, the results are
// bitwise identical whether the stage runs emulated (one worker at a time,
// ascending id, a worker yielding only when it blocks) or parallel (every
// worker an OS thread, at most `physical_workers` executing concurrently; a
// worker gives up its execution slot while blocked on an empty channel).
//
// Emulated mode detects deadlock: if no worker can run and some have not
// finished, the stage aborts naming the lowest blocked worker.
#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace paradin {

enum class ExecMode { Emulated, Parallel };

struct Topology {
  ExecMode mode = ExecMode::Emulated;
  int physical_workers = 1;  // parallel mode: concurrent execution slots
};

enum class MessageKind { RowBlock, CouplingVector, NormContribution, Control };

struct Message {
  MessageKind kind = MessageKind::Control;
  int source = -1;
  int dest = -1;
  std::uint64_t seq = 0;  // assigned per channel on send, checked on receive
  std::vector<double> data;
  std::vector<std::int64_t> meta;
};

class StageRunnerImpl;

// Handed to the stage closure; valid only during the stage.
class StageContext {
public:
  StageContext(StageRunnerImpl* impl, int id, int num_workers)
      : impl_(impl), id_(id), num_workers_(num_workers) {}
  int id() const { return id_; }
  int num_workers() const { return num_workers_; }
  void send(int dest, MessageKind kind, std::vector<double> data,
            std::vector<std::int64_t> meta = {});
  // Blocks until the next message from `source` arrives.
  Message recv(int source);

private:
  StageRunnerImpl* impl_;
  int id_;
  int num_workers_;
};

// Runs `body` once per worker and propagates the first worker exception.
void run_stage(const Topology& topo, int num_workers,
               const std::function<void(StageContext&)>& body);

// Typed convenience wrapper collecting one output per worker.
template <typename T>
std::vector<T> run_stage_collect(const Topology& topo, int num_workers,
                                 const std::function<T(StageContext&)>& fn) {
  std::vector<T> out(num_workers);
  run_stage(topo, num_workers, [&](StageContext& cx) { out[cx.id()] = fn(cx); });
  return out;
}

// Left-to-right summation of per-worker contributions; the single reduction
// order used everywhere so both execution modes agree bitwise.
double reduce_sum(const std::vector<double>& contributions);

}  // namespace paradin
