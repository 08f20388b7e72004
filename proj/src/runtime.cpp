#include "runtime.hpp"

#include <condition_variable>
#include <deque>
#include <exception>
#include <mutex>
#include <string>
#include <thread>

#include "errors.hpp"

namespace paradin {
namespace {

// Thrown inside a worker to unwind it after the stage has failed elsewhere.
struct StageAborted {};

enum class WorkerStatus { Ready, Blocked, Finished };

struct WorkerState {
  WorkerStatus status = WorkerStatus::Ready;
  int blocked_on = -1;   // source the worker waits for while Blocked
  bool granted = false;  // emulated mode: permission to run
};

struct Channel {
  std::deque<Message> queue;
  std::uint64_t next_send_seq = 0;
  std::uint64_t next_recv_seq = 0;
};

}  // namespace

class StageRunnerImpl {
public:
  StageRunnerImpl(const Topology& topo, int num_workers)
      : mode_(topo.mode),
        n_(num_workers),
        slots_(topo.physical_workers < 1 ? 1 : topo.physical_workers),
        workers_(num_workers),
        channels_(static_cast<std::size_t>(num_workers) * num_workers) {}

  void run(const std::function<void(StageContext&)>& body) {
    if (n_ <= 0) throw InvalidArgument("stage needs at least one worker");
    std::vector<std::thread> threads;
    threads.reserve(n_);
    for (int id = 0; id < n_; ++id) {
      threads.emplace_back([this, id, &body] { worker_main(id, body); });
    }
    if (mode_ == ExecMode::Emulated) {
      std::unique_lock<std::mutex> lk(mu_);
      schedule_locked();
    }
    for (auto& t : threads) t.join();
    if (error_) std::rethrow_exception(error_);
  }

  void send(int src, int dst, MessageKind kind, std::vector<double> data,
            std::vector<std::int64_t> meta) {
    if (dst < 0 || dst >= n_)
      throw InvalidArgument("send to worker " + std::to_string(dst) +
                            " outside stage of " + std::to_string(n_));
    std::unique_lock<std::mutex> lk(mu_);
    check_abort_locked();
    Channel& ch = channel(src, dst);
    Message m;
    m.kind = kind;
    m.source = src;
    m.dest = dst;
    m.seq = ch.next_send_seq++;
    m.data = std::move(data);
    m.meta = std::move(meta);
    ch.queue.push_back(std::move(m));
    // A worker blocked on this channel becomes runnable again.
    WorkerState& w = workers_[dst];
    if (w.status == WorkerStatus::Blocked && w.blocked_on == src) {
      w.status = WorkerStatus::Ready;
      w.blocked_on = -1;
    }
    cv_.notify_all();
  }

  Message recv(int dst, int src) {
    if (src < 0 || src >= n_)
      throw InvalidArgument("receive from worker " + std::to_string(src) +
                            " outside stage of " + std::to_string(n_));
    std::unique_lock<std::mutex> lk(mu_);
    check_abort_locked();
    Channel& ch = channel(src, dst);
    if (ch.queue.empty()) {
      WorkerState& w = workers_[dst];
      w.status = WorkerStatus::Blocked;
      w.blocked_on = src;
      if (mode_ == ExecMode::Emulated) {
        w.granted = false;
        schedule_locked();
        cv_.wait(lk, [&] { return w.granted || aborting_; });
      } else {
        ++slots_;  // release the execution slot while blocked
        cv_.notify_all();
        cv_.wait(lk, [&] { return !ch.queue.empty() || aborting_; });
        check_abort_locked();
        cv_.wait(lk, [&] { return slots_ > 0 || aborting_; });
        check_abort_locked();
        --slots_;
        w.status = WorkerStatus::Ready;
        w.blocked_on = -1;
      }
      check_abort_locked();
    }
    Message m = std::move(ch.queue.front());
    ch.queue.pop_front();
    if (m.seq != ch.next_recv_seq)
      throw Error("channel " + std::to_string(src) + "->" +
                  std::to_string(dst) + " delivered out of order");
    ++ch.next_recv_seq;
    return m;
  }

private:
  Channel& channel(int src, int dst) {
    return channels_[static_cast<std::size_t>(src) * n_ + dst];
  }

  void check_abort_locked() {
    if (aborting_) throw StageAborted{};
  }

  // Emulated mode: grant the lowest-id runnable worker.  Called with mu_ held
  // whenever the running worker blocks or finishes (and once at startup).
  void schedule_locked() {
    if (aborting_) {
      cv_.notify_all();
      return;
    }
    int blocked = -1;
    for (int i = 0; i < n_; ++i) {
      if (workers_[i].status == WorkerStatus::Ready) {
        workers_[i].granted = true;
        cv_.notify_all();
        return;
      }
      if (blocked < 0 && workers_[i].status == WorkerStatus::Blocked)
        blocked = i;
    }
    if (blocked >= 0) {
      // Nobody can run and somebody still waits: the stage is stuck.
      fail_locked(std::make_exception_ptr(Deadlock(
          "worker " + std::to_string(blocked) + " waits for a message from " +
          std::to_string(workers_[blocked].blocked_on) +
          " that no runnable worker can send")));
    }
    // else: every worker finished, nothing to do.
  }

  void fail_locked(std::exception_ptr e) {
    if (!error_) error_ = std::move(e);
    aborting_ = true;
    cv_.notify_all();
  }

  void worker_main(int id, const std::function<void(StageContext&)>& body) {
    {
      std::unique_lock<std::mutex> lk(mu_);
      if (mode_ == ExecMode::Emulated) {
        cv_.wait(lk, [&] { return workers_[id].granted || aborting_; });
      } else {
        cv_.wait(lk, [&] { return slots_ > 0 || aborting_; });
        if (!aborting_) --slots_;
      }
      if (aborting_) {
        finish_locked(id, /*held_slot=*/false);
        return;
      }
      workers_[id].status = WorkerStatus::Ready;
    }
    StageContext cx(this, id, n_);
    try {
      body(cx);
      std::unique_lock<std::mutex> lk(mu_);
      finish_locked(id, /*held_slot=*/true);
    } catch (const StageAborted&) {
      std::unique_lock<std::mutex> lk(mu_);
      finish_locked(id, /*held_slot=*/true);
    } catch (...) {
      std::unique_lock<std::mutex> lk(mu_);
      fail_locked(std::current_exception());
      finish_locked(id, /*held_slot=*/true);
    }
  }

  void finish_locked(int id, bool held_slot) {
    workers_[id].status = WorkerStatus::Finished;
    workers_[id].granted = false;
    if (mode_ == ExecMode::Parallel) {
      if (held_slot) ++slots_;
      cv_.notify_all();
    } else {
      schedule_locked();
    }
  }

  const ExecMode mode_;
  const int n_;
  int slots_;
  std::mutex mu_;
  std::condition_variable cv_;
  std::vector<WorkerState> workers_;
  std::vector<Channel> channels_;
  std::exception_ptr error_;
  bool aborting_ = false;
};

void StageContext::send(int dest, MessageKind kind, std::vector<double> data,
                        std::vector<std::int64_t> meta) {
  impl_->send(id_, dest, kind, std::move(data), std::move(meta));
}

Message StageContext::recv(int source) { return impl_->recv(id_, source); }

void run_stage(const Topology& topo, int num_workers,
               const std::function<void(StageContext&)>& body) {
  StageRunnerImpl impl(topo, num_workers);
  impl.run(body);
}

double reduce_sum(const std::vector<double>& contributions) {
  double s = 0.0;
  for (double c : contributions) s += c;
  return s;
}

}  // namespace paradin
