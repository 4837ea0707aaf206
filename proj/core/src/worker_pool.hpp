#ifndef PROPGATE_SRC_WORKER_POOL_HPP
#define PROPGATE_SRC_WORKER_POOL_HPP

#include <condition_variable>
#include <cstdint>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace propgate::detail {

// Fixed-size pool dispatching the same callable to every worker. run()
// returns once all workers finished the current task, which gives the
// between-rounds barrier the engines rely on.
class WorkerPool {
 public:
  explicit WorkerPool(int workers) : workers_(workers) {
    threads_.reserve(static_cast<size_t>(workers_));
    for (int i = 0; i < workers_; ++i)
      threads_.emplace_back([this, i] { worker_main(i); });
  }

  WorkerPool(const WorkerPool&) = delete;
  WorkerPool& operator=(const WorkerPool&) = delete;

  ~WorkerPool() {
    {
      std::lock_guard<std::mutex> lock(mu_);
      stop_ = true;
    }
    cv_start_.notify_all();
    for (auto& t : threads_) t.join();
  }

  int size() const { return workers_; }

  void run(const std::function<void(int)>& task) {
    std::unique_lock<std::mutex> lock(mu_);
    task_ = &task;
    pending_ = workers_;
    ++generation_;
    cv_start_.notify_all();
    cv_done_.wait(lock, [this] { return pending_ == 0; });
    task_ = nullptr;
  }

 private:
  void worker_main(int id) {
    std::uint64_t seen = 0;
    for (;;) {
      const std::function<void(int)>* task = nullptr;
      {
        std::unique_lock<std::mutex> lock(mu_);
        cv_start_.wait(lock, [&] { return stop_ || generation_ != seen; });
        if (stop_) return;
        seen = generation_;
        task = task_;
      }
      (*task)(id);
      {
        std::lock_guard<std::mutex> lock(mu_);
        if (--pending_ == 0) cv_done_.notify_all();
      }
    }
  }

  const int workers_;
  std::vector<std::thread> threads_;
  std::mutex mu_;
  std::condition_variable cv_start_;
  std::condition_variable cv_done_;
  const std::function<void(int)>* task_ = nullptr;
  std::uint64_t generation_ = 0;
  int pending_ = 0;
  bool stop_ = false;
};

inline int resolve_worker_count(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace propgate::detail

#endif  // PROPGATE_SRC_WORKER_POOL_HPP
