// Runs a callable on a thread with a large stack. All algorithms here are
// recursive over the syntax tree, and benchmark inputs nest tens of
// thousands of levels deep.
#pragma once

#include <pthread.h>

#include <cstddef>
#include <exception>
#include <optional>
#include <stdexcept>
#include <type_traits>
#include <utility>

namespace dgl {

inline constexpr std::size_t kDeepStackBytes = std::size_t{1} << 30;

template <class F>
auto with_deep_stack(F&& f, std::size_t stack_bytes = kDeepStackBytes) -> std::invoke_result_t<F&> {
  using R = std::invoke_result_t<F&>;
  struct Job {
    F* fn;
    std::conditional_t<std::is_void_v<R>, bool, std::optional<R>> result{};
    std::exception_ptr error;
    static void* run(void* p) {
      auto* job = static_cast<Job*>(p);
      try {
        if constexpr (std::is_void_v<R>) {
          (*job->fn)();
          job->result = true;
        } else {
          job->result.emplace((*job->fn)());
        }
      } catch (...) {
        job->error = std::current_exception();
      }
      return nullptr;
    }
  };
  Job job{&f, {}, nullptr};
  pthread_attr_t attr;
  pthread_attr_init(&attr);
  pthread_attr_setstacksize(&attr, stack_bytes);
  pthread_t tid;
  int rc = pthread_create(&tid, &attr, &Job::run, &job);
  pthread_attr_destroy(&attr);
  if (rc != 0) throw std::runtime_error("cannot start worker thread with a large stack");
  pthread_join(tid, nullptr);
  if (job.error) std::rethrow_exception(job.error);
  if constexpr (!std::is_void_v<R>) return std::move(*job.result);
}

}  // namespace dgl
