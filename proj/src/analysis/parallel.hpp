#pragma once

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace tiltobs
{

template<typename Body>
void parallelFor(std::size_t count, unsigned threads, Body && body)
{
  if(threads == 0)
  {
    threads = std::max(1u, std::thread::hardware_concurrency());
  }
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(count, 1)));
  if(threads <= 1)
  {
    for(std::size_t i = 0; i < count; ++i)
    {
      body(i);
    }
    return;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failureMutex;
  {
    std::vector<std::jthread> workers;
    workers.reserve(threads);
    for(unsigned w = 0; w < threads; ++w)
    {
      workers.emplace_back([&] {
        for(std::size_t i = next++; i < count; i = next++)
        {
          try
          {
            body(i);
          }
          catch(...)
          {
            std::lock_guard lock(failureMutex);
            if(!failure)
            {
              failure = std::current_exception();
            }
          }
        }
      });
    }
  }
  if(failure)
  {
    std::rethrow_exception(failure);
  }
}

} // namespace tiltobs
