#ifndef CIREST_PARALLEL_HPP
#define CIREST_PARALLEL_HPP

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <mutex>
#include <random>
#include <thread>
#include <vector>

namespace cirest {

constexpr std::uint64_t kDefaultSeed = 0xC12C;

/// One step of the splitmix64 sequence.
std::uint64_t splitmix64(std::uint64_t& state);

/// Independent per-trial seed derived from a master seed.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform double in [0, 1) from the top 53 bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    std::uint64_t next() { return engine_(); }

private:
    std::mt19937_64 engine_;
};

/// Worker count from CIREST_THREADS, else the hardware concurrency (at least 1).
unsigned thread_count();

/// Calls f(i) for i in [0, n) on up to thread_count() threads.
/// Each index runs exactly once; the first exception is rethrown after all workers join.
template <class F>
void parallel_for(std::size_t n, F&& f) {
    const std::size_t workers = std::min<std::size_t>(thread_count(), n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) {
            f(i);
        }
        return;
    }
    std::exception_ptr error;
    std::mutex mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = w; i < n; i += workers) {
                    f(i);
                }
            } catch (...) {
                std::lock_guard<std::mutex> lock(mutex);
                if (!error) {
                    error = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) {
        t.join();
    }
    if (error) {
        std::rethrow_exception(error);
    }
}

} // namespace cirest

#endif // CIREST_PARALLEL_HPP
