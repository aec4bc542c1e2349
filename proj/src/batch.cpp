#include "rodsim/batch.hpp"

#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

#include "rodsim/error.hpp"

namespace rodsim {

std::vector<RunSummary> run_batch(const Scenario& scenario, int replicates, int workers,
                                  const std::function<RunSinks(int)>& make_sinks) {
    if (replicates < 1) throw SimError::config("replicates must be >= 1");
    if (workers < 1) throw SimError::config("workers must be >= 1");

    std::vector<RunSummary> results(static_cast<std::size_t>(replicates));
    std::atomic<int> next{0};
    std::mutex error_mutex;
    std::exception_ptr first_error;

    auto work = [&]() {
        for (;;) {
            int rep = next.fetch_add(1);
            if (rep >= replicates) return;
            try {
                RunSinks sinks = make_sinks ? make_sinks(rep) : RunSinks{};
                World world(scenario, replicate_seed(scenario.rng_seed,
                                                     static_cast<std::uint64_t>(rep)));
                results[static_cast<std::size_t>(rep)] = world.run(sinks);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };

    int n_threads = std::min(workers, replicates);
    if (n_threads == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(n_threads));
        for (int i = 0; i < n_threads; ++i) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    if (first_error) std::rethrow_exception(first_error);
    return results;
}

} // namespace rodsim
