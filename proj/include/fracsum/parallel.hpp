#pragma once

#include <barrier>
#include <cstddef>
#include <cstdlib>
#include <functional>
#include <string>
#include <thread>
#include <vector>

namespace fracsum {

/// Fixed team of threads that splits [0, n) into contiguous chunks, one per
/// thread, and runs them in lock-step with the calling thread. Lives for the
/// duration of one solve so that per-step dispatch costs two barrier waits
/// rather than thread creation.
class ChunkedTeam {
public:
    /// `threads` counts the calling thread; 0 and 1 both mean sequential.
    explicit ChunkedTeam(unsigned threads)
        : size_(threads > 1 ? threads : 1), start_(size_), done_(size_) {
        for (unsigned id = 1; id < size_; ++id)
            workers_.emplace_back([this, id] { worker_loop(id); });
    }

    ChunkedTeam(const ChunkedTeam&) = delete;
    ChunkedTeam& operator=(const ChunkedTeam&) = delete;

    ~ChunkedTeam() {
        if (size_ > 1) {
            stop_ = true;
            start_.arrive_and_wait();
        }
        for (auto& w : workers_) w.join();
    }

    [[nodiscard]] unsigned size() const noexcept { return size_; }

    /// Calls body(begin, end) on disjoint chunks covering [0, n).
    void run(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body) {
        if (size_ == 1) {
            body(0, n);
            return;
        }
        body_ = &body;
        n_ = n;
        start_.arrive_and_wait();
        run_chunk(0);
        done_.arrive_and_wait();
        body_ = nullptr;
    }

private:
    void run_chunk(unsigned id) {
        const std::size_t begin = n_ * id / size_;
        const std::size_t end = n_ * (id + 1) / size_;
        if (begin < end) (*body_)(begin, end);
    }

    void worker_loop(unsigned id) {
        for (;;) {
            start_.arrive_and_wait();
            if (stop_) return;
            run_chunk(id);
            done_.arrive_and_wait();
        }
    }

    unsigned size_;
    std::barrier<> start_;
    std::barrier<> done_;
    std::vector<std::thread> workers_;
    const std::function<void(std::size_t, std::size_t)>* body_ = nullptr;
    std::size_t n_ = 0;
    bool stop_ = false;
};

/// Thread cap from FRACSUM_THREADS; unset, empty or unparsable means 0 (sequential).
inline unsigned threads_from_env() {
    const char* v = std::getenv("FRACSUM_THREADS");
    if (v == nullptr || *v == '\0') return 0;
    try {
        const long n = std::stol(std::string(v));
        return n > 0 ? static_cast<unsigned>(n) : 0u;
    } catch (...) {
        return 0;
    }
}

}  // namespace fracsum
