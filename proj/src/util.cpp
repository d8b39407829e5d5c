#include "hpe/util.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <condition_variable>
#include <cstdlib>
#include <mutex>
#include <thread>
#include <vector>

namespace hpe {

namespace {

int resolve_worker_count() {
    const char* env = std::getenv("HPE_THREADS");
    long v = 0;
    if (env && *env) {
        char* end = nullptr;
        v = std::strtol(env, &end, 10);
        if (end == env || v < 0) v = 0;
    }
    if (v == 0) {
        unsigned hw = std::thread::hardware_concurrency();
        v = hw ? static_cast<long>(std::min(hw, 16u)) : 1;
    }
    return static_cast<int>(std::min<long>(v, 256));
}

// Static-partition pool: worker i always gets chunk i of the current loop.
class Pool {
  public:
    explicit Pool(int workers) : nw_(workers) {
        for (int i = 1; i < nw_; ++i)
            threads_.emplace_back([this, i] { worker(i); });
    }

    ~Pool() {
        {
            std::lock_guard lk(mu_);
            stop_ = true;
        }
        cv_.notify_all();
        for (auto& t : threads_) t.join();
    }

    void run(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body) {
        if (n == 0) return;
        {
            std::lock_guard lk(mu_);
            total_ = n;
            body_ = &body;
            pending_ = nw_ - 1;
            ++gen_;
        }
        cv_.notify_all();
        exec_chunk(0, n, body);
        std::unique_lock lk(mu_);
        cv_done_.wait(lk, [this] { return pending_ == 0; });
        body_ = nullptr;
    }

    int width() const { return nw_; }

  private:
    void exec_chunk(int i, std::size_t n, const std::function<void(std::size_t, std::size_t)>& body) {
        const std::size_t chunk = (n + nw_ - 1) / nw_;
        const std::size_t b = std::min(n, chunk * static_cast<std::size_t>(i));
        const std::size_t e = std::min(n, b + chunk);
        if (b < e) body(b, e);
    }

    void worker(int i) {
        std::uint64_t seen = 0;
        for (;;) {
            const std::function<void(std::size_t, std::size_t)>* body;
            std::size_t n;
            {
                std::unique_lock lk(mu_);
                cv_.wait(lk, [&] { return stop_ || gen_ != seen; });
                if (stop_) return;
                seen = gen_;
                body = body_;
                n = total_;
            }
            exec_chunk(i, n, *body);
            {
                std::lock_guard lk(mu_);
                if (--pending_ == 0) cv_done_.notify_one();
            }
        }
    }

    int nw_;
    std::vector<std::thread> threads_;
    std::mutex mu_;
    std::condition_variable cv_, cv_done_;
    std::uint64_t gen_ = 0;
    int pending_ = 0;
    std::size_t total_ = 0;
    const std::function<void(std::size_t, std::size_t)>* body_ = nullptr;
    bool stop_ = false;
};

Pool& pool() {
    static Pool p(resolve_worker_count());
    return p;
}

}  // namespace

int worker_count() {
    static int n = resolve_worker_count();
    return n;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body) {
    if (n == 0) return;
    if (worker_count() <= 1 || n == 1) {
        body(0, n);
        return;
    }
    pool().run(n, body);
}

std::string format_g17(double x) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

bool parse_double(std::string_view s, double& out) {
    auto res = std::from_chars(s.data(), s.data() + s.size(), out);
    return res.ec == std::errc() && res.ptr == s.data() + s.size();
}

}  // namespace hpe
