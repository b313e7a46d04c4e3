#pragma once

// Shared scalar/vector aliases, error taxonomy, deterministic sampling and
// the thread helper used by grid sweeps.

#include <Eigen/Dense>

#include <cstdint>
#include <cstdlib>
#include <functional>
#include <mutex>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace contactflow {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DegenerateContactForm : Error { using Error::Error; };
struct WindowEscape : Error { using Error::Error; };
struct DomainEscape : Error { using Error::Error; };
struct SupportOverflow : Error { using Error::Error; };
struct SingularMetric : Error { using Error::Error; };
struct ThetaCapExceeded : Error { using Error::Error; };
struct StepResolution : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };

// Seeded generator with a platform-stable uniform mapping (the distribution
// adapters in <random> are implementation-defined, which would break the
// byte-identical-output contract of the experiment runner).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    double uniform() {
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) {
        return lo + (hi - lo) * uniform();
    }

    Vec uniform_vec(int dim, double lo, double hi) {
        Vec v(dim);
        for (int i = 0; i < dim; ++i) v[i] = uniform(lo, hi);
        return v;
    }

    std::uint64_t raw() { return gen_(); }

private:
    std::mt19937_64 gen_;
};

// CONTACTFLOW_THREADS caps worker threads; 0 means serial. Unset falls back
// to the hardware count.
inline int thread_cap() {
    if (const char* env = std::getenv("CONTACTFLOW_THREADS")) {
        int v = std::atoi(env);
        if (v <= 0) return 1;
        return v;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

// Index-parallel loop. Each index writes only its own output slot, so results
// do not depend on the thread count.
inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
    int workers = thread_cap();
    if (workers <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    workers = static_cast<int>(std::min<std::size_t>(workers, n));
    std::vector<std::thread> pool;
    pool.reserve(workers);
    std::exception_ptr first_error;
    std::mutex error_mutex;
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w]() {
            try {
                for (std::size_t i = w; i < n; i += workers) body(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

constexpr double kDefaultFdStep = 1e-5;

// Central difference of a scalar function of one coordinate.
template <typename F>
double central_diff(F&& f, double x, double h) {
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

// Central-difference gradient of f : R^d -> R.
template <typename F>
Vec fd_gradient(F&& f, const Vec& x, double h) {
    Vec g(x.size());
    Vec p = x;
    for (int i = 0; i < x.size(); ++i) {
        const double xi = x[i];
        p[i] = xi + h;
        const double fp = f(p);
        p[i] = xi - h;
        const double fm = f(p);
        p[i] = xi;
        g[i] = (fp - fm) / (2.0 * h);
    }
    return g;
}

}  // namespace contactflow
