#pragma once

#include <cstdint>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/Dense>

namespace rumdp {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// Error kinds surfaced by the library. Every failure path throws RumdpError;
// callers can branch on kind() without parsing messages.
enum class ErrorKind {
    invalid_discount,
    linear_solve_failure,
    infeasible_polytope,
    degenerate_polytope,
    unbounded_polytope,
    precondition_violated,
    shape_mismatch,
    numerical_failure,
    instance_too_large,
    malformed_file,
    version_mismatch,
    budget_exceeded,
    usage_error,
};

class RumdpError : public std::runtime_error {
  public:
    RumdpError(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

  private:
    ErrorKind kind_;
};

inline const char* error_kind_name(ErrorKind k) {
    switch (k) {
    case ErrorKind::invalid_discount: return "invalid-discount";
    case ErrorKind::linear_solve_failure: return "linear-solve-failure";
    case ErrorKind::infeasible_polytope: return "infeasible-polytope";
    case ErrorKind::degenerate_polytope: return "degenerate-polytope";
    case ErrorKind::unbounded_polytope: return "unbounded-polytope";
    case ErrorKind::precondition_violated: return "precondition-violated";
    case ErrorKind::shape_mismatch: return "shape-mismatch";
    case ErrorKind::numerical_failure: return "numerical-failure";
    case ErrorKind::instance_too_large: return "instance-too-large";
    case ErrorKind::malformed_file: return "malformed-file";
    case ErrorKind::version_mismatch: return "version-mismatch";
    case ErrorKind::budget_exceeded: return "budget-exceeded";
    case ErrorKind::usage_error: return "usage-error";
    }
    return "unknown";
}

// Portable 64-bit PRNG (SplitMix64, Steele et al. 2014). Chosen over
// std::mt19937 + std::*_distribution because the distributions are
// implementation-defined; this generator produces identical streams on
// every platform, which keeps seeded instance files byte-identical.
class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1), 53-bit resolution.
    double uniform01() { return double(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // Uniform integer in [0, n). Modulo bias is < 2^-40 for n <= 2^24,
    // irrelevant for the instance sizes in scope.
    std::uint64_t uniform_int(std::uint64_t n) { return next_u64() % n; }

    // Standard normal via Box-Muller; draws two uniforms per call.
    double gaussian() {
        double u1 = uniform01(), u2 = uniform01();
        if (u1 < 1e-300) u1 = 1e-300;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
    }

    // Uniformly random direction on the unit sphere in R^d.
    VectorXd unit_vector(int d) {
        VectorXd v(d);
        double n2 = 0.0;
        do {
            for (int i = 0; i < d; ++i) v(i) = gaussian();
            n2 = v.norm();
        } while (n2 < 1e-12);
        return v / n2;
    }

    // Symmetric unit Dirichlet over k categories (normalized exponentials).
    VectorXd dirichlet(int k) {
        VectorXd w(k);
        double total = 0.0;
        for (int i = 0; i < k; ++i) {
            w(i) = -std::log1p(-uniform01());
            total += w(i);
        }
        if (total < 1e-300) {
            w.setZero();
            w(0) = 1.0;
            return w;
        }
        return w / total;
    }

  private:
    std::uint64_t state_;
};

// Runs fn(i) for i in [0, n) on up to `threads` workers. threads <= 1 runs
// inline. fn must not throw across threads without handling; exceptions are
// rethrown on the calling thread (first one wins).
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn);

} // namespace rumdp
