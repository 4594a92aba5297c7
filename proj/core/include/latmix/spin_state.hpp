#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace latmix {

/// A point of {-1,+1}^n with a canonical integer encoding:
/// bit k of `code` is 0 for entry -1 and 1 for entry +1 (little-endian),
/// so the k-th neighbor is reached by XOR with 1<<k.
struct SpinState {
    int n = 0;
    std::uint32_t code = 0;

    SpinState() = default;
    SpinState(int n_, std::uint32_t code_) : n(n_), code(code_) {
        if (n_ < 1 || n_ > 30) throw std::invalid_argument("SpinState: n must be in [1, 30]");
        if (code_ >> n_) throw std::invalid_argument("SpinState: code out of range for n");
    }

    static SpinState all_minus_one(int n) { return SpinState(n, 0); }
    static SpinState all_plus_one(int n) {
        return SpinState(n, static_cast<std::uint32_t>((1ULL << n) - 1));
    }

    static SpinState from_vector(const Eigen::VectorXd& x) {
        SpinState s(static_cast<int>(x.size()), 0);
        for (int k = 0; k < s.n; ++k) {
            if (x[k] > 0) s.code |= (1u << k);
        }
        return s;
    }

    int bit(int k) const { return static_cast<int>((code >> k) & 1u); }

    /// Entry k as a spin value, -1 or +1.
    double spin(int k) const { return bit(k) ? 1.0 : -1.0; }

    Eigen::VectorXd to_vector() const {
        Eigen::VectorXd x(n);
        for (int k = 0; k < n; ++k) x[k] = spin(k);
        return x;
    }

    SpinState flipped(int k) const {
        if (k < 0 || k >= n) throw std::invalid_argument("SpinState::flipped: index out of range");
        return SpinState(n, code ^ (1u << k));
    }

    bool operator==(const SpinState& o) const { return n == o.n && code == o.code; }
    bool operator!=(const SpinState& o) const { return !(*this == o); }

    std::string to_string() const {
        std::string s;
        s.reserve(static_cast<std::size_t>(n));
        for (int k = 0; k < n; ++k) s += bit(k) ? '+' : '-';
        return s;
    }
};

}  // namespace latmix
