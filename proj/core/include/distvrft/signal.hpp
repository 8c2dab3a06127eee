#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <span>
#include <vector>

#include "distvrft/rational_tf.hpp"

namespace distvrft {

// Finite-horizon real time series; sample k corresponds to time start_index + k.
class Signal {
public:
    Signal() = default;
    explicit Signal(std::vector<double> samples, std::ptrdiff_t start_index = 0)
        : samples_(std::move(samples)), start_index_(start_index) {}

    static Signal zeros(std::size_t n) { return Signal(std::vector<double>(n, 0.0)); }
    static Signal constant(std::size_t n, double value) { return Signal(std::vector<double>(n, value)); }

    std::size_t size() const { return samples_.size(); }
    bool empty() const { return samples_.empty(); }
    std::ptrdiff_t start_index() const { return start_index_; }
    std::span<const double> samples() const { return samples_; }
    std::vector<double>& data() { return samples_; }
    const std::vector<double>& data() const { return samples_; }

    double operator[](std::size_t k) const { return samples_[k]; }
    double& operator[](std::size_t k) { return samples_[k]; }

    // First n samples.
    Signal head(std::size_t n) const;

    Signal& operator+=(const Signal& rhs);
    Signal& operator-=(const Signal& rhs);
    Signal& operator*=(double s);
    friend Signal operator+(Signal a, const Signal& b) { return a += b; }
    friend Signal operator-(Signal a, const Signal& b) { return a -= b; }
    friend Signal operator*(Signal a, double s) { return a *= s; }

    double max_abs() const;

private:
    std::vector<double> samples_;
    std::ptrdiff_t start_index_ = 0;
};

// Per-node signals sharing one horizon.
using MultiSignal = std::vector<Signal>;

// Throws DimensionError if the constituent signals disagree in length or start index.
std::size_t common_horizon(const MultiSignal& signals);
MultiSignal truncate(const MultiSignal& signals, std::size_t n);
double max_abs_difference(const MultiSignal& a, const MultiSignal& b);

// Ordered node pair; signals keyed by (producer, consumer).
struct DirectedEdge {
    std::size_t from = 0;
    std::size_t to = 0;
    auto operator<=>(const DirectedEdge&) const = default;
};

using EdgeSignals = std::map<DirectedEdge, Signal>;

// Causal difference-equation response of `a` to x with zero initial conditions.
// Throws ImproperTransferError for negative relative degree.
Signal filter(const RationalTF& a, const Signal& x);

// Solves a * r = x for r using relative-degree samples of look-ahead. The result is
// shorter than x by the relative degree of a; equations at t < relative degree are
// not imposed.
Signal inverse_filter(const RationalTF& a, const Signal& x);

// True when a numerator root has magnitude >= 1 (inverse_filter still solves exactly).
bool has_unstable_inverse(const RationalTF& a);

}  // namespace distvrft
