#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "distvrft/rational_tf.hpp"
#include "distvrft/state_space.hpp"

namespace distvrft {

inline constexpr double kDefaultWellPosednessCond = 1e12;

// Either an external input or an internal signal of an Interconnection.
struct SignalRef {
    enum class Kind { input, signal };
    Kind kind;
    std::size_t index;

    static SignalRef input(std::size_t i) { return {Kind::input, i}; }
    static SignalRef signal(std::size_t i) { return {Kind::signal, i}; }
};

struct InterconnectionRealization {
    // Inputs are the external inputs, outputs are all internal signals, both in creation order.
    StateSpace system;
    // Condition number of (I - D_loop), the static feedthrough coupling.
    double loop_condition = 1.0;
};

// Network of scalar transfer functions: every internal signal is the sum of
// transfer functions applied to other signals or to external inputs.
class Interconnection {
public:
    std::size_t add_input(std::string name);
    std::size_t add_signal(std::string name);

    // target += gain(q) * source. Zero gains are dropped.
    void connect(SignalRef source, std::size_t target, const RationalTF& gain);

    std::size_t input_count() const { return input_names_.size(); }
    std::size_t signal_count() const { return signal_names_.size(); }
    const std::string& input_name(std::size_t i) const { return input_names_.at(i); }
    const std::string& signal_name(std::size_t i) const { return signal_names_.at(i); }

    // One state-space realization per connection, stacked, with the algebraic loop
    // eliminated. Throws IllPosedLoopError if cond(I - D_loop) exceeds max_condition.
    InterconnectionRealization realize(double max_condition = kDefaultWellPosednessCond) const;

    // Transfer from inputs to signals at e^{jω}, by a dense solve with the transfer
    // functions evaluated directly (independent of realize()).
    Eigen::MatrixXcd transfer(double omega) const;

private:
    struct Connection {
        SignalRef source;
        std::size_t target;
        RationalTF gain;
    };

    std::vector<std::string> input_names_;
    std::vector<std::string> signal_names_;
    std::vector<Connection> connections_;
};

}  // namespace distvrft
