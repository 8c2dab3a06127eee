#include "distvrft/signal.hpp"

#include <algorithm>
#include <cmath>

#include "distvrft/errors.hpp"

namespace distvrft {

namespace {

void require_same_size(const Signal& a, const Signal& b) {
    if (a.size() != b.size()) throw DimensionError("signal length mismatch");
}

// Numerator padded with leading zeros to the denominator length.
std::vector<double> padded_numerator(const RationalTF& a) {
    const auto n = static_cast<std::size_t>(a.den().degree());
    std::vector<double> b(n + 1, 0.0);
    const auto& num = a.num().coeffs();
    std::copy(num.begin(), num.end(), b.begin() + static_cast<std::ptrdiff_t>(n + 1 - num.size()));
    return b;
}

}  // namespace

Signal Signal::head(std::size_t n) const {
    if (n > samples_.size()) throw DimensionError("head longer than signal");
    return Signal(std::vector<double>(samples_.begin(), samples_.begin() + static_cast<std::ptrdiff_t>(n)),
                  start_index_);
}

Signal& Signal::operator+=(const Signal& rhs) {
    require_same_size(*this, rhs);
    for (std::size_t k = 0; k < samples_.size(); ++k) samples_[k] += rhs.samples_[k];
    return *this;
}

Signal& Signal::operator-=(const Signal& rhs) {
    require_same_size(*this, rhs);
    for (std::size_t k = 0; k < samples_.size(); ++k) samples_[k] -= rhs.samples_[k];
    return *this;
}

Signal& Signal::operator*=(double s) {
    for (double& v : samples_) v *= s;
    return *this;
}

double Signal::max_abs() const {
    double m = 0.0;
    for (double v : samples_) m = std::max(m, std::abs(v));
    return m;
}

std::size_t common_horizon(const MultiSignal& signals) {
    if (signals.empty()) return 0;
    const auto n = signals.front().size();
    const auto start = signals.front().start_index();
    for (const auto& s : signals) {
        if (s.size() != n || s.start_index() != start) throw DimensionError("signals do not share a common horizon");
    }
    return n;
}

MultiSignal truncate(const MultiSignal& signals, std::size_t n) {
    MultiSignal out;
    out.reserve(signals.size());
    for (const auto& s : signals) out.push_back(s.head(n));
    return out;
}

double max_abs_difference(const MultiSignal& a, const MultiSignal& b) {
    if (a.size() != b.size()) throw DimensionError("channel count mismatch");
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, (a[i] - b[i]).max_abs());
    return m;
}

Signal filter(const RationalTF& a, const Signal& x) {
    if (!a.is_proper()) throw ImproperTransferError("cannot filter with an improper transfer function");
    const std::size_t len = x.size();
    std::vector<double> y(len, 0.0);
    if (a.is_zero()) return Signal(std::move(y), x.start_index());

    const auto b = padded_numerator(a);
    const auto& den = a.den().coeffs();
    const std::size_t n = den.size() - 1;
    for (std::size_t t = 0; t < len; ++t) {
        double acc = 0.0;
        for (std::size_t k = 0; k <= n && k <= t; ++k) acc += b[k] * x[t - k];
        for (std::size_t k = 1; k <= n && k <= t; ++k) acc -= den[k] * y[t - k];
        y[t] = acc;
    }
    return Signal(std::move(y), x.start_index());
}

Signal inverse_filter(const RationalTF& a, const Signal& x) {
    if (a.is_zero()) throw DivisionByZeroError("cannot invert the zero transfer function");
    const int rd = a.relative_degree();
    if (rd < 0) throw ImproperTransferError("inverse_filter requires a proper transfer function");
    const auto d = static_cast<std::size_t>(rd);
    if (x.size() <= d) throw DimensionError("horizon too short for inversion");

    const auto b = padded_numerator(a);
    const auto& den = a.den().coeffs();
    const std::size_t n = den.size() - 1;
    const std::size_t out_len = x.size() - d;
    std::vector<double> r(out_len, 0.0);
    // den(q) x = num(q) r, written at time t and solved for r(t - d).
    for (std::size_t t = d; t < x.size(); ++t) {
        double acc = x[t];
        for (std::size_t k = 1; k <= n && k <= t; ++k) acc += den[k] * x[t - k];
        for (std::size_t k = d + 1; k <= n && k <= t; ++k) acc -= b[k] * r[t - k];
        r[t - d] = acc / b[d];
    }
    return Signal(std::move(r), x.start_index());
}

bool has_unstable_inverse(const RationalTF& a) {
    const auto zs = a.zeros();
    return std::any_of(zs.begin(), zs.end(), [](auto z) { return std::abs(z) >= 1.0; });
}

}  // namespace distvrft
