#include "degenpred/sequence.hpp"

#include <algorithm>
#include <cmath>

#include "degenpred/errors.hpp"

namespace degenpred {

Sequence::Sequence(long offset, std::vector<cplx> samples) : offset_(offset), samples_(std::move(samples)) {}

Sequence Sequence::zeros(IndexRange window) {
    return Sequence(window.lo, std::vector<cplx>(static_cast<std::size_t>(window.size()), cplx{}));
}

Sequence Sequence::impulse(long t, cplx value) { return Sequence(t, {value}); }

Sequence Sequence::from_real(long offset, const std::vector<double>& values) {
    std::vector<cplx> s(values.begin(), values.end());
    return Sequence(offset, std::move(s));
}

cplx Sequence::at(long t) const {
    if (samples_.empty() || t < first() || t > last()) return {};
    return samples_[static_cast<std::size_t>(t - offset_)];
}

void Sequence::set(long t, cplx v) {
    if (samples_.empty() || t < first() || t > last()) throw ConfigError("Sequence::set: index outside window");
    samples_[static_cast<std::size_t>(t - offset_)] = v;
}

double Sequence::l2_norm() const {
    double s = 0.0;
    for (const auto& v : samples_) s += std::norm(v);
    return std::sqrt(s);
}

double Sequence::sup_norm() const {
    double s = 0.0;
    for (const auto& v : samples_) s = std::max(s, std::abs(v));
    return s;
}

bool Sequence::all_finite() const {
    return std::all_of(samples_.begin(), samples_.end(),
                       [](const cplx& v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); });
}

Sequence Sequence::restricted(IndexRange w) const {
    Sequence out = zeros(w);
    if (samples_.empty()) return out;
    const long lo = std::max(w.lo, first());
    const long hi = std::min(w.hi, last());
    for (long t = lo; t <= hi; ++t) out.samples_[static_cast<std::size_t>(t - w.lo)] = at(t);
    return out;
}

namespace {

IndexRange union_window(const Sequence& a, const Sequence& b) {
    if (a.empty()) return b.window();
    if (b.empty()) return a.window();
    return {std::min(a.first(), b.first()), std::max(a.last(), b.last())};
}

}  // namespace

Sequence operator+(const Sequence& a, const Sequence& b) {
    const IndexRange w = union_window(a, b);
    Sequence out = Sequence::zeros(w);
    for (long t = w.lo; t <= w.hi; ++t) out.set(t, a.at(t) + b.at(t));
    return out;
}

Sequence operator-(const Sequence& a, const Sequence& b) {
    const IndexRange w = union_window(a, b);
    Sequence out = Sequence::zeros(w);
    for (long t = w.lo; t <= w.hi; ++t) out.set(t, a.at(t) - b.at(t));
    return out;
}

Sequence operator*(cplx s, const Sequence& a) {
    Sequence out = a;
    for (auto& v : out.samples()) v *= s;
    return out;
}

double max_abs_diff(const Sequence& a, const Sequence& b) {
    const IndexRange w = union_window(a, b);
    double m = 0.0;
    for (long t = w.lo; t <= w.hi; ++t) m = std::max(m, std::abs(a.at(t) - b.at(t)));
    return m;
}

}  // namespace degenpred
