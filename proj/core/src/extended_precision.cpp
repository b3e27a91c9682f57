#include <cmath>
#include <string>

#include "degenpred/errors.hpp"
#include "degenpred/fft.hpp"
#include "degenpred/predictor_kernels.hpp"

#ifdef DEGENPRED_HAVE_MULTIPRECISION
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_complex.hpp>
#endif

namespace degenpred {

#ifdef DEGENPRED_HAVE_MULTIPRECISION

bool extended_precision_available() { return true; }

NormEstimate kernel_norm_extended(const KernelSpec& spec, std::size_t points) {
    namespace mp = boost::multiprecision;
    using Real = mp::cpp_bin_float_50;
    using Complex = mp::cpp_complex_50;
    spec.validate();
    if (points < 8 || (points & (points - 1)) != 0) throw ConfigError("points must be a power of two >= 8");

    const Real pi = boost::math::constants::pi<Real>();
    const Real gamma(spec.gamma);
    const Real alpha = Real(1) - mp::pow(gamma, -Real(spec.rhat));
    const int nh = spec.n < 0 ? -spec.n : spec.n;

    // W(u) = V(u)^n on |u| = 1; w(l) = (1/P) sum_j W(u_j) u_j^l.
    std::vector<Complex> a(points);
    for (std::size_t j = 0; j < points; ++j) {
        const Real phi = 2 * pi * Real(j) / Real(points);
        const Complex u(mp::cos(phi), mp::sin(phi));
        const Complex v = Complex(1) - mp::exp(-Complex(gamma) / (u + Complex(alpha)));
        Complex w(1);
        for (int k = 0; k < nh; ++k) w *= v;
        a[j] = w;
    }
    radix2_fft(a, true, pi);

    NormEstimate est{-kInf, 0, 0};
    for (std::size_t l = static_cast<std::size_t>(nh); l < points / 2; ++l) {
        const Real mag = mp::abs(a[l]) / Real(points);
        if (mag == 0) continue;
        const double lg = static_cast<double>(mp::log10(mag));
        if (lg > est.log10_sup) est = {lg, static_cast<long>(l), 0};
    }
    est.peak_tap_index = est.peak_lattice_index * spec.period() - nh;
    if (spec.n < 0) est.peak_tap_index = -est.peak_tap_index;
    return est;
}

#else

bool extended_precision_available() { return false; }

NormEstimate kernel_norm_extended(const KernelSpec&, std::size_t) {
    throw ConfigError("built without extended precision support");
}

#endif

}  // namespace degenpred
