#include "vibroident/filter.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "vibroident/errors.hpp"
#include "vibroident/types.hpp"

namespace vibroident {

using cd = std::complex<double>;

std::complex<double> FilterCoefficients::response(double f) const {
    cd z1 = std::polar(1.0, -2.0 * kPi * f / design.fs);  // z^-1
    cd z2 = z1 * z1;
    cd h = 1.0;
    for (const auto& s : sos) h *= (s.b0 + s.b1 * z1 + s.b2 * z2) / (1.0 + s.a1 * z1 + s.a2 * z2);
    return h;
}

std::vector<std::complex<double>> FilterCoefficients::poles() const {
    std::vector<cd> out;
    for (const auto& s : sos) {
        cd disc = std::sqrt(cd(s.a1 * s.a1 - 4.0 * s.a2));
        out.push_back((-s.a1 + disc) / 2.0);
        out.push_back((-s.a1 - disc) / 2.0);
    }
    return out;
}

nlohmann::json FilterCoefficients::to_json() const {
    nlohmann::json sections = nlohmann::json::array();
    for (const auto& s : sos) sections.push_back({s.b0, s.b1, s.b2, 1.0, s.a1, s.a2});
    return {{"b", b},
            {"a", a},
            {"sos", sections},
            {"design", {{"order", design.order}, {"f_low", design.f_low}, {"f_high", design.f_high}, {"fs", design.fs}}}};
}

namespace {

std::vector<double> poly_mul(const std::vector<double>& p, const std::vector<double>& q) {
    std::vector<double> r(p.size() + q.size() - 1, 0.0);
    for (std::size_t i = 0; i < p.size(); ++i)
        for (std::size_t j = 0; j < q.size(); ++j) r[i + j] += p[i] * q[j];
    return r;
}

cd bilinear(cd s, double fs) { return (2.0 * fs + s) / (2.0 * fs - s); }

} // namespace

FilterCoefficients design_bandpass(int order, double f_low, double f_high, double fs) {
    if (order < 1) throw DesignError("filter order must be >= 1");
    if (!(fs > 0)) throw DesignError("sample rate must be positive");
    if (!(f_low > 0) || !(f_low < f_high)) throw DesignError("need 0 < f_low < f_high");
    if (!(f_high < fs / 2)) throw DesignError("corner " + std::to_string(f_high) + " Hz at or above Nyquist");

    double wl = 2.0 * fs * std::tan(kPi * f_low / fs);
    double wh = 2.0 * fs * std::tan(kPi * f_high / fs);
    double w0 = std::sqrt(wl * wh);
    double bw = wh - wl;

    // Digital band-pass poles grouped in pairs per section.
    std::vector<std::array<cd, 2>> pairs;
    for (int k = 0; k < order; ++k) {
        cd p = std::polar(1.0, kPi * (2.0 * k + order + 1) / (2.0 * order));
        if (p.imag() < -1e-12) continue;  // handled with its conjugate
        cd h = p * bw / 2.0;
        cd d = std::sqrt(h * h - w0 * w0);
        cd s1 = h + d, s2 = h - d;
        if (std::abs(p.imag()) <= 1e-12) {
            pairs.push_back({bilinear(s1, fs), bilinear(s2, fs)});
        } else {
            pairs.push_back({bilinear(s1, fs), bilinear(std::conj(s1), fs)});
            pairs.push_back({bilinear(s2, fs), bilinear(std::conj(s2), fs)});
        }
    }

    FilterCoefficients fc;
    fc.design = {order, f_low, f_high, fs};
    for (const auto& pr : pairs) {
        Sos s;
        s.b0 = 1.0;
        s.b1 = 0.0;
        s.b2 = -1.0;
        cd sum = pr[0] + pr[1];
        cd prod = pr[0] * pr[1];
        s.a1 = -sum.real();
        s.a2 = prod.real();
        fc.sos.push_back(s);
    }
    // Unit gain at the digital image of the analog centre frequency.
    double fc_hz = fs / kPi * std::atan(w0 / (2.0 * fs));
    double g = std::abs(fc.response(fc_hz));
    double per = std::pow(1.0 / g, 1.0 / static_cast<double>(fc.sos.size()));
    for (auto& s : fc.sos) {
        s.b0 *= per;
        s.b1 *= per;
        s.b2 *= per;
    }
    fc.b = {1.0};
    fc.a = {1.0};
    for (const auto& s : fc.sos) {
        fc.b = poly_mul(fc.b, {s.b0, s.b1, s.b2});
        fc.a = poly_mul(fc.a, {1.0, s.a1, s.a2});
    }
    for (const auto& p : fc.poles())
        if (!(std::abs(p) < 1.0)) throw DesignError("designed filter is unstable");
    return fc;
}

std::vector<double> sosfilt(const std::vector<Sos>& sos, const std::vector<double>& x,
                            const std::vector<std::array<double, 2>>* zi) {
    std::vector<double> y = x;
    for (std::size_t k = 0; k < sos.size(); ++k) {
        const Sos& s = sos[k];
        double z0 = zi ? (*zi)[k][0] : 0.0;
        double z1 = zi ? (*zi)[k][1] : 0.0;
        for (double& v : y) {
            double in = v;
            double out = s.b0 * in + z0;
            z0 = s.b1 * in - s.a1 * out + z1;
            z1 = s.b2 * in - s.a2 * out;
            v = out;
        }
    }
    return y;
}

namespace {

// Steady-state transposed direct form II state of each section for a unit step at the cascade input.
std::vector<std::array<double, 2>> sosfilt_zi(const std::vector<Sos>& sos) {
    std::vector<std::array<double, 2>> zi;
    double scale = 1.0;
    for (const auto& s : sos) {
        double g = (s.b0 + s.b1 + s.b2) / (1.0 + s.a1 + s.a2);
        double z1 = s.b2 - s.a2 * g;
        double z0 = s.b1 - s.a1 * g + z1;
        zi.push_back({scale * z0, scale * z1});
        scale *= g;
    }
    return zi;
}

std::vector<double> one_pass(const std::vector<Sos>& sos, const std::vector<std::array<double, 2>>& zi,
                             const std::vector<double>& x) {
    std::vector<std::array<double, 2>> z = zi;
    for (auto& e : z) {
        e[0] *= x.front();
        e[1] *= x.front();
    }
    return sosfilt(sos, x, &z);
}

std::vector<double> reversed(std::vector<double> v) {
    std::reverse(v.begin(), v.end());
    return v;
}

} // namespace

TimeSeries filtfilt(const FilterCoefficients& coeffs, const TimeSeries& ts) {
    std::size_t pad = 3 * (2 * static_cast<std::size_t>(coeffs.design.order) + 1);
    const auto& x = ts.values;
    if (x.size() <= pad)
        throw FilterError("series '" + ts.label + "' has " + std::to_string(x.size()) +
                          " samples; filtfilt needs more than " + std::to_string(pad));
    std::size_t n = x.size();
    std::vector<double> ext;
    ext.reserve(n + 2 * pad);
    for (std::size_t i = pad; i >= 1; --i) ext.push_back(2.0 * x[0] - x[i]);
    ext.insert(ext.end(), x.begin(), x.end());
    for (std::size_t i = 1; i <= pad; ++i) ext.push_back(2.0 * x[n - 1] - x[n - 1 - i]);

    auto zi = sosfilt_zi(coeffs.sos);
    // Forward-backward and backward-forward passes averaged: exact time-reversal symmetry.
    std::vector<double> fb = reversed(one_pass(coeffs.sos, zi, reversed(one_pass(coeffs.sos, zi, ext))));
    std::vector<double> bf = one_pass(coeffs.sos, zi, reversed(one_pass(coeffs.sos, zi, reversed(ext))));

    TimeSeries out = ts;
    for (std::size_t i = 0; i < n; ++i) out.values[i] = 0.5 * (fb[pad + i] + bf[pad + i]);
    return out;
}

} // namespace vibroident
