#include "vibroident/sine_fit.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/FFT>

#include "vibroident/types.hpp"

namespace vibroident {

double SineFit::frequency() const { return omega / (2.0 * kPi); }

namespace {

double wrap_phase(double phi) {
    double w = std::remainder(phi, 2.0 * kPi);
    if (w <= -kPi) w += 2.0 * kPi;
    return w;
}

struct Linear {
    double a = 0, b = 0, sse = 0;  // u ~ a sin + b cos
};

Linear linear_fit(const std::vector<double>& y, double fs, double omega) {
    double ss = 0, sc = 0, cc = 0, ys = 0, yc = 0;
    std::size_t n = y.size();
    std::vector<double> sn(n), cs(n);
    for (std::size_t i = 0; i < n; ++i) {
        double th = omega * static_cast<double>(i) / fs;
        sn[i] = std::sin(th);
        cs[i] = std::cos(th);
        ss += sn[i] * sn[i];
        sc += sn[i] * cs[i];
        cc += cs[i] * cs[i];
        ys += y[i] * sn[i];
        yc += y[i] * cs[i];
    }
    Linear r;
    double det = ss * cc - sc * sc;
    if (std::abs(det) <= 1e-14 * ss * cc) {
        r.a = ss > 0 ? ys / ss : 0.0;
        r.b = 0.0;
    } else {
        r.a = (ys * cc - yc * sc) / det;
        r.b = (yc * ss - ys * sc) / det;
    }
    for (std::size_t i = 0; i < n; ++i) {
        double e = y[i] - r.a * sn[i] - r.b * cs[i];
        r.sse += e * e;
    }
    return r;
}

double sse_of(const std::vector<double>& y, double fs, double A, double w, double phi) {
    double s = 0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        double e = y[i] - A * std::sin(w * static_cast<double>(i) / fs + phi);
        s += e * e;
    }
    return s;
}

SineFit from_linear(const Linear& l, double omega, const TimeSeries& ts) {
    SineFit f;
    f.amplitude = std::hypot(l.a, l.b);
    f.phase = wrap_phase(std::atan2(l.b, l.a));
    f.omega = omega;
    f.residual_rms = std::sqrt(l.sse / static_cast<double>(ts.size()));
    f.t0 = ts.start_time;
    f.t1 = ts.end_time();
    return f;
}

} // namespace

SineFit fit_sine_fixed(const TimeSeries& ts, double omega) {
    if (ts.values.empty()) throw FitError("empty series '" + ts.label + "'", {});
    return from_linear(linear_fit(ts.values, ts.sample_rate, omega), omega, ts);
}

SineFit fit_sine(const TimeSeries& ts, double f_init) {
    const auto& y = ts.values;
    const double fs = ts.sample_rate;
    const std::size_t n = y.size();
    if (!(f_init > 0)) throw FitError("f_init must be positive", {});
    double span = static_cast<double>(n) / fs;
    if (n < 4 || span * f_init < 3.0)
        throw FitError("window of '" + ts.label + "' covers fewer than 3 cycles at " + std::to_string(f_init) + " Hz",
                       {});

    // Stage (i)
    const double w0 = 2.0 * kPi * f_init;
    Linear lin = linear_fit(y, fs, w0);
    SineFit best = from_linear(lin, w0, ts);
    double best_sse = lin.sse;

    // Stage (ii): grid at the sidelobe spacing, then golden section around the best node.
    const double lo = 0.9 * w0, hi = 1.1 * w0;
    const double step = kPi / span;
    auto n_grid = static_cast<std::size_t>(std::ceil((hi - lo) / step));
    double w_grid = w0, s_grid = lin.sse;
    for (std::size_t k = 0; k <= n_grid; ++k) {
        double w = std::min(hi, lo + static_cast<double>(k) * step);
        double s = linear_fit(y, fs, w).sse;
        if (s < s_grid) {
            s_grid = s;
            w_grid = w;
        }
    }
    double a = std::max(lo, w_grid - step), b = std::min(hi, w_grid + step);
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - gr * (b - a), d = a + gr * (b - a);
    double fc = linear_fit(y, fs, c).sse, fd = linear_fit(y, fs, d).sse;
    while (b - a > 1e-13 * w0) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = linear_fit(y, fs, c).sse;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = linear_fit(y, fs, d).sse;
        }
    }
    double w_gs = fc < fd ? c : d;
    Linear lgs = linear_fit(y, fs, w_gs);
    if (s_grid < lgs.sse) {
        w_gs = w_grid;
        lgs = linear_fit(y, fs, w_grid);
    }
    if (lgs.sse < best_sse) {
        best = from_linear(lgs, w_gs, ts);
        best_sse = lgs.sse;
    }

    // Stage (iii): Gauss-Newton with step halving on (A, omega, phi).
    double A = best.amplitude, w = best.omega, phi = best.phase;
    double sse = best_sse;
    if (A <= 0.0) return best;
    bool converged = false;
    int it = 0;
    for (; it < 100; ++it) {
        Eigen::Matrix3d JtJ = Eigen::Matrix3d::Zero();
        Eigen::Vector3d Jtr = Eigen::Vector3d::Zero();
        for (std::size_t i = 0; i < n; ++i) {
            double tau = static_cast<double>(i) / fs;
            double th = w * tau + phi;
            double s = std::sin(th), co = std::cos(th);
            // omega column scaled by span for conditioning
            Eigen::Vector3d j(s, A * tau / span * co, A * co);
            double r = y[i] - A * s;
            JtJ += j * j.transpose();
            Jtr += j * r;
        }
        Eigen::LDLT<Eigen::Matrix3d> ldlt(JtJ);
        if (ldlt.info() != Eigen::Success || !ldlt.isPositive()) {
            converged = true;
            break;
        }
        Eigen::Vector3d delta = ldlt.solve(Jtr);
        delta(1) /= span;
        double lambda = 1.0;
        bool improved = false;
        double nA = A, nw = w, nphi = phi, nsse = sse;
        for (int h = 0; h < 40; ++h) {
            nA = A + lambda * delta(0);
            nw = w + lambda * delta(1);
            nphi = phi + lambda * delta(2);
            nsse = sse_of(y, fs, nA, nw, nphi);
            if (nsse < sse) {
                improved = true;
                break;
            }
            lambda *= 0.5;
        }
        if (!improved) {
            converged = true;
            break;
        }
        double rel = std::abs(lambda * delta(0)) / std::max(std::abs(A), 1e-300) +
                     std::abs(lambda * delta(1)) * span + std::abs(lambda * delta(2));
        double gain = sse - nsse;
        A = nA;
        w = nw;
        phi = nphi;
        double prev = sse;
        sse = nsse;
        if (sse < best_sse) {
            best_sse = sse;
            best.amplitude = std::abs(A);
            best.omega = w;
            best.phase = wrap_phase(A < 0 ? phi + kPi : phi);
            best.residual_rms = std::sqrt(sse / static_cast<double>(n));
        }
        if (rel < 1e-10 || gain <= 1e-14 * prev) {
            converged = true;
            ++it;
            break;
        }
    }
    best.iterations = it;
    if (!converged)
        throw FitError("Gauss-Newton did not converge in 100 iterations on '" + ts.label + "'", best);
    return best;
}

Window extract_steady_window(const TimeSeries& ts, double f_force, const WindowPolicy& policy) {
    if (!(f_force > 0)) throw WindowError("forcing frequency must be positive");
    double t0 = ts.start_time + policy.skip_cycles / f_force;
    double end = ts.end_time();
    if (!(t0 < end))
        throw WindowError("series '" + ts.label + "' ends before " + std::to_string(policy.skip_cycles) +
                          " cycles at " + std::to_string(f_force) + " Hz");
    return {t0, std::min(end, t0 + policy.max_len)};
}

LowFreqResult subtract_low_freq(const TimeSeries& ts, double f_cut) {
    LowFreqResult out;
    out.series = ts;
    const std::size_t n = ts.size();
    if (n < 8 || !(f_cut > 0)) return out;

    std::vector<double> xw(n);
    double mean = 0.0;
    for (double v : ts.values) mean += v;
    mean /= static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        double hann = 0.5 - 0.5 * std::cos(2.0 * kPi * static_cast<double>(i) / static_cast<double>(n - 1));
        xw[i] = (ts.values[i] - mean) * hann;
    }
    Eigen::FFT<double> fft;
    std::vector<std::complex<double>> X;
    fft.fwd(X, xw);
    std::size_t half = n / 2;
    std::vector<double> mag(half + 1);
    for (std::size_t k = 0; k <= half; ++k) mag[k] = std::abs(X[k]);

    std::vector<double> sorted(mag.begin() + 1, mag.end());
    std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
    double peak_all = *std::max_element(mag.begin() + 1, mag.end());
    double floor = std::max(sorted[sorted.size() / 2], 1e-3 * peak_all);

    const double df = ts.sample_rate / static_cast<double>(n);
    std::size_t best = 0;
    for (std::size_t k = 1; k < half && static_cast<double>(k) * df < f_cut; ++k)
        if (mag[k] > mag[k - 1] && mag[k] >= mag[k + 1] && (best == 0 || mag[k] > mag[best])) best = k;
    if (best == 0 || !(mag[best] > 3.0 * floor)) return out;

    // Parabolic interpolation of the log-magnitude peak.
    double f_peak = static_cast<double>(best) * df;
    if (mag[best - 1] > 0 && mag[best + 1] > 0) {
        double l = std::log(mag[best - 1]), c = std::log(mag[best]), r = std::log(mag[best + 1]);
        double den = l - 2.0 * c + r;
        if (den < 0) f_peak += 0.5 * (l - r) / den * df;
    }
    if (ts.duration() * f_peak < 3.0) return out;

    SineFit fit;
    try {
        fit = fit_sine(ts, f_peak);
    } catch (const FitError& e) {
        fit = e.best();
    }
    for (std::size_t i = 0; i < n; ++i)
        out.series.values[i] -= fit.amplitude * std::sin(fit.omega * static_cast<double>(i) / ts.sample_rate + fit.phase);
    out.subtracted = true;
    out.frequency = fit.frequency();
    out.fit = fit;
    return out;
}

} // namespace vibroident
