#include "vibroident/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace vibroident {

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

std::string tick(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string o;
    for (char c : s) {
        if (c == '<') o += "&lt;";
        else if (c == '>') o += "&gt;";
        else if (c == '&') o += "&amp;";
        else o += c;
    }
    return o;
}

double nice_step(double span, int target) {
    double raw = span / target;
    double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double r = raw / mag;
    double n = r < 1.5 ? 1 : r < 3 ? 2 : r < 7 ? 5 : 10;
    return n * mag;
}

struct Frame {
    double W = 640, H = 420, L = 70, R = 150, T = 40, B = 50;
    double x0, x1, y0, y1;
    double px(double x) const { return L + (x - x0) / (x1 - x0) * (W - L - R); }
    double py(double y) const { return H - B - (y - y0) / (y1 - y0) * (H - T - B); }
};

std::string header(const Frame& f, const std::string& title) {
    std::string s = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(f.W) + "\" height=\"" + num(f.H) +
                    "\" viewBox=\"0 0 " + num(f.W) + " " + num(f.H) + "\" font-family=\"sans-serif\" font-size=\"11\">\n";
    s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    s += "<text x=\"" + num(f.W / 2) + "\" y=\"20\" text-anchor=\"middle\" font-size=\"13\">" + escape(title) + "</text>\n";
    return s;
}

std::string axes(const Frame& f, const std::string& xlabel, const std::string& ylabel) {
    std::string s;
    s += "<rect x=\"" + num(f.L) + "\" y=\"" + num(f.T) + "\" width=\"" + num(f.W - f.L - f.R) + "\" height=\"" +
         num(f.H - f.T - f.B) + "\" fill=\"none\" stroke=\"black\"/>\n";
    double xs = nice_step(f.x1 - f.x0, 8), ys = nice_step(f.y1 - f.y0, 6);
    for (double v = std::ceil(f.x0 / xs) * xs; v <= f.x1 + 1e-9 * xs; v += xs) {
        s += "<line x1=\"" + num(f.px(v)) + "\" y1=\"" + num(f.H - f.B) + "\" x2=\"" + num(f.px(v)) + "\" y2=\"" +
             num(f.H - f.B + 4) + "\" stroke=\"black\"/>\n";
        s += "<text x=\"" + num(f.px(v)) + "\" y=\"" + num(f.H - f.B + 16) + "\" text-anchor=\"middle\">" +
             tick(std::abs(v) < 1e-12 * xs ? 0.0 : v) + "</text>\n";
    }
    for (double v = std::ceil(f.y0 / ys) * ys; v <= f.y1 + 1e-9 * ys; v += ys) {
        s += "<line x1=\"" + num(f.L - 4) + "\" y1=\"" + num(f.py(v)) + "\" x2=\"" + num(f.L) + "\" y2=\"" +
             num(f.py(v)) + "\" stroke=\"black\"/>\n";
        s += "<text x=\"" + num(f.L - 6) + "\" y=\"" + num(f.py(v) + 4) + "\" text-anchor=\"end\">" +
             tick(std::abs(v) < 1e-12 * ys ? 0.0 : v) + "</text>\n";
    }
    s += "<text x=\"" + num((f.L + f.W - f.R) / 2) + "\" y=\"" + num(f.H - 12) + "\" text-anchor=\"middle\">" +
         escape(xlabel) + "</text>\n";
    s += "<text x=\"16\" y=\"" + num((f.T + f.H - f.B) / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " +
         num((f.T + f.H - f.B) / 2) + ")\">" + escape(ylabel) + "</text>\n";
    return s;
}

} // namespace

std::string line_plot_svg(const std::string& title, const std::string& xlabel, const std::string& ylabel,
                          const std::vector<PlotSeries>& series) {
    Frame f;
    f.x0 = f.y0 = std::numeric_limits<double>::infinity();
    f.x1 = f.y1 = -std::numeric_limits<double>::infinity();
    for (const auto& s : series)
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            f.x0 = std::min(f.x0, s.x[i]);
            f.x1 = std::max(f.x1, s.x[i]);
            f.y1 = std::max(f.y1, s.y[i]);
        }
    if (!std::isfinite(f.x0)) {
        f.x0 = 0;
        f.x1 = 1;
        f.y1 = 1;
    }
    f.y0 = 0;
    if (f.x1 <= f.x0) f.x1 = f.x0 + 1;
    if (f.y1 <= 0) f.y1 = 1;
    f.y1 *= 1.05;

    std::string out = header(f, title) + axes(f, xlabel, ylabel);
    for (std::size_t k = 0; k < series.size(); ++k) {
        const auto& s = series[k];
        const char* color = kPalette[k % 8];
        std::string pts;
        for (std::size_t i = 0; i < s.x.size(); ++i) pts += num(f.px(s.x[i])) + "," + num(f.py(s.y[i])) + " ";
        out += "<polyline fill=\"none\" stroke=\"" + std::string(color) + "\" stroke-width=\"1.5\" points=\"" + pts + "\"/>\n";
        for (std::size_t i = 0; i < s.x.size(); ++i)
            out += "<circle cx=\"" + num(f.px(s.x[i])) + "\" cy=\"" + num(f.py(s.y[i])) + "\" r=\"2.5\" fill=\"" + color + "\"/>\n";
        double ly = f.T + 14 + 16 * static_cast<double>(k);
        out += "<line x1=\"" + num(f.W - f.R + 10) + "\" y1=\"" + num(ly - 4) + "\" x2=\"" + num(f.W - f.R + 30) +
               "\" y2=\"" + num(ly - 4) + "\" stroke=\"" + color + "\" stroke-width=\"2\"/>\n";
        out += "<text x=\"" + num(f.W - f.R + 34) + "\" y=\"" + num(ly) + "\">" + escape(s.name) + "</text>\n";
    }
    out += "</svg>\n";
    return out;
}

std::string deformation_svg(const std::string& title, const std::string& xlabel, const std::string& ylabel,
                            const std::vector<DeformationPoint>& points, double magnification) {
    Frame f;
    f.x0 = f.y0 = std::numeric_limits<double>::infinity();
    f.x1 = f.y1 = -std::numeric_limits<double>::infinity();
    for (const auto& p : points) {
        f.x0 = std::min(f.x0, p.x);
        f.x1 = std::max(f.x1, p.x);
        f.y0 = std::min(f.y0, p.y);
        f.y1 = std::max(f.y1, p.y);
    }
    if (!std::isfinite(f.x0)) f.x0 = f.y0 = 0, f.x1 = f.y1 = 1;
    double pad = 0.15 * std::max(f.x1 - f.x0, f.y1 - f.y0) + 1e-9;
    f.x0 -= pad;
    f.x1 += pad;
    f.y0 -= pad;
    f.y1 += pad;
    // Equal scale on both axes.
    double sx = (f.W - f.L - f.R) / (f.x1 - f.x0), sy = (f.H - f.T - f.B) / (f.y1 - f.y0);
    if (sx < sy) {
        double c = 0.5 * (f.y0 + f.y1), h = 0.5 * (f.H - f.T - f.B) / sx;
        f.y0 = c - h;
        f.y1 = c + h;
    } else {
        double c = 0.5 * (f.x0 + f.x1), h = 0.5 * (f.W - f.L - f.R) / sy;
        f.x0 = c - h;
        f.x1 = c + h;
    }
    std::string out = header(f, title + " (x" + tick(magnification) + ")") + axes(f, xlabel, ylabel);
    for (const auto& p : points) {
        double ux = p.x, uy = p.y;
        double mx = p.x + magnification * p.mx, my = p.y + magnification * p.my;
        double rx = p.x + magnification * p.rx, ry = p.y + magnification * p.ry;
        out += "<circle cx=\"" + num(f.px(ux)) + "\" cy=\"" + num(f.py(uy)) + "\" r=\"3\" fill=\"#bbbbbb\"/>\n";
        out += "<line x1=\"" + num(f.px(ux)) + "\" y1=\"" + num(f.py(uy)) + "\" x2=\"" + num(f.px(rx)) + "\" y2=\"" +
               num(f.py(ry)) + "\" stroke=\"#d62728\" stroke-dasharray=\"3,2\"/>\n";
        out += "<circle cx=\"" + num(f.px(rx)) + "\" cy=\"" + num(f.py(ry)) + "\" r=\"3\" fill=\"none\" stroke=\"#d62728\"/>\n";
        out += "<line x1=\"" + num(f.px(ux)) + "\" y1=\"" + num(f.py(uy)) + "\" x2=\"" + num(f.px(mx)) + "\" y2=\"" +
               num(f.py(my)) + "\" stroke=\"#1f77b4\"/>\n";
        out += "<circle cx=\"" + num(f.px(mx)) + "\" cy=\"" + num(f.py(my)) + "\" r=\"3\" fill=\"#1f77b4\"/>\n";
        out += "<text x=\"" + num(f.px(ux) + 5) + "\" y=\"" + num(f.py(uy) - 5) + "\" font-size=\"9\">" + escape(p.id) + "</text>\n";
    }
    double ly = f.T + 14;
    out += "<circle cx=\"" + num(f.W - f.R + 20) + "\" cy=\"" + num(ly - 4) + "\" r=\"3\" fill=\"#bbbbbb\"/><text x=\"" +
           num(f.W - f.R + 30) + "\" y=\"" + num(ly) + "\">undeformed</text>\n";
    out += "<circle cx=\"" + num(f.W - f.R + 20) + "\" cy=\"" + num(ly + 12) + "\" r=\"3\" fill=\"#1f77b4\"/><text x=\"" +
           num(f.W - f.R + 30) + "\" y=\"" + num(ly + 16) + "\">measured</text>\n";
    out += "<circle cx=\"" + num(f.W - f.R + 20) + "\" cy=\"" + num(ly + 28) + "\" r=\"3\" fill=\"none\" stroke=\"#d62728\"/><text x=\"" +
           num(f.W - f.R + 30) + "\" y=\"" + num(ly + 32) + "\">rigid body</text>\n";
    out += "</svg>\n";
    return out;
}

} // namespace vibroident
