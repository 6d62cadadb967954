#include <gtest/gtest.h>

#include <cmath>

#include "vibroident/damping.hpp"
#include "vibroident/errors.hpp"
#include "vibroident/frc.hpp"

using namespace vibroident;

namespace {

double closed_form(double xi, double r) { return 1 / std::sqrt(std::pow(1 - r * r, 2) + std::pow(2 * xi * r, 2)); }

FrequencyResponseCurve sdof_frc(double xi, double fn, const std::vector<double>& freqs, double u_static = 0.2,
                                const std::vector<std::string>& ids = {"S1"}) {
    FrequencyResponseCurve frc;
    frc.dof = Dof::X;
    for (const auto& id : ids)
        for (double f : freqs) frc.points.push_back({f, id, "x", CurveKind::Station, u_static * closed_form(xi, f / fn), 6800, 6800});
    return frc;
}

std::vector<double> stepped_grid() {
    return {1, 2, 3, 4, 5, 6, 7, 8, 9, 9.5, 10, 10.5, 11, 11.5, 12, 13, 14, 15, 16, 17, 18};
}

// L2 distance over the fit range, evaluated directly for every grid value.
double oracle_best_xi(const std::vector<CurvePoint>& curve, double fn, double u0) {
    double best = 0, best_d = 1e300;
    for (int k = 0; k <= 36; ++k) {
        double xi = 0.05 + 0.025 * k, d = 0;
        for (const auto& p : curve) {
            double r = p.f / fn;
            if (r < 0.3 - 1e-12 || r > 1.5 + 1e-12) continue;
            d += std::pow(p.u / u0 - closed_form(xi, r), 2);
        }
        if (d < best_d) best_d = d, best = xi;
    }
    return best;
}

} // namespace

TEST(RdCurve, Examples) {
    for (double xi : {0.0, 0.2, 0.9}) EXPECT_EQ(rd_curve(xi, 0.0), 1.0);
    EXPECT_NEAR(rd_curve(0.5, 1.0), 1.0, 1e-15);
    EXPECT_THROW(rd_curve(0.0, 1.0), InfinityError);
    EXPECT_THROW(rd_curve(1.0, 0.5), DomainError);
    EXPECT_THROW(rd_curve(0.3, -0.1), DomainError);
}

TEST(RdCurve, PeakLocationAndValue) {
    for (double xi : {0.1, 0.37, 0.5, 0.7}) {
        double r_star = std::sqrt(1 - 2 * xi * xi);
        double peak = 1 / (2 * xi * std::sqrt(1 - xi * xi));
        EXPECT_NEAR(rd_curve(xi, r_star), peak, 1e-12 * peak);
        EXPECT_LT(rd_curve(xi, r_star * 0.999), peak);
        EXPECT_LT(rd_curve(xi, r_star * 1.001), peak);
    }
    EXPECT_NEAR(1 / (2 * 0.37 * std::sqrt(1 - 0.37 * 0.37)), 1.4546, 1e-4);
}

TEST(EstimateDamping, SdofAtSteppedFrequencies) {
    auto frc = sdof_frc(0.37, 10, stepped_grid());
    auto est = estimate_damping(frc, 10);
    EXPECT_LE(std::abs(est.xi_lo - 0.37), 0.025);
    EXPECT_EQ(est.xi_lo, est.xi_hi);
    EXPECT_EQ(est.normalization_freqs[0], 1.0);
    EXPECT_EQ(est.normalization_freqs[1], 2.0);
    double u0 = 0.5 * (0.2 * closed_form(0.37, 0.1) + 0.2 * closed_form(0.37, 0.2));
    EXPECT_EQ(est.xi_lo, oracle_best_xi(frc.curve("S1", "x"), 10, u0));
}

TEST(EstimateDamping, ExactOnGridInterior) {
    std::vector<double> freqs = {0.001, 0.002};
    for (int k = 30; k <= 150; k += 5) freqs.push_back(k / 10.0);
    for (int k = 1; k < 36; ++k) {
        double xi = 0.05 + 0.025 * k;
        auto est = estimate_damping(sdof_frc(xi, 10, freqs), 10);
        EXPECT_NEAR(est.xi_lo, xi, 1e-9) << xi;
        EXPECT_FALSE(est.stations[0].boundary);
    }
}

TEST(EstimateDamping, FlatCurveMatchesDirectSearch) {
    FrequencyResponseCurve frc;
    frc.dof = Dof::X;
    for (double f : stepped_grid()) frc.points.push_back({f, "S1", "x", CurveKind::Station, 0.3, 6800, 6800});
    auto est = estimate_damping(frc, 10);
    double oracle = oracle_best_xi(frc.curve("S1", "x"), 10, 0.3);
    EXPECT_EQ(est.xi_lo, oracle);
    EXPECT_NEAR(oracle, 0.475, 1e-12);
    EXPECT_FALSE(est.stations[0].boundary);
}

TEST(EstimateDamping, RangeAcrossStations) {
    auto frc = sdof_frc(0.3, 10, stepped_grid(), 0.2, {"A"});
    auto other = sdof_frc(0.5, 10, stepped_grid(), 0.1, {"B"});
    frc.points.insert(frc.points.end(), other.points.begin(), other.points.end());
    auto est = estimate_damping(frc, 10);
    EXPECT_LT(est.xi_lo, est.xi_hi);
    EXPECT_NEAR(est.xi_lo, 0.3, 0.025);
    EXPECT_NEAR(est.xi_hi, 0.5, 0.025);
    EXPECT_EQ(est.stations.size(), 2u);
}

TEST(EstimateDamping, JointScalingInvariant) {
    auto frc = sdof_frc(0.37, 10, stepped_grid());
    auto scaled = frc;
    for (auto& p : scaled.points) p.u_scaled_mm *= 13.0;
    auto a = estimate_damping(frc, 10), b = estimate_damping(scaled, 10);
    EXPECT_EQ(a.xi_lo, b.xi_lo);
    EXPECT_DOUBLE_EQ(amplification_factor(frc, "S1", "x", 10), amplification_factor(scaled, "S1", "x", 10));
}

TEST(EstimateDamping, MissingLowFrequencyPointsRejected) {
    std::vector<double> freqs = {4.5, 6, 8, 10, 12};
    EXPECT_THROW(estimate_damping(sdof_frc(0.37, 10, freqs), 10), NormalizationError);
}

TEST(Amplification, FlatIsOne) {
    std::vector<CurvePoint> flat;
    for (double f : stepped_grid()) flat.push_back({f, 0.25});
    EXPECT_DOUBLE_EQ(amplification_factor(flat, 10), 1.0);
}

TEST(Amplification, SdofPeak) {
    const double xi = 0.37, fn = 10;
    std::vector<CurvePoint> c = {{0.001, closed_form(xi, 0.0001)}, {0.002, closed_form(xi, 0.0002)}};
    for (int k = 30; k <= 150; ++k) c.push_back({k / 10.0, closed_form(xi, k / 100.0)});
    c.push_back({fn * std::sqrt(1 - 2 * xi * xi), 1 / (2 * xi * std::sqrt(1 - xi * xi))});
    std::sort(c.begin(), c.end(), [](auto& a, auto& b) { return a.f < b.f; });
    EXPECT_NEAR(amplification_factor(c, fn), 1.4546, 1e-4);
}
