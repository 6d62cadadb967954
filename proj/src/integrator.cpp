#include "vibroident/integrator.hpp"

#include <cmath>

#include "vibroident/errors.hpp"

namespace vibroident {

StateHistory integrate(const SystemMatrices& sys, const ExcitationProgram& program, double dt, int stride,
                       const InitialConditions& ic, double duration) {
    if (!(dt > 0)) throw IntegrationError("time step must be positive");
    if (stride < 1) throw IntegrationError("record stride must be >= 1");
    double fmax = program.max_frequency();
    if (dt > 1.0 / (20.0 * fmax) * (1.0 + 1e-12))
        throw IntegrationError("time step " + std::to_string(dt) + " s exceeds 1/(20 f_max) for f_max=" +
                               std::to_string(fmax) + " Hz");
    if (duration < 0) duration = program.duration();
    auto n_steps = static_cast<std::size_t>(std::llround(std::floor(duration / dt + 1e-9)));

    const double gamma = 0.5, beta = 0.25;
    const double a1 = 1.0 / (beta * dt * dt), a2 = 1.0 / (beta * dt), a3 = 1.0 / (2.0 * beta) - 1.0;
    const double b1 = gamma / (beta * dt), b2 = gamma / beta - 1.0, b3 = dt * (gamma / (2.0 * beta) - 1.0);
    Mat6 Keff = sys.K + b1 * sys.C + a1 * sys.M;
    Eigen::PartialPivLU<Mat6> lu(Keff);

    // Blow-up guard scaled by the static response to the peak load or the initial state.
    Eigen::FullPivLU<Mat6> klu(sys.K);
    double est = ic.u.norm();
    if (klu.isInvertible()) {
        est = std::max(est, (klu.solve(program.peak_force())).norm());
        Eigen::GeneralizedSelfAdjointEigenSolver<Mat6> es(sys.K, sys.M, Eigen::EigenvaluesOnly);
        double wmin = std::sqrt(std::max(es.eigenvalues().minCoeff(), 1e-300));
        est = std::max(est, ic.v.norm() / wmin);
    } else {
        est = std::max(est, ic.v.norm() * duration);
    }
    double limit = 1e6 * std::max(est, 1e-30);

    Vec6 u = ic.u, v = ic.v;
    Vec6 F = program.generalized_force(0.0);
    Vec6 a = sys.M.ldlt().solve(F - sys.C * v - sys.K * u);

    StateHistory h;
    h.dt = dt * stride;
    std::size_t n_rec = n_steps / static_cast<std::size_t>(stride) + 1;
    h.u.reserve(n_rec);
    h.v.reserve(n_rec);
    h.a.reserve(n_rec);
    h.drive.reserve(n_rec);
    auto record = [&](double t) {
        h.u.push_back(u);
        h.v.push_back(v);
        h.a.push_back(a);
        h.drive.push_back(program.drive(t));
    };
    record(0.0);
    for (std::size_t n = 1; n <= n_steps; ++n) {
        double t = static_cast<double>(n) * dt;
        Vec6 Fn = program.generalized_force(t);
        Vec6 rhs = Fn + sys.M * (a1 * u + a2 * v + a3 * a) + sys.C * (b1 * u + b2 * v + b3 * a);
        Vec6 un = lu.solve(rhs);
        Vec6 an = a1 * (un - u) - a2 * v - a3 * a;
        v = v + dt * ((1.0 - gamma) * a + gamma * an);
        u = un;
        a = an;
        if (!(u.norm() <= limit))
            throw IntegrationError("unstable growth at t=" + std::to_string(t) + " s");
        if (n % static_cast<std::size_t>(stride) == 0) record(t);
    }
    return h;
}

} // namespace vibroident
