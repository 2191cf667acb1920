#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ccs/reference.hpp"
#include "oracles.hpp"

using namespace ccs;

namespace {
ModelSpec make_spec(int f, double g = 0.1) {
    ModelConfig cfg;
    cfg.f = f;
    cfg.f_co = f == 2 ? 10 : (f == 3 ? 12 : 4 * std::max(1, f));
    cfg.g = g;
    return build_model(cfg);
}
}  // namespace

TEST_CASE("double-well eigenvalues and overlaps match the published table") {
    const ModelSpec spec = make_spec(0);
    const EigenResult res = solve_tise(spec.well, 4.0, 256, 5);
    const double e_ref[] = {-0.300, 0.046, 1.23, 2.46, 3.94};
    const double c_ref[] = {0.654, 0.0, 0.323, 0.0, 0.0225};
    for (int n = 0; n < 5; ++n) CHECK(std::abs(res.energies[n] - e_ref[n]) < 0.005);
    CHECK(std::abs(res.overlap_sq[0] - c_ref[0]) < 0.002);
    CHECK(std::abs(res.overlap_sq[2] - c_ref[2]) < 0.002);
    CHECK(std::abs(res.overlap_sq[4] - c_ref[4]) < 0.002);
    CHECK(res.overlap_sq[1] < 1e-10);
    CHECK(res.overlap_sq[3] < 1e-10);
}

TEST_CASE("eigenvalues are grid-converged at 256 points") {
    const ModelSpec spec = make_spec(0);
    const EigenResult coarse = solve_tise(spec.well, 4.0, 256, 5);
    const EigenResult fine = solve_tise(spec.well, 4.0, 512, 5);
    for (int n = 0; n < 5; ++n) CHECK(std::abs(coarse.energies[n] - fine.energies[n]) < 1e-3);
}

TEST_CASE("eigenfunctions are orthonormal and alternate parity") {
    const ModelSpec spec = make_spec(0);
    const EigenResult res = solve_tise(spec.well, 4.0, 256, 6);
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) {
            const double inner = res.states.col(i).dot(res.states.col(j)) * res.dx;
            CHECK(std::abs(inner - (i == j ? 1.0 : 0.0)) < 1e-8);
        }
    // parity: phi_n(-x) = (-1)^(n-1) phi_n(x)
    const int np = static_cast<int>(res.x.size());
    for (int n = 0; n < 6; ++n) {
        const double sign = n % 2 == 0 ? 1.0 : -1.0;
        double dev = 0.0;
        for (int i = 0; i < np; ++i)
            dev = std::max(dev, std::abs(res.states(i, n) - sign * res.states(np - 1 - i, n)));
        CHECK(dev < 1e-6);
    }
}

TEST_CASE("harmonic substitute potential recovers the analytic ladder") {
    const double m = 1.0, w = 1.5;
    const EigenResult res = solve_tise_potential(
        [&](double x) { return 0.5 * m * w * w * x * x; }, m, /*gamma_initial=*/m * w,
        /*extent=*/8.0, /*n_points=*/512, /*n_states=*/6);
    for (int n = 0; n < 6; ++n)
        CHECK(std::abs(res.energies[n] - w * (n + 0.5)) < 1e-4);
    // the matched-width Gaussian is the exact ground state
    CHECK(std::abs(res.overlap_sq[0] - 1.0) < 1e-8);
}

TEST_CASE("spectral overlap sum approaches unity as states are added") {
    const ModelSpec spec = make_spec(0);
    const EigenResult res = solve_tise(spec.well, 4.0, 256, 20);
    double partial = res.overlap_sq.head(5).sum();
    const double full = res.overlap_sq.sum();
    CHECK(partial > 0.999);
    CHECK(full >= partial);
    CHECK(std::abs(full - 1.0) < 1e-6);
}

TEST_CASE("spectral autocorrelation has the two-level period") {
    const ModelSpec spec = make_spec(0);
    const EigenResult res = solve_tise(spec.well, 4.0, 256, 10);
    const double period = 2.0 * M_PI / (res.energies[2] - res.energies[0]);
    CHECK(std::abs(period - 4.1) < 0.1);
    CHECK(std::abs(spectral_autocorr(res, 0.0) - Complex(res.overlap_sq.sum(), 0.0)) < 1e-12);
}

TEST_CASE("free Gaussian spreads by the analytic dispersion law") {
    std::vector<GridAxis> axes{{-24.0, 24.0, 512, 1.0}};
    const double gamma = 2.0;
    GridWavefunction w = GridWavefunction::product_gaussian(axes, VectorXd::Constant(1, gamma));
    SplitOperator op(axes, [](const VectorXd&) { return 0.0; }, 0.05);
    const double t = 1.0;
    for (int i = 0; i < 20; ++i) op.step(w.values());

    double x2 = 0.0;
    for (int i = 0; i < axes[0].n; ++i) {
        const double x = axes[0].point(i);
        x2 += std::norm(w.values()[i]) * x * x;
    }
    x2 *= w.cell_volume();
    const double expected = (1.0 + gamma * gamma * t * t) / (2.0 * gamma);
    CHECK(std::abs(x2 - expected) < 1e-6);
    CHECK(std::abs(w.norm_squared() - 1.0) < 1e-12);
}

TEST_CASE("a displaced coherent state revives after one harmonic period") {
    const double m = 0.1, w = 1.0, gamma = m * w;
    std::vector<GridAxis> axes{{-40.0, 40.0, 512, m}};
    GridWavefunction psi(axes);
    const Complex z0(1.0, 0.0);
    for (int i = 0; i < axes[0].n; ++i)
        psi.values()[i] = oracles::cs_position_wavefunction(gamma, z0, axes[0].point(i));
    const GridWavefunction psi0 = psi;

    const double period = 2.0 * M_PI / w;
    const int n_steps = 2000;
    SplitOperator op(axes, [&](const VectorXd& q) { return 0.5 * m * w * w * q[0] * q[0]; },
                     period / n_steps);
    for (int i = 0; i < n_steps; ++i) op.step(psi.values());
    CHECK(std::abs(std::abs(psi0.inner(psi)) - 1.0) < 1e-8);
}

TEST_CASE("split-operator conserves the norm to machine precision") {
    const ModelSpec spec = make_spec(0);
    std::vector<GridAxis> axes{{-3.5, 3.5, 32, 1.0}};
    GridWavefunction w =
        GridWavefunction::product_gaussian(axes, VectorXd::Constant(1, spec.well.gamma_x));
    SplitOperator op(axes, [&](const VectorXd& q) { return spec.well.potential(q[0]); }, 0.01);
    const double n0 = w.norm_squared();
    for (int i = 0; i < 1000; ++i) op.step(w.values());
    CHECK(std::abs(w.norm_squared() - n0) < 1e-12);
}

TEST_CASE("bare-well oracle reproduces the published autocorrelation pattern") {
    const ModelSpec spec = make_spec(0);
    SplitOpConfig cfg;
    cfg.dt = 0.01;
    cfg.t_final = 20.0;
    cfg.record_stride = 10;
    RecorderConfig rec;
    rec.x_grid = make_x_grid();
    rec.record_autocorr = true;
    rec.record_cs = false;
    const PropagationResult res = split_operator_propagate(spec, cfg, rec);
    REQUIRE(!res.aborted);

    std::vector<double> abs_c(res.series.size());
    for (std::size_t i = 0; i < res.series.size(); ++i)
        abs_c[i] = std::abs(res.series.autocorr[i]);
    const double min_c = *std::min_element(abs_c.begin(), abs_c.end());
    CHECK(min_c > 0.25);
    CHECK(min_c < 0.35);

    std::vector<double> peaks;
    for (std::size_t i = 1; i + 1 < abs_c.size(); ++i)
        if (abs_c[i] >= abs_c[i - 1] && abs_c[i] >= abs_c[i + 1] && abs_c[i] > 0.9)
            peaks.push_back(res.series.times[i]);
    peaks.insert(peaks.begin(), 0.0);
    REQUIRE(peaks.size() >= 3);
    const double period = (peaks.back() - peaks.front()) / static_cast<double>(peaks.size() - 1);
    CHECK(std::abs(period - 4.1) < 0.1);

    // three-way: eigendecomposition route within its own 0.02 band
    const EigenResult eig = solve_tise(spec.well, 4.0, 256, 15);
    double max_dev = 0.0;
    for (std::size_t i = 0; i < res.series.size(); ++i)
        max_dev = std::max(max_dev, std::abs(std::abs(spectral_autocorr(eig, res.series.times[i]))
                                             - abs_c[i]));
    CHECK(max_dev < 0.02);
}

TEST_CASE("coupled grid run starts from the exact product state energies") {
    const ModelSpec spec = make_spec(2);
    SplitOpConfig cfg;
    cfg.bath_points = {64, 64};
    const auto axes = make_grid_axes(spec, cfg);
    const GridWavefunction w = GridWavefunction::product_gaussian(axes, spec.gamma);
    CHECK(std::abs(w.norm_squared() - 1.0) < 1e-9);

    const EnergyBreakdownReal e = grid_energy_breakdown(w, spec);
    CHECK(std::abs(e.system() - 0.296875) < 1e-9);
    CHECK(std::abs(e.interaction) < 1e-9);
    for (int n = 0; n < 2; ++n)
        CHECK(std::abs(e.bath_modes[n] - 0.5 * spec.bath.frequencies[n]) < 1e-9);

    const VectorXd rho = grid_reduced_density(w);
    double total = rho.sum() * axes[0].dx();
    CHECK(std::abs(total - 1.0) < 1e-9);
}

TEST_CASE("grid construction honors the oracle's limits") {
    const ModelSpec spec = make_spec(2);
    SplitOpConfig cfg;
    cfg.bath_points = {64};
    CHECK_THROWS_AS(make_grid_axes(spec, cfg), std::invalid_argument);

    ModelConfig big;
    big.f = 4;
    big.f_co = 14;
    CHECK_THROWS_AS(make_grid_axes(build_model(big), SplitOpConfig{}), std::invalid_argument);

    CHECK_THROWS_AS(GridWavefunction(std::vector<GridAxis>{
                        {-1.0, 1.0, 8192, 1.0}, {-1.0, 1.0, 8192, 1.0}, {-1.0, 1.0, 8192, 1.0}}),
                    std::invalid_argument);
}
