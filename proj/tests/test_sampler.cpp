#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ccs/observables.hpp"
#include "ccs/sampler.hpp"
#include "oracles.hpp"

using namespace ccs;

namespace {
ModelSpec bare_spec() {
    ModelConfig cfg;
    cfg.f = 0;
    return build_model(cfg);
}

// <x> and <x^2> of the reconstructed state, from the normal-ordered CS
// elements of x and x^2 (independent of the observables module).
void reconstructed_moments(const ModelSpec& spec, const MatrixXcd& Z, const VectorXcd& a,
                           double& x1, double& x2) {
    const double gx = spec.well.gamma_x;
    const MatrixXcd om = overlap_matrix(Z);
    Complex m1 = 0.0, m2 = 0.0, nrm = 0.0;
    for (Eigen::Index k = 0; k < Z.cols(); ++k)
        for (Eigen::Index l = 0; l < Z.cols(); ++l) {
            const Complex s = std::conj(Z(0, k)) + Z(0, l);
            const Complex w = std::conj(a[k]) * a[l] * om(k, l);
            m1 += w * s / std::sqrt(2.0 * gx);
            m2 += w * (s * s + 1.0) / (2.0 * gx);
            nrm += w;
        }
    x1 = std::real(m1 / nrm);
    x2 = std::real(m2 / nrm);
}
}  // namespace

TEST_CASE("sampling is deterministic for a fixed seed") {
    const ModelSpec spec = bare_spec();
    SamplerConfig cfg;
    cfg.M = 40;
    cfg.seed = 12345;
    const MatrixXcd a = sample_basis(cfg, spec);
    const MatrixXcd b = sample_basis(cfg, spec);
    CHECK((a - b).cwiseAbs().maxCoeff() == 0.0);
    cfg.seed = 54321;
    const MatrixXcd c = sample_basis(cfg, spec);
    CHECK((a - c).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("M=1 with vanishing width is the initial state itself") {
    const ModelSpec spec = bare_spec();
    SamplerConfig cfg;
    cfg.M = 1;
    CHECK(sample_basis(cfg, spec).col(0).norm() == 0.0);

    cfg.include_center = false;
    cfg.sigma = 1e-9;
    CHECK(sample_basis(cfg, spec).col(0).norm() < 1e-7);
}

TEST_CASE("near-duplicate basis functions are rejected") {
    const ModelSpec spec = bare_spec();
    SamplerConfig cfg;
    cfg.M = 8;
    cfg.sigma = 1.5;
    cfg.min_overlap = 0.5;  // aggressive: pairwise |overlap| must stay below 0.5
    const MatrixXcd Z = sample_basis(cfg, spec);
    for (int i = 0; i < cfg.M; ++i)
        for (int j = i + 1; j < cfg.M; ++j)
            CHECK(std::abs(overlap(Z.col(i), Z.col(j))) <= 0.5 + 1e-12);
}

TEST_CASE("an impossible placement exhausts the retry budget") {
    const ModelSpec spec = bare_spec();
    SamplerConfig cfg;
    cfg.M = 50;
    cfg.sigma = 1e-3;     // everything lands on the center
    cfg.min_overlap = 0.9;
    cfg.max_retries = 50;
    CHECK_THROWS_AS(sample_basis(cfg, spec), std::runtime_error);
}

TEST_CASE("sampling is parity balanced in expectation") {
    ModelConfig mc;
    mc.f = 2;
    mc.f_co = 10;
    const ModelSpec spec = build_model(mc);
    SamplerConfig cfg;
    cfg.M = 20000;
    cfg.sigma = 0.5;
    cfg.seed = 99;
    cfg.min_overlap = 0.0;  // pure i.i.d. draws for the statistics
    const MatrixXcd Z = sample_basis(cfg, spec);
    const VectorXcd mean = Z.rowwise().mean();
    // standard error sigma/sqrt(2 M) per quadrature; allow 5 sigma
    const double bound = 5.0 * cfg.sigma / std::sqrt(2.0 * cfg.M);
    CHECK(mean.cwiseAbs().maxCoeff() < 2.0 * bound);
}

TEST_CASE("projection on a well-separated basis pins the center amplitude") {
    const ModelSpec spec = bare_spec();
    MatrixXcd Z(1, 4);
    Z(0, 0) = Complex(0.0, 0.0);
    Z(0, 1) = Complex(5.0, 0.0);
    Z(0, 2) = Complex(0.0, 5.0);
    Z(0, 3) = Complex(-5.0, -5.0);
    const ProjectionResult res = project_initial_amplitudes(Z, spec);
    CHECK(std::abs(res.amplitudes[0] - 1.0) < 1e-9);
    for (int l = 1; l < 4; ++l) CHECK(std::abs(res.amplitudes[l]) < 1e-9);
    CHECK(res.reconstructed_norm == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("projected state reproduces the Gaussian moments") {
    const ModelSpec spec = bare_spec();
    SamplerConfig cfg;
    cfg.M = 50;
    cfg.seed = 7;
    const MatrixXcd Z = sample_basis(cfg, spec);
    const ProjectionResult res = project_initial_amplitudes(Z, spec);
    CHECK(res.reconstructed_norm > 0.999);

    double x1 = 0.0, x2 = 0.0;
    reconstructed_moments(spec, Z, res.amplitudes, x1, x2);
    CHECK(std::abs(x1) < 1e-3);
    CHECK(std::abs(x2 - 1.0 / (2.0 * spec.well.gamma_x)) < 1e-3);
}

TEST_CASE("projected state reproduces the barrier-top energy") {
    const ModelSpec spec = bare_spec();
    SamplerConfig cfg;
    cfg.M = 80;
    cfg.seed = 21;
    const MatrixXcd Z = sample_basis(cfg, spec);
    const ProjectionResult res = project_initial_amplitudes(Z, spec);

    CcsState st;
    st.basis = Z;
    st.amplitudes = res.amplitudes;
    const EnergyBreakdownReal e = energy_breakdown(st, spec);
    const double eps_norm = std::abs(1.0 - res.reconstructed_norm);
    CHECK(std::abs(e.system() - 0.296875) < std::max(1e-6, 10.0 * eps_norm));
}

TEST_CASE("projection residual shrinks as the truncation loosens") {
    const ModelSpec spec = bare_spec();
    SamplerConfig cfg;
    cfg.M = 60;
    cfg.seed = 13;
    const MatrixXcd Z = sample_basis(cfg, spec);
    double previous = -1.0;
    for (const double eps : {1e-4, 1e-8, 1e-12}) {
        const ProjectionResult res = project_initial_amplitudes(Z, spec, eps);
        if (previous >= 0.0) CHECK(res.residual <= previous + 1e-12);
        previous = res.residual;
    }
}

TEST_CASE("projection reports solver health") {
    const ModelSpec spec = bare_spec();
    SamplerConfig cfg;
    cfg.M = 60;
    cfg.seed = 5;
    const MatrixXcd Z = sample_basis(cfg, spec);
    const ProjectionResult res = project_initial_amplitudes(Z, spec);
    CHECK(res.solve_info.lambda_max > 0.0);
    CHECK(res.solve_info.truncated > 0);  // 1D basis of 60 CS is heavily overcomplete
    CHECK(res.residual < 1e-6);
}
