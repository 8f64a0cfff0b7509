#include <doctest.h>

#include <cmath>
#include <complex>

#include "qi/fock.hpp"
#include "qi/probes.hpp"

using namespace qi;
using fock::cplx;
using fock::DenseOperator;

TEST_CASE("annihilation matrix has sqrt(n) ladder entries") {
    const auto a2 = fock::annihilation_matrix(2);
    CHECK(a2.at(0, 1) == cplx(1.0, 0.0));
    CHECK(a2.at(0, 0) == cplx(0.0, 0.0));
    CHECK(a2.at(1, 0) == cplx(0.0, 0.0));
    CHECK(a2.at(1, 1) == cplx(0.0, 0.0));

    const auto a3 = fock::annihilation_matrix(3);
    CHECK(a3.at(0, 1).real() == doctest::Approx(1.0));
    CHECK(a3.at(1, 2).real() == doctest::Approx(std::sqrt(2.0)));

    CHECK_THROWS_AS(fock::annihilation_matrix(1), dimension_error);
}

TEST_CASE("number operator from the ladder pair") {
    const auto number = fock::creation_matrix(4) * fock::annihilation_matrix(4);
    for (int n = 0; n < 4; ++n) CHECK(number.at(n, n).real() == doctest::Approx(n));
    CHECK(number.hermiticity_defect() < 1e-15);
}

TEST_CASE("thermal spectrum limits and weights") {
    const auto vac = fock::thermal_state(0.0, 4);
    CHECK(vac.probabilities[0] == 1.0);
    CHECK(vac.probabilities[3] == 0.0);
    CHECK(vac.raw_tail == 0.0);

    const auto unit = fock::thermal_state(1.0, 40);
    for (int n = 0; n < 6; ++n)
        CHECK(unit.probabilities[n] == doctest::Approx(std::pow(0.5, n + 1)).epsilon(1e-11));
    CHECK(unit.raw_tail == doctest::Approx(std::pow(0.5, 40)).epsilon(1e-12));

    const auto hot = fock::thermal_state(10.0, 400);
    double mean = 0.0;
    for (int n = 0; n < hot.dim; ++n) mean += n * hot.probabilities[n];
    CHECK(mean == doctest::Approx(10.0).epsilon(1e-12));
    for (int n = 1; n < hot.dim; ++n) CHECK(hot.probabilities[n] < hot.probabilities[n - 1]);
}

TEST_CASE("thermal truncation is rejected past the tail tolerance") {
    fock::TruncationSpec trunc;
    trunc.dim_bath = 5;
    trunc.tail_tolerance = 1e-10;
    CHECK_THROWS_AS(fock::thermal_state(10.0, 5, trunc), truncation_error);
    CHECK_NOTHROW(fock::thermal_state(10.0, fock::thermal_dim_for(10.0, 1e-10), trunc));
}

TEST_CASE("thermal mean shifts stay bounded by tail mass times dimension") {
    for (double nb : {0.5, 1.0, 10.0}) {
        for (int dim : {10, 20, 40}) {
            const auto coarse = fock::thermal_state(nb, dim);
            const auto fine = fock::thermal_state(nb, 4 * dim);
            auto mean = [](const fock::ThermalSpectrum& s) {
                double acc = 0.0;
                for (int n = 0; n < s.dim; ++n) acc += n * s.probabilities[n];
                return acc;
            };
            CHECK(std::abs(mean(fine) - mean(coarse)) <= 2.0 * dim * coarse.raw_tail);
        }
    }
}

TEST_CASE("tensor product trace factorizes and labels concatenate") {
    auto a = fock::annihilation_matrix(3, "s") * fock::creation_matrix(3, "s");
    auto b = fock::creation_matrix(4, "b") * fock::annihilation_matrix(4, "b");
    const auto ab = fock::tensor_product(a, b);
    CHECK(ab.trace().real() == doctest::Approx((a.trace() * b.trace()).real()));
    CHECK(ab.mode_labels() == std::vector<std::string>{"s", "b"});

    const auto id = fock::tensor_product(DenseOperator::identity({"s"}, {3}),
                                         DenseOperator::identity({"b"}, {4}));
    CHECK((id - DenseOperator::identity({"s", "b"}, {3, 4})).max_abs() == 0.0);

    // (a x 1)(1 x b) = a x b
    const auto left = fock::embed({"s", "b"}, {3, 4}, {{"s", fock::annihilation_matrix(3, "s")}});
    const auto right = fock::embed({"s", "b"}, {3, 4}, {{"b", fock::annihilation_matrix(4, "b")}});
    const auto direct = fock::tensor_product(fock::annihilation_matrix(3, "s"),
                                             fock::annihilation_matrix(4, "b"));
    CHECK((left * right - direct).max_abs() < 1e-14);

    CHECK_THROWS_AS(fock::tensor_product(a, fock::annihilation_matrix(2, "s")), label_error);
}

TEST_CASE("partial trace reduces product states and preserves the trace") {
    const auto rho_a = fock::diagonal_density({0.6, 0.3, 0.1}, "a");
    const auto rho_b = fock::diagonal_density({0.5, 0.25, 0.15, 0.1}, "b");
    const auto joint = fock::tensor_product(rho_a, rho_b);

    const auto reduced = fock::partial_trace(joint, "b");
    CHECK((reduced - rho_a).max_abs() < 1e-14);
    CHECK(fock::partial_trace(joint, "a").trace().real() == doctest::Approx(1.0));

    const auto scalar = fock::partial_trace(fock::partial_trace(joint, "a"), "b");
    CHECK(scalar.at(0, 0).real() == doctest::Approx(joint.trace().real()));

    CHECK_THROWS_AS(fock::partial_trace(joint, "c"), label_error);
}

TEST_CASE("tracing the signal out of a twin-photon projector leaves the squared weights") {
    fock::TruncationSpec trunc;
    trunc.dim_signal = trunc.dim_idler = 24;
    trunc.tail_tolerance = 1e-12;
    const auto state = probes::tmsv_coefficients(0.5, trunc);
    const int dim = state.m_max() + 1;

    DenseOperator proj({"s", "i"}, {dim, dim});
    for (int m = 0; m < dim; ++m)
        for (int n = 0; n < dim; ++n)
            proj.at(static_cast<long>(m) * dim + m, static_cast<long>(n) * dim + n) =
                state.amplitude_at(m) * state.amplitude_at(n);

    const auto idler = fock::partial_trace(proj, "s");
    for (int n = 0; n < dim; ++n)
        CHECK(idler.at(n, n).real() ==
              doctest::Approx(state.amplitude_at(n) * state.amplitude_at(n)).epsilon(1e-12));
    CHECK(idler.hermiticity_defect() < 1e-14);
}

TEST_CASE("beam-splitter generator is anti-Hermitian and photon conserving") {
    const std::vector<std::string> labels = {"s", "b"};
    const std::vector<int> dims = {5, 6};
    const auto g = fock::beamsplitter_generator(labels, dims, "s", "b");

    CHECK((g + g.adjoint()).max_abs() < 1e-12);
    CHECK(g.at(0, 0) == cplx(0.0, 0.0)); // vacuum annihilated

    const auto total = fock::embed(labels, dims, {{"s", fock::number_matrix(5, "s")}}) +
                       fock::embed(labels, dims, {{"b", fock::number_matrix(6, "b")}});
    CHECK(fock::commutator(g, total).max_abs() < 1e-10);

    CHECK_THROWS_AS(fock::beamsplitter_generator(labels, dims, "s", "x"), label_error);
    CHECK_THROWS_AS(fock::beamsplitter_generator({"s", "b"}, {5, 1}, "s", "b"), dimension_error);
}

TEST_CASE("small-eta evolution is perturbative, trace and Hermiticity preserving") {
    const std::vector<std::string> labels = {"s", "b"};
    const std::vector<int> dims = {6, 8};
    const auto g = fock::beamsplitter_generator(labels, dims, "s", "b");

    const auto th = fock::thermal_state(0.7, 8);
    DenseOperator psi({"s"}, {6});
    psi.at(1, 1) = 0.5;
    psi.at(1, 2) = 0.5;
    psi.at(2, 1) = 0.5;
    psi.at(2, 2) = 0.5;
    const auto rho = fock::tensor_product(psi, fock::thermal_density(th, "b"));

    CHECK((fock::evolve_small_eta(rho, g, 0.0, 2) - rho).max_abs() == 0.0);

    const double eta = 1e-3;
    const auto first = fock::evolve_small_eta(rho, g, eta, 1);
    const auto comm = fock::commutator(g, rho);
    CHECK((first - rho - comm * cplx(eta, 0.0)).max_abs() < 1e-15);

    const auto second = fock::evolve_small_eta(rho, g, eta, 2);
    CHECK(second.hermiticity_defect() < 1e-12);
    CHECK(std::abs(second.trace() - rho.trace()) < 1e-12);

    CHECK_THROWS_AS(fock::evolve_small_eta(rho, g, eta, 3), domain_error);
}

TEST_CASE("first-order evolution reproduces the quadrature mean shift of the probe") {
    // Truncated coherent state |alpha> on the signal, thermal bath on the
    // reflected port.  With G = a_S^dag b - a_S b^dag the reflected mode picks
    // up b - eta a_S at first order, so the measured quadrature mean is
    // -2 eta Re<a_S> + O(eta^3).
    const double alpha = 0.6;
    const int ds = 14, db = 24;
    std::vector<cplx> amps(ds);
    double norm = 0.0;
    double coeff = 1.0; // alpha^n / sqrt(n!)
    for (int n = 0; n < ds; ++n) {
        amps[n] = coeff;
        norm += coeff * coeff;
        coeff *= alpha / std::sqrt(static_cast<double>(n + 1));
    }
    DenseOperator psi({"s"}, {ds});
    for (int m = 0; m < ds; ++m)
        for (int n = 0; n < ds; ++n) psi.at(m, n) = amps[m] * std::conj(amps[n]) / norm;

    const double nb = 0.8;
    const auto rho =
        fock::tensor_product(psi, fock::thermal_density(fock::thermal_state(nb, db), "b"));
    const auto g = fock::beamsplitter_generator({"s", "b"}, {ds, db}, "s", "b");

    const double eta = 1e-3;
    const auto reduced = fock::partial_trace(fock::evolve_small_eta(rho, g, eta, 2), "s");
    const auto x = fock::annihilation_matrix(db, "b") + fock::creation_matrix(db, "b");
    const double measured = fock::expectation(x, reduced).real();
    CHECK(measured == doctest::Approx(-2.0 * eta * alpha).epsilon(1e-5));
}

TEST_CASE("density matrices coming out of the builders stay physical") {
    const auto th = fock::thermal_state(2.5, 60);
    const auto rho = fock::thermal_density(th, "b");
    CHECK(rho.hermiticity_defect() < 1e-12);
    CHECK(std::abs(rho.trace() - cplx(1.0, 0.0)) < 1e-12);
}
