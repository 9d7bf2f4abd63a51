// Copyright 2026 The weakeraser Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "weakeraser/errors.hpp"
#include "weakeraser/hilbert.hpp"

using namespace weakeraser;
using oracle::pi;

TEST_CASE("grid places integers exactly") {
    const Grid g = Grid::screen_default();
    CHECK(g.size() == 4001);
    CHECK(g.spacing() == doctest::Approx(0.01));
    CHECK(g.point(0) == -20.0);
    CHECK(g.point(4000) == 20.0);
    CHECK(g.point(2000) == 0.0);
    for (double x : {-3.0, -1.0, 1.0, 3.0}) {
        CHECK(g.point(g.nearest_index(x)) == x);
    }
    CHECK(g.trapezoid_weight(0) == doctest::Approx(0.005));
    CHECK(g.trapezoid_weight(17) == doctest::Approx(0.01));
    CHECK(g.contains(19.999));
    CHECK_FALSE(g.contains(20.5));
}

TEST_CASE("grid rejects bad configurations") {
    CHECK_THROWS_AS(Grid(0.0, 1.0, 1), ConfigurationError);
    CHECK_THROWS_AS(Grid(1.0, 0.0, 10), ConfigurationError);
    CHECK_THROWS_AS(Grid(0.0, std::numeric_limits<double>::infinity(), 10), ConfigurationError);
}

TEST_CASE("trapezoid integrates polynomials") {
    const Grid g(0.0, 2.0, 201);
    std::vector<double> lin(g.size());
    std::vector<double> sq(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        lin[i] = 3.0 * g.point(i) + 1.0;
        sq[i] = g.point(i) * g.point(i);
    }
    CHECK(trapezoid(lin, g) == doctest::Approx(8.0).epsilon(1e-14));
    // Error term (b - a) h^2 f''/12.
    CHECK(trapezoid(sq, g) == doctest::Approx(8.0 / 3.0 + 2.0 * 1e-4 * 2.0 / 12.0).epsilon(1e-12));
    CHECK_THROWS_AS((void)trapezoid(std::span<const double>(sq).first(3), g), ConfigurationError);
}

TEST_CASE("slit amplitudes at reference points") {
    const auto a = SlitAmplitude::slit_a_default();
    const auto b = SlitAmplitude::slit_b_default();
    CHECK(a(0.0).real() == doctest::Approx(1.0 / std::sqrt(pi)).epsilon(1e-14));
    CHECK(std::abs(a(0.0).imag()) < 1e-15);
    CHECK(a.density(1.0) == doctest::Approx(1.0 / (2.0 * pi)).epsilon(1e-14));
    CHECK(b.phase_gradient() == doctest::Approx(pi));
    for (double x : {-7.3, -1.0, 0.25, 2.0, 11.0}) {
        CHECK(std::abs(a(x) - oracle::psi_a(x)) < 1e-15);
        CHECK(std::abs(b(x) - oracle::psi_b(x)) < 1e-15);
        CHECK(a.density(x) == doctest::Approx(oracle::lorentz2(x)).epsilon(1e-14));
    }
}

TEST_CASE("time dependence is a global phase") {
    const Envelope env{};
    const SlitAmplitude s0(env, 1.0, 0.0, 2.0, 0.0);
    const SlitAmplitude s1(env, 1.0, 0.0, 2.0, 0.7);
    for (double x : {-2.0, 0.0, 3.5}) {
        CHECK(std::abs(s1(x) - s0(x) * std::polar(1.0, 2.0 * 0.7)) < 1e-15);
    }
}

TEST_CASE("amplitude constructor validates") {
    CHECK_THROWS_AS(SlitAmplitude(Envelope{EnvelopeFamily::lorentzian, 0.0, 0.0}, 1.0, 0.0),
                    DomainError);
    CHECK_THROWS_AS(SlitAmplitude(Envelope{}, NAN, 0.0), DomainError);
    CHECK_THROWS_AS((void)eval_amplitude(SlitAmplitude::slit_a_default(), NAN), DomainError);
    CHECK_THROWS_AS((void)eval_amplitude(SlitAmplitude::slit_a_default(), INFINITY),
                    DomainError);
}

TEST_CASE("normalization matches the analytic tail mass") {
    const Grid g = Grid::screen_default();
    for (auto fam : {EnvelopeFamily::lorentzian, EnvelopeFamily::gaussian}) {
        for (double w : {0.5, 1.0, 2.0}) {
            const Envelope env{fam, w, 0.3};
            const SlitAmplitude s(env, 1.0, 0.0);
            std::vector<double> rho(g.size());
            for (std::size_t i = 0; i < g.size(); ++i) {
                rho[i] = s.density(g.point(i));
            }
            const double tail = env.tail_mass(g.x_min(), g.x_max());
            CHECK(std::abs(trapezoid(rho, g) - (1.0 - tail)) < 1e-6);
        }
    }
    // Lorentzian tail outside [-20, 20]: 1 - (2/pi) atan(20).
    const double tail = Envelope{}.tail_mass(-20.0, 20.0);
    CHECK(tail == doctest::Approx(1.0 - 2.0 / pi * std::atan(20.0)).epsilon(1e-12));
    CHECK(tail == doctest::Approx(0.0318).epsilon(1e-2));
}

TEST_CASE("slit overlap against a wide-domain Simpson oracle") {
    const oracle::cplx ref = oracle::overlap_ab(2000.0, 800000);
    CHECK(ref.real() == doctest::Approx(std::exp(-pi)).epsilon(1e-5));
    CHECK(std::abs(ref.imag()) < 1e-12);

    const Grid wide(-2000.0, 2000.0, 400001);
    const complex_t ab =
        inner_product(SlitAmplitude::slit_a_default(), SlitAmplitude::slit_b_default(), wide);
    CHECK(std::abs(ab - ref) < 1e-6);
    CHECK(ab.real() == doctest::Approx(0.043214).epsilon(1e-4));
}

TEST_CASE("spinor basics") {
    CHECK(std::abs(inner_product(Spinor::up(), Spinor::down())) < 1e-16);
    CHECK(std::abs(inner_product(Spinor::plus(), Spinor::minus())) < 1e-16);
    CHECK(std::abs(inner_product(Spinor::plus(), Spinor::up())) == doctest::Approx(M_SQRT1_2));
    CHECK(std::abs(inner_product(Spinor::from_axis(0.0, 0.0), Spinor::up()) - 1.0) < 1e-15);
    CHECK(std::abs(inner_product(Spinor::from_axis(pi / 2, 0.0), Spinor::plus()) - 1.0) < 1e-15);
    CHECK_THROWS_AS(Spinor(complex_t(1.0), complex_t(1.0)), ValidationError);
    const Spinor n = Spinor::normalized(complex_t(3.0), complex_t(0.0, 4.0));
    CHECK(n.up_component().real() == doctest::Approx(0.6));
    CHECK(n.down_component().imag() == doctest::Approx(0.8));
    CHECK_THROWS_AS((void)Spinor::normalized(0.0, 0.0), ValidationError);

    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int r = 0; r < 50; ++r) {
        const Spinor s = Spinor::from_axis(std::acos(1 - 2 * u(rng)), 2 * pi * u(rng));
        const Spinor o = s.orthogonal();
        CHECK(std::abs(inner_product(s, o)) < 1e-15);
        CHECK(std::norm(o.up_component()) + std::norm(o.down_component()) ==
              doctest::Approx(1.0).epsilon(1e-14));
    }
}

TEST_CASE("eraser state and screen densities") {
    const auto st = EraserState::symmetric_default();
    CHECK(psi2_density(st, 0.0) == doctest::Approx(1.0 / pi).epsilon(1e-14));
    CHECK(psi2_density(st, 1.0) == doctest::Approx(1.0 / (2.0 * pi)).epsilon(1e-14));
    const auto p1 = [&](double x) {
        return psi1_density(st.alpha(), st.beta(), st.psi_a(), st.psi_b(), x);
    };
    CHECK(p1(0.0) == doctest::Approx(2.0 / pi).epsilon(1e-14));
    CHECK(p1(2.0) == doctest::Approx(2.0 / (5.0 * pi)).epsilon(1e-12));
    for (double x : {-3.0, -1.0, 1.0, 3.0}) {
        CHECK(std::abs(p1(x)) < 1e-15);
    }
    // psi1 carries cos^2(pi x / 2) fringes under the psi2 envelope.
    for (double x : {-4.4, -0.3, 0.77, 5.1}) {
        CHECK(p1(x) == doctest::Approx(2.0 * oracle::lorentz2(x) * std::pow(std::cos(pi * x / 2), 2))
                           .epsilon(1e-12));
    }
    CHECK_THROWS_AS(EraserState(1.0, 1.0, st.psi_a(), st.psi_b()), ValidationError);
    const auto amps = st.spin_amplitudes(0.5);
    CHECK(std::abs(amps[0] - st.alpha() * st.psi_a()(0.5)) < 1e-16);
    CHECK(std::abs(amps[1] - st.beta() * st.psi_b()(0.5)) < 1e-16);
}
