#include <doctest.h>

#include <cmath>
#include <random>

#include "qclink/polarization.hpp"

using namespace qclink;

namespace {

PolUnitary random_unitary(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> ang(0.0, 2.0 * M_PI);
    return unitary_from_waveplates({0.0, M_PI / 4, 0.0, M_PI / 4},
                                   {ang(rng), ang(rng), ang(rng), ang(rng)});
}

JonesVector random_state(std::mt19937_64& rng) {
    return apply(random_unitary(rng), JonesVector::horizontal());
}

}  // namespace

TEST_CASE("normalize rescales to unit intensity") {
    const JonesVector a = normalize({2.0, 0.0});
    CHECK(a.ex.real() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(a.ey) == doctest::Approx(0.0).epsilon(1e-12));

    const JonesVector b = normalize({1.0, 1.0});
    CHECK(std::abs(b.ex) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
    CHECK(std::abs(b.ey) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));

    const JonesVector c = normalize({complexd{0.0, 3.0}, complexd{4.0, 0.0}});
    CHECK(c.norm_sq() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::norm(c.ex) == doctest::Approx(0.36).epsilon(1e-12));
}

TEST_CASE("normalize rejects the zero vector") {
    CHECK_THROWS_WITH_AS(normalize({0.0, 0.0}), "normalize: degenerate state",
                         std::invalid_argument);
}

TEST_CASE("zero-retardance cascade is the identity") {
    const PolUnitary u = unitary_from_waveplates({0.1, 0.7, 1.3}, {0.0, 0.0, 0.0});
    CHECK(std::abs(u.m[0] - complexd{1, 0}) < 1e-12);
    CHECK(std::abs(u.m[1]) < 1e-12);
    CHECK(std::abs(u.m[2]) < 1e-12);
    CHECK(std::abs(u.m[3] - complexd{1, 0}) < 1e-12);
}

TEST_CASE("half-wave plate at 45 degrees swaps the linear basis states") {
    const PolUnitary hwp = waveplate(M_PI / 4, M_PI);
    const JonesVector out = apply(hwp, JonesVector::horizontal());
    CHECK(std::norm(out.ey) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(std::norm(out.ex) == doctest::Approx(0.0).epsilon(1e-10));
}

TEST_CASE("waveplate cascades stay unitary with unit determinant modulus") {
    std::mt19937_64 rng(31);
    for (int i = 0; i < 200; ++i) {
        const PolUnitary u = random_unitary(rng);
        const PolUnitary g = u.dagger() * u;
        CHECK(std::abs(g.m[0] - complexd{1, 0}) < 1e-10);
        CHECK(std::abs(g.m[1]) < 1e-10);
        CHECK(std::abs(g.m[2]) < 1e-10);
        CHECK(std::abs(g.m[3] - complexd{1, 0}) < 1e-10);
        CHECK(std::abs(std::abs(u.det()) - 1.0) < 1e-10);
    }
}

TEST_CASE("mismatched cascade lists are rejected") {
    CHECK_THROWS_AS(unitary_from_waveplates({0.0, 1.0}, {0.5}),
                    std::invalid_argument);
    CHECK_THROWS_AS(unitary_from_waveplates({}, {}), std::invalid_argument);
}

TEST_CASE("apply preserves the norm for random unitary/state pairs") {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 1000; ++i) {
        const JonesVector out = apply(random_unitary(rng), random_state(rng));
        CHECK(std::abs(out.norm_sq() - 1.0) < 1e-10);
    }
}

TEST_CASE("identity leaves states unchanged") {
    const JonesVector v = normalize({complexd{0.3, 0.2}, complexd{0.8, -0.1}});
    const JonesVector out = apply(PolUnitary::identity(), v);
    CHECK(std::abs(out.ex - v.ex) < 1e-14);
    CHECK(std::abs(out.ey - v.ey) < 1e-14);
}

TEST_CASE("Malus law through a linear polarizer") {
    const JonesVector h = JonesVector::linear(0.0);
    CHECK(polarizer_intensity(h, 0.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(polarizer_intensity(h, M_PI / 2) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(polarizer_intensity(h, M_PI / 4) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("orthogonal polarizer transmissions sum to one") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> ang(0.0, M_PI);
    for (int i = 0; i < 100; ++i) {
        const JonesVector v = random_state(rng);
        const double theta = ang(rng);
        CHECK(polarizer_intensity(v, theta) + polarizer_intensity(v, theta + M_PI / 2) ==
              doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("beam-splitter port fractions with finite extinction") {
    const auto [p1, p2] = pbs_split(JonesVector::horizontal(), 0.0, 30.0);
    CHECK(p1 == doctest::Approx(0.999).epsilon(1e-9));
    CHECK(p2 == doctest::Approx(0.001).epsilon(1e-9));

    const auto [q1, q2] = pbs_split(JonesVector::horizontal(), 0.0, 1e9);
    CHECK(q1 == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(q2 == doctest::Approx(0.0).epsilon(1e-12));

    const auto [r1, r2] = pbs_split(JonesVector::linear(M_PI / 4), 0.0, 25.0);
    CHECK(r1 == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(r2 == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("beam-splitter fractions always sum to one") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> ang(0.0, M_PI);
    std::uniform_real_distribution<double> er(5.0, 60.0);
    for (int i = 0; i < 100; ++i) {
        const auto [p1, p2] = pbs_split(random_state(rng), ang(rng), er(rng));
        CHECK(p1 + p2 == doctest::Approx(1.0).epsilon(1e-14));
    }
}

TEST_CASE("state overlap metric") {
    const JonesVector v = normalize({complexd{0.6, 0.0}, complexd{0.0, 0.8}});
    CHECK(fidelity(v, v) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(fidelity(JonesVector::horizontal(), JonesVector::vertical()) ==
          doctest::Approx(0.0).epsilon(1e-12));
    CHECK(fidelity(JonesVector::horizontal(), JonesVector::linear(M_PI / 4)) ==
          doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("drift with zero rate leaves the plant untouched") {
    DriftProcess p = DriftProcess::standard(0.0, 99);
    const auto before = p.retardances();
    p.step(10.0);
    CHECK(p.retardances() == before);
}

TEST_CASE("drift is reproducible from its seed") {
    DriftProcess a = DriftProcess::standard(0.05, 1234);
    DriftProcess b = DriftProcess::standard(0.05, 1234);
    for (int i = 0; i < 100; ++i) {
        a.step(0.01);
        b.step(0.01);
        CHECK(a.retardances() == b.retardances());
    }
}

TEST_CASE("drift increments match the diffusion law") {
    const double rate = 0.05, dt = 0.01;
    DriftProcess p = DriftProcess::standard(rate, 5);
    std::vector<double> prev = p.retardances();
    double sum = 0.0, sum_sq = 0.0;
    std::size_t n = 0;
    for (int i = 0; i < 10000; ++i) {
        p.step(dt);
        const std::vector<double>& cur = p.retardances();
        for (std::size_t k = 0; k < cur.size(); ++k) {
            double d = cur[k] - prev[k];
            d -= 2.0 * M_PI * std::round(d / (2.0 * M_PI));  // unwrap
            sum += d;
            sum_sq += d * d;
            ++n;
        }
        prev = cur;
    }
    const double mean = sum / n;
    const double var = sum_sq / n - mean * mean;
    CHECK(var == doctest::Approx(rate * rate * dt).epsilon(0.05));
    // zero-mean increments: |mean| within 3 standard errors
    CHECK(std::abs(mean) < 3.0 * std::sqrt(var / n));
}

TEST_CASE("drift retardances stay wrapped") {
    DriftProcess p = DriftProcess::standard(2.0, 11);
    for (int i = 0; i < 1000; ++i) p.step(1.0);
    for (double r : p.retardances()) {
        CHECK(r >= 0.0);
        CHECK(r < 2.0 * M_PI);
    }
}
