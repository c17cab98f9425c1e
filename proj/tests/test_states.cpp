#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "fockops/states.hpp"

using namespace fockops;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("thermal state weights", "[states]") {
    const auto th = thermal(1.0, 50);
    CHECK_THAT(th(0, 0).real(), WithinAbs(0.5, 1e-12));
    CHECK_THAT(th(1, 1).real(), WithinAbs(0.25, 1e-12));

    const auto vac = thermal(0.0, 10);
    CHECK(vac(0, 0) == complexd{1.0, 0.0});
    CHECK(vac(1, 1) == complexd{0.0, 0.0});

    const auto th2 = thermal(0.25, 60);
    CHECK_THAT(th2.trace(), WithinAbs(1.0, 1e-14));
    for (std::size_t n = 0; n + 1 <= 59; ++n)
        CHECK_THAT(th2(n + 1, n + 1).real() / th2(n, n).real(), WithinAbs(0.2, 1e-12));

    CHECK_THROWS_AS(thermal(-0.1, 10), std::invalid_argument);
}

TEST_CASE("even coherent state amplitudes", "[states]") {
    const auto vac = even_coherent(0.0, 10);
    CHECK(vac.amplitudes()[0] == complexd{1.0, 0.0});

    const auto psi = even_coherent(complexd{1.3, -0.4}, 50);
    for (std::size_t n = 1; n <= 49; n += 2) CHECK(psi.amplitudes()[n] == complexd{0.0, 0.0});
    CHECK_THAT(psi.norm(), WithinAbs(1.0, 1e-12));

    // |c_0|^2 at alpha = 1, from the amplitude formula evaluated directly
    const auto unit = even_coherent(1.0, 60);
    const double expected = 4.0 * std::exp(-1.0) / (2.0 + 2.0 * std::exp(-2.0));
    CHECK_THAT(std::norm(unit.amplitudes()[0]), WithinAbs(expected, 1e-12));
}

TEST_CASE("densified even coherent state has even-even support", "[states]") {
    const auto rho = even_coherent(complexd{0.9, 0.2}, 30).densify();
    for (std::size_t m = 0; m < rho.dim(); ++m)
        for (std::size_t n = 0; n < rho.dim(); ++n)
            if (m % 2 == 1 || n % 2 == 1) CHECK(rho(m, n) == complexd{0.0, 0.0});
    CHECK_THAT(rho.trace(), WithinAbs(1.0, 1e-12));
}

TEST_CASE("norm_closed identity transforms", "[states]") {
    const auto th = state_spec::make_thermal(0.7);
    CHECK_THAT(norm_closed(th, {0, 0, op_order::add_then_subtract}), WithinAbs(1.0, 1e-12));
    CHECK_THAT(norm_closed(th, {0, 0, op_order::subtract_then_add}), WithinAbs(1.0, 1e-12));
    const auto ecs = state_spec::make_even_coherent(1.0);
    CHECK_THAT(norm_closed(ecs, {0, 0, op_order::add_then_subtract}), WithinAbs(1.0, 1e-12));
    CHECK_THAT(norm_closed(ecs, {0, 0, op_order::subtract_then_add}), WithinAbs(1.0, 1e-12));
}

TEST_CASE("norm_closed equals the reciprocal oracle trace", "[states]") {
    for (double nbar : {0.04, 0.25, 1.0}) {
        const auto spec = state_spec::make_thermal(nbar);
        for (unsigned p : {0u, 1u, 2u, 4u}) {
            for (unsigned q : {0u, 2u, 3u}) {
                for (op_order order : {op_order::add_then_subtract, op_order::subtract_then_add}) {
                    const op_sequence seq{p, q, order};
                    const auto cutoff = choose_cutoff(spec, seq, 1e-16);
                    auto [state, record] = transform(thermal(nbar, cutoff), seq);
                    CHECK_THAT(norm_closed(spec, seq) * record.raw_trace, WithinAbs(1.0, 1e-8));
                }
            }
        }
    }
    // spec example: thermal nbar=0.25, (4,2), add-then-subtract at rel 1e-9
    const auto spec = state_spec::make_thermal(0.25);
    const op_sequence seq{4, 2, op_order::add_then_subtract};
    auto [state, record] = transform(thermal(0.25, choose_cutoff(spec, seq, 1e-18)), seq);
    CHECK_THAT(norm_closed(spec, seq), WithinRel(1.0 / record.raw_trace, 1e-9));
}

TEST_CASE("even-coherent norm_closed (corrected) matches the oracle trace", "[states]") {
    for (double alpha : {0.5, 1.0, 2.0}) {
        const auto spec = state_spec::make_even_coherent(alpha);
        for (unsigned p : {0u, 1u, 3u}) {
            for (unsigned q : {0u, 1u, 2u}) {
                for (op_order order : {op_order::add_then_subtract, op_order::subtract_then_add}) {
                    const op_sequence seq{p, q, order};
                    const auto cutoff = choose_cutoff(spec, seq, 1e-16);
                    auto [state, record] = transform(build_seed(spec, cutoff), seq);
                    CHECK_THAT(norm_closed(spec, seq) * record.raw_trace, WithinAbs(1.0, 1e-8));
                }
            }
        }
    }
    // complex amplitude
    const auto spec = state_spec::make_even_coherent(complexd{0.7, 0.3});
    const op_sequence seq{2, 1, op_order::subtract_then_add};
    auto [state, record] = transform(build_seed(spec, choose_cutoff(spec, seq, 1e-16)), seq);
    CHECK_THAT(norm_closed(spec, seq) * record.raw_trace, WithinAbs(1.0, 1e-8));
}

TEST_CASE("literal published constants disagree with the trace", "[states]") {
    const auto spec = state_spec::make_even_coherent(1.0);
    const op_sequence sa{1, 1, op_order::add_then_subtract};
    auto [state, record] = transform(build_seed(spec, choose_cutoff(spec, sa, 1e-16)), sa);
    CHECK(std::abs(norm_closed_literal_ecs(spec, sa) * record.raw_trace - 1.0) > 0.1);

    // sign relation: negative constant for odd p+q
    const op_sequence as{2, 1, op_order::subtract_then_add};
    CHECK(norm_closed_literal_ecs(spec, as) < 0.0);
}

TEST_CASE("norm_closed degenerate vacuum seeds", "[states]") {
    const auto vac = state_spec::make_thermal(0.0);
    CHECK_THROWS_AS(norm_closed(vac, {1, 2, op_order::add_then_subtract}), null_state);
    CHECK_THROWS_AS(norm_closed(vac, {2, 1, op_order::subtract_then_add}), null_state);
    // pure addition on vacuum is fine: N = 1/p!
    CHECK_THAT(norm_closed(vac, {3, 0, op_order::subtract_then_add}), WithinRel(1.0 / 6.0, 1e-12));
    // a² a†² |0> = 2 |0>, so the raw trace is 4
    CHECK_THAT(norm_closed(vac, {2, 2, op_order::add_then_subtract}), WithinRel(0.25, 1e-12));
}

TEST_CASE("norm_closed vacuum cross-check against the oracle", "[states]") {
    const auto vac = state_spec::make_thermal(0.0);
    const op_sequence seq{2, 2, op_order::add_then_subtract};
    auto [state, record] = transform(thermal(0.0, 20), seq);
    CHECK_THAT(norm_closed(vac, seq) * record.raw_trace, WithinAbs(1.0, 1e-12));
}

TEST_CASE("choose_cutoff policies", "[states]") {
    // thermal: smallest K with x^(K+1) < tol, plus p+q+10; x = 0.2 here
    const auto spec = state_spec::make_thermal(0.25);
    CHECK(choose_cutoff(spec, {2, 2, op_order::add_then_subtract}, 1e-14) == 20 + 14);

    const auto vac = state_spec::make_thermal(0.0);
    CHECK(choose_cutoff(vac, {3, 4, op_order::subtract_then_add}, 1e-14) == 0 + 3 + 4 + 10);

    // ECS: cumulative weight scan oracle, evaluated independently here
    const double a = 4.0;  // alpha = 2
    const double c2 = 1.0 / (2.0 + 2.0 * std::exp(-2.0 * a));
    double cumulative = 0.0;
    std::size_t k = 0;
    for (;; ++k) {
        if (k % 2 == 0)
            cumulative += 4.0 * c2 * std::exp(-a + k * std::log(a) - log_factorial(static_cast<std::int64_t>(k)));
        if (1.0 - cumulative < 1e-14) break;
    }
    const auto ecs = state_spec::make_even_coherent(2.0);
    CHECK(choose_cutoff(ecs, {0, 0, op_order::add_then_subtract}, 1e-14) == k + 10);

    CHECK_THROWS_AS(choose_cutoff(state_spec::make_thermal(1e6), {0, 0, op_order::add_then_subtract}, 1e-14),
                    cutoff_overflow);
    CHECK_THROWS_AS(choose_cutoff(spec, {0, 0, op_order::add_then_subtract}, 2.0), std::invalid_argument);
}
