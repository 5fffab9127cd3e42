#include <doctest.h>

#include <cmath>

#include "bsa/error.hpp"
#include "bsa/kernels.hpp"
#include "bsa/restriction.hpp"
#include "oracles.hpp"

using namespace bsa;

namespace {

// Exact Pr_{rho ~ R_r}[sgn(x_1 + ... + x_n)_rho is not delta-close to a constant], summing over
// the free count l and the number j of fixed coordinates set to -1.
double majority_failure_exact(int n, double r, double delta) {
    double total = 0.0;
    for (int l = 0; l <= n; ++l) {
        const double p_l = oracle::binomial(n, l) * std::pow(r, l) * std::pow(1.0 - r, n - l);
        for (int j = 0; j <= n - l; ++j) {
            const double p_j = oracle::binomial(n - l, j) / std::ldexp(1.0, n - l);
            const int fixed_sum = (n - l) - 2 * j;
            double minus = 0.0;
            for (int w = 0; w <= l; ++w) {
                if (fixed_sum + l - 2 * w < 0) minus += oracle::binomial(l, w);
            }
            const double points = std::ldexp(1.0, l);
            const double closeness = std::min(minus, points - minus) / points;
            if (closeness > delta) total += p_l * p_j;
        }
    }
    return total;
}

} // namespace

TEST_CASE("Restriction basics") {
    const Restriction rho(4, {Slot::free, Slot::minus, Slot::free, Slot::plus});
    CHECK(rho.free_count() == 2);
    CHECK(rho.free_mask() == 0b0101);
    CHECK(rho.fixed_bits() == 0b0010);
    CHECK(rho.complete(0b00) == 0b0010);
    CHECK(rho.complete(0b11) == 0b0111);
    CHECK_THROWS_AS(Restriction(3, {Slot::free}), InputError);
}

TEST_CASE("sample_restriction") {
    CHECK(sample_restriction(12, 0.4, 5) == sample_restriction(12, 0.4, 5));
    CHECK_THROWS_AS(sample_restriction(5, 0.0, 1), InputError);
    CHECK_THROWS_AS(sample_restriction(5, 1.0, 1), InputError);

    SUBCASE("free count is Binomial(n, r)") {
        Stream rng(2024, 0);
        double sum = 0.0;
        double plus = 0.0;
        double fixed = 0.0;
        const int samples = 100'000;
        for (int s = 0; s < samples; ++s) {
            const auto rho = sample_restriction(10, 0.3, rng);
            sum += rho.free_count();
            for (auto slot : rho.pattern()) {
                if (slot == Slot::plus) plus += 1;
                if (slot != Slot::free) fixed += 1;
            }
        }
        const double mean = sum / samples;
        const double sigma = std::sqrt(10 * 0.3 * 0.7 / samples);
        CHECK(std::abs(mean - 3.0) <= 4.0 * sigma);
        CHECK(std::abs(plus / fixed - 0.5) <= 4.0 * std::sqrt(0.25 / fixed));
    }
    SUBCASE("tiny r leaves everything fixed") {
        Stream rng(7, 0);
        double sum = 0.0;
        for (int s = 0; s < 100'000; ++s) sum += sample_restriction(20, 1e-9, rng).free_count();
        CHECK(sum / 100'000 <= 20 * 1e-9 + 4.0 * std::sqrt(20 * 1e-9 / 100'000));
    }
}

TEST_CASE("restrict_table") {
    const auto par = TruthTable::parity(5, 0b11);
    const auto r1 = restrict_table(par, Restriction(5, {Slot::free, Slot::plus, Slot::free, Slot::free, Slot::free}));
    CHECK(r1 == TruthTable::parity(4, 0b1));

    const auto maj5 = TruthTable::majority(5);
    Restriction all_fixed(5, {Slot::minus, Slot::minus, Slot::plus, Slot::plus, Slot::minus});
    const auto r0 = restrict_table(maj5, all_fixed);
    CHECK(r0.n() == 0);
    CHECK(r0.value(0) == maj5.value(all_fixed.complete(0)));

    // x4 = x5 = +1: sgn(y1 + y2 + y3 + 2) is -1 only at y = (-1, -1, -1).
    const auto r2 = restrict_table(maj5, Restriction(5, {Slot::free, Slot::free, Slot::free, Slot::plus, Slot::plus}));
    for (Point y = 0; y < 8; ++y) {
        const auto v = oracle::point(3, y);
        CHECK(r2.value(y) == ((v[0] + v[1] + v[2] + 2) < 0 ? -1 : 1));
    }
    CHECK(r2.count_minus() == 1);

    SUBCASE("sign_table and restriction commute") {
        Stream rng(31, 0);
        for (int trial = 0; trial < 1000; ++trial) {
            const int n = 1 + trial % 10;
            GeneratorSpec g{GeneratorKind::random_dense, n, {}, std::min(n, 2), 1, static_cast<std::uint64_t>(trial % 50)};
            const auto p = generate(g);
            const auto rho = sample_restriction(n, 0.5, rng);
            CHECK(sign_table(restrict_poly(p, rho)).table == restrict_table(sign_table(p).table, rho));
        }
    }
}

TEST_CASE("closeness_to_constant") {
    auto c = closeness_to_constant(TruthTable::constant(3, -1));
    CHECK(c.delta_star == 0.0);
    CHECK(c.best_sign == -1);
    c = closeness_to_constant(TruthTable::dictator(2, 0));
    CHECK(c.delta_star == 0.5);
    CHECK(c.best_sign == 1);
    c = closeness_to_constant(TruthTable::majority(3));
    CHECK(c.delta_star == 0.5);
    CHECK(c.best_sign == 1);
    c = closeness_to_constant(TruthTable::constant(0, 1));
    CHECK(c.delta_star == 0.0);
}

TEST_CASE("restriction_failure_prob") {
    SparsePolynomial constant(6, {{0, 1.5}});
    for (double r : {0.01, 0.5, 0.9}) CHECK(restriction_failure_prob(constant, r, 0.05, 500, 1).value == 0.0);

    SUBCASE("dictator fails exactly when its coordinate is free") {
        const SparsePolynomial dictator(8, {{1, 1.0}});
        for (double r : {0.02, 1.0 / 16, 0.25, 0.6}) {
            for (std::uint64_t seed : {1u, 2u, 3u}) {
                const auto e = restriction_failure_prob(dictator, r, 0.1, 20'000, seed);
                CHECK(std::abs(e.value - r) <= 4.0 * e.std_error);
                CHECK(e.rejected == 0);
            }
        }
    }
    SUBCASE("majority on 16 variables against the exact sum over restrictions") {
        const auto maj = generate({GeneratorKind::majority, 16});
        double previous = 2.0;
        for (double r : {0.25, 1.0 / 16, 1.0 / 64}) {
            const auto e = restriction_failure_prob(maj, r, 1.0 / 16, 100'000, 9);
            const double exact = majority_failure_exact(16, r, 1.0 / 16);
            CHECK(std::abs(e.value - exact) <= 4.0 * e.std_error + 1e-12);
            CHECK(e.value <= previous);
            previous = e.value;
        }
    }
    SUBCASE("regime flag and rejection accounting") {
        // With 60 variables and r = 0.9 essentially every sample keeps more than 24 free.
        const auto maj = generate({GeneratorKind::majority, 60});
        const auto e = restriction_failure_prob(maj, 0.9, 0.2, 2000, 4);
        CHECK(e.outside_regime);
        CHECK(e.rejected == 2000);
        CHECK(e.accepted == 0);
        CHECK(e.rejection_rate() == 1.0);
        const auto mixed = restriction_failure_prob(generate({GeneratorKind::majority, 26}), 0.3, 0.2, 400, 4);
        CHECK(mixed.accepted + mixed.rejected == 400);
        CHECK_FALSE(restriction_failure_prob(maj, 1.0 / 32, 1.0 / 32, 10, 4).outside_regime);
    }
    SUBCASE("deterministic per seed") {
        const auto p = generate({GeneratorKind::random_dense, 14, {}, 2, 1, 3});
        const auto a = restriction_failure_prob(p, 0.2, 0.05, 3000, 11);
        kernels::set_worker_count(3);
        const auto b = restriction_failure_prob(p, 0.2, 0.05, 3000, 11);
        kernels::set_worker_count(1);
        CHECK(a.value == b.value);
    }
}

TEST_CASE("tail_coupling_check") {
    SUBCASE("full parity at m = n") {
        for (int n = 1; n <= 10; ++n) {
            const auto rep = tail_coupling_check(TruthTable::parity(n, (Point{1} << n) - 1), n);
            CHECK(rep.p_E == 1.0);
            CHECK(rep.coupling_lb == doctest::Approx(1.0 - std::pow(1.0 - 1.0 / n, n)));
            CHECK(rep.coupling_lb >= 1.0 - std::exp(-1.0));
            CHECK(rep.floor_certified);
            CHECK(rep.e_bound_certified);
        }
    }
    SUBCASE("constant") {
        const auto rep = tail_coupling_check(TruthTable::constant(4, 1), 2);
        CHECK(rep.p_E == 0.0);
        CHECK(rep.coupling_lb == 0.0);
        CHECK(rep.floor_certified);
    }
    SUBCASE("MAJ_5 at m = 3") {
        const auto rep = tail_coupling_check(TruthTable::majority(5), 3);
        CHECK(rep.p_E == 20.0 / 32.0);
        CHECK(rep.coupling_lb == doctest::Approx(20.0 / 32.0 * 19.0 / 27.0).epsilon(1e-15));
        CHECK(rep.bound_ratio == doctest::Approx(19.0 / 27.0));
    }
    SUBCASE("random functions: coupling_lb >= (1 - 1/e) p_E") {
        for (std::uint64_t seed = 0; seed < 60; ++seed) {
            const int n = 1 + static_cast<int>(seed % 12);
            const auto prof = sensitivity_profile(oracle::random_biased_function(n, seed));
            for (int m = 1; m <= n; ++m) {
                const auto rep = tail_coupling_check(prof, m);
                CHECK(rep.floor_certified);
                CHECK(rep.e_bound_certified);
                CHECK(rep.coupling_lb <= rep.p_E);
                CHECK(rep.coupling_lb >= 0.0);
            }
        }
    }
    CHECK_THROWS_AS(tail_coupling_check(TruthTable::majority(3), 0), InputError);
    CHECK_THROWS_AS(tail_coupling_check(TruthTable::majority(3), 4), InputError);
}

TEST_CASE("closeness_census") {
    const auto one = closeness_census(1);
    CHECK(one.functions_checked == 4);
    CHECK(one.violations == 0);
    CHECK(one.max_ratio == 1.0);
    CHECK(sensitivity_profile(one.witness).counts[1] == 2);

    for (int ell = 2; ell <= 4; ++ell) {
        const auto rep = closeness_census(ell);
        CHECK(rep.functions_checked == (std::uint64_t{1} << (1 << ell)));
        CHECK(rep.violations == 0);
        CHECK(rep.max_ratio <= 1.0);
    }
    // The dictator on two variables: Pr[s >= 1] = 1 <= 3 * 1/2.
    const auto d = TruthTable::dictator(2, 0);
    CHECK(sensitivity_profile(d).tail_count(1) == 4);
    CHECK(closeness_to_constant(d).delta_star == 0.5);
    CHECK_THROWS_AS(closeness_census(5), CapacityError);
}
