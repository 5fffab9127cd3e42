#include <doctest.h>

#include <cmath>
#include <vector>

#include "bsa/kernels.hpp"
#include "bsa/polynomial.hpp"
#include "oracles.hpp"

using namespace bsa;

// The OpenMP kernels must reproduce the serial references exactly, whatever the worker count.

TEST_CASE("sensitivity profile: parallel == serial") {
    for (int workers : {1, 2, 3, 8}) {
        kernels::set_worker_count(workers);
        for (int n = 0; n <= 16; ++n) {
            const auto f = oracle::random_biased_function(n, static_cast<std::uint64_t>(n) * 31 + 7);
            CHECK(kernels::parallel::sensitivity_profile(f) == kernels::serial::sensitivity_profile(f));
        }
    }
    kernels::set_worker_count(1);
}

TEST_CASE("sensitivity profile at n = 20") {
    const auto maj = TruthTable::majority(19);
    CHECK(kernels::parallel::sensitivity_profile(maj) == kernels::serial::sensitivity_profile(maj));
    const auto f = oracle::random_function(20, 5);
    CHECK(kernels::parallel::sensitivity_profile(f) == kernels::serial::sensitivity_profile(f));
}

TEST_CASE("Walsh-Hadamard: parallel == serial, bit for bit") {
    for (int n : {1, 5, 12, 13, 14, 17, 20}) {
        Stream rng(42, static_cast<std::uint64_t>(n));
        std::vector<double> a(std::size_t{1} << n);
        for (auto& v : a) v = rng.normal();
        auto b = a;
        kernels::serial::walsh_hadamard(a);
        kernels::set_worker_count(4);
        kernels::parallel::walsh_hadamard(b);
        kernels::set_worker_count(1);
        CHECK(a == b);
    }
}

TEST_CASE("pairwise sum is independent of the worker count") {
    Stream rng(1, 2);
    std::vector<double> v(100'003);
    for (auto& x : v) x = rng.normal() * 1e3;
    const double ref = kernels::serial::pairwise_sum(v);
    for (int workers : {1, 2, 5, 16}) {
        kernels::set_worker_count(workers);
        CHECK(kernels::parallel::pairwise_sum(v) == ref);
    }
    kernels::set_worker_count(1);
    CHECK(kernels::serial::pairwise_sum(std::vector<double>{}) == 0.0);
}

TEST_CASE("sign table: parallel == serial") {
    for (int workers : {1, 3}) {
        kernels::set_worker_count(workers);
        for (int n = 1; n <= 14; ++n) {
            for (std::uint64_t seed = 0; seed < 3; ++seed) {
                GeneratorSpec g;
                g.kind = seed == 2 ? GeneratorKind::random_sparse : GeneratorKind::random_dense;
                g.n = n;
                g.degree = std::min(n, 1 + static_cast<int>(seed));
                g.terms = n;
                g.seed = seed * 100 + static_cast<std::uint64_t>(n);
                const auto p = generate(g);
                const auto s = kernels::serial::sign_table(p);
                const auto q = kernels::parallel::sign_table(p);
                CHECK(s.table == q.table);
                CHECK(s.zero_hits == q.zero_hits);
            }
        }
        // Integer coefficients: x1 - x2 x3 + x4 x5 x6 - x7 vanishes on many points.
        const SparsePolynomial ties(9, {{0b1, 1.0}, {0b110, -1.0}, {0b111000, 1.0}, {0b1000000, -1.0}});
        const auto s = kernels::serial::sign_table(ties);
        const auto q = kernels::parallel::sign_table(ties);
        CHECK(s.table == q.table);
        CHECK(s.zero_hits == q.zero_hits);
        CHECK(s.zero_hits == 512 * 6 / 16);
    }
    kernels::set_worker_count(1);
    // Even majority has exact ties.
    GeneratorSpec maj{GeneratorKind::majority, 8};
    const auto s = kernels::serial::sign_table(generate(maj));
    CHECK(s.zero_hits == 70);
    CHECK(kernels::parallel::sign_table(generate(maj)).zero_hits == 70);
}
