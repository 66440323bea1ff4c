#include <cmath>
#include <vector>

#include "doctest.h"
#include "seqdisc/gram.hpp"

using namespace seqdisc;

TEST_CASE("structured overlap matrix entries follow the mismatch count") {
    SymMatrix g = gram_structured(3, 2, 0.5);
    REQUIRE(g.dim() == 9);
    // Sequences in lexicographic order: index 0 = (1,1), 1 = (1,2), 4 = (2,2).
    CHECK(g(0, 0) == 1.0);
    CHECK(g(0, 1) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(g(0, 4) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(g(1, 4) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(g.trace() == doctest::Approx(9.0).epsilon(1e-15));

    CHECK_THROWS_AS(gram_structured(1, 2, 0.5), std::domain_error);
    CHECK_THROWS_AS(gram_structured(2, 0, 0.5), std::domain_error);
    CHECK_THROWS_AS(gram_structured(2, 11, 0.5), capacity_error);
}

TEST_CASE("uniform off-diagonal eigenvalues in closed form") {
    auto eigs = uniform_offdiag_eigs(3, 0.5);
    REQUIRE(eigs.size() == 2);
    CHECK(eigs[0].first == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(eigs[0].second == 2);
    CHECK(eigs[1].first == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(eigs[1].second == 1);

    auto shifted = uniform_offdiag_eigs(4, -0.2);
    REQUIRE(shifted.size() == 2);
    CHECK(shifted[0].first == doctest::Approx(1.2).epsilon(1e-15));
    CHECK(shifted[0].second == 3);
    CHECK(shifted[1].first == doctest::Approx(0.4).epsilon(1e-12));
    CHECK(shifted[1].second == 1);

    auto merged = uniform_offdiag_eigs(3, 0.0);
    REQUIRE(merged.size() == 1);
    CHECK(merged[0].first == 1.0);
    CHECK(merged[0].second == 3);

    CHECK_THROWS_AS(uniform_offdiag_eigs(0, 0.5), std::domain_error);
}

TEST_CASE("sequence spectrum at N=3, k=2, s=1/2") {
    GramSpectrum spec = structured_spectrum(3, 2, 0.5);
    REQUIRE(spec.entries.size() == 3);

    // Entries are listed with a (the power of 1-s) ascending.
    CHECK(spec.entries[0].a == 0);
    CHECK(spec.entries[0].b == 2);
    CHECK(spec.entries[0].value == doctest::Approx(4.0).epsilon(1e-15));
    CHECK(spec.entries[0].multiplicity == 1);

    CHECK(spec.entries[1].a == 1);
    CHECK(spec.entries[1].b == 1);
    CHECK(spec.entries[1].value == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(spec.entries[1].multiplicity == 4);

    CHECK(spec.entries[2].a == 2);
    CHECK(spec.entries[2].b == 0);
    CHECK(spec.entries[2].value == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(spec.entries[2].multiplicity == 4);

    CHECK(spec.total_multiplicity() == 9);
    CHECK(spec.weighted_value_sum() == doctest::Approx(9.0).epsilon(1e-12));
}

TEST_CASE("spectrum structure holds across the window") {
    for (int n : {2, 3, 4}) {
        for (int k : {1, 2, 3}) {
            for (double s : {-0.2, 0.15, 0.8}) {
                GramSpectrum spec = structured_spectrum(n, k, s);
                REQUIRE(spec.entries.size() == static_cast<std::size_t>(k) + 1);
                const double n_to_k = std::pow(n, k);
                CHECK(spec.total_multiplicity() == static_cast<std::int64_t>(n_to_k));
                // The trace of the overlap matrix is its dimension.
                CHECK(spec.weighted_value_sum() == doctest::Approx(n_to_k).epsilon(1e-12));
                for (const SpectrumEntry& e : spec.entries) {
                    CHECK(e.a + e.b == k);
                    const double want =
                        std::pow(1.0 - s, e.a) * std::pow(1.0 + (n - 1) * s, e.b);
                    CHECK(e.value == doctest::Approx(want).epsilon(1e-14));
                }
            }
        }
    }
}

TEST_CASE("zero overlap collapses the spectrum to one entry") {
    GramSpectrum spec = structured_spectrum(3, 2, 0.0);
    REQUIRE(spec.entries.size() == 1);
    CHECK(spec.entries[0].a == 0);
    CHECK(spec.entries[0].b == 2);
    CHECK(spec.entries[0].value == 1.0);
    CHECK(spec.entries[0].multiplicity == 9);
}

TEST_CASE("closed-form spectrum matches the numeric eigenvalues") {
    for (double s : {-0.45, 0.3, 0.9}) {
        CrosscheckReport rep = spectrum_crosscheck(3, 2, s, 1e-9);
        CHECK(rep.pass);
        CHECK(rep.compared == 9);
        CHECK(rep.worst_deviation <= 1e-9);
    }
    CrosscheckReport negative = spectrum_crosscheck(2, 3, -0.9, 1e-9);
    CHECK(negative.pass);
    CHECK(negative.compared == 8);

    CrosscheckReport wide = spectrum_crosscheck(4, 2, -0.3, 1e-9);
    CHECK(wide.pass);
    CHECK(wide.compared == 16);
}
