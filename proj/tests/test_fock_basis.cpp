// test_fock_basis.cpp

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <vector>

#include "sbnm/errors.hpp"
#include "sbnm/fock_basis.hpp"

using namespace sbnm;
using namespace sbnm::exact;

namespace {

// All occupation vectors with Σn ≤ n_exc (and n_k ≤ cap), by brute-force odometer.
std::vector<std::vector<int>> enumerate(std::size_t modes, int n_exc, int cap) {
    std::vector<std::vector<int>> out;
    std::vector<int> occ(modes, 0);
    while (true) {
        if (std::accumulate(occ.begin(), occ.end(), 0) <= n_exc) out.push_back(occ);
        std::size_t k = 0;
        while (k < modes && ++occ[k] > cap) occ[k++] = 0;
        if (k == modes) break;
    }
    return out;
}

std::size_t binom(std::size_t n, std::size_t k) {
    double r = 1.0;
    for (std::size_t i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
    return static_cast<std::size_t>(std::llround(r));
}

} // namespace

TEST_CASE("configuration counts") {
    CHECK(count_configurations(5, {2, std::nullopt}) == binom(7, 2));
    CHECK(count_configurations(100, {3, std::nullopt}) == binom(103, 3));
    CHECK(count_configurations(3, {3, 1}) == 8);
    CHECK(count_configurations(1, {2, 2}) == 3);
    CHECK(count_configurations(7, {0, std::nullopt}) == 1);
    // saturates instead of overflowing
    CHECK(count_configurations(100000, {40, std::nullopt}) == std::numeric_limits<std::size_t>::max());
}

TEST_CASE("truncation validation") {
    CHECK_THROWS_AS(FockTruncation({-1, std::nullopt}).validate(), ConfigError);
    CHECK_THROWS_AS(FockTruncation({2, 0}).validate(), ConfigError);
    CHECK_THROWS_AS(FockBasis(10, {4, std::nullopt}, 100), ResourceError);
}

TEST_CASE("basis matches brute-force enumeration") {
    for (const auto& [modes, n_exc, cap] : std::vector<std::tuple<std::size_t, int, int>>{
             {1, 2, 2}, {3, 3, 3}, {4, 3, 1}, {5, 2, 2}, {6, 4, 2}, {3, 6, 6}}) {
        const FockTruncation trunc{n_exc, cap < n_exc ? std::optional<int>(cap) : std::nullopt};
        const FockBasis basis(modes, trunc, 1'000'000);
        const auto ref = enumerate(modes, n_exc, cap);
        REQUIRE(basis.size() == ref.size());
        CHECK(basis.size() == count_configurations(modes, trunc));

        std::vector<std::vector<int>> seen;
        for (std::size_t i = 0; i < basis.size(); ++i) {
            const auto occ = basis.occupation(i);
            const int total = std::accumulate(occ.begin(), occ.end(), 0);
            CHECK(total == basis.total_excitations(i));
            CHECK(i >= basis.sector_begin(total));
            CHECK(i < basis.sector_begin(total + 1));
            CHECK(basis.index_of(occ) == i);
            seen.push_back(occ);
        }
        std::sort(seen.begin(), seen.end());
        auto sorted_ref = ref;
        std::sort(sorted_ref.begin(), sorted_ref.end());
        CHECK(seen == sorted_ref);
        CHECK(basis.occupation(0) == std::vector<int>(modes, 0));
    }
}

TEST_CASE("index_of rejects configurations outside the truncation") {
    const FockBasis basis(4, {2, std::nullopt}, 1000);
    CHECK_FALSE(basis.index_of(std::vector<int>{1, 1, 1, 0}).has_value());
    CHECK_FALSE(basis.index_of(std::vector<int>{0, -1, 0, 0}).has_value());
    const FockBasis capped(4, {3, 1}, 1000);
    CHECK_FALSE(capped.index_of(std::vector<int>{2, 0, 0, 0}).has_value());
    CHECK(capped.index_of(std::vector<int>{1, 0, 1, 1}).has_value());
}

TEST_CASE("enumeration is deterministic") {
    const FockBasis a(6, {3, std::nullopt}, 10000), b(6, {3, std::nullopt}, 10000);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a.occupation(i) == b.occupation(i));
}

TEST_CASE("lowering edges are the matrix elements of the annihilators") {
    const FockBasis basis(4, {4, 3}, 10000);
    std::size_t total = 0;
    for (std::size_t i = 0; i < basis.size(); ++i) {
        const auto occ = basis.occupation(i);
        const auto edges = basis.edges(i);
        const auto occupied = std::count_if(occ.begin(), occ.end(), [](int n) { return n > 0; });
        CHECK(edges.size() == static_cast<std::size_t>(occupied));
        for (const auto& e : edges) {
            auto lowered = occ;
            REQUIRE(lowered[e.mode] > 0);
            CHECK(e.sqrt_n == doctest::Approx(std::sqrt(lowered[e.mode])).epsilon(1e-15));
            lowered[e.mode] -= 1;
            CHECK(basis.index_of(lowered) == e.parent);
        }
        total += edges.size();
    }
    CHECK(total == basis.edge_count());
}
