#include <catch2/catch_amalgamated.hpp>

#include "ocnn/classifier.hpp"
#include "support/oracles.hpp"

using namespace ocnn;
using Catch::Approx;

namespace {

NormalizationParams dummy_norm(std::size_t d) {
    return {std::vector<double>(d, 0.0), std::vector<double>(d, 1.0)};
}

} // namespace

TEST_CASE("score on hand-worked cases") {
    SECTION("two training rows, J=K=1") {
        const OcnnModel m(FeatureMatrix::from_rows({{0, 0}, {0, 1}}), OcnnParams::nn11(),
                          dummy_norm(2));
        const auto s = m.score(std::vector<double>{0, 3});
        CHECK(s.dbar_j == 2.0);
        CHECK(s.dbar_k == 1.0);
        CHECK(s.ratio == 2.0);
    }
    SECTION("three training rows, J=K=2") {
        const OcnnModel m(FeatureMatrix::from_rows({{0, 0}, {1, 0}, {0, 1}}),
                          OcnnParams::jknn(2, 2), dummy_norm(2));
        const auto s = m.score(std::vector<double>{2, 0});
        CHECK(s.dbar_j == Approx(1.5).epsilon(1e-12));
        CHECK(s.dbar_k == Approx((3.0 + std::sqrt(2.0)) / 4.0).epsilon(1e-12));
        CHECK(s.ratio == Approx(6.0 / (3.0 + std::sqrt(2.0))).epsilon(1e-12));
    }
    SECTION("query duplicating a duplicated training row") {
        const OcnnModel m(FeatureMatrix::from_rows({{0, 0}, {0, 0}, {5, 5}}), OcnnParams::nn11(),
                          dummy_norm(2));
        const auto s = m.score(std::vector<double>{0, 0});
        CHECK(s.dbar_j == 0.0);
        CHECK(s.dbar_k == 0.0);
        CHECK(s.ratio == 0.0);
        CHECK(OcnnModel(m.train(), OcnnParams::nn11(0.1), dummy_norm(2))
                  .classify(std::vector<double>{0, 0}) == Decision::accept);
    }
    SECTION("zero denominator with positive numerator") {
        const OcnnModel m(FeatureMatrix::from_rows({{0, 0}, {0, 0}}), OcnnParams::nn11(100.0),
                          dummy_norm(2));
        const auto s = m.score(std::vector<double>{1, 0});
        CHECK(std::isinf(s.ratio));
        CHECK(m.classify(std::vector<double>{1, 0}) == Decision::reject);
    }
}

TEST_CASE("decision rule is a strict threshold") {
    const auto train = FeatureMatrix::from_rows({{0, 0}, {0, 1}});
    const std::vector<double> z{0, 3}; // ratio exactly 2
    CHECK(OcnnModel(train, OcnnParams::nn11(1.0), dummy_norm(2)).classify(z) == Decision::reject);
    CHECK(OcnnModel(train, OcnnParams::nn11(2.5), dummy_norm(2)).classify(z) == Decision::accept);
    CHECK(OcnnModel(train, OcnnParams::nn11(2.0), dummy_norm(2)).classify(z) == Decision::reject);
}

TEST_CASE("batch classification is elementwise") {
    RandomStream rs(3);
    const auto train = oracle::random_cloud(rs, 12, 3);
    const OcnnModel m(train, OcnnParams::jknn(2, 3), dummy_norm(3));

    CHECK(m.classify_batch(FeatureMatrix(3)).empty());

    const auto queries = oracle::random_cloud(rs, 3, 3);
    const auto batch = m.classify_batch(queries);
    REQUIRE(batch.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) CHECK(batch[i] == m.classify(queries.row(i)));
}

TEST_CASE("parameter validation") {
    const auto train = FeatureMatrix::from_rows({{0, 0}, {1, 1}, {2, 2}});
    CHECK_THROWS_AS(OcnnModel(train, OcnnParams::jknn(4, 1), dummy_norm(2)), ParameterError);
    CHECK_THROWS_AS(OcnnModel(train, OcnnParams::jknn(1, 3), dummy_norm(2)), ParameterError);
    CHECK_THROWS_AS(OcnnModel(train, OcnnParams::nn11(0.0), dummy_norm(2)), ParameterError);
    CHECK_THROWS_AS(OcnnModel(train, OcnnParams::nn11(-1.0), dummy_norm(2)), ParameterError);
    CHECK_NOTHROW(OcnnModel(train, OcnnParams::jknn(3, 2), dummy_norm(2)));
}

TEST_CASE("score matches the definition-level oracle") {
    for (std::uint64_t seed = 0; seed < 15; ++seed) {
        RandomStream rs(seed);
        const std::size_t n = 8 + rs.uniform_below(40);
        const std::size_t d = 2 + rs.uniform_below(5);
        const auto train = oracle::random_cloud(rs, n, d);
        const std::size_t j = 1 + rs.uniform_below(std::min<std::size_t>(n, 6));
        const std::size_t k = 1 + rs.uniform_below(std::min<std::size_t>(n - 1, 6));
        const OcnnModel m(train, OcnnParams::jknn(j, k), dummy_norm(d));
        std::vector<double> z(d);
        for (auto& v : z) v = rs.uniform01();
        const auto got = m.score(z);
        const auto want = oracle::score(train, z, j, k);
        CHECK(got.dbar_j == Approx(want.dbar_j).margin(1e-12));
        CHECK(got.dbar_k == Approx(want.dbar_k).margin(1e-12));
    }
}

TEST_CASE("J=K=1 reduces to the nearest-neighbour distance rule") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        RandomStream rs(100 + seed);
        const auto train = oracle::random_cloud(rs, 10 + rs.uniform_below(30), 3);
        const OcnnModel m(train, OcnnParams::nn11(), dummy_norm(3));
        std::vector<double> z{rs.uniform01(), rs.uniform01(), rs.uniform01()};
        const auto nn1 = knn_query(train, z, 1);
        const auto nn2 = knn_query(train, train.row(nn1.indices[0]), 1, nn1.indices[0]);
        const auto s = m.score(z);
        CHECK(s.dbar_j == nn1.distances[0]);
        CHECK(s.dbar_k == nn2.distances[0]);
    }
}

TEST_CASE("denominator mean is non-decreasing in K") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        RandomStream rs(200 + seed);
        const std::size_t n = 12 + rs.uniform_below(30);
        const auto train = oracle::random_cloud(rs, n, 4);
        std::vector<double> z{rs.uniform01(), rs.uniform01(), rs.uniform01(), rs.uniform01()};
        const std::size_t j = 1 + rs.uniform_below(4);
        double prev = 0.0;
        for (std::size_t k = 1; k <= 8; ++k) {
            const OcnnModel m(train, OcnnParams::jknn(j, k), dummy_norm(4));
            const double dk = m.score(z).dbar_k;
            CHECK(dk >= prev - 1e-12);
            prev = dk;
        }
    }
}

TEST_CASE("acceptance at theta=1 nests from 11NN into 1KNN") {
    for (std::uint64_t seed = 0; seed < 12; ++seed) {
        RandomStream rs(300 + seed);
        const std::size_t n = 15 + rs.uniform_below(50);
        const auto train = oracle::random_cloud(rs, n, 3);
        const auto queries = oracle::random_cloud(rs, 25, 3);
        const OcnnModel base(train, OcnnParams::nn11(), dummy_norm(3));
        const auto base_dec = base.classify_batch(queries);
        for (std::size_t k = 2; k <= 8; ++k) {
            const OcnnModel wide(train, OcnnParams::nn1k(k), dummy_norm(3));
            const auto wide_dec = wide.classify_batch(queries);
            for (std::size_t q = 0; q < queries.rows(); ++q)
                if (base_dec[q] == Decision::accept) CHECK(wide_dec[q] == Decision::accept);
        }
    }
}

TEST_CASE("accepted set grows with theta") {
    const double thetas[] = {0.25, 0.5, 1.0, 2.0, 4.0};
    for (std::uint64_t seed = 0; seed < 12; ++seed) {
        RandomStream rs(400 + seed);
        const auto train = oracle::random_cloud(rs, 20 + rs.uniform_below(40), 3);
        const auto queries = oracle::random_cloud(rs, 25, 3);
        std::vector<Decision> prev;
        for (double theta : thetas) {
            const OcnnModel m(train, OcnnParams::jknn(2, 2, theta), dummy_norm(3));
            const auto dec = m.classify_batch(queries);
            if (!prev.empty())
                for (std::size_t q = 0; q < dec.size(); ++q)
                    if (prev[q] == Decision::accept) CHECK(dec[q] == Decision::accept);
            prev = dec;
        }
    }
}

TEST_CASE("decisions are invariant under uniform scaling") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        RandomStream rs(500 + seed);
        const std::size_t n = 10 + rs.uniform_below(30);
        const auto train = oracle::random_cloud(rs, n, 3);
        const double c = 3.75;
        FeatureMatrix scaled(3);
        std::vector<double> row(3);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < 3; ++j) row[j] = c * train(i, j);
            scaled.append_row(row);
        }
        const OcnnModel m1(train, OcnnParams::jknn(2, 2, 1.3), dummy_norm(3));
        const OcnnModel m2(scaled, OcnnParams::jknn(2, 2, 1.3), dummy_norm(3));
        for (int q = 0; q < 20; ++q) {
            std::vector<double> z{rs.uniform01(), rs.uniform01(), rs.uniform01()};
            std::vector<double> zc{c * z[0], c * z[1], c * z[2]};
            const auto s1 = m1.score(z);
            const auto s2 = m2.score(zc);
            if (std::isfinite(s1.ratio))
                CHECK(s2.ratio == Approx(s1.ratio).epsilon(1e-9));
            CHECK(m1.classify(z) == m2.classify(zc));
        }
    }
}
