#include <doctest.h>

#include <cmath>
#include <random>

#include "gait/kernels.hpp"
#include "oracles.hpp"

using namespace gait;

TEST_CASE("build_gram matches direct kernel evaluation") {
    Eigen::MatrixXd pts(2, 1);
    pts << 0.0, 1.0;
    const SimilaritySpace space = build_gram(pts, KernelSpec::exp_metric(1.0));
    CHECK(space.K(0, 0) == 1.0);
    CHECK(space.K(1, 1) == 1.0);
    CHECK(space.K(0, 1) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
    CHECK(space.K(0, 1) == space.K(1, 0));
}

TEST_CASE("single point gives the 1x1 identity") {
    Eigen::MatrixXd pts(1, 3);
    pts << 0.5, -2.0, 7.0;
    for (const auto& spec : {KernelSpec::rbf_sq(0.3), KernelSpec::exp_metric(2.0),
                             KernelSpec::polynomial(1.5)}) {
        const SimilaritySpace space = build_gram(pts, spec);
        CHECK(space.size() == 1);
        CHECK(space.K(0, 0) == 1.0);
    }
}

TEST_CASE("explicit three-point matrix with two similar elements") {
    Eigen::MatrixXd K(3, 3);
    K << 1.0, 0.7, 0.1,
         0.7, 1.0, 0.1,
         0.1, 0.1, 1.0;
    const SimilaritySpace space = SimilaritySpace::from_matrix(K);
    CHECK(space.K == K);
    CHECK(space.provenance == SimilaritySpace::Provenance::explicit_matrix);
}

TEST_CASE("explicit matrices are validated") {
    Eigen::MatrixXd bad_diag(2, 2);
    bad_diag << 0.9, 0.2, 0.2, 1.0;
    CHECK_THROWS_AS((void)SimilaritySpace::from_matrix(bad_diag), std::invalid_argument);

    Eigen::MatrixXd asym(2, 2);
    asym << 1.0, 0.2, 0.3, 1.0;
    CHECK_THROWS_AS((void)SimilaritySpace::from_matrix(asym), std::invalid_argument);

    Eigen::MatrixXd out_of_range(2, 2);
    out_of_range << 1.0, 1.4, 1.4, 1.0;
    CHECK_THROWS_AS((void)SimilaritySpace::from_matrix(out_of_range), std::invalid_argument);
}

TEST_CASE("build_gram rejects bad input") {
    Eigen::MatrixXd pts(2, 2);
    pts << 0.0, 1.0, std::nan(""), 0.0;
    CHECK_THROWS_AS((void)build_gram(pts, KernelSpec::rbf_sq(1.0)), std::invalid_argument);
    Eigen::MatrixXd ok(2, 2);
    ok << 0.0, 1.0, 1.0, 0.0;
    CHECK_THROWS_AS((void)KernelSpec::rbf_sq(0.0), std::invalid_argument);
    CHECK_THROWS_AS((void)KernelSpec::rbf_sq(-1.0), std::invalid_argument);
    CHECK_THROWS_AS((void)KernelSpec::polynomial(0.0), std::invalid_argument);
    CHECK_THROWS_AS((void)KernelSpec::exp_metric(1.0, 0.5), std::invalid_argument);
}

TEST_CASE("duplicate points yield identical rows") {
    Eigen::MatrixXd pts(3, 2);
    pts << 0.4, -1.0,
           0.4, -1.0,
           2.0, 0.5;
    const SimilaritySpace space = build_gram(pts, KernelSpec::polynomial(1.5));
    CHECK((space.K.row(0) - space.K.row(1)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("block gram matches the per-pair oracle") {
    std::mt19937_64 eng(7);
    const Eigen::MatrixXd x = oracle::random_points(eng, 3, 2);
    const Eigen::MatrixXd y = oracle::random_points(eng, 2, 2);
    const KernelSpec spec = KernelSpec::rbf_sq(1.0);
    const BlockGram blocks = build_block_gram(x, y, spec);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 2; ++j) {
            const double expected = std::exp(-(x.row(i) - y.row(j)).squaredNorm() / 2.0);
            CHECK(blocks.K_xy(i, j) == doctest::Approx(expected).epsilon(1e-14));
        }
    CHECK(blocks.K_xx.isApprox(build_gram(x, spec).K));
    CHECK(blocks.K_yy.isApprox(build_gram(y, spec).K));
}

TEST_CASE("block gram with identical supports recovers the square gram") {
    std::mt19937_64 eng(11);
    const Eigen::MatrixXd x = oracle::random_points(eng, 4, 3);
    const BlockGram blocks = build_block_gram(x, x, KernelSpec::exp_metric(0.7));
    CHECK((blocks.K_xy - blocks.K_xx).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("one-point blocks evaluate the kernel directly") {
    Eigen::MatrixXd x(1, 1), y(1, 1);
    x << 0.0;
    y << 1.7;
    const BlockGram blocks = build_block_gram(x, y, KernelSpec::exp_metric(1.0));
    CHECK(blocks.K_xy(0, 0) == doctest::Approx(std::exp(-1.7)).epsilon(1e-15));
}

TEST_CASE("dimension mismatch is rejected") {
    Eigen::MatrixXd x(2, 2), y(2, 3);
    x.setZero();
    y.setZero();
    CHECK_THROWS_AS((void)build_block_gram(x, y, KernelSpec::rbf_sq(1.0)),
                    std::invalid_argument);
}

TEST_CASE("gram invariants hold on random point sets for every family") {
    std::mt19937_64 eng(123);
    std::uniform_int_distribution<int> n_dist(1, 8), d_dist(1, 3);
    std::uniform_real_distribution<double> sigma_dist(0.2, 3.0);
    const int runs_per_family = 334;
    for (int family = 0; family < 3; ++family) {
        for (int run = 0; run < runs_per_family; ++run) {
            const int n = n_dist(eng);
            const int d = d_dist(eng);
            const Eigen::MatrixXd pts = oracle::random_points(eng, n, d, 2.0);
            KernelSpec spec;
            if (family == 0) spec = KernelSpec::rbf_sq(sigma_dist(eng));
            if (family == 1) spec = KernelSpec::exp_metric(sigma_dist(eng), 1.0 + run % 3);
            if (family == 2) spec = KernelSpec::polynomial(0.5 + 0.5 * (run % 4));
            const SimilaritySpace space = build_gram(pts, spec);
            REQUIRE((space.K - space.K.transpose()).cwiseAbs().maxCoeff() == 0.0);
            REQUIRE(space.K.diagonal().isOnes());
            REQUIRE(space.K.minCoeff() >= 0.0);
            REQUIRE(space.K.maxCoeff() <= 1.0);
        }
    }
}

TEST_CASE("exp_metric satisfies multiplicative transitivity") {
    std::mt19937_64 eng(321);
    for (int run = 0; run < 200; ++run) {
        const Eigen::MatrixXd pts = oracle::random_points(eng, 3, 2, 3.0);
        const double order = 1.0 + (run % 3);
        const SimilaritySpace space = build_gram(pts, KernelSpec::exp_metric(0.8, order));
        CHECK(space.K(0, 1) >= space.K(0, 2) * space.K(2, 1) - 1e-12);
    }
}

TEST_CASE("kernel gradients: closed forms") {
    Eigen::VectorXd x(2), y(2);
    x << 1.0, 0.0;
    y << 0.0, 0.0;

    SUBCASE("rbf at coincident points is the zero vector") {
        bool degenerate = true;
        const Eigen::VectorXd g = kernel_grad_x(y, y, KernelSpec::rbf_sq(1.0), &degenerate);
        CHECK(g.norm() == 0.0);
        CHECK_FALSE(degenerate);
    }
    SUBCASE("rbf unit offset") {
        const Eigen::VectorXd g = kernel_grad_x(x, y, KernelSpec::rbf_sq(1.0));
        CHECK(g[0] == doctest::Approx(-std::exp(-0.5)).epsilon(1e-12));
        CHECK(g[1] == 0.0);
    }
    SUBCASE("nonsmooth families flag coincident points") {
        for (const auto& spec : {KernelSpec::exp_metric(1.0), KernelSpec::polynomial(1.5)}) {
            bool degenerate = false;
            const Eigen::VectorXd g = kernel_grad_x(x, x, spec, &degenerate);
            CHECK(g.norm() == 0.0);
            CHECK(degenerate);
        }
    }
}

TEST_CASE("kernel gradients match central differences") {
    std::mt19937_64 eng(55);
    const KernelSpec specs[] = {KernelSpec::rbf_sq(0.9), KernelSpec::exp_metric(1.3, 2.0),
                                KernelSpec::exp_metric(0.8, 1.5), KernelSpec::polynomial(1.5),
                                KernelSpec::polynomial(2.5)};
    for (const auto& spec : specs) {
        for (int run = 0; run < 100; ++run) {
            const Eigen::VectorXd x = oracle::random_points(eng, 1, 3).row(0);
            Eigen::VectorXd y = oracle::random_points(eng, 1, 3).row(0);
            if ((x - y).norm() < 0.1) y.array() += 0.5;  // stay in the smooth region
            const Eigen::VectorXd analytic = kernel_grad_x(x, y, spec);
            const Eigen::VectorXd numeric = oracle::fd_gradient(
                [&](const Eigen::VectorXd& probe) { return kernel_eval(probe, y, spec); }, x);
            CHECK(oracle::rel_err(analytic, numeric) < 1e-5);
        }
    }
}

TEST_CASE("polynomial gradient example at (2,0)") {
    Eigen::VectorXd x(2), y(2);
    x << 2.0, 0.0;
    y << 0.0, 0.0;
    const KernelSpec spec = KernelSpec::polynomial(1.5);
    const Eigen::VectorXd analytic = kernel_grad_x(x, y, spec);
    const Eigen::VectorXd numeric = oracle::fd_gradient(
        [&](const Eigen::VectorXd& probe) { return kernel_eval(probe, y, spec); }, x);
    CHECK(oracle::rel_err(analytic, numeric) < 1e-5);
}

TEST_CASE("conv_apply equals the dense gram product") {
    std::mt19937_64 eng(99);
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    SUBCASE("1x1 grid is the identity") {
        Eigen::MatrixXd one(1, 1);
        one << 0.37;
        CHECK(conv_apply(one, 0.5)(0, 0) == doctest::Approx(0.37).epsilon(1e-15));
    }
    SUBCASE("8x8 random grid vs dense, 1e-10") {
        const int d = 8;
        Eigen::MatrixXd grid(d, d);
        for (int r = 0; r < d; ++r)
            for (int c = 0; c < d; ++c) grid(r, c) = unif(eng);
        const double sigma = 0.04;
        const Eigen::MatrixXd fast = conv_apply(grid, sigma);
        const Eigen::MatrixXd K = oracle::dense_pixel_gram(d, sigma);
        const Eigen::VectorXd flat = Eigen::Map<const Eigen::VectorXd>(grid.data(), d * d);
        const Eigen::VectorXd dense = K * flat;
        const Eigen::MatrixXd dense_grid = Eigen::Map<const Eigen::MatrixXd>(dense.data(), d, d);
        CHECK((fast - dense_grid).cwiseAbs().maxCoeff() < 1e-10);
    }
    SUBCASE("constant image maps to a constant grid") {
        const int d = 6;
        const Eigen::MatrixXd grid = Eigen::MatrixXd::Constant(d, d, 0.25);
        const Eigen::MatrixXd out = conv_apply(grid, 0.3);
        const Eigen::MatrixXd K = oracle::dense_pixel_gram(d, 0.3);
        const double expected = K.row(0).sum() * 0.25;
        // Row sums of the separable kernel differ across rows (edge effects),
        // so compare against the dense oracle entry-wise instead.
        const Eigen::VectorXd flat = Eigen::Map<const Eigen::VectorXd>(grid.data(), d * d);
        const Eigen::VectorXd dense = K * flat;
        for (int r = 0; r < d; ++r)
            for (int c = 0; c < d; ++c)
                CHECK(out(r, c) ==
                      doctest::Approx(dense[r + c * d]).epsilon(1e-12));
        CHECK(out(0, 0) == doctest::Approx(expected).epsilon(1e-12));
    }
    SUBCASE("separability for every grid size up to 16") {
        for (int d = 2; d <= 16; ++d) {
            Eigen::MatrixXd grid(d, d);
            for (int r = 0; r < d; ++r)
                for (int c = 0; c < d; ++c) grid(r, c) = unif(eng);
            for (const double sigma : {0.05, 0.2, 0.8}) {
                const Eigen::MatrixXd fast = conv_apply(grid, sigma);
                const Eigen::MatrixXd K = oracle::dense_pixel_gram(d, sigma);
                const Eigen::VectorXd flat =
                    Eigen::Map<const Eigen::VectorXd>(grid.data(), d * d);
                const Eigen::VectorXd dense = K * flat;
                const Eigen::MatrixXd dense_grid =
                    Eigen::Map<const Eigen::MatrixXd>(dense.data(), d, d);
                REQUIRE((fast - dense_grid).cwiseAbs().maxCoeff() < 1e-8);
            }
        }
    }
    SUBCASE("errors") {
        Eigen::MatrixXd rect(2, 3);
        rect.setOnes();
        CHECK_THROWS_AS((void)conv_apply(rect, 0.1), std::invalid_argument);
        Eigen::MatrixXd square(2, 2);
        square.setOnes();
        CHECK_THROWS_AS((void)conv_apply(square, 0.0), std::invalid_argument);
    }
}
