#include <doctest.h>

#include <random>
#include <vector>

#include "rewet/block_tridiag.hpp"
#include "rewet/errors.hpp"

using namespace rewet;

namespace {

BlockTridiag random_matrix(int n, int m, unsigned seed) {
    BlockTridiag A(n, m);
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int b = 0; b < n; ++b)
        for (int r = 0; r < m; ++r)
            for (int c = 0; c < m; ++c) {
                A.diag(b, r, c) = u(rng) + (r == c ? 4.0 : 0.0);  // diag dominant
                if (b > 0) A.lower(b, r, c) = u(rng);
                if (b + 1 < n) A.upper(b, r, c) = u(rng);
            }
    return A;
}

}  // namespace

TEST_CASE("scalar blocks reduce to the classic Thomas algorithm") {
    // 1x1 blocks: tridiag(-1, 2, -1), solution of A x = e_1 is known in
    // closed form: x_i = (n - i) / (n + 1), i 1-based.
    const int n = 7;
    BlockTridiag A(n, 1);
    for (int b = 0; b < n; ++b) {
        A.diag(b, 0, 0) = 2.0;
        if (b > 0) A.lower(b, 0, 0) = -1.0;
        if (b + 1 < n) A.upper(b, 0, 0) = -1.0;
    }
    std::vector<double> rhs(n, 0.0);
    rhs[0] = 1.0;
    BlockTridiagLU lu(A);
    lu.solve(rhs);
    for (int i = 0; i < n; ++i)
        CHECK(rhs[i] == doctest::Approx(double(n - i) / (n + 1)).epsilon(1e-13));
}

TEST_CASE("multiply then solve round-trips random systems") {
    for (unsigned seed : {1u, 2u, 3u, 4u}) {
        const int n = 12, m = 5;
        BlockTridiag A = random_matrix(n, m, seed);
        std::mt19937 rng(seed + 100);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        std::vector<double> x(n * m), b(n * m);
        for (double& v : x) v = u(rng);
        A.multiply(x, b);
        BlockTridiagLU lu(A);
        lu.solve(b);
        for (int i = 0; i < n * m; ++i)
            CHECK(b[i] == doctest::Approx(x[i]).epsilon(1e-10));
    }
}

TEST_CASE("solve requires pivoting inside blocks") {
    // pivot block with a zero on the diagonal but full rank
    BlockTridiag A(2, 2);
    A.diag(0, 0, 0) = 0.0;
    A.diag(0, 0, 1) = 1.0;
    A.diag(0, 1, 0) = 1.0;
    A.diag(0, 1, 1) = 0.0;
    A.diag(1, 0, 0) = 1.0;
    A.diag(1, 1, 1) = 1.0;
    A.upper(0, 0, 0) = 0.5;
    A.lower(1, 1, 1) = 0.5;
    std::vector<double> x = {1.0, -2.0, 3.0, 0.25}, b(4);
    A.multiply(x, b);
    BlockTridiagLU lu(A);
    lu.solve(b);
    for (int i = 0; i < 4; ++i) CHECK(b[i] == doctest::Approx(x[i]).epsilon(1e-12));
}

TEST_CASE("singular matrix is rejected") {
    BlockTridiag A(3, 2);  // all zero
    CHECK_THROWS_AS(BlockTridiagLU{A}, SolverFailureError);
}

TEST_CASE("scale_to_identity_minus forms I - cA") {
    const int n = 6, m = 3;
    BlockTridiag A = random_matrix(n, m, 9);
    BlockTridiag B = A;
    const double c = 0.37;
    B.scale_to_identity_minus(c);

    std::mt19937 rng(42);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> x(n * m), Ax(n * m), Bx(n * m);
    for (double& v : x) v = u(rng);
    A.multiply(x, Ax);
    B.multiply(x, Bx);
    for (int i = 0; i < n * m; ++i)
        CHECK(Bx[i] == doctest::Approx(x[i] - c * Ax[i]).epsilon(1e-13));
}

TEST_CASE("multiply agrees with a dense reference") {
    const int n = 5, m = 4;
    BlockTridiag A = random_matrix(n, m, 21);
    const int dim = n * m;
    std::vector<double> dense(dim * dim, 0.0);
    for (int b = 0; b < n; ++b)
        for (int r = 0; r < m; ++r)
            for (int c = 0; c < m; ++c) {
                dense[(b * m + r) * dim + b * m + c] = A.diag(b, r, c);
                if (b > 0) dense[(b * m + r) * dim + (b - 1) * m + c] = A.lower(b, r, c);
                if (b + 1 < n) dense[(b * m + r) * dim + (b + 1) * m + c] = A.upper(b, r, c);
            }
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    std::vector<double> x(dim), y(dim);
    for (double& v : x) v = u(rng);
    A.multiply(x, y);
    for (int i = 0; i < dim; ++i) {
        double acc = 0.0;
        for (int j = 0; j < dim; ++j) acc += dense[i * dim + j] * x[j];
        CHECK(y[i] == doctest::Approx(acc).epsilon(1e-12));
    }
}
