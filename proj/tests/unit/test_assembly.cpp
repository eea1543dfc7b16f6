#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "stheat/assembly.hpp"

using namespace stheat;

namespace {

GlobalSystem make_system(int n_cells, int m_cells, double nu, double T = 1.0) {
    return build_global_system(
        elemental_matrices(make_space_mesh(n_cells), make_time_mesh(m_cells, T)), nu);
}

double rel_gap(const Matrix& a, const Matrix& b) {
    const double scale = std::max(a.cwiseAbs().maxCoeff(), b.cwiseAbs().maxCoeff());
    if (scale == 0.0) return 0.0;
    return (a - b).cwiseAbs().maxCoeff() / scale;
}

}  // namespace

TEST_CASE("one-by-one factors take their closed-form values") {
    const GlobalSystem sys = make_system(2, 1, 1.0);
    const auto& f = sys.factors;
    CHECK(f.Ms(0, 0) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(f.Ks(0, 0) == doctest::Approx(4.0).epsilon(1e-15));
    CHECK(f.At(0, 0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(f.Ut(0, 0) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(f.Gt(0, 0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(f.y_T(0) == 1.0);

    CHECK(sys.dense_A()(0, 0) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(sys.dense_M()(0, 0) == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
    CHECK(sys.dense_B()(0, 0) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(sys.dense_G()(0, 0) == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
    CHECK(sys.dense_U()(0, 0) == doctest::Approx(1.0 / 9.0).epsilon(1e-15));
    CHECK(sys.dense_W()(0, 0) == doctest::Approx(4.0).epsilon(1e-15));
    CHECK(sys.dense_K()(0, 0) == doctest::Approx(1.0 / 3.0 + 2.0).epsilon(1e-15));
    CHECK(sys.dense_K_hat()(0, 0) == doctest::Approx(1.0 / 6.0 + 4.0 / 3.0).epsilon(1e-15));
    CHECK(sys.dense_Yhalf()(0, 0) == doctest::Approx(std::sqrt(1.0 / 3.0)).epsilon(1e-15));
}

TEST_CASE("elemental stencils") {
    const GlobalSystem sys = make_system(4, 3, 1.0);
    const auto& f = sys.factors;

    // space: h = 1/4, interior nodes only
    CHECK(f.Ks(0, 0) == doctest::Approx(8.0).epsilon(1e-14));
    CHECK(f.Ks(0, 1) == doctest::Approx(-4.0).epsilon(1e-14));
    CHECK(f.Ks(0, 2) == 0.0);
    CHECK(f.Ms(0, 0) == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
    CHECK(f.Ms(0, 1) == doctest::Approx(1.0 / 24.0).epsilon(1e-14));

    // time: k = 1/3, node t_0 dropped, t_m kept
    CHECK(f.At(0, 0) == doctest::Approx(6.0).epsilon(1e-14));
    CHECK(f.At(2, 2) == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(f.At(0, 1) == doctest::Approx(-3.0).epsilon(1e-14));
    CHECK(f.Ut(0, 0) == doctest::Approx(2.0 / 9.0).epsilon(1e-14));
    CHECK(f.Ut(2, 2) == doctest::Approx(1.0 / 9.0).epsilon(1e-14));
    CHECK(f.Ut(0, 1) == doctest::Approx(1.0 / 18.0).epsilon(1e-14));

    // drift: skew part inside, 1/2 in the final diagonal slot
    CHECK(f.Gt(0, 0) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(f.Gt(2, 2) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(f.Gt(0, 1) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(f.Gt(1, 0) == doctest::Approx(-0.5).epsilon(1e-14));

    CHECK(f.y_T.size() == 3);
    CHECK(f.y_T(0) == 0.0);
    CHECK(f.y_T(1) == 0.0);
    CHECK(f.y_T(2) == 1.0);
}

TEST_CASE("drift identities") {
    for (int m : {1, 3, 7}) {
        const GlobalSystem sys = make_system(5, m, 0.1);
        const auto& f = sys.factors;
        const Matrix lhs = f.Gt + f.Gt.transpose();
        const Matrix rhs = f.y_T * f.y_T.transpose();
        CHECK(rel_gap(lhs, rhs) < 1e-14);

        const Matrix Yhalf = sys.dense_Yhalf();
        const Matrix Y = Yhalf * Yhalf.transpose();
        const Matrix Gsym = sys.dense_G() + sys.dense_G().transpose();
        CHECK(rel_gap(Gsym, Y) < 1e-13);
    }
}

TEST_CASE("Kronecker assembly equals brute-force quadrature assembly") {
    const std::pair<int, int> dims[] = {{1, 1}, {2, 3}, {3, 2}, {5, 4}, {8, 7}};
    for (auto [m, nc] : dims)
        for (double nu : {1.0, 0.1, 0.01}) {
            const SpaceMesh sm = make_space_mesh(nc + 1);
            const TimeMesh tm = make_time_mesh(m, 1.0);
            const GlobalSystem sys = build_global_system(elemental_matrices(sm, tm), nu);
            const DenseSystem ref = brute_force_assembly(sm, tm, nu);
            CHECK(rel_gap(sys.dense_A(), ref.A) < 1e-12);
            CHECK(rel_gap(sys.dense_M(), ref.M) < 1e-12);
            CHECK(rel_gap(sys.dense_B(), ref.B) < 1e-12);
            CHECK(rel_gap(sys.dense_G(), ref.G) < 1e-12);
            CHECK(rel_gap(sys.dense_U(), ref.U) < 1e-12);
            CHECK(rel_gap(sys.dense_W(), ref.W) < 1e-12);
            CHECK(rel_gap(sys.dense_K(), ref.K) < 1e-12);
            const Matrix Yhalf = sys.dense_Yhalf();
            CHECK(rel_gap(Matrix(Yhalf * Yhalf.transpose()), ref.Y) < 1e-12);
        }
}

TEST_CASE("brute-force assembly refuses large instances") {
    const SpaceMesh sm = make_space_mesh(30);
    const TimeMesh tm = make_time_mesh(30, 1.0);
    CHECK_THROWS_AS(brute_force_assembly(sm, tm, 1.0), assembly_error);
}

TEST_CASE("half factors reproduce their operators") {
    const GlobalSystem sys = make_system(5, 4, 0.1);
    for (char which : {'A', 'M', 'U', 'W'}) {
        const Matrix L = sys.dense_half(which);
        Matrix op;
        switch (which) {
            case 'A': op = sys.dense_A(); break;
            case 'M': op = sys.dense_M(); break;
            case 'U': op = sys.dense_U(); break;
            default: op = sys.dense_W(); break;
        }
        CHECK(rel_gap(Matrix(L * L.transpose()), op) < 1e-13);
        // lower triangular by construction
        for (Eigen::Index i = 0; i < L.rows(); ++i)
            for (Eigen::Index j = i + 1; j < L.cols(); ++j) CHECK(L(i, j) == 0.0);
    }
}

TEST_CASE("kron and kron_apply agree") {
    std::mt19937 rng(1234);
    std::normal_distribution<double> g(0.0, 1.0);
    Matrix T(3, 3), S(4, 4);
    for (int i = 0; i < 9; ++i) T(i / 3, i % 3) = g(rng);
    for (int i = 0; i < 16; ++i) S(i / 4, i % 4) = g(rng);
    const Matrix full = kron(T, S);
    CHECK(full.rows() == 12);
    Vector x(12);
    for (int i = 0; i < 12; ++i) x(i) = g(rng);
    const Vector direct = full * x;
    const Vector fast = kron_apply(T, S, x);
    CHECK((direct - fast).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("operator apply matches dense operators") {
    const GlobalSystem sys = make_system(4, 3, 0.01);
    std::mt19937 rng(99);
    std::normal_distribution<double> g(0.0, 1.0);
    Vector x(sys.dim());
    for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = g(rng);
    CHECK((sys.apply_A(x) - sys.dense_A() * x).norm() < 1e-12);
    CHECK((sys.apply_M(x) - sys.dense_M() * x).norm() < 1e-12);
    CHECK((sys.apply_U(x) - sys.dense_U() * x).norm() < 1e-12);
    CHECK((sys.apply_W(x) - sys.dense_W() * x).norm() < 1e-12);
    const Matrix Yhalf = sys.dense_Yhalf();
    CHECK((sys.apply_Y(x) - Yhalf * (Yhalf.transpose() * x)).norm() < 1e-12);
}

TEST_CASE("B has nonnegative symmetric part") {
    // v^T B v = (1/2) v^T (B + B^T) v and B + B^T = Y (x) Ks-ish positive
    // structure; numerically the quadratic form must never go negative.
    const GlobalSystem sys = make_system(5, 6, 1.0);
    const Matrix B = sys.dense_B();
    std::mt19937 rng(7);
    std::normal_distribution<double> g(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        Vector v(sys.dim());
        for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = g(rng);
        CHECK(v.dot(B * v) >= -1e-12 * v.squaredNorm());
    }
}

TEST_CASE("coordinate triplet export") {
    const GlobalSystem sys = make_system(2, 2, 1.0);
    std::ostringstream os;
    write_coordinate_triplets(os, sys.factors.Gt);
    // Gt for m=2 is [[0, 1/2], [-1/2, 1/2]]: three nonzeros
    const std::string text = os.str();
    int lines = 0;
    for (char c : text)
        if (c == '\n') ++lines;
    CHECK(lines == 3);
}
