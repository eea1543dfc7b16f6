#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numbers>

#include "stheat/meshes.hpp"

using namespace stheat;

TEST_CASE("space mesh geometry") {
    const SpaceMesh sm = make_space_mesh(5);
    CHECK(sm.n_cells == 5);
    CHECK(sm.h == doctest::Approx(0.2).epsilon(1e-15));
    CHECK(sm.n == 4);
    const auto nodes = sm.nodes();  // interior nodes only
    REQUIRE(nodes.size() == 4);
    CHECK(nodes.front() == doctest::Approx(0.2).epsilon(1e-15));
    CHECK(nodes.back() == doctest::Approx(0.8).epsilon(1e-15));
    CHECK(nodes[1] == doctest::Approx(0.4).epsilon(1e-15));
}

TEST_CASE("space mesh needs an interior node") {
    CHECK_THROWS_AS(make_space_mesh(1), mesh_error);
    CHECK_THROWS_AS(make_space_mesh(0), mesh_error);
    CHECK_THROWS_AS(make_space_mesh(-3), mesh_error);
    CHECK(make_space_mesh(2).n == 1);
}

TEST_CASE("time mesh geometry") {
    const TimeMesh tm = make_time_mesh(40, 1.0);
    CHECK(tm.m_cells == 40);
    CHECK(tm.m == 40);
    CHECK(tm.k == doctest::Approx(0.025).epsilon(1e-15));
    const auto nodes = tm.nodes();  // t_1 .. t_m, the zero node carries no dof
    REQUIRE(nodes.size() == 40);
    CHECK(nodes.front() == doctest::Approx(0.025).epsilon(1e-15));
    CHECK(nodes.back() == 1.0);  // endpoint lands exactly on T

    const TimeMesh one = make_time_mesh(1, 2.0);
    CHECK(one.m == 1);
    CHECK(one.k == 2.0);
}

TEST_CASE("time mesh rejects empty or degenerate input") {
    CHECK_THROWS_AS(make_time_mesh(0, 1.0), mesh_error);
    CHECK_THROWS_AS(make_time_mesh(3, 0.0), mesh_error);
    CHECK_THROWS_AS(make_time_mesh(3, -1.0), mesh_error);
}

TEST_CASE("a priori constants") {
    const double pi = std::numbers::pi;
    const SpaceMesh sm = make_space_mesh(5);
    const TimeMesh tm = make_time_mesh(40, 1.0);
    const AprioriConstants ap = apriori_constants(sm, tm);
    CHECK(ap.c_omega == doctest::Approx(0.2 / pi).epsilon(1e-15));
    CHECK(ap.c_j == doctest::Approx(0.025 / pi).epsilon(1e-15));
    CHECK(ap.c_inv == doctest::Approx(std::sqrt(12.0) * 5.0).epsilon(1e-15));
    CHECK(ap.c_p == doctest::Approx(1.0 / pi).epsilon(1e-15));
}

TEST_CASE("a priori constants scale with the meshes") {
    const TimeMesh tm = make_time_mesh(40, 1.0);
    const AprioriConstants coarse = apriori_constants(make_space_mesh(5), tm);
    const AprioriConstants fine = apriori_constants(make_space_mesh(10), tm);
    CHECK(fine.c_omega == doctest::Approx(coarse.c_omega / 2.0).epsilon(1e-14));
    CHECK(fine.c_inv == doctest::Approx(coarse.c_inv * 2.0).epsilon(1e-14));
    CHECK(fine.c_j == coarse.c_j);
}
