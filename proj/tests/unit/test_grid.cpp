#include <gtest/gtest.h>

#include <cmath>

#include "helpers.hpp"
#include "plap/grid.hpp"

using namespace plap;
using plap::testing::unit_box;
using plap::testing::vec;

TEST(Domain, RejectsBadArguments) {
    const double ext1[1] = {1.0};
    const int res1[1] = {5};
    EXPECT_THROW(grid::Domain::build(ext1, res1), InvalidArgument);
    const double ext2[2] = {1.0, -1.0};
    const int res2[2] = {5, 5};
    EXPECT_THROW(grid::Domain::build(ext2, res2), InvalidArgument);
    const double ext3[2] = {1.0, 1.0};
    const int res3[2] = {5, 2};
    EXPECT_THROW(grid::Domain::build(ext3, res3), InvalidArgument);
}

TEST(Domain, IndexingAndCoordinates) {
    const double ext[3] = {2.0, 1.0, 0.5};
    const int res[3] = {5, 4, 3};
    const double org[3] = {1.0, -1.0, 0.0};
    const auto d = grid::build_domain(ext, res, org);
    EXPECT_EQ(d->node_count(), 60u);
    for (grid::NodeId id = 0; id < d->node_count(); ++id) {
        EXPECT_EQ(d->node_index(d->node_ijk(id)), id);
    }
    const Vec far = d->coordinate(d->node_index({4, 3, 2}));
    EXPECT_EQ(far[0], 3.0);
    EXPECT_EQ(far[1], 0.0);
    EXPECT_EQ(far[2], 0.5);
    EXPECT_DOUBLE_EQ(d->spacing(0), 0.5);
    EXPECT_EQ(d->interior_nodes().size(), 3u * 2u * 1u);
    EXPECT_EQ(d->interior_nodes().size() + d->boundary_nodes().size(), d->node_count());
}

TEST(Domain, FacesAndNormals) {
    const auto d = unit_box(3, 5);
    ASSERT_EQ(d->faces().size(), 6u);
    for (const auto& f : d->faces()) {
        EXPECT_EQ(f.nodes.size(), 25u);
        EXPECT_DOUBLE_EQ(f.normal.norm(), 1.0);
        EXPECT_DOUBLE_EQ(f.normal[f.axis], static_cast<double>(f.side));
        for (grid::NodeId id : f.nodes) {
            EXPECT_TRUE(d->is_boundary(id));
        }
    }
}

TEST(Domain, SimplicesTileTheBox) {
    for (int n : {2, 3}) {
        const auto d = unit_box(n, 4);
        const std::size_t cells = n == 2 ? 9 : 27;
        EXPECT_EQ(d->simplices().size(), cells * (n == 2 ? 2 : 6));
        EXPECT_NEAR(d->simplex_volume() * static_cast<double>(d->simplices().size()), 1.0,
                    1e-14);
    }
}

TEST(Grid, GradientExactForAxisQuadratics) {
    const auto d = unit_box(3, 6);
    const auto u = grid::sample(d, [](const Vec& x) {
        return x[0] * x[0] + 3.0 * x[1] * x[1] - x[2] * x[2] + x[0] * x[1] + 2.0 * x[2];
    });
    const auto g = grid::gradient(u);
    for (grid::NodeId id = 0; id < d->node_count(); ++id) {
        const Vec x = d->coordinate(id);
        EXPECT_NEAR(g[id][0], 2.0 * x[0] + x[1], 1e-12);
        EXPECT_NEAR(g[id][1], 6.0 * x[1] + x[0], 1e-12);
        EXPECT_NEAR(g[id][2], -2.0 * x[2] + 2.0, 1e-12);
    }
}

TEST(Grid, DivergenceOfPositionIsDimension) {
    const auto d = unit_box(2, 7);
    grid::VectorField v(d, grid::Location::Node, Vec::Zero(2));
    for (grid::NodeId id = 0; id < d->node_count(); ++id) {
        v.set(id, d->coordinate(id));
    }
    const auto div = grid::divergence(v);
    for (double x : div.values()) {
        EXPECT_NEAR(x, 2.0, 1e-12);
    }
}

TEST(Grid, CellGradientOfAffine) {
    const auto d = unit_box(3, 4);
    const auto u = grid::sample(d, [](const Vec& x) { return 1.0 + 2.0 * x[0] - x[1] + 0.5 * x[2]; });
    const auto g = grid::cell_gradient(u);
    for (std::size_t s = 0; s < g.size(); ++s) {
        EXPECT_NEAR((g[s] - vec({2.0, -1.0, 0.5})).norm(), 0.0, 1e-12);
    }
}

TEST(Grid, TrapezoidIntegrals) {
    const auto d = unit_box(2, 9);
    EXPECT_NEAR(grid::integrate(grid::sample(d, [](const Vec&) { return 1.0; })), 1.0, 1e-14);
    EXPECT_NEAR(grid::integrate(grid::sample(d, [](const Vec& x) { return x[0] + x[1]; })), 1.0,
                1e-14);

    // Divergence theorem for the position field: int x . nu = n |Omega|.
    grid::VectorField v(d, grid::Location::Node, Vec::Zero(2));
    for (grid::NodeId id = 0; id < d->node_count(); ++id) {
        v.set(id, d->coordinate(id));
    }
    EXPECT_NEAR(grid::boundary_integral(grid::normal_component(v)), 2.0, 1e-14);
}

TEST(Grid, BoundaryPairing) {
    const auto d = unit_box(2, 5);
    const auto f = grid::sample_boundary(d, [](const Vec& x) { return x[0]; });
    grid::FaceField one(d);
    for (std::size_t k = 0; k < one.face_count(); ++k) {
        for (double& x : one.face(k)) {
            x = 1.0;
        }
    }
    // Four faces: x1 integrates to 1/2 on the horizontal ones, 0 and 1 on the others.
    EXPECT_NEAR(grid::boundary_pairing(f, one), 2.0, 1e-14);
}

TEST(Grid, TensorFieldIsSymmetrized) {
    const auto d = unit_box(2, 3);
    grid::TensorField t(d, grid::Location::Node, Mat::Zero(2, 2));
    Mat m(2, 2);
    m << 1.0, 2.0, 3.0, 4.0;
    t.set(0, m);
    EXPECT_EQ(t[0](1, 0), 2.0);
    EXPECT_EQ(t[0](0, 1), t[0](1, 0));
}

TEST(Grid, WeightMustBePositive) {
    const auto d = unit_box(2, 3);
    EXPECT_THROW(grid::WeightField(grid::sample(d, [](const Vec& x) { return x[0] - 0.5; })),
                 InvalidArgument);
}

TEST(Grid, DomainsAreComparedByIdentity) {
    const auto a = unit_box(2, 3);
    const auto b = unit_box(2, 3);
    EXPECT_NO_THROW(grid::require_same_domain(a, a, "test"));
    EXPECT_THROW(grid::require_same_domain(a, b, "test"), InvalidArgument);
}

TEST(Grid, BoundaryTraceRoundTrip) {
    const auto d = unit_box(3, 4);
    const auto u = grid::sample(d, [](const Vec& x) { return std::sin(x[0]) + x[1] * x[2]; });
    const auto tr = grid::boundary_trace(u);
    const auto ext = grid::extend_by_zero(tr);
    for (grid::NodeId id = 0; id < d->node_count(); ++id) {
        EXPECT_EQ(ext[id], d->is_boundary(id) ? u[id] : 0.0);
    }
}
