#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "plap/errors.hpp"

namespace plap {

// Small vectors and matrices (n <= 3) without heap allocation.
using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 3, 1>;
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 3, 3>;

}  // namespace plap

namespace plap::grid {

using NodeId = std::size_t;

// A flat boundary face of the box: all nodes with index 0 (side = -1) or
// index max (side = +1) along `axis`.
struct Face {
    int axis = 0;
    int side = 0;
    Vec normal;
    std::vector<NodeId> nodes;
};

// Kuhn split of every grid cell into n! simplices. Simplex s has vertices
// v_0..v_n with v_k = v_{k-1} + e_{perm[k-1]}, so the gradient of the P1
// interpolant has component perm[k-1] equal to (u(v_k) - u(v_{k-1})) / h.
struct Simplex {
    std::array<NodeId, 4> vertices{};
    std::array<int, 3> perm{};
};

class Domain {
public:
    // Axis-aligned box [origin, origin + extents] sampled with `resolution`
    // nodes per axis. Throws InvalidArgument on n outside {2,3}, non-positive
    // extents or fewer than 3 nodes along an axis.
    static Domain build(std::span<const double> extents, std::span<const int> resolution,
                        std::span<const double> origin = {});

    int dimension() const { return dim_; }
    double extent(int axis) const { return extent_[axis]; }
    double origin(int axis) const { return origin_[axis]; }
    double spacing(int axis) const { return h_[axis]; }
    int nodes_along(int axis) const { return count_[axis]; }

    std::size_t node_count() const { return node_count_; }
    NodeId node_index(const std::array<int, 3>& ijk) const;
    std::array<int, 3> node_ijk(NodeId id) const;
    Vec coordinate(NodeId id) const;

    bool is_boundary(NodeId id) const { return boundary_slot_[id] >= 0; }
    // Position of `id` inside boundary_nodes(), or -1 for interior nodes.
    long boundary_slot(NodeId id) const { return boundary_slot_[id]; }

    const std::vector<NodeId>& interior_nodes() const { return interior_; }
    const std::vector<NodeId>& boundary_nodes() const { return boundary_; }
    const std::vector<Face>& faces() const { return faces_; }

    const std::vector<Simplex>& simplices() const { return simplices_; }
    double simplex_volume() const { return simplex_volume_; }
    // Volume of the dual cell of an interior node, prod(h).
    double node_volume() const;
    double volume() const;

    // Trapezoidal quadrature weights.
    double node_weight(NodeId id) const;
    std::vector<double> face_weights(const Face& face) const;

private:
    Domain() = default;
    void build_simplices();

    int dim_ = 0;
    std::array<double, 3> extent_{1.0, 1.0, 1.0};
    std::array<double, 3> origin_{0.0, 0.0, 0.0};
    std::array<double, 3> h_{1.0, 1.0, 1.0};
    std::array<int, 3> count_{1, 1, 1};
    std::size_t node_count_ = 0;
    std::vector<long> boundary_slot_;
    std::vector<NodeId> interior_;
    std::vector<NodeId> boundary_;
    std::vector<Face> faces_;
    std::vector<Simplex> simplices_;
    double simplex_volume_ = 0.0;
};

using DomainPtr = std::shared_ptr<const Domain>;

DomainPtr build_domain(std::span<const double> extents, std::span<const int> resolution,
                       std::span<const double> origin = {});

// Where the values of a field live: grid nodes or simplices of the Kuhn split.
enum class Location { Node, Cell };

template <class T>
class Field {
public:
    Field() = default;
    Field(DomainPtr domain, Location loc, T fill)
        : domain_(std::move(domain)), loc_(loc),
          values_(loc_ == Location::Node ? domain_->node_count() : domain_->simplices().size(),
                  fill) {}

    const DomainPtr& domain() const { return domain_; }
    Location location() const { return loc_; }
    std::size_t size() const { return values_.size(); }

    const T& operator[](std::size_t i) const { return values_[i]; }
    void set(std::size_t i, const T& value);

    std::span<const T> values() const { return values_; }

protected:
    DomainPtr domain_;
    Location loc_ = Location::Node;
    std::vector<T> values_;
};

class ScalarField : public Field<double> {
public:
    ScalarField() = default;
    ScalarField(DomainPtr domain, Location loc = Location::Node, double fill = 0.0)
        : Field(std::move(domain), loc, fill) {}

    double& operator[](std::size_t i) { return values_[i]; }
    using Field::operator[];
    std::span<double> mutable_values() { return values_; }
};

using VectorField = Field<Vec>;
// Symmetric n x n matrix per node or cell; set() copies the upper triangle
// onto the lower one so |M_jk - M_kj| is exactly zero.
using TensorField = Field<Mat>;

template <>
void TensorField::set(std::size_t i, const Mat& value);

template <class T>
void Field<T>::set(std::size_t i, const T& value) {
    values_[i] = value;
}

// Strictly positive scalar field (the weight gamma).
class WeightField {
public:
    explicit WeightField(ScalarField values);

    const ScalarField& field() const { return values_; }
    const DomainPtr& domain() const { return values_.domain(); }
    double operator[](std::size_t i) const { return values_[i]; }
    Location location() const { return values_.location(); }

private:
    ScalarField values_;
};

// Values on the boundary nodes, ordered as Domain::boundary_nodes().
class BoundaryData {
public:
    BoundaryData() = default;
    explicit BoundaryData(DomainPtr domain);
    BoundaryData(DomainPtr domain, std::vector<double> values);

    const DomainPtr& domain() const { return domain_; }
    std::size_t size() const { return values_.size(); }
    double operator[](std::size_t slot) const { return values_[slot]; }
    double& operator[](std::size_t slot) { return values_[slot]; }
    std::span<const double> values() const { return values_; }

    double at_node(NodeId id) const;

private:
    DomainPtr domain_;
    std::vector<double> values_;
};

// One value per node of every face (corner nodes appear once per face).
class FaceField {
public:
    FaceField() = default;
    explicit FaceField(DomainPtr domain);

    const DomainPtr& domain() const { return domain_; }
    std::size_t face_count() const { return values_.size(); }
    std::span<const double> face(std::size_t f) const { return values_[f]; }
    std::span<double> face(std::size_t f) { return values_[f]; }

    double max_abs() const;

private:
    DomainPtr domain_;
    std::vector<std::vector<double>> values_;
};

FaceField operator-(const FaceField& a, const FaceField& b);
FaceField operator*(double s, const FaceField& a);

// Sampling helpers; `f` receives the node coordinate (size n).
ScalarField sample(const DomainPtr& domain, const std::function<double(const Vec&)>& f);
BoundaryData sample_boundary(const DomainPtr& domain, const std::function<double(const Vec&)>& f);

// Central differences at interior nodes, 3-point one-sided stencils on the
// boundary, axis by axis. Exact for quadratics along each axis.
VectorField gradient(const ScalarField& u);
// Same stencils applied to each component and summed, at every node.
ScalarField divergence(const VectorField& v);

BoundaryData boundary_trace(const ScalarField& u);
FaceField normal_component(const VectorField& v);

// P1 gradient on every simplex of the Kuhn split.
VectorField cell_gradient(const ScalarField& u);
// Average of the vertex values on every simplex.
ScalarField to_cells(const ScalarField& u);
TensorField to_cells(const TensorField& a);

// Interpolant with the given trace and zero interior values.
ScalarField extend_by_zero(const BoundaryData& f);

// Trapezoidal integrals.
double integrate(const ScalarField& u);
double boundary_integral(const FaceField& v);
// sum over faces of f * v * weight, f taken from the boundary data at each node.
double boundary_pairing(const BoundaryData& f, const FaceField& v);

void require_same_domain(const DomainPtr& a, const DomainPtr& b, const char* what);

}  // namespace plap::grid
