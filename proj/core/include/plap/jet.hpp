#pragma once

#include <array>
#include <memory>
#include <span>
#include <vector>

#include "plap/errors.hpp"

namespace plap::jets {

using MultiIndex = std::array<int, 3>;

// Multi-indices with |alpha| <= order in n variables, sorted by total degree
// and then lexicographically (descending in the first variable). Shared by
// every jet of the same shape.
struct Layout;

// Truncated Taylor polynomial at a point: coefficient alpha holds
// d^alpha f / alpha!. Arithmetic is closed at the truncation order.
class Jet {
public:
    Jet() = default;
    // Zero jet.
    Jet(int nvars, int order);

    static Jet constant(int nvars, int order, double value);
    // value + increment along `axis`.
    static Jet variable(int nvars, int order, int axis, double value);

    int nvars() const { return nvars_; }
    int order() const { return order_; }
    std::size_t size() const { return coeff_.size(); }

    double value() const { return coeff_[0]; }
    double coefficient(const MultiIndex& alpha) const;
    // d^alpha f = alpha! * coefficient.
    double derivative(const MultiIndex& alpha) const;
    void set_coefficient(const MultiIndex& alpha, double v);

    std::span<const double> coefficients() const { return coeff_; }
    std::span<double> coefficients() { return coeff_; }
    const MultiIndex& index(std::size_t k) const;
    // Position of alpha, or -1 when |alpha| exceeds the order.
    long position(const MultiIndex& alpha) const;

    Jet truncate(int order) const;
    // True when every coefficient beyond the constant is exactly zero.
    bool is_constant() const;

    Jet& operator+=(const Jet& b);
    Jet& operator-=(const Jet& b);
    Jet& operator*=(double s);

private:
    int nvars_ = 0;
    int order_ = 0;
    std::shared_ptr<const Layout> layout_;
    std::vector<double> coeff_;

    friend Jet operator*(const Jet& a, const Jet& b);
    friend Jet operator/(const Jet& a, const Jet& b);
};

Jet operator+(Jet a, const Jet& b);
Jet operator-(Jet a, const Jet& b);
Jet operator-(Jet a);
Jet operator*(const Jet& a, const Jet& b);
Jet operator*(double s, Jet a);
Jet operator*(Jet a, double s);
Jet operator+(Jet a, double s);
Jet operator+(double s, Jet a);
Jet operator-(Jet a, double s);
Jet operator-(double s, Jet a);
// Throws DivisionByZeroConstantTerm when b.value() == 0.
Jet operator/(const Jet& a, const Jet& b);
Jet operator/(Jet a, double s);
Jet operator/(double s, const Jet& b);

// Real power. Integer exponents use repeated multiplication and accept any
// nonzero base (and zero for non-negative exponents); other exponents need a
// positive constant term, otherwise DomainError.
Jet pow(const Jet& base, double exponent);
// Jet exponent: exp(e log(base)) unless e is constant.
Jet pow(const Jet& base, const Jet& exponent);
Jet exp(const Jet& a);
Jet log(const Jet& a);
Jet sqrt(const Jet& a);
Jet sin(const Jet& a);
Jet cos(const Jet& a);

// d/dx_axis; the order drops by one. Throws InvalidArgument at order 0.
Jet partial(const Jet& a, int axis);

// Coefficients whose first index equals k, as a jet in the remaining n-1
// variables of order N-k (tangential slice of order k along axis 0).
Jet slice(const Jet& a, int k);
// Inverse of slice: writes s into the coefficients with first index k.
void set_slice(Jet& a, int k, const Jet& s);

// Univariate composition: sum_k taylor[k] (a - a.value())^k, i.e. f(a) for f
// with Taylor coefficients `taylor` at a.value(). Uses the first order+1
// coefficients (missing ones count as zero).
Jet compose(std::span<const double> taylor, const Jet& a);

// Antiderivative of a univariate jet with the given constant term; order + 1.
Jet integrate(const Jet& a, double constant);

double factorial(int k);
double multi_factorial(const MultiIndex& alpha);

// Max |a - b| over coefficients of equal shape.
double max_difference(const Jet& a, const Jet& b);

}  // namespace plap::jets
