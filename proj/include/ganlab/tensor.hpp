#pragma once

#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

namespace ganlab::engine {

using Shape = std::vector<std::size_t>;

std::size_t shape_numel(const Shape& shape);
std::string shape_str(const Shape& shape);

// Dense row-major tensor of 64-bit reals. Every constructor and mutation
// path that accepts external data verifies finiteness; a NaN or infinity
// raises NonFiniteError instead of being stored.
class Tensor {
public:
    Tensor() = default;
    explicit Tensor(Shape shape);                       // zero-filled
    Tensor(Shape shape, std::vector<double> data);
    Tensor(Shape shape, double fill);

    static Tensor scalar(double value);
    static Tensor zeros(Shape shape) { return Tensor(std::move(shape)); }
    static Tensor zeros_like(const Tensor& other) { return Tensor(other.shape()); }
    static Tensor full(Shape shape, double value) { return Tensor(std::move(shape), value); }
    static Tensor row(std::vector<double> values);      // shape [1, n]
    static Tensor col(std::vector<double> values);      // shape [n, 1]
    static Tensor matrix(std::size_t rows, std::size_t cols, std::vector<double> values);
    static Tensor identity(std::size_t n);

    const Shape& shape() const { return shape_; }
    std::size_t ndim() const { return shape_.size(); }
    std::size_t numel() const { return data_.size(); }
    bool is_scalar() const { return data_.size() == 1; }

    // 2-D accessors; throw ShapeError when the tensor is not a matrix.
    std::size_t rows() const;
    std::size_t cols() const;
    double& at(std::size_t r, std::size_t c);
    double at(std::size_t r, std::size_t c) const;

    double& operator[](std::size_t i) { return data_[i]; }
    double operator[](std::size_t i) const { return data_[i]; }
    double item() const;  // requires numel() == 1

    std::vector<double>& data() { return data_; }
    const std::vector<double>& data() const { return data_; }

    bool same_shape(const Tensor& other) const { return shape_ == other.shape_; }
    bool all_finite() const;
    // Throws NonFiniteError naming `what` when any entry is NaN/Inf.
    void require_finite(const std::string& what) const;

    Tensor reshaped(Shape shape) const;

private:
    Shape shape_;
    std::vector<double> data_;
};

// Stack two matrices with equal column counts, rows of `a` first.
Tensor vstack(const Tensor& a, const Tensor& b);

}  // namespace ganlab::engine
