#pragma once

#include <functional>
#include <span>
#include <vector>

#include "ganlab/tensor.hpp"

namespace ganlab::engine {

class Tape;

// Handle to a node on a tape. Cheap to copy; only valid while the owning
// tape is alive and the node has not been truncated away.
struct Var {
    Tape* tape = nullptr;
    int id = -1;
    bool valid() const { return tape != nullptr && id >= 0; }
};

// Builds the gradient contribution for each parent of a node, expressed in
// taped primitives so the result is differentiable again. An invalid Var in
// the result means "no gradient flows to this parent" (constant masks).
using GradFn = std::function<std::vector<Var>(Tape&, const Var& out, const Var& grad_out)>;

// Records primitive operations in execution order. Recording order is a
// valid topological order of the (acyclic) graph; a reverse sweep therefore
// visits every node after all of its consumers.
class Tape {
public:
    Tape() = default;
    Tape(const Tape&) = delete;
    Tape& operator=(const Tape&) = delete;

    Var leaf(Tensor value);
    // Leaf whose gradient is never requested; semantically a constant.
    Var constant(Tensor value) { return leaf(std::move(value)); }

    Var record(Tensor value, std::vector<int> parents, GradFn grad, const char* op);

    const Tensor& value(const Var& v) const;
    const char* op_name(const Var& v) const;
    int size() const { return static_cast<int>(nodes_.size()); }
    // Drops nodes with id >= mark; used to roll back scratch adjoint graphs.
    void truncate(int mark);

    // Reverse-mode gradients of a scalar output. Adjoints are recorded on
    // this tape as ordinary nodes, so with create_graph the returned Vars
    // can be differentiated again (required by the gradient penalty). With
    // create_graph = false the adjoint subgraph is rolled back and plain
    // tensors are materialized via backward() instead.
    //
    // Parameters that never fed into `output` receive a zero gradient.
    std::vector<Var> gradients(const Var& output, std::span<const Var> wrt);
    std::vector<Tensor> backward(const Var& output, std::span<const Var> wrt);

private:
    struct Node {
        Tensor value;
        std::vector<int> parents;
        GradFn grad;
        const char* op;
    };
    std::vector<Node> nodes_;

    void check_owned(const Var& v, const char* what) const;
};

// ---- primitives ------------------------------------------------------
// Every op validates shapes, evaluates eagerly, verifies the result is
// finite, and records itself. The primitive set is closed under
// differentiation: each GradFn is built from these same ops.

Var add(Var a, Var b);             // elementwise, same shape
Var sub(Var a, Var b);
Var mul(Var a, Var b);             // Hadamard
Var neg(Var a);
Var scale(Var a, double c);        // a * c
Var add_scalar(Var a, double c);   // a + c
Var matmul(Var a, Var b);          // [m,k] x [k,n]
Var transpose(Var a);              // 2-D
Var add_rowvec(Var m, Var v);      // broadcast row vector over rows
Var sigmoid(Var a);                // numerically stable, output in (0,1)
Var tanh_(Var a);
Var lrelu(Var a, double slope);    // leaky rectifier
Var exp_(Var a);
Var log_(Var a);                   // requires strictly positive input
Var sqrt_(Var a);                  // requires nonnegative input
Var square(Var a);
Var reciprocal(Var a);
Var clamp(Var a, double lo, double hi);  // pass-through gradient inside [lo,hi]
Var sum(Var a);                    // scalar [1]
Var mean(Var a);                   // scalar [1]
Var row_sum(Var a);                // [m,n] -> [m,1]
Var col_sum(Var a);                // [m,n] -> [1,n]
Var broadcast_full(Var s, Shape shape);       // scalar -> filled tensor
Var broadcast_cols(Var v, std::size_t cols);  // [m,1] -> [m,cols]
Var reshape(Var a, Shape shape);

// ---- composites ------------------------------------------------------
Var dot(Var a, Var b);             // sum(a ⊙ b), scalar
Var l2norm(Var a);                 // sqrt(sum(a²) + eps), scalar
Var row_l2norm(Var a);             // per-row norms of a matrix, [m,1]
Var mse(Var a, Var b);             // mean squared difference, scalar

// eps inside the norm's sqrt keeps the derivative finite at zero vectors.
inline constexpr double kNormEps = 1e-12;

}  // namespace ganlab::engine
