#include "ganlab/tape.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "ganlab/errors.hpp"

namespace ganlab::engine {

namespace {

void require_same_shape(const Tensor& a, const Tensor& b, const char* op) {
    if (!a.same_shape(b)) {
        throw ShapeError(std::string(op) + ": shape mismatch " + shape_str(a.shape()) +
                         " vs " + shape_str(b.shape()));
    }
}

void require_same_tape(const Var& a, const Var& b, const char* op) {
    if (a.tape != b.tape) {
        throw TapeError(std::string(op) + ": operands recorded on different tapes");
    }
}

Tensor map_unary(const Tensor& x, double (*f)(double)) {
    Tensor out(x.shape());
    for (std::size_t i = 0; i < x.numel(); ++i) out[i] = f(x[i]);
    return out;
}

double stable_sigmoid(double x) {
    if (x >= 0.0) {
        return 1.0 / (1.0 + std::exp(-x));
    }
    const double e = std::exp(x);
    return e / (1.0 + e);
}

// Mask nodes: values depend on an input but carry no gradient of their own
// (the dependence is piecewise constant).
Var mask_node(Tape& t, Tensor value, int parent, const char* op) {
    return t.record(std::move(value), {parent},
                    [](Tape&, const Var&, const Var&) { return std::vector<Var>{Var{}}; }, op);
}

}  // namespace

void Tape::check_owned(const Var& v, const char* what) const {
    if (v.tape != this || v.id < 0 || v.id >= static_cast<int>(nodes_.size())) {
        throw TapeError(std::string(what) + ": variable does not belong to this tape");
    }
}

Var Tape::leaf(Tensor value) {
    value.require_finite("leaf");
    nodes_.push_back(Node{std::move(value), {}, nullptr, "leaf"});
    return Var{this, static_cast<int>(nodes_.size()) - 1};
}

Var Tape::record(Tensor value, std::vector<int> parents, GradFn grad, const char* op) {
    value.require_finite(op);
    nodes_.push_back(Node{std::move(value), std::move(parents), std::move(grad), op});
    return Var{this, static_cast<int>(nodes_.size()) - 1};
}

const Tensor& Tape::value(const Var& v) const {
    check_owned(v, "value");
    return nodes_[static_cast<std::size_t>(v.id)].value;
}

const char* Tape::op_name(const Var& v) const {
    check_owned(v, "op_name");
    return nodes_[static_cast<std::size_t>(v.id)].op;
}

void Tape::truncate(int mark) {
    if (mark < 0 || mark > static_cast<int>(nodes_.size())) {
        throw TapeError("truncate: mark out of range");
    }
    nodes_.resize(static_cast<std::size_t>(mark));
}

std::vector<Var> Tape::gradients(const Var& output, std::span<const Var> wrt) {
    check_owned(output, "gradients");
    if (!value(output).is_scalar()) {
        throw TapeError("gradients: output must be scalar, got " +
                        shape_str(value(output).shape()));
    }
    for (const Var& w : wrt) check_owned(w, "gradients(wrt)");

    // adj[i] is the accumulated adjoint of node i, itself a taped Var.
    std::vector<Var> adj(static_cast<std::size_t>(output.id) + 1);
    adj[static_cast<std::size_t>(output.id)] = constant(Tensor::scalar(1.0));

    for (int i = output.id; i >= 0; --i) {
        const Var a = adj[static_cast<std::size_t>(i)];
        if (!a.valid()) continue;
        if (!nodes_[static_cast<std::size_t>(i)].grad) continue;  // leaf
        const Var out{this, i};
        // Copies: the grad call records new nodes and may reallocate nodes_.
        GradFn fn = nodes_[static_cast<std::size_t>(i)].grad;
        std::vector<int> parents = nodes_[static_cast<std::size_t>(i)].parents;
        std::vector<Var> contrib = fn(*this, out, a);
        if (contrib.size() != parents.size()) {
            throw TapeError(std::string("gradients: ") + nodes_[static_cast<std::size_t>(i)].op +
                            " returned wrong number of parent gradients");
        }
        for (std::size_t p = 0; p < parents.size(); ++p) {
            if (!contrib[p].valid()) continue;
            Var& slot = adj[static_cast<std::size_t>(parents[p])];
            slot = slot.valid() ? add(slot, contrib[p]) : contrib[p];
        }
    }

    std::vector<Var> result;
    result.reserve(wrt.size());
    for (const Var& w : wrt) {
        Var g = (w.id <= output.id) ? adj[static_cast<std::size_t>(w.id)] : Var{};
        if (!g.valid()) g = constant(Tensor::zeros_like(value(w)));
        result.push_back(g);
    }
    return result;
}

std::vector<Tensor> Tape::backward(const Var& output, std::span<const Var> wrt) {
    const int mark = size();
    std::vector<Var> grads = gradients(output, wrt);
    std::vector<Tensor> out;
    out.reserve(grads.size());
    for (const Var& g : grads) out.push_back(value(g));
    truncate(mark);
    return out;
}

// ---- primitives ------------------------------------------------------

Var add(Var a, Var b) {
    require_same_tape(a, b, "add");
    Tape& t = *a.tape;
    const Tensor& va = t.value(a);
    const Tensor& vb = t.value(b);
    require_same_shape(va, vb, "add");
    Tensor out(va.shape());
    for (std::size_t i = 0; i < out.numel(); ++i) out[i] = va[i] + vb[i];
    return t.record(std::move(out), {a.id, b.id},
                    [](Tape&, const Var&, const Var& g) {
                        return std::vector<Var>{g, g};
                    },
                    "add");
}

Var sub(Var a, Var b) {
    require_same_tape(a, b, "sub");
    Tape& t = *a.tape;
    const Tensor& va = t.value(a);
    const Tensor& vb = t.value(b);
    require_same_shape(va, vb, "sub");
    Tensor out(va.shape());
    for (std::size_t i = 0; i < out.numel(); ++i) out[i] = va[i] - vb[i];
    return t.record(std::move(out), {a.id, b.id},
                    [](Tape&, const Var&, const Var& g) {
                        return std::vector<Var>{g, neg(g)};
                    },
                    "sub");
}

Var mul(Var a, Var b) {
    require_same_tape(a, b, "mul");
    Tape& t = *a.tape;
    const Tensor& va = t.value(a);
    const Tensor& vb = t.value(b);
    require_same_shape(va, vb, "mul");
    Tensor out(va.shape());
    for (std::size_t i = 0; i < out.numel(); ++i) out[i] = va[i] * vb[i];
    const int aid = a.id;
    const int bid = b.id;
    return t.record(std::move(out), {aid, bid},
                    [aid, bid](Tape& tp, const Var&, const Var& g) {
                        Var av{&tp, aid}, bv{&tp, bid};
                        return std::vector<Var>{mul(g, bv), mul(g, av)};
                    },
                    "mul");
}

Var neg(Var a) {
    Tape& t = *a.tape;
    Tensor out = map_unary(t.value(a), [](double x) { return -x; });
    return t.record(std::move(out), {a.id},
                    [](Tape&, const Var&, const Var& g) {
                        return std::vector<Var>{neg(g)};
                    },
                    "neg");
}

Var scale(Var a, double c) {
    Tape& t = *a.tape;
    const Tensor& va = t.value(a);
    Tensor out(va.shape());
    for (std::size_t i = 0; i < out.numel(); ++i) out[i] = va[i] * c;
    return t.record(std::move(out), {a.id},
                    [c](Tape&, const Var&, const Var& g) {
                        return std::vector<Var>{scale(g, c)};
                    },
                    "scale");
}

Var add_scalar(Var a, double c) {
    Tape& t = *a.tape;
    const Tensor& va = t.value(a);
    Tensor out(va.shape());
    for (std::size_t i = 0; i < out.numel(); ++i) out[i] = va[i] + c;
    return t.record(std::move(out), {a.id},
                    [](Tape&, const Var&, const Var& g) {
                        return std::vector<Var>{g};
                    },
                    "add_scalar");
}

Var matmul(Var a, Var b) {
    require_same_tape(a, b, "matmul");
    Tape& t = *a.tape;
    const Tensor& va = t.value(a);
    const Tensor& vb = t.value(b);
    if (va.ndim() != 2 || vb.ndim() != 2 || va.cols() != vb.rows()) {
        throw ShapeError("matmul: incompatible shapes " + shape_str(va.shape()) + " x " +
                         shape_str(vb.shape()));
    }
    const std::size_t m = va.rows(), k = va.cols(), n = vb.cols();
    Tensor out(Shape{m, n});
    const double* pa = va.data().data();
    const double* pb = vb.data().data();
    double* po = out.data().data();
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t kk = 0; kk < k; ++kk) {
            const double aik = pa[i * k + kk];
            if (aik == 0.0) continue;
            const double* pbr = pb + kk * n;
            double* por = po + i * n;
            for (std::size_t j = 0; j < n; ++j) por[j] += aik * pbr[j];
        }
    }
    const int aid = a.id;
    const int bid = b.id;
    return t.record(std::move(out), {aid, bid},
                    [aid, bid](Tape& tp, const Var&, const Var& g) {
                        Var av{&tp, aid}, bv{&tp, bid};
                        return std::vector<Var>{matmul(g, transpose(bv)),
                                                matmul(transpose(av), g)};
                    },
                    "matmul");
}

Var transpose(Var a) {
    Tape& t = *a.tape;
    const Tensor& va = t.value(a);
    if (va.ndim() != 2) throw ShapeError("transpose: expected matrix, got " + shape_str(va.shape()));
    const std::size_t m = va.rows(), n = va.cols();
    Tensor out(Shape{n, m});
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) out.at(j, i) = va.at(i, j);
    return t.record(std::move(out), {a.id},
                    [](Tape&, const Var&, const Var& g) {
                        return std::vector<Var>{transpose(g)};
                    },
                    "transpose");
}

Var add_rowvec(Var m, Var v) {
    require_same_tape(m, v, "add_rowvec");
    Tape& t = *m.tape;
    const Tensor& vm = t.value(m);
    const Tensor& vv = t.value(v);
    if (vm.ndim() != 2 || vv.ndim() != 2 || vv.rows() != 1 || vv.cols() != vm.cols()) {
        throw ShapeError("add_rowvec: shapes " + shape_str(vm.shape()) + " + " +
                         shape_str(vv.shape()));
    }
    Tensor out(vm.shape());
    for (std::size_t i = 0; i < vm.rows(); ++i)
        for (std::size_t j = 0; j < vm.cols(); ++j) out.at(i, j) = vm.at(i, j) + vv.at(0, j);
    return t.record(std::move(out), {m.id, v.id},
                    [](Tape&, const Var&, const Var& g) {
                        return std::vector<Var>{g, col_sum(g)};
                    },
                    "add_rowvec");
}

Var sigmoid(Var a) {
    Tape& t = *a.tape;
    Tensor out = map_unary(t.value(a), stable_sigmoid);
    return t.record(std::move(out), {a.id},
                    [](Tape&, const Var& out, const Var& g) {
                        // s' = s (1 - s), built from the output itself
                        Var one_minus = add_scalar(neg(out), 1.0);
                        return std::vector<Var>{mul(g, mul(out, one_minus))};
                    },
                    "sigmoid");
}

Var tanh_(Var a) {
    Tape& t = *a.tape;
    Tensor out = map_unary(t.value(a), [](double x) { return std::tanh(x); });
    return t.record(std::move(out), {a.id},
                    [](Tape&, const Var& out, const Var& g) {
                        Var d = add_scalar(neg(square(out)), 1.0);
                        return std::vector<Var>{mul(g, d)};
                    },
                    "tanh");
}

Var lrelu(Var a, double slope) {
    Tape& t = *a.tape;
    const Tensor& va = t.value(a);
    Tensor out(va.shape());
    for (std::size_t i = 0; i < out.numel(); ++i) {
        out[i] = va[i] > 0.0 ? va[i] : slope * va[i];
    }
    const int aid = a.id;
    return t.record(std::move(out), {aid},
                    [aid, slope](Tape& tp, const Var&, const Var& g) {
                        const Tensor& x = tp.value(Var{&tp, aid});
                        Tensor m(x.shape());
                        for (std::size_t i = 0; i < m.numel(); ++i)
                            m[i] = x[i] > 0.0 ? 1.0 : slope;
                        Var mask = mask_node(tp, std::move(m), aid, "lrelu_mask");
                        return std::vector<Var>{mul(g, mask)};
                    },
                    "lrelu");
}

Var exp_(Var a) {
    Tape& t = *a.tape;
    Tensor out = map_unary(t.value(a), [](double x) { return std::exp(x); });
    return t.record(std::move(out), {a.id},
                    [](Tape&, const Var& out, const Var& g) {
                        return std::vector<Var>{mul(g, out)};
                    },
                    "exp");
}

Var log_(Var a) {
    Tape& t = *a.tape;
    const Tensor& va = t.value(a);
    for (std::size_t i = 0; i < va.numel(); ++i) {
        if (!(va[i] > 0.0)) {
            throw DomainError("log: input must be strictly positive, got " +
                              std::to_string(va[i]));
        }
    }
    Tensor out = map_unary(va, [](double x) { return std::log(x); });
    const int aid = a.id;
    return t.record(std::move(out), {aid},
                    [aid](Tape& tp, const Var&, const Var& g) {
                        Var av{&tp, aid};
                        return std::vector<Var>{mul(g, reciprocal(av))};
                    },
                    "log");
}

Var sqrt_(Var a) {
    Tape& t = *a.tape;
    const Tensor& va = t.value(a);
    for (std::size_t i = 0; i < va.numel(); ++i) {
        if (va[i] < 0.0) {
            throw DomainError("sqrt: input must be nonnegative, got " + std::to_string(va[i]));
        }
    }
    Tensor out = map_unary(va, [](double x) { return std::sqrt(x); });
    return t.record(std::move(out), {a.id},
                    [](Tape&, const Var& out, const Var& g) {
                        return std::vector<Var>{scale(mul(g, reciprocal(out)), 0.5)};
                    },
                    "sqrt");
}

Var square(Var a) {
    Tape& t = *a.tape;
    Tensor out = map_unary(t.value(a), [](double x) { return x * x; });
    const int aid = a.id;
    return t.record(std::move(out), {aid},
                    [aid](Tape& tp, const Var&, const Var& g) {
                        Var av{&tp, aid};
                        return std::vector<Var>{scale(mul(g, av), 2.0)};
                    },
                    "square");
}

Var reciprocal(Var a) {
    Tape& t = *a.tape;
    Tensor out = map_unary(t.value(a), [](double x) { return 1.0 / x; });
    return t.record(std::move(out), {a.id},
                    [](Tape&, const Var& out, const Var& g) {
                        return std::vector<Var>{neg(mul(g, square(out)))};
                    },
                    "reciprocal");
}

Var clamp(Var a, double lo, double hi) {
    if (!(lo <= hi)) throw DomainError("clamp: lo > hi");
    Tape& t = *a.tape;
    const Tensor& va = t.value(a);
    Tensor out(va.shape());
    for (std::size_t i = 0; i < out.numel(); ++i) {
        out[i] = va[i] < lo ? lo : (va[i] > hi ? hi : va[i]);
    }
    const int aid = a.id;
    return t.record(std::move(out), {aid},
                    [aid, lo, hi](Tape& tp, const Var&, const Var& g) {
                        const Tensor& x = tp.value(Var{&tp, aid});
                        Tensor m(x.shape());
                        for (std::size_t i = 0; i < m.numel(); ++i)
                            m[i] = (x[i] >= lo && x[i] <= hi) ? 1.0 : 0.0;
                        Var mask = mask_node(tp, std::move(m), aid, "clamp_mask");
                        return std::vector<Var>{mul(g, mask)};
                    },
                    "clamp");
}

Var sum(Var a) {
    Tape& t = *a.tape;
    const Tensor& va = t.value(a);
    double s = 0.0;
    for (std::size_t i = 0; i < va.numel(); ++i) s += va[i];
    Shape in_shape = va.shape();
    return t.record(Tensor::scalar(s), {a.id},
                    [in_shape](Tape&, const Var&, const Var& g) {
                        return std::vector<Var>{broadcast_full(g, in_shape)};
                    },
                    "sum");
}

Var mean(Var a) {
    const std::size_t n = a.tape->value(a).numel();
    return scale(sum(a), 1.0 / static_cast<double>(n));
}

Var row_sum(Var a) {
    Tape& t = *a.tape;
    const Tensor& va = t.value(a);
    if (va.ndim() != 2) throw ShapeError("row_sum: expected matrix");
    const std::size_t m = va.rows(), n = va.cols();
    Tensor out(Shape{m, 1});
    for (std::size_t i = 0; i < m; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j) s += va.at(i, j);
        out[i] = s;
    }
    return t.record(std::move(out), {a.id},
                    [n](Tape&, const Var&, const Var& g) {
                        return std::vector<Var>{broadcast_cols(g, n)};
                    },
                    "row_sum");
}

Var col_sum(Var a) {
    Tape& t = *a.tape;
    const Tensor& va = t.value(a);
    if (va.ndim() != 2) throw ShapeError("col_sum: expected matrix");
    const std::size_t m = va.rows(), n = va.cols();
    Tensor out(Shape{1, n});
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) out[j] += va.at(i, j);
    return t.record(std::move(out), {a.id},
                    [m](Tape&, const Var&, const Var& g) {
                        // tile the row gradient down m rows
                        Var gt = transpose(g);                 // [n,1]
                        Var tiled = broadcast_cols(gt, m);     // [n,m]
                        return std::vector<Var>{transpose(tiled)};
                    },
                    "col_sum");
}

Var broadcast_full(Var s, Shape shape) {
    Tape& t = *s.tape;
    const Tensor& vs = t.value(s);
    if (!vs.is_scalar()) throw ShapeError("broadcast_full: source must be scalar");
    Tensor out(shape, vs.item());
    return t.record(std::move(out), {s.id},
                    [](Tape&, const Var&, const Var& g) {
                        return std::vector<Var>{sum(g)};
                    },
                    "broadcast_full");
}

Var broadcast_cols(Var v, std::size_t cols) {
    Tape& t = *v.tape;
    const Tensor& vv = t.value(v);
    if (vv.ndim() != 2 || vv.cols() != 1) {
        throw ShapeError("broadcast_cols: expected column vector, got " + shape_str(vv.shape()));
    }
    const std::size_t m = vv.rows();
    Tensor out(Shape{m, cols});
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < cols; ++j) out.at(i, j) = vv[i];
    return t.record(std::move(out), {v.id},
                    [](Tape&, const Var&, const Var& g) {
                        return std::vector<Var>{row_sum(g)};
                    },
                    "broadcast_cols");
}

Var reshape(Var a, Shape shape) {
    Tape& t = *a.tape;
    const Tensor& va = t.value(a);
    Shape orig = va.shape();
    Tensor out = va.reshaped(std::move(shape));
    return t.record(std::move(out), {a.id},
                    [orig](Tape&, const Var&, const Var& g) {
                        return std::vector<Var>{reshape(g, orig)};
                    },
                    "reshape");
}

// ---- composites ------------------------------------------------------

Var dot(Var a, Var b) { return sum(mul(a, b)); }

Var l2norm(Var a) { return sqrt_(add_scalar(sum(square(a)), kNormEps)); }

Var row_l2norm(Var a) { return sqrt_(add_scalar(row_sum(square(a)), kNormEps)); }

Var mse(Var a, Var b) { return mean(square(sub(a, b))); }

}  // namespace ganlab::engine
