#pragma once

#include <pwae/common.hpp>

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <stdexcept>
#include <vector>

namespace pwae::ad {

/// Dense f64 tensor of rank 0, 1 or 2 with a row-major buffer.
/// Rank 0 is stored as 1x1, rank 1 as n x 1. Buffers of up to four entries
/// live inline, larger ones on the heap.
class Tensor {
 public:
  Tensor() = default;
  Tensor(const Tensor& o) { assign(o); }
  Tensor(Tensor&&) noexcept = default;
  Tensor& operator=(const Tensor& o) {
    if (this != &o) assign(o);
    return *this;
  }
  Tensor& operator=(Tensor&&) noexcept = default;

  static Tensor scalar(double v);
  static Tensor vector(const Vec& v);
  static Tensor matrix(const Mat& m);
  static Tensor zeros(int rank, Eigen::Index rows, Eigen::Index cols);
  static Tensor zeros_like(const Tensor& t) { return zeros(t.rank_, t.rows_, t.cols_); }

  bool empty() const { return rank_ < 0; }
  int rank() const { return rank_; }
  Eigen::Index rows() const { return rows_; }
  Eigen::Index cols() const { return cols_; }
  Eigen::Index size() const { return rows_ * cols_; }
  std::vector<Eigen::Index> shape() const;
  bool same_shape(const Tensor& o) const {
    return rank_ == o.rank_ && rows_ == o.rows_ && cols_ == o.cols_;
  }

  double* data() { return heap_ ? heap_.get() : inl_.data(); }
  const double* data() const { return heap_ ? heap_.get() : inl_.data(); }

  Eigen::Map<RowMat> map() { return {data(), rows_, cols_}; }
  Eigen::Map<const RowMat> map() const { return {data(), rows_, cols_}; }

  double scalar_value() const;
  Vec to_vec() const;
  Mat to_mat() const;

 private:
  void alloc(int rank, Eigen::Index rows, Eigen::Index cols);
  void assign(const Tensor& o);

  static constexpr Eigen::Index kInline = 4;
  int8_t rank_ = -1;
  Eigen::Index rows_ = 0, cols_ = 0;
  std::array<double, kInline> inl_{};
  std::unique_ptr<double[]> heap_;
};

class Tape;

/// Handle to a tape node. Cheap to copy; the tape owns all storage.
struct Var {
  Tape* tape = nullptr;
  int id = -1;

  bool valid() const { return tape != nullptr && id >= 0; }
  const Tensor& value() const;
  const Tensor& grad() const;
};

enum class Op : std::uint8_t {
  kLeaf,
  kAdd, kSub, kMul, kDiv,
  kAddC, kRsubC, kMulC,
  kMatmul,
  kSum, kMean, kL2Norm,
  kNeg, kExp, kLog, kTanh, kArtanh, kSigmoid, kSoftplus, kRelu, kErf,
  kSqrt, kSquare, kClamp,
  kConcatRows, kConcatCols, kSlice,
};

/// Reverse-mode tape over f64 tensors. Nodes are recorded in topological
/// (creation) order with eagerly computed forward values; backward() walks
/// them once in reverse, accumulating gradients additively across fan-out.
/// Single-owner: one tape per thread of execution.
class Tape {
 public:
  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;
  Tape(Tape&&) noexcept = default;
  Tape& operator=(Tape&&) noexcept = default;

  Var leaf(Tensor value, bool requires_grad = true);
  Var constant(double v) { return leaf(Tensor::scalar(v), false); }

  Var add(Var a, Var b);
  Var sub(Var a, Var b);
  Var mul(Var a, Var b);
  Var divide(Var a, Var b);
  Var add_c(Var a, double c);
  Var rsub_c(double c, Var a);  // c - a
  Var mul_c(Var a, double c);
  Var matmul(Var a, Var b);
  Var sum(Var a);
  Var mean(Var a);
  Var l2norm(Var a);
  Var neg(Var a);
  Var exp(Var a);
  Var log(Var a);
  Var tanh(Var a);
  Var artanh(Var a);
  Var sigmoid(Var a);
  Var softplus(Var a);
  Var relu(Var a);
  Var erf(Var a);
  Var sqrt(Var a);
  Var square(Var a);
  Var clamp(Var a, double lo, double hi);
  Var concat_rows(std::span<const Var> xs);
  Var concat_cols(std::span<const Var> xs);
  Var slice(Var a, Eigen::Index r0, Eigen::Index c0, Eigen::Index nr, Eigen::Index nc);

  /// Propagates d(loss)/d(node) to every node; loss must be scalar.
  /// Leaves not reachable from the loss keep a zero gradient.
  void backward(Var loss);

  const Tensor& value(int id) const { return nodes_[static_cast<std::size_t>(id)].val; }
  const Tensor& grad(int id) const;
  bool requires_grad(int id) const { return nodes_[static_cast<std::size_t>(id)].rg; }

  std::size_t node_count() const { return nodes_.size(); }
  void clear();

 private:
  struct Node {
    Tensor val;
    Op op = Op::kLeaf;
    bool rg = false;
    int p0 = -1, p1 = -1;
    int aux = -1;
    double c0 = 0.0, c1 = 0.0;
  };

  Var push(Op op, Tensor val, int p0, int p1, double c0 = 0.0, double c1 = 0.0, int aux = -1);
  Eigen::Map<RowMat> grad_map(int id, const Tensor& like);
  void backprop_binary(const Node& n, const Tensor& g);
  void backprop(int id, const Tensor& g);

  std::vector<Node> nodes_;
  std::vector<Tensor> grads_;
  std::vector<std::vector<int>> lists_;
  std::vector<std::array<Eigen::Index, 4>> rects_;
  Tensor empty_grad_;
};

inline const Tensor& Var::value() const { return tape->value(id); }
inline const Tensor& Var::grad() const { return tape->grad(id); }

inline Var operator+(Var a, Var b) { return a.tape->add(a, b); }
inline Var operator-(Var a, Var b) { return a.tape->sub(a, b); }
inline Var operator*(Var a, Var b) { return a.tape->mul(a, b); }
inline Var operator/(Var a, Var b) { return a.tape->divide(a, b); }
inline Var operator+(Var a, double c) { return a.tape->add_c(a, c); }
inline Var operator+(double c, Var a) { return a.tape->add_c(a, c); }
inline Var operator-(Var a, double c) { return a.tape->add_c(a, -c); }
inline Var operator-(double c, Var a) { return a.tape->rsub_c(c, a); }
inline Var operator*(Var a, double c) { return a.tape->mul_c(a, c); }
inline Var operator*(double c, Var a) { return a.tape->mul_c(a, c); }
inline Var operator/(Var a, double c) { return a.tape->mul_c(a, 1.0 / c); }
inline Var operator-(Var a) { return a.tape->neg(a); }

inline Var matmul(Var a, Var b) { return a.tape->matmul(a, b); }
inline Var sum(Var a) { return a.tape->sum(a); }
inline Var mean(Var a) { return a.tape->mean(a); }
inline Var l2norm(Var a) { return a.tape->l2norm(a); }
inline Var exp(Var a) { return a.tape->exp(a); }
inline Var log(Var a) { return a.tape->log(a); }
inline Var tanh(Var a) { return a.tape->tanh(a); }
inline Var artanh(Var a) { return a.tape->artanh(a); }
inline Var sigmoid(Var a) { return a.tape->sigmoid(a); }
inline Var softplus(Var a) { return a.tape->softplus(a); }
inline Var relu(Var a) { return a.tape->relu(a); }
inline Var erf(Var a) { return a.tape->erf(a); }
inline Var sqrt(Var a) { return a.tape->sqrt(a); }
inline Var square(Var a) { return a.tape->square(a); }
inline Var clamp(Var a, double lo, double hi) { return a.tape->clamp(a, lo, hi); }

/// Max componentwise relative error between the reverse-mode gradient of
/// f at x0 and central differences with step h. The relative error uses
/// the denominator max(1e-8, |analytic| + |numeric|).
double grad_check(const std::function<Var(Tape&, Var)>& f, const Tensor& x0, double h = 1e-5);

/// Multi-parameter variant: `build` must register one leaf per entry of
/// `params` (in order, pushing into its second argument) and return a scalar
/// loss. Every parameter component is perturbed in turn.
double grad_check(const std::function<Var(Tape&, std::vector<Var>&)>& build,
                  std::span<Tensor* const> params, double h = 1e-5);

}  // namespace pwae::ad
