#include <pwae/autodiff.hpp>

#include <cmath>
#include <cstring>

namespace pwae::ad {

namespace {

constexpr double kArtanhLim = 1.0 - 1e-12;

double clamped(double x, double lo, double hi) { return x < lo ? lo : (x > hi ? hi : x); }

double stable_sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double stable_softplus(double x) {
  return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

[[noreturn]] void shape_error(const char* op) {
  throw std::invalid_argument(std::string("autodiff: shape mismatch in ") + op);
}

}  // namespace

// ---------------------------------------------------------------- Tensor

void Tensor::alloc(int rank, Eigen::Index rows, Eigen::Index cols) {
  rank_ = static_cast<int8_t>(rank);
  rows_ = rows;
  cols_ = cols;
  heap_.reset();
  if (rows * cols > kInline) heap_ = std::make_unique<double[]>(static_cast<std::size_t>(rows * cols));
}

void Tensor::assign(const Tensor& o) {
  alloc(o.rank_, o.rows_, o.cols_);
  if (!o.empty()) std::memcpy(data(), o.data(), sizeof(double) * static_cast<std::size_t>(size()));
}

Tensor Tensor::scalar(double v) {
  Tensor t;
  t.alloc(0, 1, 1);
  t.data()[0] = v;
  return t;
}

Tensor Tensor::vector(const Vec& v) {
  Tensor t;
  t.alloc(1, v.size(), 1);
  t.map().col(0) = v;
  return t;
}

Tensor Tensor::matrix(const Mat& m) {
  Tensor t;
  t.alloc(2, m.rows(), m.cols());
  t.map() = m;
  return t;
}

Tensor Tensor::zeros(int rank, Eigen::Index rows, Eigen::Index cols) {
  Tensor t;
  t.alloc(rank, rows, cols);
  t.map().setZero();
  return t;
}

std::vector<Eigen::Index> Tensor::shape() const {
  switch (rank_) {
    case 0: return {};
    case 1: return {rows_};
    case 2: return {rows_, cols_};
    default: return {};
  }
}

double Tensor::scalar_value() const {
  if (size() != 1) throw std::invalid_argument("Tensor: not a scalar");
  return data()[0];
}

Vec Tensor::to_vec() const {
  if (cols_ != 1) throw std::invalid_argument("Tensor: not a column");
  return map().col(0);
}

Mat Tensor::to_mat() const { return map(); }

// ------------------------------------------------------------------ Tape

Var Tape::push(Op op, Tensor val, int p0, int p1, double c0, double c1, int aux) {
  Node n;
  n.val = std::move(val);
  n.op = op;
  n.p0 = p0;
  n.p1 = p1;
  n.aux = aux;
  n.c0 = c0;
  n.c1 = c1;
  n.rg = (p0 >= 0 && nodes_[static_cast<std::size_t>(p0)].rg) ||
         (p1 >= 0 && nodes_[static_cast<std::size_t>(p1)].rg);
  if (op == Op::kConcatRows || op == Op::kConcatCols) {
    for (int pid : lists_[static_cast<std::size_t>(aux)])
      n.rg = n.rg || nodes_[static_cast<std::size_t>(pid)].rg;
  }
  nodes_.push_back(std::move(n));
  return {this, static_cast<int>(nodes_.size()) - 1};
}

Var Tape::leaf(Tensor value, bool requires_grad) {
  if (value.empty()) throw std::invalid_argument("leaf: empty tensor");
  Var v = push(Op::kLeaf, std::move(value), -1, -1);
  nodes_.back().rg = requires_grad;
  return v;
}

namespace {
// Binary elementwise ops allow equal shapes or a rank-0 operand on either side.
bool bcast_ok(const Tensor& a, const Tensor& b) {
  return a.same_shape(b) || a.rank() == 0 || b.rank() == 0;
}
}  // namespace

Var Tape::add(Var a, Var b) {
  const Tensor &ta = value(a.id), &tb = value(b.id);
  if (!bcast_ok(ta, tb)) shape_error("add");
  const Tensor& big = ta.rank() == 0 ? tb : ta;
  Tensor out = Tensor::zeros_like(big);
  if (ta.same_shape(tb))
    out.map() = ta.map() + tb.map();
  else if (ta.rank() == 0)
    out.map() = tb.map().array() + ta.scalar_value();
  else
    out.map() = ta.map().array() + tb.scalar_value();
  return push(Op::kAdd, std::move(out), a.id, b.id);
}

Var Tape::sub(Var a, Var b) {
  const Tensor &ta = value(a.id), &tb = value(b.id);
  if (!bcast_ok(ta, tb)) shape_error("sub");
  const Tensor& big = ta.rank() == 0 ? tb : ta;
  Tensor out = Tensor::zeros_like(big);
  if (ta.same_shape(tb))
    out.map() = ta.map() - tb.map();
  else if (ta.rank() == 0)
    out.map() = ta.scalar_value() - tb.map().array();
  else
    out.map() = ta.map().array() - tb.scalar_value();
  return push(Op::kSub, std::move(out), a.id, b.id);
}

Var Tape::mul(Var a, Var b) {
  const Tensor &ta = value(a.id), &tb = value(b.id);
  if (!bcast_ok(ta, tb)) shape_error("mul");
  const Tensor& big = ta.rank() == 0 ? tb : ta;
  Tensor out = Tensor::zeros_like(big);
  if (ta.same_shape(tb))
    out.map() = ta.map().cwiseProduct(tb.map());
  else if (ta.rank() == 0)
    out.map() = tb.map() * ta.scalar_value();
  else
    out.map() = ta.map() * tb.scalar_value();
  return push(Op::kMul, std::move(out), a.id, b.id);
}

Var Tape::divide(Var a, Var b) {
  const Tensor &ta = value(a.id), &tb = value(b.id);
  if (!bcast_ok(ta, tb)) shape_error("div");
  const Tensor& big = ta.rank() == 0 ? tb : ta;
  Tensor out = Tensor::zeros_like(big);
  if (ta.same_shape(tb))
    out.map() = ta.map().cwiseQuotient(tb.map());
  else if (ta.rank() == 0)
    out.map() = ta.scalar_value() / tb.map().array();
  else
    out.map() = ta.map().array() / tb.scalar_value();
  return push(Op::kDiv, std::move(out), a.id, b.id);
}

Var Tape::add_c(Var a, double c) {
  Tensor out = value(a.id);
  out.map().array() += c;
  return push(Op::kAddC, std::move(out), a.id, -1, c);
}

Var Tape::rsub_c(double c, Var a) {
  Tensor out = Tensor::zeros_like(value(a.id));
  out.map() = c - value(a.id).map().array();
  return push(Op::kRsubC, std::move(out), a.id, -1, c);
}

Var Tape::mul_c(Var a, double c) {
  Tensor out = Tensor::zeros_like(value(a.id));
  out.map() = value(a.id).map() * c;
  return push(Op::kMulC, std::move(out), a.id, -1, c);
}

Var Tape::matmul(Var a, Var b) {
  const Tensor &ta = value(a.id), &tb = value(b.id);
  if (ta.rank() == 0 || tb.rank() == 0 || ta.cols() != tb.rows()) shape_error("matmul");
  const Eigen::Index r = ta.rows(), c = tb.cols();
  const int rank = (r == 1 && c == 1) ? 0 : (c == 1 ? 1 : 2);
  Tensor out;
  out = Tensor::zeros(rank, r, c);
  out.map() = ta.map() * tb.map();
  return push(Op::kMatmul, std::move(out), a.id, b.id);
}

Var Tape::sum(Var a) {
  return push(Op::kSum, Tensor::scalar(value(a.id).map().sum()), a.id, -1);
}

Var Tape::mean(Var a) {
  return push(Op::kMean, Tensor::scalar(value(a.id).map().mean()), a.id, -1);
}

Var Tape::l2norm(Var a) {
  return push(Op::kL2Norm, Tensor::scalar(value(a.id).map().norm()), a.id, -1);
}

#define PWAE_UNARY(NAME, OP, EXPR)                              \
  Var Tape::NAME(Var a) {                                       \
    Tensor out = Tensor::zeros_like(value(a.id));               \
    auto x = value(a.id).map().array();                         \
    out.map() = (EXPR);                                         \
    return push(Op::OP, std::move(out), a.id, -1);              \
  }

PWAE_UNARY(neg, kNeg, -x)
PWAE_UNARY(exp, kExp, x.exp())
PWAE_UNARY(log, kLog, x.log())
PWAE_UNARY(tanh, kTanh, x.tanh())
PWAE_UNARY(relu, kRelu, x.max(0.0))
PWAE_UNARY(sqrt, kSqrt, x.sqrt())
PWAE_UNARY(square, kSquare, x.square())
#undef PWAE_UNARY

Var Tape::artanh(Var a) {
  Tensor out = Tensor::zeros_like(value(a.id));
  auto x = value(a.id).map().array();
  auto xc = x.min(kArtanhLim).max(-kArtanhLim);
  out.map() = 0.5 * ((1.0 + xc).log() - (1.0 - xc).log());
  return push(Op::kArtanh, std::move(out), a.id, -1);
}

Var Tape::sigmoid(Var a) {
  Tensor out = Tensor::zeros_like(value(a.id));
  const Tensor& ta = value(a.id);
  for (Eigen::Index i = 0; i < ta.size(); ++i) out.data()[i] = stable_sigmoid(ta.data()[i]);
  return push(Op::kSigmoid, std::move(out), a.id, -1);
}

Var Tape::softplus(Var a) {
  Tensor out = Tensor::zeros_like(value(a.id));
  const Tensor& ta = value(a.id);
  for (Eigen::Index i = 0; i < ta.size(); ++i) out.data()[i] = stable_softplus(ta.data()[i]);
  return push(Op::kSoftplus, std::move(out), a.id, -1);
}

Var Tape::erf(Var a) {
  Tensor out = Tensor::zeros_like(value(a.id));
  const Tensor& ta = value(a.id);
  for (Eigen::Index i = 0; i < ta.size(); ++i) out.data()[i] = std::erf(ta.data()[i]);
  return push(Op::kErf, std::move(out), a.id, -1);
}

Var Tape::clamp(Var a, double lo, double hi) {
  Tensor out = Tensor::zeros_like(value(a.id));
  auto x = value(a.id).map().array();
  out.map() = x.max(lo).min(hi);
  return push(Op::kClamp, std::move(out), a.id, -1, lo, hi);
}

Var Tape::concat_rows(std::span<const Var> xs) {
  if (xs.empty()) throw std::invalid_argument("concat_rows: empty");
  Eigen::Index cols = value(xs[0].id).cols(), rows = 0;
  bool all_vec = true;
  std::vector<int> ids;
  ids.reserve(xs.size());
  for (Var v : xs) {
    const Tensor& t = value(v.id);
    if (t.cols() != cols) shape_error("concat_rows");
    rows += t.rows();
    all_vec = all_vec && t.rank() <= 1;
    ids.push_back(v.id);
  }
  Tensor out = Tensor::zeros(all_vec && cols == 1 ? 1 : 2, rows, cols);
  Eigen::Index off = 0;
  for (int id : ids) {
    const Tensor& t = value(id);
    out.map().middleRows(off, t.rows()) = t.map();
    off += t.rows();
  }
  lists_.push_back(std::move(ids));
  return push(Op::kConcatRows, std::move(out), -1, -1, 0, 0, static_cast<int>(lists_.size()) - 1);
}

Var Tape::concat_cols(std::span<const Var> xs) {
  if (xs.empty()) throw std::invalid_argument("concat_cols: empty");
  Eigen::Index rows = value(xs[0].id).rows(), cols = 0;
  std::vector<int> ids;
  ids.reserve(xs.size());
  for (Var v : xs) {
    const Tensor& t = value(v.id);
    if (t.rows() != rows) shape_error("concat_cols");
    cols += t.cols();
    ids.push_back(v.id);
  }
  Tensor out = Tensor::zeros(cols == 1 ? 1 : 2, rows, cols);
  Eigen::Index off = 0;
  for (int id : ids) {
    const Tensor& t = value(id);
    out.map().middleCols(off, t.cols()) = t.map();
    off += t.cols();
  }
  lists_.push_back(std::move(ids));
  return push(Op::kConcatCols, std::move(out), -1, -1, 0, 0, static_cast<int>(lists_.size()) - 1);
}

Var Tape::slice(Var a, Eigen::Index r0, Eigen::Index c0, Eigen::Index nr, Eigen::Index nc) {
  const Tensor& t = value(a.id);
  if (r0 < 0 || c0 < 0 || nr < 1 || nc < 1 || r0 + nr > t.rows() || c0 + nc > t.cols())
    shape_error("slice");
  const int rank = (nr == 1 && nc == 1) ? 0 : ((nr == 1 || nc == 1) ? 1 : 2);
  Tensor out = Tensor::zeros(rank, rank == 1 ? nr * nc : nr, rank == 1 ? 1 : nc);
  Eigen::Map<RowMat>(out.data(), nr, nc) = t.map().block(r0, c0, nr, nc);
  rects_.push_back({r0, c0, nr, nc});
  return push(Op::kSlice, std::move(out), a.id, -1, 0, 0, static_cast<int>(rects_.size()) - 1);
}

Eigen::Map<RowMat> Tape::grad_map(int id, const Tensor& like) {
  Tensor& g = grads_[static_cast<std::size_t>(id)];
  if (g.empty()) g = Tensor::zeros_like(like);
  return g.map();
}

const Tensor& Tape::grad(int id) const {
  const Tensor& g = grads_.at(static_cast<std::size_t>(id));
  if (g.empty()) {
    // Unreached node: its gradient is identically zero.
    const_cast<Tape*>(this)->grads_[static_cast<std::size_t>(id)] =
        Tensor::zeros_like(nodes_[static_cast<std::size_t>(id)].val);
  }
  return grads_[static_cast<std::size_t>(id)];
}

void Tape::backward(Var loss) {
  if (!loss.valid() || loss.tape != this) throw std::invalid_argument("backward: bad loss var");
  if (value(loss.id).size() != 1) throw std::invalid_argument("backward: loss must be scalar");
  grads_.assign(nodes_.size(), Tensor{});
  grads_[static_cast<std::size_t>(loss.id)] = Tensor::scalar(1.0);
  for (int i = loss.id; i >= 0; --i) {
    const Node& n = nodes_[static_cast<std::size_t>(i)];
    const Tensor& g = grads_[static_cast<std::size_t>(i)];
    if (g.empty() || !n.rg || n.op == Op::kLeaf) continue;
    backprop(i, g);
  }
}

void Tape::backprop(int id, const Tensor& g) {
  const Node& n = nodes_[static_cast<std::size_t>(id)];
  const auto rg = [&](int pid) { return pid >= 0 && nodes_[static_cast<std::size_t>(pid)].rg; };
  const auto val = [&](int pid) -> const Tensor& { return nodes_[static_cast<std::size_t>(pid)].val; };

  switch (n.op) {
    case Op::kLeaf:
      break;

    case Op::kAdd: {
      for (int side = 0; side < 2; ++side) {
        const int pid = side == 0 ? n.p0 : n.p1;
        if (!rg(pid)) continue;
        const Tensor& pv = val(pid);
        if (pv.same_shape(g))
          grad_map(pid, pv) += g.map();
        else
          grad_map(pid, pv).array() += g.map().sum();
      }
      break;
    }
    case Op::kSub: {
      if (rg(n.p0)) {
        const Tensor& pv = val(n.p0);
        if (pv.same_shape(g))
          grad_map(n.p0, pv) += g.map();
        else
          grad_map(n.p0, pv).array() += g.map().sum();
      }
      if (rg(n.p1)) {
        const Tensor& pv = val(n.p1);
        if (pv.same_shape(g))
          grad_map(n.p1, pv) -= g.map();
        else
          grad_map(n.p1, pv).array() -= g.map().sum();
      }
      break;
    }
    case Op::kMul: {
      const Tensor &a = val(n.p0), &b = val(n.p1);
      if (rg(n.p0)) {
        if (a.same_shape(g)) {
          if (b.rank() == 0)
            grad_map(n.p0, a) += g.map() * b.scalar_value();
          else
            grad_map(n.p0, a) += g.map().cwiseProduct(b.map());
        } else {  // a is scalar, b matches g
          grad_map(n.p0, a).array() += g.map().cwiseProduct(b.map()).sum();
        }
      }
      if (rg(n.p1)) {
        if (b.same_shape(g)) {
          if (a.rank() == 0)
            grad_map(n.p1, b) += g.map() * a.scalar_value();
          else
            grad_map(n.p1, b) += g.map().cwiseProduct(a.map());
        } else {
          grad_map(n.p1, b).array() += g.map().cwiseProduct(a.map()).sum();
        }
      }
      break;
    }
    case Op::kDiv: {
      const Tensor &a = val(n.p0), &b = val(n.p1);
      if (rg(n.p0)) {
        if (a.same_shape(g)) {
          if (b.rank() == 0)
            grad_map(n.p0, a) += g.map() / b.scalar_value();
          else
            grad_map(n.p0, a) += g.map().cwiseQuotient(b.map());
        } else {
          grad_map(n.p0, a).array() += g.map().cwiseQuotient(b.map()).sum();
        }
      }
      if (rg(n.p1)) {
        const auto& out = n.val;  // out = a / b
        if (b.same_shape(g)) {
          grad_map(n.p1, b).array() -=
              g.map().array() * out.map().array() / b.map().array();
        } else {  // b scalar
          grad_map(n.p1, b).array() -=
              g.map().cwiseProduct(out.map()).sum() / b.scalar_value();
        }
      }
      break;
    }
    case Op::kAddC:
      if (rg(n.p0)) grad_map(n.p0, val(n.p0)) += g.map();
      break;
    case Op::kRsubC:
      if (rg(n.p0)) grad_map(n.p0, val(n.p0)) -= g.map();
      break;
    case Op::kMulC:
      if (rg(n.p0)) grad_map(n.p0, val(n.p0)) += g.map() * n.c0;
      break;

    case Op::kMatmul: {
      const Tensor &a = val(n.p0), &b = val(n.p1);
      Eigen::Map<const RowMat> G(g.data(), a.rows(), b.cols());
      if (rg(n.p0)) grad_map(n.p0, a) += G * b.map().transpose();
      if (rg(n.p1)) grad_map(n.p1, b) += a.map().transpose() * G;
      break;
    }

    case Op::kSum:
      if (rg(n.p0)) grad_map(n.p0, val(n.p0)).array() += g.scalar_value();
      break;
    case Op::kMean:
      if (rg(n.p0)) {
        const Tensor& pv = val(n.p0);
        grad_map(n.p0, pv).array() += g.scalar_value() / static_cast<double>(pv.size());
      }
      break;
    case Op::kL2Norm:
      if (rg(n.p0)) {
        const double out = n.val.scalar_value();
        if (out > 1e-300)
          grad_map(n.p0, val(n.p0)) += (g.scalar_value() / out) * val(n.p0).map();
      }
      break;

    case Op::kNeg:
      if (rg(n.p0)) grad_map(n.p0, val(n.p0)) -= g.map();
      break;
    case Op::kExp:
      if (rg(n.p0)) grad_map(n.p0, val(n.p0)) += g.map().cwiseProduct(n.val.map());
      break;
    case Op::kLog:
      if (rg(n.p0)) grad_map(n.p0, val(n.p0)) += g.map().cwiseQuotient(val(n.p0).map());
      break;
    case Op::kTanh:
      if (rg(n.p0))
        grad_map(n.p0, val(n.p0)).array() +=
            g.map().array() * (1.0 - n.val.map().array().square());
      break;
    case Op::kArtanh:
      if (rg(n.p0)) {
        auto x = val(n.p0).map().array();
        auto xc = x.min(kArtanhLim).max(-kArtanhLim);
        grad_map(n.p0, val(n.p0)).array() += g.map().array() / (1.0 - xc.square());
      }
      break;
    case Op::kSigmoid:
      if (rg(n.p0)) {
        auto s = n.val.map().array();
        grad_map(n.p0, val(n.p0)).array() += g.map().array() * s * (1.0 - s);
      }
      break;
    case Op::kSoftplus:
      if (rg(n.p0)) {
        Eigen::Map<RowMat> gm = grad_map(n.p0, val(n.p0));
        const Tensor& a = val(n.p0);
        for (Eigen::Index i = 0; i < a.size(); ++i)
          gm.data()[i] += g.data()[i] * stable_sigmoid(a.data()[i]);
      }
      break;
    case Op::kRelu:
      if (rg(n.p0)) {
        auto mask = (val(n.p0).map().array() > 0.0).cast<double>();
        grad_map(n.p0, val(n.p0)).array() += g.map().array() * mask;
      }
      break;
    case Op::kErf:
      if (rg(n.p0)) {
        constexpr double kTwoOverSqrtPi = 1.1283791670955126;
        auto x = val(n.p0).map().array();
        grad_map(n.p0, val(n.p0)).array() +=
            g.map().array() * kTwoOverSqrtPi * (-x.square()).exp();
      }
      break;
    case Op::kSqrt:
      if (rg(n.p0)) {
        // Subgradient 0 where the output is exactly 0.
        auto out = n.val.map().array();
        auto safe = (out > 0.0).select(out, 1.0);
        auto mask = (out > 0.0).cast<double>();
        grad_map(n.p0, val(n.p0)).array() += g.map().array() * mask * 0.5 / safe;
      }
      break;
    case Op::kSquare:
      if (rg(n.p0))
        grad_map(n.p0, val(n.p0)).array() += g.map().array() * 2.0 * val(n.p0).map().array();
      break;
    case Op::kClamp:
      if (rg(n.p0)) {
        auto x = val(n.p0).map().array();
        auto mask = (x >= n.c0 && x <= n.c1).cast<double>();
        grad_map(n.p0, val(n.p0)).array() += g.map().array() * mask;
      }
      break;

    case Op::kConcatRows: {
      const auto& ids = lists_[static_cast<std::size_t>(n.aux)];
      Eigen::Map<const RowMat> G(g.data(), n.val.rows(), n.val.cols());
      Eigen::Index off = 0;
      for (int pid : ids) {
        const Tensor& pv = val(pid);
        if (rg(pid)) grad_map(pid, pv) += G.middleRows(off, pv.rows());
        off += pv.rows();
      }
      break;
    }
    case Op::kConcatCols: {
      const auto& ids = lists_[static_cast<std::size_t>(n.aux)];
      Eigen::Map<const RowMat> G(g.data(), n.val.rows(), n.val.cols());
      Eigen::Index off = 0;
      for (int pid : ids) {
        const Tensor& pv = val(pid);
        if (rg(pid)) grad_map(pid, pv) += G.middleCols(off, pv.cols());
        off += pv.cols();
      }
      break;
    }
    case Op::kSlice:
      if (rg(n.p0)) {
        const auto& r = rects_[static_cast<std::size_t>(n.aux)];
        Eigen::Map<const RowMat> G(g.data(), r[2], r[3]);
        grad_map(n.p0, val(n.p0)).block(r[0], r[1], r[2], r[3]) += G;
      }
      break;
  }
}

void Tape::clear() {
  nodes_.clear();
  grads_.clear();
  lists_.clear();
  rects_.clear();
}

// ------------------------------------------------------------ grad_check

double grad_check(const std::function<Var(Tape&, Var)>& f, const Tensor& x0, double h) {
  Tensor x = x0;
  Tensor* params[] = {&x};
  auto wrapped = [&](Tape& t, std::vector<Var>& vars) {
    vars.push_back(t.leaf(x));
    return f(t, vars[0]);
  };
  return grad_check(wrapped, std::span<Tensor* const>(params, 1), h);
}

double grad_check(const std::function<Var(Tape&, std::vector<Var>&)>& build,
                  std::span<Tensor* const> params, double h) {
  std::vector<Tensor> analytic;
  {
    Tape tape;
    std::vector<Var> vars;
    Var loss = build(tape, vars);
    if (vars.size() != params.size())
      throw std::invalid_argument("grad_check: build registered wrong number of leaves");
    tape.backward(loss);
    for (Var v : vars) analytic.push_back(v.grad());
  }
  const auto eval = [&]() {
    Tape tape;
    std::vector<Var> vars;
    return build(tape, vars).value().scalar_value();
  };
  double max_rel = 0.0;
  for (std::size_t p = 0; p < params.size(); ++p) {
    Tensor& t = *params[p];
    for (Eigen::Index i = 0; i < t.size(); ++i) {
      const double keep = t.data()[i];
      t.data()[i] = keep + h;
      const double fp = eval();
      t.data()[i] = keep - h;
      const double fm = eval();
      t.data()[i] = keep;
      const double numeric = (fp - fm) / (2.0 * h);
      const double an = analytic[p].data()[i];
      const double denom = std::max(1e-8, std::abs(an) + std::abs(numeric));
      max_rel = std::max(max_rel, std::abs(an - numeric) / denom);
    }
  }
  return max_rel;
}

}  // namespace pwae::ad
