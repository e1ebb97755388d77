#include "hograph/autodiff.hpp"

#include <cmath>
#include <stdexcept>

namespace hograph::ad {

Mat relu_kernel(const Mat& x) { return x.cwiseMax(0.0); }

Mat softmax_rows_kernel(const Mat& x) {
  Mat y(x.rows(), x.cols());
  for (long i = 0; i < x.rows(); ++i) {
    double m = x.row(i).maxCoeff();
    y.row(i) = (x.row(i).array() - m).exp();
    y.row(i) /= y.row(i).sum();
  }
  return y;
}

Mat aggregate_kernel(const Mat& self, const Mat& neigh,
                     const std::vector<int>& src, const std::vector<int>& dst,
                     const Eigen::Ref<const Eigen::VectorXd>& weights) {
  Mat out = self;
  for (size_t e = 0; e < src.size(); ++e)
    out.row(dst[e]) += weights(long(e)) * neigh.row(src[e]);
  return out;
}

int Tape::emplace(Node node) {
  nodes_.push_back(std::move(node));
  return int(nodes_.size()) - 1;
}

namespace {

Var make(Tape& t, Node n) { return Var{&t, t.emplace(std::move(n))}; }

void check_same_shape(const Mat& a, const Mat& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument(std::string(what) + ": shape mismatch");
}

}  // namespace

Var Tape::constant(const Mat& value) {
  Node n;
  n.op = Op::leaf;
  n.value = value;
  return make(*this, std::move(n));
}

Var Tape::param(const Mat& value) { return constant(value); }

Var add(Var a, Var b) {
  Tape& t = *a.tape;
  check_same_shape(t.value(a), t.value(b), "add");
  Node n;
  n.op = Op::add;
  n.a = a.id;
  n.b = b.id;
  n.value = t.value(a) + t.value(b);
  return make(t, std::move(n));
}

Var sub(Var a, Var b) {
  Tape& t = *a.tape;
  check_same_shape(t.value(a), t.value(b), "sub");
  Node n;
  n.op = Op::sub;
  n.a = a.id;
  n.b = b.id;
  n.value = t.value(a) - t.value(b);
  return make(t, std::move(n));
}

Var scale(Var a, double k) {
  Tape& t = *a.tape;
  Node n;
  n.op = Op::scale;
  n.a = a.id;
  n.k = k;
  n.value = k * t.value(a);
  return make(t, std::move(n));
}

Var cmul(Var a, Var b) {
  Tape& t = *a.tape;
  check_same_shape(t.value(a), t.value(b), "cmul");
  Node n;
  n.op = Op::cmul;
  n.a = a.id;
  n.b = b.id;
  n.value = t.value(a).cwiseProduct(t.value(b));
  return make(t, std::move(n));
}

Var matmul(Var a, Var b) {
  Tape& t = *a.tape;
  if (t.value(a).cols() != t.value(b).rows())
    throw std::invalid_argument("matmul: inner dimensions differ");
  Node n;
  n.op = Op::matmul;
  n.a = a.id;
  n.b = b.id;
  n.value = t.value(a) * t.value(b);
  return make(t, std::move(n));
}

Var transpose(Var a) {
  Tape& t = *a.tape;
  Node n;
  n.op = Op::transpose;
  n.a = a.id;
  n.value = t.value(a).transpose();
  return make(t, std::move(n));
}

Var relu(Var a) {
  Tape& t = *a.tape;
  Node n;
  n.op = Op::relu;
  n.a = a.id;
  n.value = relu_kernel(t.value(a));
  return make(t, std::move(n));
}

Var softmax_rows(Var a) {
  Tape& t = *a.tape;
  Node n;
  n.op = Op::softmax_rows;
  n.a = a.id;
  n.value = softmax_rows_kernel(t.value(a));
  return make(t, std::move(n));
}

Var concat_cols(Var a, Var b) {
  Tape& t = *a.tape;
  if (t.value(a).rows() != t.value(b).rows())
    throw std::invalid_argument("concat_cols: row counts differ");
  Node n;
  n.op = Op::concat_cols;
  n.a = a.id;
  n.b = b.id;
  n.value.resize(t.value(a).rows(), t.value(a).cols() + t.value(b).cols());
  n.value << t.value(a), t.value(b);
  return make(t, std::move(n));
}

Var concat_cols(const std::vector<Var>& parts) {
  if (parts.empty()) throw std::invalid_argument("concat_cols: empty");
  Var out = parts[0];
  for (size_t i = 1; i < parts.size(); ++i) out = concat_cols(out, parts[i]);
  return out;
}

Var block(Var a, int i0, int j0, int rows, int cols) {
  Tape& t = *a.tape;
  Node n;
  n.op = Op::block;
  n.a = a.id;
  n.i0 = i0;
  n.j0 = j0;
  n.value = t.value(a).block(i0, j0, rows, cols);
  return make(t, std::move(n));
}

Var broadcast_rows(Var row, int rows) {
  Tape& t = *row.tape;
  if (t.value(row).rows() != 1)
    throw std::invalid_argument("broadcast_rows: input must have one row");
  Node n;
  n.op = Op::broadcast_rows;
  n.a = row.id;
  n.value = t.value(row).replicate(rows, 1);
  return make(t, std::move(n));
}

Var sum(Var a) {
  Tape& t = *a.tape;
  Node n;
  n.op = Op::sum;
  n.a = a.id;
  n.value = Mat::Constant(1, 1, t.value(a).sum());
  return make(t, std::move(n));
}

Var mean(Var a) {
  Tape& t = *a.tape;
  Node n;
  n.op = Op::mean;
  n.a = a.id;
  n.value = Mat::Constant(1, 1, t.value(a).mean());
  return make(t, std::move(n));
}

Var sqrt_elem(Var a) {
  Tape& t = *a.tape;
  Node n;
  n.op = Op::sqrt_elem;
  n.a = a.id;
  n.value = t.value(a).cwiseSqrt();
  return make(t, std::move(n));
}

Var squared_norm(Var a) {
  Tape& t = *a.tape;
  Node n;
  n.op = Op::squared_norm;
  n.a = a.id;
  n.value = Mat::Constant(1, 1, t.value(a).squaredNorm());
  return make(t, std::move(n));
}

Var row_min(Var a) {
  Tape& t = *a.tape;
  const Mat& x = t.value(a);
  Node n;
  n.op = Op::row_min;
  n.a = a.id;
  n.value.resize(x.rows(), 1);
  n.ia.resize(size_t(x.rows()));
  for (long i = 0; i < x.rows(); ++i) {
    int arg = 0;
    double best = x(i, 0);
    for (long j = 1; j < x.cols(); ++j)
      if (x(i, j) < best) {
        best = x(i, j);
        arg = int(j);
      }
    n.value(i, 0) = best;
    n.ia[size_t(i)] = arg;
  }
  return make(t, std::move(n));
}

Var row_sums(Var a) {
  Tape& t = *a.tape;
  Node n;
  n.op = Op::row_sums;
  n.a = a.id;
  n.value = t.value(a).rowwise().sum();
  return make(t, std::move(n));
}

Var gather_rows(Var a, const std::vector<int>& rows) {
  Tape& t = *a.tape;
  const Mat& x = t.value(a);
  Node n;
  n.op = Op::gather_rows;
  n.a = a.id;
  n.ia = rows;
  n.value.resize(long(rows.size()), x.cols());
  for (size_t e = 0; e < rows.size(); ++e) n.value.row(long(e)) = x.row(rows[e]);
  return make(t, std::move(n));
}

Var gather_entries(Var a, const std::vector<int>& rows,
                   const std::vector<int>& cols) {
  if (rows.size() != cols.size())
    throw std::invalid_argument("gather_entries: index lengths differ");
  Tape& t = *a.tape;
  const Mat& x = t.value(a);
  Node n;
  n.op = Op::gather_entries;
  n.a = a.id;
  n.ia = rows;
  n.ib = cols;
  n.value.resize(long(rows.size()), 1);
  for (size_t e = 0; e < rows.size(); ++e)
    n.value(long(e), 0) = x(rows[e], cols[e]);
  return make(t, std::move(n));
}

Var edge_aggregate(Var self, Var neigh, Var weights,
                   const std::vector<int>& src, const std::vector<int>& dst) {
  if (src.size() != dst.size())
    throw std::invalid_argument("edge_aggregate: index lengths differ");
  Tape& t = *self.tape;
  const Mat& w = t.value(weights);
  if (size_t(w.rows()) != src.size() || w.cols() != 1)
    throw std::invalid_argument("edge_aggregate: weights must be E x 1");
  Node n;
  n.op = Op::edge_aggregate;
  n.a = self.id;
  n.b = neigh.id;
  n.c = weights.id;
  n.ia = src;
  n.ib = dst;
  n.value = aggregate_kernel(t.value(self), t.value(neigh), src, dst, w.col(0));
  return make(t, std::move(n));
}

void Tape::backward(Var loss, double seed) {
  if (loss.tape != this) throw std::invalid_argument("backward: foreign var");
  const Node& top = nodes_[size_t(loss.id)];
  if (top.value.rows() != 1 || top.value.cols() != 1)
    throw std::invalid_argument("backward: loss must be 1x1");

  for (Node& n : nodes_) n.grad = Mat::Zero(n.value.rows(), n.value.cols());
  nodes_[size_t(loss.id)].grad(0, 0) = seed;

  for (int id = loss.id; id >= 0; --id) {
    Node& n = nodes_[size_t(id)];
    const Mat& g = n.grad;
    if (n.op == Op::leaf) continue;
    Mat& ga = nodes_[size_t(n.a)].grad;
    switch (n.op) {
      case Op::add:
        ga += g;
        nodes_[size_t(n.b)].grad += g;
        break;
      case Op::sub:
        ga += g;
        nodes_[size_t(n.b)].grad -= g;
        break;
      case Op::scale:
        ga += n.k * g;
        break;
      case Op::cmul:
        ga += g.cwiseProduct(nodes_[size_t(n.b)].value);
        nodes_[size_t(n.b)].grad += g.cwiseProduct(nodes_[size_t(n.a)].value);
        break;
      case Op::matmul:
        ga += g * nodes_[size_t(n.b)].value.transpose();
        nodes_[size_t(n.b)].grad += nodes_[size_t(n.a)].value.transpose() * g;
        break;
      case Op::transpose:
        ga += g.transpose();
        break;
      case Op::relu:
        ga += g.cwiseProduct(
            (nodes_[size_t(n.a)].value.array() > 0.0).cast<double>().matrix());
        break;
      case Op::softmax_rows:
        for (long i = 0; i < g.rows(); ++i) {
          double dot = g.row(i).dot(n.value.row(i));
          ga.row(i) +=
              n.value.row(i).cwiseProduct((g.row(i).array() - dot).matrix());
        }
        break;
      case Op::concat_cols: {
        long ca = nodes_[size_t(n.a)].value.cols();
        ga += g.leftCols(ca);
        nodes_[size_t(n.b)].grad += g.rightCols(g.cols() - ca);
        break;
      }
      case Op::block:
        ga.block(n.i0, n.j0, g.rows(), g.cols()) += g;
        break;
      case Op::broadcast_rows:
        ga += g.colwise().sum();
        break;
      case Op::sum:
        ga.array() += g(0, 0);
        break;
      case Op::mean:
        ga.array() += g(0, 0) / double(ga.size());
        break;
      case Op::sqrt_elem:
        ga += g.cwiseQuotient(2.0 * n.value);
        break;
      case Op::squared_norm:
        ga += 2.0 * g(0, 0) * nodes_[size_t(n.a)].value;
        break;
      case Op::row_min:
        for (long i = 0; i < g.rows(); ++i) ga(i, n.ia[size_t(i)]) += g(i, 0);
        break;
      case Op::row_sums:
        ga.colwise() += g.col(0);
        break;
      case Op::gather_rows:
        for (size_t e = 0; e < n.ia.size(); ++e)
          ga.row(n.ia[e]) += g.row(long(e));
        break;
      case Op::gather_entries:
        for (size_t e = 0; e < n.ia.size(); ++e)
          ga(n.ia[e], n.ib[e]) += g(long(e), 0);
        break;
      case Op::edge_aggregate: {
        Mat& gb = nodes_[size_t(n.b)].grad;
        Mat& gc = nodes_[size_t(n.c)].grad;
        const Mat& neigh = nodes_[size_t(n.b)].value;
        ga += g;
        const Mat& w = nodes_[size_t(n.c)].value;
        for (size_t e = 0; e < n.ia.size(); ++e) {
          gb.row(n.ia[e]) += w(long(e), 0) * g.row(n.ib[e]);
          gc(long(e), 0) += neigh.row(n.ia[e]).dot(g.row(n.ib[e]));
        }
        break;
      }
      case Op::leaf:
        break;
    }
  }
}

}  // namespace hograph::ad
