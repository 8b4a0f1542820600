//! Define-by-run reverse-mode differentiation over [`DenseMatrix`] values.
//!
//! Every primitive appends one node holding its computed value. Inputs always
//! precede their consumers, so a single reverse sweep over the node list
//! propagates adjoints. The record is meant to be rebuilt for each objective
//! evaluation.

use crate::error::{Error, Result};
use crate::tensor::dense::{matmul_nt_into, matmul_tn_into};
use crate::tensor::{DenseMatrix, SparseMatrix};

/// Handle to a node on a [`Tape`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Var(usize);

impl Var {
    pub fn index(self) -> usize {
        self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PrimitiveKind {
    Leaf,
    MatMul,
    SparseMatMul,
    Add,
    Sub,
    Mul,
    Scale,
    Transpose,
    AddRow,
    MulCol,
    Relu,
    Sigmoid,
    LogSigmoid,
    SoftmaxRows,
    LogSoftmaxRows,
    MeanRows,
    MaxRows,
    Square,
    Sum,
    RowDot,
    ConcatCols,
    Column,
}

#[derive(Debug)]
enum Op<'a> {
    Leaf,
    MatMul(Var, Var),
    SparseMatMul(&'a SparseMatrix, Var),
    Add(Var, Var),
    Sub(Var, Var),
    Mul(Var, Var),
    Scale(Var, f64),
    Transpose(Var),
    AddRow(Var, Var),
    MulCol(Var, Var),
    Relu(Var),
    Sigmoid(Var),
    LogSigmoid(Var),
    SoftmaxRows(Var),
    LogSoftmaxRows(Var),
    MeanRows(Var),
    MaxRows(Var, Vec<usize>),
    Square(Var),
    Sum(Var),
    RowDot(Var, Var),
    ConcatCols(Vec<Var>),
    Column(Var, usize),
}

impl Op<'_> {
    fn kind(&self) -> PrimitiveKind {
        match self {
            Op::Leaf => PrimitiveKind::Leaf,
            Op::MatMul(..) => PrimitiveKind::MatMul,
            Op::SparseMatMul(..) => PrimitiveKind::SparseMatMul,
            Op::Add(..) => PrimitiveKind::Add,
            Op::Sub(..) => PrimitiveKind::Sub,
            Op::Mul(..) => PrimitiveKind::Mul,
            Op::Scale(..) => PrimitiveKind::Scale,
            Op::Transpose(..) => PrimitiveKind::Transpose,
            Op::AddRow(..) => PrimitiveKind::AddRow,
            Op::MulCol(..) => PrimitiveKind::MulCol,
            Op::Relu(..) => PrimitiveKind::Relu,
            Op::Sigmoid(..) => PrimitiveKind::Sigmoid,
            Op::LogSigmoid(..) => PrimitiveKind::LogSigmoid,
            Op::SoftmaxRows(..) => PrimitiveKind::SoftmaxRows,
            Op::LogSoftmaxRows(..) => PrimitiveKind::LogSoftmaxRows,
            Op::MeanRows(..) => PrimitiveKind::MeanRows,
            Op::MaxRows(..) => PrimitiveKind::MaxRows,
            Op::Square(..) => PrimitiveKind::Square,
            Op::Sum(..) => PrimitiveKind::Sum,
            Op::RowDot(..) => PrimitiveKind::RowDot,
            Op::ConcatCols(..) => PrimitiveKind::ConcatCols,
            Op::Column(..) => PrimitiveKind::Column,
        }
    }
}

#[derive(Debug)]
struct Node<'a> {
    op: Op<'a>,
    value: DenseMatrix,
    requires_grad: bool,
}

/// The computation record. Sparse operands are borrowed for the lifetime of
/// the tape.
#[derive(Debug, Default)]
pub struct Tape<'a> {
    nodes: Vec<Node<'a>>,
}

/// Adjoints of a scalar loss, indexed by [`Var`].
#[derive(Debug)]
pub struct Gradients {
    grads: Vec<Option<DenseMatrix>>,
    shapes: Vec<(usize, usize)>,
}

impl Gradients {
    /// Gradient with respect to `var`; all-zero when the loss does not
    /// depend on it.
    pub fn wrt(&self, var: Var) -> DenseMatrix {
        match &self.grads[var.0] {
            Some(g) => g.clone(),
            None => {
                let (r, c) = self.shapes[var.0];
                DenseMatrix::zeros(r, c)
            }
        }
    }

    pub fn take(&mut self, var: Var) -> DenseMatrix {
        self.grads[var.0].take().unwrap_or_else(|| {
            let (r, c) = self.shapes[var.0];
            DenseMatrix::zeros(r, c)
        })
    }
}

#[inline]
pub fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

/// `ln σ(x)` without forming `σ(x)`.
#[inline]
pub fn log_sigmoid(x: f64) -> f64 {
    x.min(0.0) - (-x.abs()).exp().ln_1p()
}

fn same_shape(op: &'static str, a: &DenseMatrix, b: &DenseMatrix) -> Result<()> {
    if a.shape() != b.shape() {
        return Err(Error::shape(
            op,
            format!("{:?} vs {:?}", a.shape(), b.shape()),
        ));
    }
    Ok(())
}

impl<'a> Tape<'a> {
    pub fn new() -> Self {
        Self { nodes: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn value(&self, v: Var) -> &DenseMatrix {
        &self.nodes[v.0].value
    }

    pub fn kind(&self, v: Var) -> PrimitiveKind {
        self.nodes[v.0].op.kind()
    }

    /// Scalar value of a 1×1 node.
    pub fn scalar(&self, v: Var) -> f64 {
        let m = self.value(v);
        debug_assert_eq!(m.shape(), (1, 1));
        m.get(0, 0)
    }

    /// A trainable leaf; gradients are tracked through it.
    pub fn param(&mut self, value: DenseMatrix) -> Result<Var> {
        self.leaf(value, true)
    }

    /// A leaf treated as a constant.
    pub fn constant(&mut self, value: DenseMatrix) -> Result<Var> {
        self.leaf(value, false)
    }

    fn leaf(&mut self, value: DenseMatrix, requires_grad: bool) -> Result<Var> {
        if !value.is_finite() {
            return Err(Error::NumericDomain { op: "leaf" });
        }
        self.nodes.push(Node {
            op: Op::Leaf,
            value,
            requires_grad,
        });
        Ok(Var(self.nodes.len() - 1))
    }

    fn push(&mut self, op: Op<'a>, value: DenseMatrix, inputs: &[Var]) -> Result<Var> {
        if !value.is_finite() {
            let kind = op.kind();
            return Err(Error::NumericDomain {
                op: kind_name(kind),
            });
        }
        let requires_grad = inputs.iter().any(|v| self.nodes[v.0].requires_grad);
        self.nodes.push(Node {
            op,
            value,
            requires_grad,
        });
        Ok(Var(self.nodes.len() - 1))
    }

    pub fn matmul(&mut self, a: Var, b: Var) -> Result<Var> {
        let value = self.value(a).matmul(self.value(b))?;
        self.push(Op::MatMul(a, b), value, &[a, b])
    }

    pub fn sparse_matmul(&mut self, s: &'a SparseMatrix, b: Var) -> Result<Var> {
        let value = s.matmul_dense(self.value(b))?;
        self.push(Op::SparseMatMul(s, b), value, &[b])
    }

    pub fn add(&mut self, a: Var, b: Var) -> Result<Var> {
        same_shape("add", self.value(a), self.value(b))?;
        let value = self.value(a).zip_map(self.value(b), |x, y| x + y);
        self.push(Op::Add(a, b), value, &[a, b])
    }

    pub fn sub(&mut self, a: Var, b: Var) -> Result<Var> {
        same_shape("sub", self.value(a), self.value(b))?;
        let value = self.value(a).zip_map(self.value(b), |x, y| x - y);
        self.push(Op::Sub(a, b), value, &[a, b])
    }

    /// Elementwise product.
    pub fn mul(&mut self, a: Var, b: Var) -> Result<Var> {
        same_shape("mul", self.value(a), self.value(b))?;
        let value = self.value(a).zip_map(self.value(b), |x, y| x * y);
        self.push(Op::Mul(a, b), value, &[a, b])
    }

    pub fn scale(&mut self, a: Var, c: f64) -> Result<Var> {
        if !c.is_finite() {
            return Err(Error::NumericDomain { op: "scale" });
        }
        let value = self.value(a).map(|x| c * x);
        self.push(Op::Scale(a, c), value, &[a])
    }

    pub fn transpose(&mut self, a: Var) -> Result<Var> {
        let value = self.value(a).transpose();
        self.push(Op::Transpose(a), value, &[a])
    }

    /// Adds the 1×m `row` to every row of `a`.
    pub fn add_row(&mut self, a: Var, row: Var) -> Result<Var> {
        let (av, rv) = (self.value(a), self.value(row));
        if rv.rows() != 1 || rv.cols() != av.cols() {
            return Err(Error::shape(
                "add_row",
                format!("{:?} plus row {:?}", av.shape(), rv.shape()),
            ));
        }
        let mut value = av.clone();
        let r = rv.row(0);
        for i in 0..value.rows() {
            for (x, &b) in value.row_mut(i).iter_mut().zip(r) {
                *x += b;
            }
        }
        self.push(Op::AddRow(a, row), value, &[a, row])
    }

    /// Scales row `i` of `a` by entry `i` of the n×1 `col`.
    pub fn mul_col(&mut self, a: Var, col: Var) -> Result<Var> {
        let (av, cv) = (self.value(a), self.value(col));
        if cv.cols() != 1 || cv.rows() != av.rows() {
            return Err(Error::shape(
                "mul_col",
                format!("{:?} times column {:?}", av.shape(), cv.shape()),
            ));
        }
        let mut value = av.clone();
        for i in 0..value.rows() {
            let c = cv.get(i, 0);
            value.row_mut(i).iter_mut().for_each(|x| *x *= c);
        }
        self.push(Op::MulCol(a, col), value, &[a, col])
    }

    pub fn relu(&mut self, a: Var) -> Result<Var> {
        let value = self.value(a).map(|x| x.max(0.0));
        self.push(Op::Relu(a), value, &[a])
    }

    pub fn sigmoid(&mut self, a: Var) -> Result<Var> {
        let value = self.value(a).map(sigmoid);
        self.push(Op::Sigmoid(a), value, &[a])
    }

    pub fn log_sigmoid(&mut self, a: Var) -> Result<Var> {
        let value = self.value(a).map(log_sigmoid);
        self.push(Op::LogSigmoid(a), value, &[a])
    }

    pub fn softmax_rows(&mut self, a: Var) -> Result<Var> {
        let mut value = self.value(a).clone();
        for i in 0..value.rows() {
            let row = value.row_mut(i);
            let max = row.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let mut total = 0.0;
            for x in row.iter_mut() {
                *x = (*x - max).exp();
                total += *x;
            }
            row.iter_mut().for_each(|x| *x /= total);
        }
        self.push(Op::SoftmaxRows(a), value, &[a])
    }

    pub fn log_softmax_rows(&mut self, a: Var) -> Result<Var> {
        let mut value = self.value(a).clone();
        for i in 0..value.rows() {
            let row = value.row_mut(i);
            let max = row.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let lse = max + row.iter().map(|x| (x - max).exp()).sum::<f64>().ln();
            row.iter_mut().for_each(|x| *x -= lse);
        }
        self.push(Op::LogSoftmaxRows(a), value, &[a])
    }

    /// Mean over rows, giving a 1×m row vector.
    pub fn mean_rows(&mut self, a: Var) -> Result<Var> {
        let av = self.value(a);
        if av.rows() == 0 {
            return Err(Error::shape("mean_rows", "matrix has no rows"));
        }
        let mut value = DenseMatrix::zeros(1, av.cols());
        for r in av.row_iter() {
            for (o, &x) in value.row_mut(0).iter_mut().zip(r) {
                *o += x;
            }
        }
        let n = av.rows() as f64;
        value.as_mut_slice().iter_mut().for_each(|x| *x /= n);
        self.push(Op::MeanRows(a), value, &[a])
    }

    /// Columnwise maximum, giving a 1×m row vector. Ties resolve to the
    /// lowest row index.
    pub fn max_rows(&mut self, a: Var) -> Result<Var> {
        let av = self.value(a);
        if av.rows() == 0 {
            return Err(Error::shape("max_rows", "matrix has no rows"));
        }
        let mut arg = vec![0usize; av.cols()];
        let mut value = DenseMatrix::from_vec(1, av.cols(), av.row(0).to_vec())?;
        for i in 1..av.rows() {
            for (j, &x) in av.row(i).iter().enumerate() {
                if x > value.get(0, j) {
                    value.set(0, j, x);
                    arg[j] = i;
                }
            }
        }
        self.push(Op::MaxRows(a, arg), value, &[a])
    }

    pub fn square(&mut self, a: Var) -> Result<Var> {
        let value = self.value(a).map(|x| x * x);
        self.push(Op::Square(a), value, &[a])
    }

    /// Sum of all entries as a 1×1 matrix.
    pub fn sum(&mut self, a: Var) -> Result<Var> {
        let value = DenseMatrix::filled(1, 1, self.value(a).sum());
        self.push(Op::Sum(a), value, &[a])
    }

    /// Row-wise inner products of two equally shaped matrices, giving n×1.
    pub fn row_dot(&mut self, a: Var, b: Var) -> Result<Var> {
        let (av, bv) = (self.value(a), self.value(b));
        same_shape("row_dot", av, bv)?;
        let value = DenseMatrix::from_fn(av.rows(), 1, |i, _| {
            av.row(i).iter().zip(bv.row(i)).map(|(x, y)| x * y).sum()
        });
        self.push(Op::RowDot(a, b), value, &[a, b])
    }

    pub fn concat_cols(&mut self, parts: &[Var]) -> Result<Var> {
        let Some(&first) = parts.first() else {
            return Err(Error::shape("concat_cols", "no inputs"));
        };
        let rows = self.value(first).rows();
        let mut cols = 0;
        for &p in parts {
            if self.value(p).rows() != rows {
                return Err(Error::shape(
                    "concat_cols",
                    format!("row counts {} and {}", rows, self.value(p).rows()),
                ));
            }
            cols += self.value(p).cols();
        }
        let mut value = DenseMatrix::zeros(rows, cols);
        for i in 0..rows {
            let mut offset = 0;
            for &p in parts {
                let src = self.value(p).row(i);
                value.row_mut(i)[offset..offset + src.len()].copy_from_slice(src);
                offset += src.len();
            }
        }
        self.push(Op::ConcatCols(parts.to_vec()), value, parts)
    }

    pub fn column(&mut self, a: Var, j: usize) -> Result<Var> {
        let av = self.value(a);
        if j >= av.cols() {
            return Err(Error::shape(
                "column",
                format!("column {j} of a {}-column matrix", av.cols()),
            ));
        }
        let value = DenseMatrix::from_fn(av.rows(), 1, |i, _| av.get(i, j));
        self.push(Op::Column(a, j), value, &[a])
    }

    /// Reverse sweep from a scalar `loss` node.
    pub fn backward(&self, loss: Var) -> Result<Gradients> {
        if self.value(loss).shape() != (1, 1) {
            return Err(Error::contract(format!(
                "backward requires a 1x1 loss, got {:?}",
                self.value(loss).shape()
            )));
        }
        let mut grads: Vec<Option<DenseMatrix>> = vec![None; self.nodes.len()];
        grads[loss.0] = Some(DenseMatrix::filled(1, 1, 1.0));

        for idx in (0..=loss.0).rev() {
            let node = &self.nodes[idx];
            if !node.requires_grad {
                continue;
            }
            if matches!(node.op, Op::Leaf) {
                continue;
            }
            let Some(g) = grads[idx].take() else {
                continue;
            };
            self.propagate(node, &g, &mut grads);
        }
        Ok(Gradients {
            grads,
            shapes: self.nodes.iter().map(|n| n.value.shape()).collect(),
        })
    }

    fn slot<'g>(nodes: &[Node<'a>], grads: &'g mut [Option<DenseMatrix>], v: Var) -> &'g mut DenseMatrix {
        let (r, c) = nodes[v.0].value.shape();
        grads[v.0].get_or_insert_with(|| DenseMatrix::zeros(r, c))
    }

    fn wants(&self, v: Var) -> bool {
        self.nodes[v.0].requires_grad
    }

    fn propagate(&self, node: &Node<'a>, g: &DenseMatrix, grads: &mut [Option<DenseMatrix>]) {
        match &node.op {
            Op::Leaf => {}
            Op::MatMul(a, b) => {
                if self.wants(*a) {
                    matmul_nt_into(g, self.value(*b), Self::slot(&self.nodes, grads, *a));
                }
                if self.wants(*b) {
                    matmul_tn_into(self.value(*a), g, Self::slot(&self.nodes, grads, *b));
                }
            }
            Op::SparseMatMul(s, b) => {
                if self.wants(*b) {
                    s.matmul_transposed_into(g, Self::slot(&self.nodes, grads, *b));
                }
            }
            Op::Add(a, b) => {
                if self.wants(*a) {
                    Self::slot(&self.nodes, grads, *a).add_scaled(g, 1.0);
                }
                if self.wants(*b) {
                    Self::slot(&self.nodes, grads, *b).add_scaled(g, 1.0);
                }
            }
            Op::Sub(a, b) => {
                if self.wants(*a) {
                    Self::slot(&self.nodes, grads, *a).add_scaled(g, 1.0);
                }
                if self.wants(*b) {
                    Self::slot(&self.nodes, grads, *b).add_scaled(g, -1.0);
                }
            }
            Op::Mul(a, b) => {
                if self.wants(*a) {
                    let contrib = g.zip_map(self.value(*b), |x, y| x * y);
                    Self::slot(&self.nodes, grads, *a).add_scaled(&contrib, 1.0);
                }
                if self.wants(*b) {
                    let contrib = g.zip_map(self.value(*a), |x, y| x * y);
                    Self::slot(&self.nodes, grads, *b).add_scaled(&contrib, 1.0);
                }
            }
            Op::Scale(a, c) => {
                if self.wants(*a) {
                    Self::slot(&self.nodes, grads, *a).add_scaled(g, *c);
                }
            }
            Op::Transpose(a) => {
                if self.wants(*a) {
                    Self::slot(&self.nodes, grads, *a).add_scaled(&g.transpose(), 1.0);
                }
            }
            Op::AddRow(a, row) => {
                if self.wants(*a) {
                    Self::slot(&self.nodes, grads, *a).add_scaled(g, 1.0);
                }
                if self.wants(*row) {
                    let target = Self::slot(&self.nodes, grads, *row);
                    for r in g.row_iter() {
                        for (t, &x) in target.row_mut(0).iter_mut().zip(r) {
                            *t += x;
                        }
                    }
                }
            }
            Op::MulCol(a, col) => {
                let (av, cv) = (self.value(*a), self.value(*col));
                if self.wants(*a) {
                    let target = Self::slot(&self.nodes, grads, *a);
                    for i in 0..g.rows() {
                        let c = cv.get(i, 0);
                        for (t, &x) in target.row_mut(i).iter_mut().zip(g.row(i)) {
                            *t += c * x;
                        }
                    }
                }
                if self.wants(*col) {
                    let target = Self::slot(&self.nodes, grads, *col);
                    for i in 0..g.rows() {
                        let d: f64 = g.row(i).iter().zip(av.row(i)).map(|(x, y)| x * y).sum();
                        target.as_mut_slice()[i] += d;
                    }
                }
            }
            Op::Relu(a) => {
                if self.wants(*a) {
                    let contrib = g.zip_map(self.value(*a), |x, y| if y > 0.0 { x } else { 0.0 });
                    Self::slot(&self.nodes, grads, *a).add_scaled(&contrib, 1.0);
                }
            }
            Op::Sigmoid(a) => {
                if self.wants(*a) {
                    let contrib = g.zip_map(&node.value, |x, y| x * y * (1.0 - y));
                    Self::slot(&self.nodes, grads, *a).add_scaled(&contrib, 1.0);
                }
            }
            Op::LogSigmoid(a) => {
                if self.wants(*a) {
                    let contrib = g.zip_map(self.value(*a), |x, y| x * sigmoid(-y));
                    Self::slot(&self.nodes, grads, *a).add_scaled(&contrib, 1.0);
                }
            }
            Op::SoftmaxRows(a) => {
                if self.wants(*a) {
                    let y = &node.value;
                    let target = Self::slot(&self.nodes, grads, *a);
                    for i in 0..y.rows() {
                        let dot: f64 = g.row(i).iter().zip(y.row(i)).map(|(x, p)| x * p).sum();
                        for ((t, &gx), &p) in target.row_mut(i).iter_mut().zip(g.row(i)).zip(y.row(i)) {
                            *t += p * (gx - dot);
                        }
                    }
                }
            }
            Op::LogSoftmaxRows(a) => {
                if self.wants(*a) {
                    let y = &node.value;
                    let target = Self::slot(&self.nodes, grads, *a);
                    for i in 0..y.rows() {
                        let total: f64 = g.row(i).iter().sum();
                        for ((t, &gx), &ly) in target.row_mut(i).iter_mut().zip(g.row(i)).zip(y.row(i)) {
                            *t += gx - ly.exp() * total;
                        }
                    }
                }
            }
            Op::MeanRows(a) => {
                if self.wants(*a) {
                    let target = Self::slot(&self.nodes, grads, *a);
                    let n = target.rows() as f64;
                    for i in 0..target.rows() {
                        for (t, &x) in target.row_mut(i).iter_mut().zip(g.row(0)) {
                            *t += x / n;
                        }
                    }
                }
            }
            Op::MaxRows(a, arg) => {
                if self.wants(*a) {
                    let target = Self::slot(&self.nodes, grads, *a);
                    for (j, &i) in arg.iter().enumerate() {
                        let v = target.get(i, j) + g.get(0, j);
                        target.set(i, j, v);
                    }
                }
            }
            Op::Square(a) => {
                if self.wants(*a) {
                    let contrib = g.zip_map(self.value(*a), |x, y| 2.0 * x * y);
                    Self::slot(&self.nodes, grads, *a).add_scaled(&contrib, 1.0);
                }
            }
            Op::Sum(a) => {
                if self.wants(*a) {
                    let s = g.get(0, 0);
                    Self::slot(&self.nodes, grads, *a).as_mut_slice().iter_mut().for_each(|t| *t += s);
                }
            }
            Op::RowDot(a, b) => {
                let (av, bv) = (self.value(*a), self.value(*b));
                for (target_var, other) in [(*a, bv), (*b, av)] {
                    if self.wants(target_var) {
                        let target = Self::slot(&self.nodes, grads, target_var);
                        for i in 0..g.rows() {
                            let s = g.get(i, 0);
                            for (t, &x) in target.row_mut(i).iter_mut().zip(other.row(i)) {
                                *t += s * x;
                            }
                        }
                    }
                }
            }
            Op::ConcatCols(parts) => {
                let mut offset = 0;
                for &p in parts {
                    let width = self.value(p).cols();
                    if self.wants(p) {
                        let target = Self::slot(&self.nodes, grads, p);
                        for i in 0..g.rows() {
                            for (t, &x) in target
                                .row_mut(i)
                                .iter_mut()
                                .zip(&g.row(i)[offset..offset + width])
                            {
                                *t += x;
                            }
                        }
                    }
                    offset += width;
                }
            }
            Op::Column(a, j) => {
                if self.wants(*a) {
                    let target = Self::slot(&self.nodes, grads, *a);
                    for i in 0..g.rows() {
                        let v = target.get(i, *j) + g.get(i, 0);
                        target.set(i, *j, v);
                    }
                }
            }
        }
    }
}

fn kind_name(kind: PrimitiveKind) -> &'static str {
    match kind {
        PrimitiveKind::Leaf => "leaf",
        PrimitiveKind::MatMul => "matmul",
        PrimitiveKind::SparseMatMul => "sparse_matmul",
        PrimitiveKind::Add => "add",
        PrimitiveKind::Sub => "sub",
        PrimitiveKind::Mul => "mul",
        PrimitiveKind::Scale => "scale",
        PrimitiveKind::Transpose => "transpose",
        PrimitiveKind::AddRow => "add_row",
        PrimitiveKind::MulCol => "mul_col",
        PrimitiveKind::Relu => "relu",
        PrimitiveKind::Sigmoid => "sigmoid",
        PrimitiveKind::LogSigmoid => "log_sigmoid",
        PrimitiveKind::SoftmaxRows => "softmax_rows",
        PrimitiveKind::LogSoftmaxRows => "log_softmax_rows",
        PrimitiveKind::MeanRows => "mean_rows",
        PrimitiveKind::MaxRows => "max_rows",
        PrimitiveKind::Square => "square",
        PrimitiveKind::Sum => "sum",
        PrimitiveKind::RowDot => "row_dot",
        PrimitiveKind::ConcatCols => "concat_cols",
        PrimitiveKind::Column => "column",
    }
}
