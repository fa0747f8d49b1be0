//! Feedforward ReLU networks.
//!
//! A network is a chain of affine layers `x -> W x + b` with ReLU applied
//! entrywise after every layer except the last. Weights are held in
//! compressed sparse rows because the constructive networks are mostly
//! block-diagonal; the serialized form is dense.
//!
//! Structural metrics follow the usual network class: depth is the number of
//! affine layers, width the largest dimension of any `W_i` or `b_i`, and the
//! weight bound the largest absolute entry over all weights and biases.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One affine map with sparse weights.
#[derive(Debug, Clone, PartialEq)]
pub struct Layer {
    rows: usize,
    cols: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    vals: Vec<f64>,
    bias: Vec<f64>,
}

impl Layer {
    /// Builds a layer from a row-major dense matrix.
    pub fn dense(rows: usize, cols: usize, weights: &[f64], bias: Vec<f64>) -> Result<Self> {
        if weights.len() != rows * cols {
            return Err(Error::Structure(format!(
                "weight buffer has {} entries, expected {rows} x {cols}",
                weights.len()
            )));
        }
        let mut entries = Vec::new();
        for r in 0..rows {
            for c in 0..cols {
                let w = weights[r * cols + c];
                if w != 0.0 {
                    entries.push((r, c, w));
                }
            }
        }
        Self::from_entries(rows, cols, entries, bias)
    }

    /// Builds a layer from `(row, col, value)` triplets; duplicates are summed.
    pub fn from_entries(
        rows: usize,
        cols: usize,
        mut entries: Vec<(usize, usize, f64)>,
        bias: Vec<f64>,
    ) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Structure(
                "layers need at least one row and one column".into(),
            ));
        }
        if bias.len() != rows {
            return Err(Error::Structure(format!(
                "bias has length {}, expected {rows}",
                bias.len()
            )));
        }
        if bias.iter().any(|b| !b.is_finite()) {
            return Err(Error::Structure("bias entries must be finite".into()));
        }
        entries.sort_by_key(|&(r, c, _)| (r, c));
        let mut row_ptr = vec![0usize; rows + 1];
        let mut col_idx = Vec::with_capacity(entries.len());
        let mut vals: Vec<f64> = Vec::with_capacity(entries.len());
        let mut last: Option<(usize, usize)> = None;
        for (r, c, w) in entries {
            if r >= rows || c >= cols {
                return Err(Error::Structure(format!(
                    "entry ({r}, {c}) outside {rows} x {cols}"
                )));
            }
            if !w.is_finite() {
                return Err(Error::Structure("weights must be finite".into()));
            }
            if last == Some((r, c)) {
                *vals.last_mut().unwrap() += w;
            } else {
                col_idx.push(c);
                vals.push(w);
                row_ptr[r + 1] += 1;
                last = Some((r, c));
            }
        }
        for r in 0..rows {
            row_ptr[r + 1] += row_ptr[r];
        }
        let mut layer = Layer {
            rows,
            cols,
            row_ptr,
            col_idx,
            vals,
            bias,
        };
        layer.drop_zeros();
        Ok(layer)
    }

    fn drop_zeros(&mut self) {
        if self.vals.iter().all(|&v| v != 0.0) {
            return;
        }
        let mut row_ptr = vec![0usize; self.rows + 1];
        let mut col_idx = Vec::with_capacity(self.vals.len());
        let mut vals = Vec::with_capacity(self.vals.len());
        for r in 0..self.rows {
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                if self.vals[k] != 0.0 {
                    col_idx.push(self.col_idx[k]);
                    vals.push(self.vals[k]);
                }
            }
            row_ptr[r + 1] = vals.len();
        }
        self.row_ptr = row_ptr;
        self.col_idx = col_idx;
        self.vals = vals;
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn bias(&self) -> &[f64] {
        &self.bias
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    /// Nonzero entries of row `r` as `(col, value)`.
    pub fn row(&self, r: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let span = self.row_ptr[r]..self.row_ptr[r + 1];
        self.col_idx[span.clone()]
            .iter()
            .copied()
            .zip(self.vals[span].iter().copied())
    }

    pub fn entry(&self, r: usize, c: usize) -> f64 {
        self.row(r)
            .find(|&(cc, _)| cc == c)
            .map(|(_, w)| w)
            .unwrap_or(0.0)
    }

    /// Row-major dense copy of the weights.
    pub fn to_dense(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.rows * self.cols];
        for r in 0..self.rows {
            for (c, w) in self.row(r) {
                out[r * self.cols + c] = w;
            }
        }
        out
    }

    /// Largest absolute weight or bias entry.
    pub fn max_abs(&self) -> f64 {
        self.vals
            .iter()
            .chain(&self.bias)
            .fold(0.0f64, |m, v| m.max(v.abs()))
    }

    fn apply(&self, input: &[f64], out: &mut Vec<f64>, relu: bool) {
        out.clear();
        out.reserve(self.rows);
        for r in 0..self.rows {
            let mut acc = self.bias[r];
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                acc += self.vals[k] * input[self.col_idx[k]];
            }
            out.push(if relu { acc.max(0.0) } else { acc });
        }
    }

    /// `self ∘ inner` as a single affine map: `W W' x + (W b' + b)`.
    fn after(&self, inner: &Layer) -> Layer {
        debug_assert_eq!(self.cols, inner.rows);
        let mut entries = Vec::new();
        let mut bias = self.bias.clone();
        let mut acc = vec![0.0f64; inner.cols];
        let mut touched: Vec<usize> = Vec::new();
        let mut mark = vec![false; inner.cols];
        for r in 0..self.rows {
            for (k, w) in self.row(r) {
                bias[r] += w * inner.bias[k];
                for (c, w2) in inner.row(k) {
                    if !mark[c] {
                        mark[c] = true;
                        touched.push(c);
                    }
                    acc[c] += w * w2;
                }
            }
            touched.sort_unstable();
            for &c in &touched {
                entries.push((r, c, acc[c]));
                acc[c] = 0.0;
                mark[c] = false;
            }
            touched.clear();
        }
        Layer::from_entries(self.rows, inner.cols, entries, bias)
            .expect("composed layer is well formed")
    }
}

/// Exact structural metrics of a network.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NetworkMetrics {
    pub depth: usize,
    pub width: usize,
    pub weight_bound: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReluNetwork {
    input_dim: usize,
    output_dim: usize,
    layers: Vec<Layer>,
}

impl ReluNetwork {
    pub fn new(layers: Vec<Layer>) -> Result<Self> {
        let first = layers
            .first()
            .ok_or_else(|| Error::Structure("a network needs at least one layer".into()))?;
        for (i, pair) in layers.windows(2).enumerate() {
            if pair[1].cols != pair[0].rows {
                return Err(Error::Structure(format!(
                    "layer {} takes {} inputs but layer {} produces {}",
                    i + 1,
                    pair[1].cols,
                    i,
                    pair[0].rows
                )));
            }
        }
        Ok(ReluNetwork {
            input_dim: first.cols,
            output_dim: layers.last().unwrap().rows,
            layers,
        })
    }

    /// A single affine layer (no activation).
    pub fn affine(rows: usize, cols: usize, weights: &[f64], bias: Vec<f64>) -> Result<Self> {
        Self::new(vec![Layer::dense(rows, cols, weights, bias)?])
    }

    pub fn input_dim(&self) -> usize {
        self.input_dim
    }

    pub fn output_dim(&self) -> usize {
        self.output_dim
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    pub fn depth(&self) -> usize {
        self.layers.len()
    }

    pub fn metrics(&self) -> NetworkMetrics {
        let width = self
            .layers
            .iter()
            .map(|l| l.rows.max(l.cols))
            .max()
            .unwrap_or(0);
        let weight_bound = self.layers.iter().map(Layer::max_abs).fold(0.0, f64::max);
        NetworkMetrics {
            depth: self.layers.len(),
            width,
            weight_bound,
        }
    }

    pub fn evaluate(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.input_dim {
            return Err(Error::InputShape {
                expected: self.input_dim,
                got: x.len(),
            });
        }
        let mut scratch = Scratch::default();
        Ok(self.evaluate_with(x, &mut scratch).to_vec())
    }

    /// Evaluation reusing caller-owned buffers; `x` must have `input_dim` entries.
    pub fn evaluate_with<'s>(&self, x: &[f64], scratch: &'s mut Scratch) -> &'s [f64] {
        debug_assert_eq!(x.len(), self.input_dim);
        let last = self.layers.len() - 1;
        let Scratch { a, b } = scratch;
        a.clear();
        a.extend_from_slice(x);
        for (i, layer) in self.layers.iter().enumerate() {
            layer.apply(a, b, i != last);
            std::mem::swap(a, b);
        }
        a
    }

    /// Convenience for scalar-output networks.
    pub fn evaluate_scalar(&self, x: &[f64], scratch: &mut Scratch) -> f64 {
        self.evaluate_with(x, scratch)[0]
    }

    /// `second ∘ first`, merging the output layer of `first` with the input
    /// layer of `second`; depth is `depth(first) + depth(second) - 1`.
    pub fn compose(first: &ReluNetwork, second: &ReluNetwork) -> Result<ReluNetwork> {
        if first.output_dim != second.input_dim {
            return Err(Error::InputShape {
                expected: second.input_dim,
                got: first.output_dim,
            });
        }
        let mut layers: Vec<Layer> = first.layers[..first.layers.len() - 1].to_vec();
        layers.push(second.layers[0].after(first.layers.last().unwrap()));
        layers.extend_from_slice(&second.layers[1..]);
        ReluNetwork::new(layers)
    }

    /// Stacks networks side by side. With `share_input` every component reads
    /// the same input vector; otherwise the input is the concatenation of the
    /// components' inputs. Outputs are concatenated in order.
    pub fn parallel(nets: &[ReluNetwork], share_input: bool) -> Result<ReluNetwork> {
        let first = nets
            .first()
            .ok_or_else(|| Error::Structure("parallel needs at least one network".into()))?;
        let depth = first.depth();
        if let Some(bad) = nets.iter().find(|n| n.depth() != depth) {
            return Err(Error::Structure(format!(
                "parallel components have depths {depth} and {}; pad the shallower one with identity_gadget first",
                bad.depth()
            )));
        }
        if share_input {
            if let Some(bad) = nets.iter().find(|n| n.input_dim != first.input_dim) {
                return Err(Error::InputShape {
                    expected: first.input_dim,
                    got: bad.input_dim,
                });
            }
        }
        let mut layers = Vec::with_capacity(depth);
        for k in 0..depth {
            let rows: usize = nets.iter().map(|n| n.layers[k].rows).sum();
            let cols: usize = if k == 0 && share_input {
                first.input_dim
            } else {
                nets.iter().map(|n| n.layers[k].cols).sum()
            };
            let mut entries = Vec::new();
            let mut bias = Vec::with_capacity(rows);
            let (mut row_off, mut col_off) = (0, 0);
            for n in nets {
                let l = &n.layers[k];
                for r in 0..l.rows {
                    for (c, w) in l.row(r) {
                        entries.push((row_off + r, col_off + c, w));
                    }
                }
                bias.extend_from_slice(&l.bias);
                row_off += l.rows;
                if !(k == 0 && share_input) {
                    col_off += l.cols;
                }
            }
            layers.push(Layer::from_entries(rows, cols, entries, bias)?);
        }
        ReluNetwork::new(layers)
    }

    /// Exact identity on R^dim realized as `σ(x) − σ(−x)` per coordinate,
    /// carried through `depth - 1` hidden layers.
    pub fn identity_gadget(dim: usize, depth: usize) -> Result<ReluNetwork> {
        if depth < 2 {
            return Err(Error::Parameter(format!(
                "identity gadget needs depth >= 2, got {depth}"
            )));
        }
        if dim == 0 {
            return Err(Error::Parameter("identity gadget needs dim >= 1".into()));
        }
        let split: Vec<_> = (0..dim)
            .flat_map(|i| [(2 * i, i, 1.0), (2 * i + 1, i, -1.0)])
            .collect();
        let mut layers = vec![Layer::from_entries(
            2 * dim,
            dim,
            split,
            vec![0.0; 2 * dim],
        )?];
        for _ in 0..depth - 2 {
            let carry = (0..2 * dim).map(|i| (i, i, 1.0)).collect();
            layers.push(Layer::from_entries(
                2 * dim,
                2 * dim,
                carry,
                vec![0.0; 2 * dim],
            )?);
        }
        let merge = (0..dim)
            .flat_map(|i| [(i, 2 * i, 1.0), (i, 2 * i + 1, -1.0)])
            .collect();
        layers.push(Layer::from_entries(dim, 2 * dim, merge, vec![0.0; dim])?);
        ReluNetwork::new(layers)
    }

    /// Re-wires the input so that local input `i` reads coordinate
    /// `columns[i]` of a vector of length `total`.
    pub fn with_input_map(&self, total: usize, columns: &[usize]) -> Result<ReluNetwork> {
        if columns.len() != self.input_dim {
            return Err(Error::InputShape {
                expected: self.input_dim,
                got: columns.len(),
            });
        }
        if let Some(&bad) = columns.iter().find(|&&c| c >= total) {
            return Err(Error::Structure(format!(
                "input column {bad} outside {total} inputs"
            )));
        }
        let first = &self.layers[0];
        let mut entries = Vec::with_capacity(first.nnz());
        for r in 0..first.rows {
            for (c, w) in first.row(r) {
                entries.push((r, columns[c], w));
            }
        }
        let mut layers = self.layers.clone();
        layers[0] = Layer::from_entries(first.rows, total, entries, first.bias.clone())?;
        ReluNetwork::new(layers)
    }

    /// Extends the network to exactly `depth` layers by appending an identity gadget.
    pub fn pad_to_depth(&self, depth: usize) -> Result<ReluNetwork> {
        match depth.cmp(&self.depth()) {
            std::cmp::Ordering::Less => Err(Error::Structure(format!(
                "cannot pad a depth-{} network down to depth {depth}",
                self.depth()
            ))),
            std::cmp::Ordering::Equal => Ok(self.clone()),
            std::cmp::Ordering::Greater => {
                let id = ReluNetwork::identity_gadget(self.output_dim, depth - self.depth() + 1)?;
                ReluNetwork::compose(self, &id)
            }
        }
    }

    /// Serializes to the structured-text network document.
    pub fn to_json(&self) -> String {
        let m = self.metrics();
        let mut s = String::new();
        let _ = write!(
            s,
            "{{\n  \"input_dim\": {},\n  \"output_dim\": {},\n  \"layers\": [",
            self.input_dim, self.output_dim
        );
        for (li, l) in self.layers.iter().enumerate() {
            s.push_str(if li == 0 {
                "\n    {\"w\": ["
            } else {
                ",\n    {\"w\": ["
            });
            let dense = l.to_dense();
            for r in 0..l.rows {
                s.push_str(if r == 0 { "[" } else { ", [" });
                push_floats(&mut s, &dense[r * l.cols..(r + 1) * l.cols]);
                s.push(']');
            }
            s.push_str("], \"b\": [");
            push_floats(&mut s, &l.bias);
            s.push_str("]}");
        }
        let _ = write!(
            s,
            "\n  ],\n  \"metrics\": {{\"depth\": {}, \"width\": {}, \"weight_bound\": {}}}\n}}\n",
            m.depth,
            m.width,
            fmt17(m.weight_bound)
        );
        s
    }

    /// Parses a network document and checks the recorded metrics against the layers.
    pub fn from_json(text: &str) -> Result<ReluNetwork> {
        let doc: NetworkDocument = serde_json::from_str(text)?;
        let mut layers = Vec::with_capacity(doc.layers.len());
        for (i, l) in doc.layers.into_iter().enumerate() {
            let rows = l.w.len();
            let cols = l.w.first().map(Vec::len).unwrap_or(0);
            if l.w.iter().any(|row| row.len() != cols) {
                return Err(Error::Structure(format!(
                    "layer {i} has ragged weight rows"
                )));
            }
            let flat: Vec<f64> = l.w.into_iter().flatten().collect();
            layers.push(Layer::dense(rows, cols, &flat, l.b)?);
        }
        let net = ReluNetwork::new(layers)?;
        if net.input_dim != doc.input_dim || net.output_dim != doc.output_dim {
            return Err(Error::Structure(format!(
                "document declares {} -> {} but layers realize {} -> {}",
                doc.input_dim, doc.output_dim, net.input_dim, net.output_dim
            )));
        }
        if let Some(recorded) = doc.metrics {
            let actual = net.metrics();
            if recorded.depth != actual.depth
                || recorded.width != actual.width
                || recorded.weight_bound != actual.weight_bound
            {
                return Err(Error::Structure(format!(
                    "recorded metrics {recorded:?} disagree with layers {actual:?}"
                )));
            }
        }
        Ok(net)
    }
}

/// Reusable evaluation buffers.
#[derive(Debug, Default, Clone)]
pub struct Scratch {
    a: Vec<f64>,
    b: Vec<f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct NetworkDocument {
    input_dim: usize,
    output_dim: usize,
    layers: Vec<LayerDocument>,
    #[serde(default)]
    metrics: Option<NetworkMetrics>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct LayerDocument {
    w: Vec<Vec<f64>>,
    b: Vec<f64>,
}

/// Decimal literal with 17 significant digits.
pub fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

fn push_floats(s: &mut String, xs: &[f64]) {
    for (i, x) in xs.iter().enumerate() {
        if i > 0 {
            s.push_str(", ");
        }
        s.push_str(&fmt17(*x));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    fn random_net(rng: &mut impl Rng, input: usize, output: usize, depth: usize) -> ReluNetwork {
        let mut dims = vec![input];
        for _ in 1..depth {
            dims.push(rng.random_range(1..6));
        }
        dims.push(output);
        let layers = dims
            .windows(2)
            .map(|d| {
                let w: Vec<f64> = (0..d[0] * d[1])
                    .map(|_| rng.random_range(-2.0..2.0))
                    .collect();
                let b: Vec<f64> = (0..d[1]).map(|_| rng.random_range(-1.0..1.0)).collect();
                Layer::dense(d[1], d[0], &w, b).unwrap()
            })
            .collect();
        ReluNetwork::new(layers).unwrap()
    }

    #[test]
    fn output_layer_has_no_activation() {
        let net = ReluNetwork::affine(1, 1, &[1.0], vec![0.0]).unwrap();
        assert_eq!(net.evaluate(&[-3.0]).unwrap(), vec![-3.0]);
    }

    #[test]
    fn hidden_layer_applies_relu() {
        let l = || Layer::dense(1, 1, &[1.0], vec![0.0]).unwrap();
        let net = ReluNetwork::new(vec![l(), l()]).unwrap();
        assert_eq!(net.evaluate(&[-3.0]).unwrap(), vec![0.0]);
    }

    #[test]
    fn identity_gadget_examples() {
        let id = ReluNetwork::identity_gadget(1, 2).unwrap();
        assert_eq!(id.evaluate(&[-2.5]).unwrap(), vec![-2.5]);
        assert_eq!(id.evaluate(&[-7.25]).unwrap(), vec![-7.25]);
        let m = id.metrics();
        assert_eq!((m.depth, m.width, m.weight_bound), (2, 2, 1.0));

        let id3 = ReluNetwork::identity_gadget(3, 5).unwrap();
        let mut rng = crate::rng::rng_from_seed(1);
        for _ in 0..1000 {
            let x: Vec<f64> = (0..3).map(|_| rng.random_range(-10.0..10.0)).collect();
            assert_eq!(id3.evaluate(&x).unwrap(), x);
        }
        let m = id3.metrics();
        assert_eq!((m.depth, m.width, m.weight_bound), (5, 6, 1.0));
        assert!(ReluNetwork::identity_gadget(2, 1).is_err());
    }

    #[test]
    fn input_shape_is_checked() {
        let id = ReluNetwork::identity_gadget(2, 2).unwrap();
        assert!(matches!(
            id.evaluate(&[1.0]),
            Err(Error::InputShape {
                expected: 2,
                got: 1
            })
        ));
    }

    #[test]
    fn metrics_count_biases() {
        let net = ReluNetwork::affine(1, 2, &[-3.0, 0.5], vec![0.0]).unwrap();
        assert_eq!(net.metrics().weight_bound, 3.0);
        let net = ReluNetwork::affine(1, 1, &[0.5], vec![-4.0]).unwrap();
        assert_eq!(net.metrics().weight_bound, 4.0);
    }

    #[test]
    fn composition_evaluates_and_counts_depth() {
        let mut rng = crate::rng::rng_from_seed(2);
        for _ in 0..200 {
            let (df, dg) = (rng.random_range(1..4), rng.random_range(1..4));
            let f = random_net(&mut rng, 2, 3, df);
            let g = random_net(&mut rng, 3, 2, dg);
            let fg = ReluNetwork::compose(&f, &g).unwrap();
            assert_eq!(fg.depth(), f.depth() + g.depth() - 1);
            for _ in 0..50 {
                let x = [rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0)];
                let direct = g.evaluate(&f.evaluate(&x).unwrap()).unwrap();
                let merged = fg.evaluate(&x).unwrap();
                for (a, b) in direct.iter().zip(&merged) {
                    assert!((a - b).abs() <= 1e-12 * (1.0 + a.abs()));
                }
            }
        }
    }

    #[test]
    fn composing_affine_maps_multiplies_them() {
        let f = ReluNetwork::affine(2, 1, &[2.0, -1.0], vec![1.0, 0.0]).unwrap();
        let g = ReluNetwork::affine(1, 2, &[3.0, 4.0], vec![0.5]).unwrap();
        let fg = ReluNetwork::compose(&f, &g).unwrap();
        assert_eq!(fg.depth(), 1);
        assert_eq!(fg.layers()[0].to_dense(), vec![2.0]);
        assert_eq!(fg.layers()[0].bias(), &[3.5]);
    }

    #[test]
    fn parallel_shared_and_concatenated() {
        let id = ReluNetwork::identity_gadget(1, 2).unwrap();
        let both = ReluNetwork::parallel(&[id.clone(), id.clone()], true).unwrap();
        assert_eq!(both.evaluate(&[1.5]).unwrap(), vec![1.5, 1.5]);
        let cat = ReluNetwork::parallel(&[id.clone(), id.clone()], false).unwrap();
        assert_eq!(cat.evaluate(&[1.5, -2.0]).unwrap(), vec![1.5, -2.0]);

        let four = ReluNetwork::identity_gadget(2, 3).unwrap();
        let stack = ReluNetwork::parallel(&vec![four; 5], true).unwrap();
        assert_eq!(stack.metrics().width, 20);

        let deeper = ReluNetwork::identity_gadget(1, 3).unwrap();
        assert!(matches!(
            ReluNetwork::parallel(&[id, deeper], true),
            Err(Error::Structure(_))
        ));
    }

    #[test]
    fn parallel_matches_concatenation_on_random_nets() {
        let mut rng = crate::rng::rng_from_seed(3);
        for _ in 0..100 {
            let f = random_net(&mut rng, 2, 1, 3);
            let g = random_net(&mut rng, 2, 2, 3);
            let p = ReluNetwork::parallel(&[f.clone(), g.clone()], true).unwrap();
            for _ in 0..10 {
                let x = [rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0)];
                let mut want = f.evaluate(&x).unwrap();
                want.extend(g.evaluate(&x).unwrap());
                assert_eq!(p.evaluate(&x).unwrap(), want);
            }
        }
    }

    #[test]
    fn metrics_match_dense_recount() {
        let mut rng = crate::rng::rng_from_seed(4);
        for _ in 0..100 {
            let depth = rng.random_range(1..5);
            let net = random_net(&mut rng, 3, 2, depth);
            let m = net.metrics();
            let mut width = 0;
            let mut bound = 0.0f64;
            for l in net.layers() {
                width = width.max(l.rows()).max(l.cols());
                for w in l.to_dense().iter().chain(l.bias()) {
                    bound = bound.max(w.abs());
                }
            }
            assert_eq!(m.depth, net.layers().len());
            assert_eq!(m.width, width);
            assert_eq!(m.weight_bound, bound);
        }
    }

    #[test]
    fn json_round_trip_is_bit_exact() {
        let mut rng = crate::rng::rng_from_seed(5);
        for _ in 0..20 {
            let net = random_net(&mut rng, 2, 2, 3);
            let back = ReluNetwork::from_json(&net.to_json()).unwrap();
            assert_eq!(back, net);
        }
    }

    #[test]
    fn json_with_wrong_metrics_is_rejected() {
        let net = ReluNetwork::identity_gadget(1, 2).unwrap();
        let text = net.to_json().replace("\"depth\": 2", "\"depth\": 3");
        assert!(ReluNetwork::from_json(&text).is_err());
    }
}
