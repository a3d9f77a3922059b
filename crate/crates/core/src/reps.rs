//! Finite dimensional sl(r+1) modules with explicit bases, tensor products,
//! and the contravariant (Shapovalov) form.
//!
//! A [`ModuleRealization`] stores one factor: sparse matrices for the
//! Chevalley generators acting on a weight basis, the gl elementary matrices
//! built from them by commutators, and the Gram matrix of the contravariant
//! form normalized so the highest weight vector has norm 1. Tensor products
//! never materialize product matrices: a [`TensorVector`] is a sparse
//! combination of pure tensors of factor basis vectors and every operator
//! acts through the Leibniz rule, one factor at a time.

use crate::lie::{CartanData, Weight};
use crate::linalg::RatMat;
use crate::scalar::Scalar;
use itertools::Itertools;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;
use thiserror::Error;

/// Hard cap on basis sizes, both for a single realization and for a full
/// tensor product. Everything here is exact arithmetic; past this size the
/// dense weight-space enumerations stop being reasonable.
pub const REALIZATION_CAP: usize = 20_000;

/// One ordered tuple of colors per tensor block, as produced by the weight
/// function combinatorics. Reused by the cluster assembly below.
pub type ColorBlocks = Vec<Vec<usize>>;

#[derive(Debug, Error)]
pub enum RepsError {
    #[error("Cartan data is not of type A")]
    TypeA,
    #[error("fundamental index {0} out of range 1..={1}")]
    BadFundamental(usize, usize),
    #[error("highest weight is not dominant integral")]
    NotDominant,
    #[error("basis of size {0} exceeds the cap of {1}")]
    TooLarge(usize, usize),
    #[error("tensor space needs at least one factor")]
    NoFactors,
    #[error("tensor factors live over different Cartan data")]
    MixedFactors,
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

/// Column-major sparse matrix over the rationals. Columns are short, so
/// entries within a column are kept as an unordered list.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseMat {
    rows: usize,
    cols: Vec<Vec<(usize, BigRational)>>,
}

impl SparseMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseMat {
            rows,
            cols: vec![Vec::new(); cols],
        }
    }

    pub fn n_rows(&self) -> usize {
        self.rows
    }

    pub fn n_cols(&self) -> usize {
        self.cols.len()
    }

    pub fn column(&self, j: usize) -> &[(usize, BigRational)] {
        &self.cols[j]
    }

    /// Adds `c` to the (i, j) entry, dropping the entry if it cancels.
    pub fn push(&mut self, i: usize, j: usize, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let col = &mut self.cols[j];
        if let Some(pos) = col.iter().position(|(r, _)| *r == i) {
            col[pos].1 += c;
            if col[pos].1.is_zero() {
                col.swap_remove(pos);
            }
        } else {
            col.push((i, c));
        }
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(|c| c.is_empty())
    }

    pub fn mul(&self, rhs: &SparseMat) -> SparseMat {
        assert_eq!(self.n_cols(), rhs.rows);
        let mut out = SparseMat::zeros(self.rows, rhs.n_cols());
        for j in 0..rhs.n_cols() {
            for (k, c) in &rhs.cols[j] {
                for (i, a) in &self.cols[*k] {
                    out.push(*i, j, a * c);
                }
            }
        }
        out
    }

    pub fn sub(&self, rhs: &SparseMat) -> SparseMat {
        assert_eq!(self.rows, rhs.rows);
        assert_eq!(self.n_cols(), rhs.n_cols());
        let mut out = self.clone();
        for j in 0..rhs.n_cols() {
            for (i, c) in &rhs.cols[j] {
                out.push(*i, j, -c.clone());
            }
        }
        out
    }

    pub fn commutator(&self, rhs: &SparseMat) -> SparseMat {
        self.mul(rhs).sub(&rhs.mul(self))
    }

    pub fn apply_dense(&self, v: &[BigRational]) -> Vec<BigRational> {
        assert_eq!(v.len(), self.n_cols());
        let mut out = vec![BigRational::zero(); self.rows];
        for (j, vj) in v.iter().enumerate() {
            if vj.is_zero() {
                continue;
            }
            for (i, c) in &self.cols[j] {
                out[*i] += c * vj;
            }
        }
        out
    }
}

/// One concrete module: a weight basis together with the generator actions.
#[derive(Clone, Debug)]
pub struct ModuleRealization {
    sys: CartanData,
    dim: usize,
    weights: Vec<Weight>,
    hw_index: usize,
    e: Vec<SparseMat>,
    f: Vec<SparseMat>,
    h: Vec<SparseMat>,
    /// All off-diagonal gl elementary matrices as (a, b, E_ab) with a != b,
    /// in the (r+1)-dimensional index range of the ambient gl.
    gl: Vec<(usize, usize, SparseMat)>,
    /// Contravariant form, S(hw, hw) = 1. Only nonzero entries are stored;
    /// the form pairs weight spaces block-diagonally.
    gram: HashMap<(usize, usize), BigRational>,
}

impl ModuleRealization {
    /// The k-th fundamental module of sl(r+1) realized on k-element subsets
    /// of {0, .., r}, with `f_i` moving index i-1 to index i (1-based i).
    /// `k` is 1-based, `1..=rank`.
    pub fn exterior_rep(sys: &CartanData, k: usize) -> Result<Self, RepsError> {
        if !sys.is_type_a() {
            return Err(RepsError::TypeA);
        }
        let r = sys.rank();
        if k == 0 || k > r {
            return Err(RepsError::BadFundamental(k, r));
        }
        let n = r + 1;
        let subsets: Vec<Vec<usize>> = (0..n).combinations(k).collect();
        let dim = subsets.len();
        let index: HashMap<Vec<usize>, usize> = subsets
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i))
            .collect();

        // Weights of the defining basis: eps_a = w_1 - alpha_1 - .. - alpha_a.
        let mut eps = Vec::with_capacity(n);
        let mut cur = sys.fundamental(0);
        eps.push(cur.clone());
        for a in 0..r {
            cur = cur - sys.alpha(a);
            eps.push(cur.clone());
        }
        let weights: Vec<Weight> = subsets
            .iter()
            .map(|s| {
                s.iter()
                    .fold(sys.zero_weight(), |w, &a| w + eps[a].clone())
            })
            .collect();

        let mut e = vec![SparseMat::zeros(dim, dim); r];
        let mut f = vec![SparseMat::zeros(dim, dim); r];
        let mut h = vec![SparseMat::zeros(dim, dim); r];
        for (j, s) in subsets.iter().enumerate() {
            for i in 0..r {
                // Subsets stay sorted when i is swapped for i+1, so no signs
                // appear anywhere in this realization.
                if s.contains(&i) && !s.contains(&(i + 1)) {
                    let mut t = s.clone();
                    let pos = t.iter().position(|&a| a == i).unwrap();
                    t[pos] = i + 1;
                    f[i].push(index[&t], j, BigRational::one());
                }
                if s.contains(&(i + 1)) && !s.contains(&i) {
                    let mut t = s.clone();
                    let pos = t.iter().position(|&a| a == i + 1).unwrap();
                    t[pos] = i;
                    e[i].push(index[&t], j, BigRational::one());
                }
                h[i].push(j, j, weights[j].coords[i].clone());
            }
        }

        let hw_index = 0; // subsets come out in lex order, {0,..,k-1} first
        let gram = gram_by_recursion(sys, &weights, hw_index, &e, &f)?;
        let gl = gl_elementary(r, &e, &f);
        Ok(ModuleRealization {
            sys: sys.clone(),
            dim,
            weights,
            hw_index,
            e,
            f,
            h,
            gl,
            gram,
        })
    }

    /// The irreducible module with highest weight `lambda`, cut out of a
    /// tensor power of the defining module: a singular vector of weight
    /// `lambda` is found there exactly, and its span under the `f_i` is the
    /// whole module. The Gram matrix is the restriction of the tensor form,
    /// renormalized so the singular vector has norm 1.
    pub fn embed_irreducible(sys: &CartanData, lambda: &Weight) -> Result<Self, RepsError> {
        if !sys.is_type_a() {
            return Err(RepsError::TypeA);
        }
        if !sys.is_dominant_integral(lambda) {
            return Err(RepsError::NotDominant);
        }
        let r = sys.rank();
        let lam = lambda.to_ints().expect("dominant integral weight");
        let n_factors: usize = lam
            .iter()
            .enumerate()
            .map(|(i, &c)| (i + 1) * c as usize)
            .sum();
        if n_factors == 0 {
            return Ok(Self::trivial(sys));
        }
        let target_dim = sys
            .weyl_dim(lambda)
            .to_integer()
            .to_usize()
            .ok_or_else(|| RepsError::TooLarge(usize::MAX, REALIZATION_CAP))?;
        if target_dim > REALIZATION_CAP {
            return Err(RepsError::TooLarge(target_dim, REALIZATION_CAP));
        }

        let defining = Arc::new(Self::exterior_rep(sys, 1)?);
        let space = TensorSpace::new(vec![defining; n_factors])?;
        let sing = space.singular_subspace(lambda);
        let seed = sing.into_iter().next().ok_or_else(|| {
            RepsError::Internal("no singular vector at the requested weight".into())
        })?;

        // Close the singular vector under the f_i, keeping a triangular set
        // of reduced vectors; those reduced vectors are the module basis.
        let mut tri = Triangular::new();
        let mut weights = Vec::new();
        tri.insert(seed);
        weights.push(lambda.clone());
        let mut next = 0;
        while next < tri.rows.len() {
            for i in 0..r {
                let cand = space.apply_f(i, &tri.rows[next].1);
                let (_, rem) = tri.reduce(cand);
                if !rem.is_zero_vector() {
                    let wt = weights[next].clone() - sys.alpha(i);
                    tri.insert(rem);
                    weights.push(wt);
                }
            }
            next += 1;
        }
        let dim = tri.rows.len();
        if dim != target_dim {
            return Err(RepsError::Internal(format!(
                "cyclic span has dimension {dim}, expected {target_dim}"
            )));
        }

        let mut e = vec![SparseMat::zeros(dim, dim); r];
        let mut f = vec![SparseMat::zeros(dim, dim); r];
        let mut h = vec![SparseMat::zeros(dim, dim); r];
        for k in 0..dim {
            for i in 0..r {
                let (coords, rem) = tri.reduce(space.apply_f(i, &tri.rows[k].1));
                if !rem.is_zero_vector() {
                    return Err(RepsError::Internal("f leaves the cyclic span".into()));
                }
                for (m, c) in coords.into_iter().enumerate() {
                    f[i].push(m, k, c);
                }
                let (coords, rem) = tri.reduce(space.apply_e(i, &tri.rows[k].1));
                if !rem.is_zero_vector() {
                    return Err(RepsError::Internal("e leaves the cyclic span".into()));
                }
                for (m, c) in coords.into_iter().enumerate() {
                    e[i].push(m, k, c);
                }
                h[i].push(k, k, weights[k].coords[i].clone());
            }
        }

        // Restrict the tensor form and renormalize by the seed norm, which
        // is a sum of squares of rationals and hence nonzero.
        let norm0: BigRational = space.shapovalov_pair(&tri.rows[0].1, &tri.rows[0].1);
        assert!(!norm0.is_zero());
        let mut gram = HashMap::new();
        for a in 0..dim {
            for b in a..dim {
                if weights[a] != weights[b] {
                    continue;
                }
                let s: BigRational =
                    space.shapovalov_pair(&tri.rows[a].1, &tri.rows[b].1) / &norm0;
                if !s.is_zero() {
                    gram.insert((a, b), s.clone());
                    if a != b {
                        gram.insert((b, a), s);
                    }
                }
            }
        }

        let gl = gl_elementary(r, &e, &f);
        Ok(ModuleRealization {
            sys: sys.clone(),
            dim,
            weights,
            hw_index: 0,
            e,
            f,
            h,
            gl,
            gram,
        })
    }

    /// The one-dimensional module with highest weight 0.
    fn trivial(sys: &CartanData) -> Self {
        let r = sys.rank();
        let zeros = vec![SparseMat::zeros(1, 1); r];
        let mut gram = HashMap::new();
        gram.insert((0, 0), BigRational::one());
        let gl = gl_elementary(r, &zeros, &zeros);
        ModuleRealization {
            sys: sys.clone(),
            dim: 1,
            weights: vec![sys.zero_weight()],
            hw_index: 0,
            e: zeros.clone(),
            f: zeros.clone(),
            h: zeros,
            gl,
            gram,
        }
    }

    pub fn sys(&self) -> &CartanData {
        &self.sys
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn weight(&self, i: usize) -> &Weight {
        &self.weights[i]
    }

    pub fn weights(&self) -> &[Weight] {
        &self.weights
    }

    pub fn hw_index(&self) -> usize {
        self.hw_index
    }

    pub fn highest_weight(&self) -> &Weight {
        &self.weights[self.hw_index]
    }

    pub fn e_mat(&self, i: usize) -> &SparseMat {
        &self.e[i]
    }

    pub fn f_mat(&self, i: usize) -> &SparseMat {
        &self.f[i]
    }

    pub fn h_mat(&self, i: usize) -> &SparseMat {
        &self.h[i]
    }

    pub fn gl_pairs(&self) -> &[(usize, usize, SparseMat)] {
        &self.gl
    }

    pub fn gl_mat(&self, a: usize, b: usize) -> &SparseMat {
        self.gl
            .iter()
            .find(|(x, y, _)| *x == a && *y == b)
            .map(|(_, _, m)| m)
            .expect("off-diagonal gl index pair")
    }

    pub fn gram_entry(&self, i: usize, j: usize) -> Option<&BigRational> {
        self.gram.get(&(i, j))
    }

    /// Contravariant form of two dense coordinate vectors.
    pub fn pair(&self, x: &[BigRational], y: &[BigRational]) -> BigRational {
        assert_eq!(x.len(), self.dim);
        assert_eq!(y.len(), self.dim);
        let mut acc = BigRational::zero();
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                if let Some(g) = self.gram.get(&(i, j)) {
                    acc += xi * yj * g;
                }
            }
        }
        acc
    }

    /// Unit coordinate vector at the highest weight.
    pub fn hw_dense(&self) -> Vec<BigRational> {
        let mut v = vec![BigRational::zero(); self.dim];
        v[self.hw_index] = BigRational::one();
        v
    }
}

fn same_sys(a: &CartanData, b: &CartanData) -> bool {
    if a.rank() != b.rank() {
        return false;
    }
    for i in 0..a.rank() {
        if a.sym_d(i) != b.sym_d(i) {
            return false;
        }
        for j in 0..a.rank() {
            if a.cartan(i, j) != b.cartan(i, j) {
                return false;
            }
        }
    }
    true
}

/// All off-diagonal gl elementary matrices from the Chevalley generators,
/// by the commutator recursion E_ab = [E_ac, E_cb] with c between a and b.
fn gl_elementary(rank: usize, e: &[SparseMat], f: &[SparseMat]) -> Vec<(usize, usize, SparseMat)> {
    let n = rank + 1;
    let mut map: HashMap<(usize, usize), SparseMat> = HashMap::new();
    for i in 0..rank {
        map.insert((i, i + 1), e[i].clone());
        map.insert((i + 1, i), f[i].clone());
    }
    for gap in 2..n {
        for a in 0..n - gap {
            let b = a + gap;
            let up = map[&(a, b - 1)].commutator(&map[&(b - 1, b)]);
            map.insert((a, b), up);
            let down = map[&(b, a + 1)].commutator(&map[&(a + 1, a)]);
            map.insert((b, a), down);
        }
    }
    let mut out: Vec<(usize, usize, SparseMat)> = map
        .into_iter()
        .map(|((a, b), m)| (a, b, m))
        .collect();
    out.sort_by_key(|(a, b, _)| (*a, *b));
    out
}

/// Gram matrix of the contravariant form on a cyclic highest weight module,
/// computed level by level: each weight space is spanned by vectors f_i x
/// from one level up, and S(u, v) unwinds through S(f_i x, v) = S(x, e_i v).
fn gram_by_recursion(
    sys: &CartanData,
    weights: &[Weight],
    hw_index: usize,
    e: &[SparseMat],
    f: &[SparseMat],
) -> Result<HashMap<(usize, usize), BigRational>, RepsError> {
    let r = sys.rank();
    let hw = weights[hw_index].clone();
    let mut by_weight: HashMap<Weight, Vec<usize>> = HashMap::new();
    for (i, w) in weights.iter().enumerate() {
        by_weight.entry(w.clone()).or_default().push(i);
    }

    let mut levels: Vec<(BigRational, Weight)> = by_weight
        .keys()
        .map(|w| (sys.height(&(hw.clone() - w.clone())), w.clone()))
        .collect();
    for (h, _) in &levels {
        if !h.is_integer() || h < &BigRational::zero() {
            return Err(RepsError::Internal(
                "weight outside the root lattice below the highest weight".into(),
            ));
        }
    }
    levels.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.coords.cmp(&b.1.coords)));

    if by_weight[&hw] != vec![hw_index] {
        return Err(RepsError::Internal(
            "highest weight space is not one-dimensional".into(),
        ));
    }

    let mut gram: HashMap<(usize, usize), BigRational> = HashMap::new();
    gram.insert((hw_index, hw_index), BigRational::one());

    for (h, mu) in levels {
        if h.is_zero() {
            continue;
        }
        let basis = &by_weight[&mu];
        let local: HashMap<usize, usize> = basis
            .iter()
            .enumerate()
            .map(|(p, &g)| (g, p))
            .collect();

        // Columns of the spanning matrix: f_i applied to basis vectors one
        // level up, expressed over this weight space.
        let mut col_src: Vec<(usize, usize)> = Vec::new();
        for i in 0..r {
            let up = mu.clone() + sys.alpha(i);
            if let Some(parents) = by_weight.get(&up) {
                for &x in parents {
                    col_src.push((i, x));
                }
            }
        }
        if col_src.is_empty() {
            return Err(RepsError::Internal("module is not cyclic".into()));
        }
        let mut m = RatMat::zeros(basis.len(), col_src.len());
        for (cj, (i, x)) in col_src.iter().enumerate() {
            for (row, c) in f[*i].column(*x) {
                *m.at_mut(local[row], cj) += c;
            }
        }

        for (p, &u) in basis.iter().enumerate() {
            let mut rhs = vec![BigRational::zero(); basis.len()];
            rhs[p] = BigRational::one();
            let expansion = m
                .solve(&rhs)
                .ok_or_else(|| RepsError::Internal("module is not cyclic".into()))?;
            for &v in basis.iter() {
                let mut s = BigRational::zero();
                for (cj, (i, x)) in col_src.iter().enumerate() {
                    if expansion[cj].is_zero() {
                        continue;
                    }
                    // S(f_i x, v) = S(x, e_i v)
                    for (y, d) in e[*i].column(v) {
                        if let Some(g) = gram.get(&(*x, *y)) {
                            s += &expansion[cj] * d * g;
                        }
                    }
                }
                if !s.is_zero() {
                    gram.insert((u, v), s);
                }
            }
        }
    }
    Ok(gram)
}

/// Incremental triangular reduction over multi-index keys, used to carve a
/// submodule basis out of a tensor space.
struct Triangular {
    rows: Vec<(Vec<u32>, TensorVector<BigRational>)>,
}

impl Triangular {
    fn new() -> Self {
        Triangular { rows: Vec::new() }
    }

    /// Reduces `v` against the stored rows in order, returning the
    /// coefficients used and the remainder. Since the stored rows are the
    /// basis itself, the coefficients are coordinates whenever the
    /// remainder vanishes.
    fn reduce(
        &self,
        mut v: TensorVector<BigRational>,
    ) -> (Vec<BigRational>, TensorVector<BigRational>) {
        let mut coords = Vec::with_capacity(self.rows.len());
        for (pivot, row) in &self.rows {
            let c = v.coeff(pivot).cloned().unwrap_or_else(BigRational::zero);
            if !c.is_zero() {
                v = v.sub(&row.scale(&c));
            }
            coords.push(c);
        }
        (coords, v)
    }

    /// Stores a nonzero vector, normalized to 1 at its smallest multi-index.
    fn insert(&mut self, v: TensorVector<BigRational>) {
        let pivot = v
            .terms
            .keys()
            .next()
            .cloned()
            .expect("inserting the zero vector");
        let lead = v.coeff(&pivot).unwrap().clone();
        let inv = BigRational::one() / lead;
        self.rows.push((pivot, v.scale(&inv)));
    }
}

/// A tensor product of realizations, sharing factors by reference.
#[derive(Clone, Debug)]
pub struct TensorSpace {
    factors: Vec<Arc<ModuleRealization>>,
}

impl TensorSpace {
    pub fn new(factors: Vec<Arc<ModuleRealization>>) -> Result<Self, RepsError> {
        let first = factors.first().ok_or(RepsError::NoFactors)?.clone();
        let mut dim: usize = 1;
        for fac in &factors {
            if !same_sys(fac.sys(), first.sys()) {
                return Err(RepsError::MixedFactors);
            }
            dim = dim
                .checked_mul(fac.dim())
                .filter(|&d| d <= REALIZATION_CAP)
                .ok_or(RepsError::TooLarge(usize::MAX, REALIZATION_CAP))?;
        }
        Ok(TensorSpace { factors })
    }

    pub fn sys(&self) -> &CartanData {
        self.factors[0].sys()
    }

    pub fn n_factors(&self) -> usize {
        self.factors.len()
    }

    pub fn factor(&self, s: usize) -> &ModuleRealization {
        &self.factors[s]
    }

    pub fn factors(&self) -> &[Arc<ModuleRealization>] {
        &self.factors
    }

    pub fn dim(&self) -> usize {
        self.factors.iter().map(|f| f.dim()).product()
    }

    /// The tensor space spanned by a contiguous block of factors.
    pub fn sub_space(&self, start: usize, len: usize) -> TensorSpace {
        TensorSpace {
            factors: self.factors[start..start + len].to_vec(),
        }
    }

    pub fn hw_multi_index(&self) -> Vec<u32> {
        self.factors.iter().map(|f| f.hw_index() as u32).collect()
    }

    pub fn hw_vector<K: Scalar>(&self) -> TensorVector<K> {
        TensorVector::unit(self.hw_multi_index())
    }

    pub fn total_hw_weight(&self) -> Weight {
        self.factors
            .iter()
            .map(|f| f.highest_weight().clone())
            .fold(self.sys().zero_weight(), |a, b| a + b)
    }

    pub fn weight_of(&self, idx: &[u32]) -> Weight {
        assert_eq!(idx.len(), self.factors.len());
        idx.iter()
            .zip(&self.factors)
            .map(|(&i, f)| f.weight(i as usize).clone())
            .fold(self.sys().zero_weight(), |a, b| a + b)
    }

    /// Applies a factor-local operator at the given slot.
    pub fn apply_at<K: Scalar>(
        &self,
        slot: usize,
        mat: &SparseMat,
        v: &TensorVector<K>,
    ) -> TensorVector<K> {
        let mut out = TensorVector::new();
        for (idx, c) in v.iter() {
            for (row, m) in mat.column(idx[slot] as usize) {
                let mut t = idx.clone();
                t[slot] = *row as u32;
                out.add_term(t, c.clone() * K::from_rational(m));
            }
        }
        out
    }

    fn apply_leibniz<K: Scalar>(
        &self,
        pick: impl Fn(&ModuleRealization) -> &SparseMat,
        v: &TensorVector<K>,
    ) -> TensorVector<K> {
        let mut out = TensorVector::new();
        for (idx, c) in v.iter() {
            for (s, fac) in self.factors.iter().enumerate() {
                for (row, m) in pick(fac).column(idx[s] as usize) {
                    let mut t = idx.clone();
                    t[s] = *row as u32;
                    out.add_term(t, c.clone() * K::from_rational(m));
                }
            }
        }
        out
    }

    pub fn apply_e<K: Scalar>(&self, i: usize, v: &TensorVector<K>) -> TensorVector<K> {
        self.apply_leibniz(|f| f.e_mat(i), v)
    }

    pub fn apply_f<K: Scalar>(&self, i: usize, v: &TensorVector<K>) -> TensorVector<K> {
        self.apply_leibniz(|f| f.f_mat(i), v)
    }

    pub fn apply_h<K: Scalar>(&self, i: usize, v: &TensorVector<K>) -> TensorVector<K> {
        let mut out = TensorVector::new();
        for (idx, c) in v.iter() {
            let eig = self.weight_of(idx).coords[i].clone();
            out.add_term(idx.clone(), c.clone() * K::from_rational(&eig));
        }
        out
    }

    /// Applies the word `f_{w_1} .. f_{w_m}` read as an operator product,
    /// i.e. the rightmost letter acts first.
    pub fn apply_f_word<K: Scalar>(&self, word: &[usize], v: &TensorVector<K>) -> TensorVector<K> {
        let mut out = v.clone();
        for &i in word.iter().rev() {
            out = self.apply_f(i, &out);
        }
        out
    }

    /// All pure tensor multi-indices of the given total weight, in
    /// lexicographic order.
    pub fn weight_subspace(&self, mu: &Weight) -> Vec<Vec<u32>> {
        let ranges: Vec<Vec<u32>> = self
            .factors
            .iter()
            .map(|f| (0..f.dim() as u32).collect())
            .collect();
        ranges
            .into_iter()
            .multi_cartesian_product()
            .filter(|idx| &self.weight_of(idx) == mu)
            .collect()
    }

    /// A basis of the space of vectors of weight `mu` killed by every `e_i`,
    /// computed as an exact kernel.
    pub fn singular_subspace(&self, mu: &Weight) -> Vec<TensorVector<BigRational>> {
        let basis = self.weight_subspace(mu);
        if basis.is_empty() {
            return Vec::new();
        }
        let r = self.sys().rank();
        let mut rows_data: Vec<Vec<(usize, BigRational)>> = Vec::new();
        for i in 0..r {
            let up = mu.clone() + self.sys().alpha(i);
            let targets = self.weight_subspace(&up);
            if targets.is_empty() {
                continue;
            }
            let row_of: HashMap<&Vec<u32>, usize> =
                targets.iter().enumerate().map(|(p, t)| (t, p)).collect();
            let base = rows_data.len();
            rows_data.extend(std::iter::repeat_with(Vec::new).take(targets.len()));
            for (j, idx) in basis.iter().enumerate() {
                let image = self.apply_e::<BigRational>(i, &TensorVector::unit(idx.clone()));
                for (t, c) in image.iter() {
                    rows_data[base + row_of[t]].push((j, c.clone()));
                }
            }
        }
        if rows_data.is_empty() {
            // No weight space one level up, so everything here is singular.
            return basis.into_iter().map(TensorVector::unit).collect();
        }
        let mut m = RatMat::zeros(rows_data.len(), basis.len());
        for (ri, row) in rows_data.iter().enumerate() {
            for (j, c) in row {
                *m.at_mut(ri, *j) += c;
            }
        }
        m.kernel_basis()
            .into_iter()
            .map(|coeffs| {
                let mut v = TensorVector::new();
                for (j, c) in coeffs.into_iter().enumerate() {
                    v.add_term(basis[j].clone(), c);
                }
                v
            })
            .collect()
    }

    /// The contravariant form of the tensor product: a product of factor
    /// forms over pure tensors, extended bilinearly.
    pub fn shapovalov_pair<K: Scalar>(&self, u: &TensorVector<K>, v: &TensorVector<K>) -> K {
        let mut acc = K::zero();
        for (iu, cu) in u.iter() {
            for (iv, cv) in v.iter() {
                let mut g = BigRational::one();
                let mut vanished = false;
                for (s, fac) in self.factors.iter().enumerate() {
                    match fac.gram_entry(iu[s] as usize, iv[s] as usize) {
                        Some(entry) => g *= entry,
                        None => {
                            vanished = true;
                            break;
                        }
                    }
                }
                if !vanished {
                    acc = acc + cu.clone() * cv.clone() * K::from_rational(&g);
                }
            }
        }
        acc
    }
}

/// Sparse vector in a tensor space, keyed by factor basis indices. The map
/// is ordered so that all iteration is deterministic.
#[derive(Clone, Debug, PartialEq)]
pub struct TensorVector<K: Scalar> {
    terms: BTreeMap<Vec<u32>, K>,
}

impl<K: Scalar> Default for TensorVector<K> {
    fn default() -> Self {
        Self::new()
    }
}

impl<K: Scalar> TensorVector<K> {
    pub fn new() -> Self {
        TensorVector {
            terms: BTreeMap::new(),
        }
    }

    pub fn unit(idx: Vec<u32>) -> Self {
        let mut v = Self::new();
        v.add_term(idx, K::one());
        v
    }

    pub fn add_term(&mut self, idx: Vec<u32>, c: K) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(idx) {
            Entry::Vacant(slot) => {
                slot.insert(c);
            }
            Entry::Occupied(mut slot) => {
                let s = slot.get().clone() + c;
                if s.is_zero() {
                    slot.remove();
                } else {
                    *slot.get_mut() = s;
                }
            }
        }
    }

    pub fn coeff(&self, idx: &[u32]) -> Option<&K> {
        self.terms.get(idx)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Vec<u32>, &K)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero_vector(&self) -> bool {
        self.terms.values().all(|c| c.is_zero())
    }

    pub fn scale(&self, c: &K) -> Self {
        let mut out = Self::new();
        for (idx, a) in self.iter() {
            out.add_term(idx.clone(), a.clone() * c.clone());
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (idx, c) in other.iter() {
            out.add_term(idx.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (idx, c) in other.iter() {
            out.add_term(idx.clone(), -c.clone());
        }
        out
    }

    /// Largest coefficient magnitude, as a float.
    pub fn sup_norm(&self) -> f64 {
        self.terms
            .values()
            .map(|c| c.approx_abs())
            .fold(0.0, f64::max)
    }

    pub fn map<K2: Scalar>(&self, f: impl Fn(&K) -> K2) -> TensorVector<K2> {
        let mut out = TensorVector::new();
        for (idx, c) in self.iter() {
            out.add_term(idx.clone(), f(c));
        }
        out
    }

    pub fn to_complex(&self) -> TensorVector<num_complex::Complex64> {
        self.map(|c| c.to_c64())
    }
}

/// Builds the vector `sum_I a_I  F_{I_1} w_1 tensor .. tensor F_{I_k} w_k`
/// from per-cluster parts: each `I` assigns an ordered tuple of colors to
/// every cluster, `a_I` is its coefficient, and `F_{I_p}` is the
/// corresponding word of lowering operators acting on the part `w_p` inside
/// the cluster's block of factors. This is the singular vector shape that
/// limits of critical points produce under clustering.
pub fn iterated_singular_vector<K: Scalar>(
    space: &TensorSpace,
    cluster_sizes: &[usize],
    coeffs: &[(ColorBlocks, K)],
    parts: &[TensorVector<K>],
) -> TensorVector<K> {
    let k = cluster_sizes.len();
    assert_eq!(parts.len(), k);
    assert_eq!(
        cluster_sizes.iter().sum::<usize>(),
        space.n_factors(),
        "cluster sizes must partition the factors"
    );
    let mut starts = Vec::with_capacity(k);
    let mut acc = 0;
    for &s in cluster_sizes {
        starts.push(acc);
        acc += s;
    }
    let clusters: Vec<TensorSpace> = (0..k)
        .map(|p| space.sub_space(starts[p], cluster_sizes[p]))
        .collect();

    let mut out = TensorVector::new();
    for (blocks, a) in coeffs {
        assert_eq!(blocks.len(), k, "one color block per cluster");
        let lowered: Vec<TensorVector<K>> = (0..k)
            .map(|p| clusters[p].apply_f_word(&blocks[p], &parts[p]))
            .collect();
        // Expand the pure tensor of the k lowered cluster vectors.
        let mut partial: Vec<(Vec<u32>, K)> = vec![(Vec::new(), a.clone())];
        for piece in &lowered {
            let mut next = Vec::with_capacity(partial.len() * piece.len().max(1));
            for (prefix, c) in &partial {
                for (idx, d) in piece.iter() {
                    let mut joined = prefix.clone();
                    joined.extend_from_slice(idx);
                    next.push((joined, c.clone() * d.clone()));
                }
            }
            partial = next;
        }
        for (idx, c) in partial {
            out.add_term(idx, c);
        }
    }
    out
}
