//! Finite semisimple C*-categories.
//!
//! A category is described by its ordered list of simple objects. An
//! object is a multiplicity vector over that list and a morphism is one
//! complex block per simple, of shape `dst.mult[i] × src.mult[i]`. All
//! structure maps (composition, adjoint, norms, resolutions into
//! simples) act blockwise, which keeps functor inflation later in the
//! stack free of permutation bookkeeping.
//!
//! Zero-multiplicity blocks are stored as legal empty matrices rather
//! than omitted, so indexing is uniform across all operations.

use crate::numkit::{c64, CMatrix, ResidualKind, TolerancePolicy, C64};
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

/// Errors from category-level operations.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum CatError {
    #[error("object mismatch: {0}")]
    ObjectMismatch(String),
    #[error("category mismatch: operands live in different categories")]
    CategoryMismatch,
}

/// A finite semisimple C*-category, given by its simple-object labels.
#[derive(Debug, PartialEq, Eq)]
pub struct SCat {
    simples: Vec<String>,
}

impl SCat {
    pub fn new(simples: Vec<String>) -> Arc<Self> {
        assert!(!simples.is_empty(), "category needs at least one simple");
        let mut sorted = simples.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), simples.len(), "simple labels must be distinct");
        Arc::new(SCat { simples })
    }

    /// Category with simples labeled s0..s{n-1}.
    pub fn with_n_simples(n: usize) -> Arc<Self> {
        SCat::new((0..n).map(|i| format!("s{i}")).collect())
    }

    pub fn n_simples(&self) -> usize {
        self.simples.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.simples
    }

    /// The i-th simple as an object.
    pub fn simple(self: &Arc<Self>, i: usize) -> Obj {
        let mut mult = vec![0; self.n_simples()];
        mult[i] = 1;
        Obj {
            cat: Arc::clone(self),
            mult,
        }
    }

    /// Direct sum of all simples, each with multiplicity one.
    pub fn sum_of_simples(self: &Arc<Self>) -> Obj {
        Obj {
            cat: Arc::clone(self),
            mult: vec![1; self.n_simples()],
        }
    }

    pub fn object(self: &Arc<Self>, mult: Vec<usize>) -> Obj {
        assert_eq!(
            mult.len(),
            self.n_simples(),
            "multiplicity vector length must equal the simple count"
        );
        Obj {
            cat: Arc::clone(self),
            mult,
        }
    }
}

/// Object: multiplicity vector over the simples of its category.
#[derive(Clone, PartialEq)]
pub struct Obj {
    pub cat: Arc<SCat>,
    pub mult: Vec<usize>,
}

impl fmt::Debug for Obj {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Obj{:?}", self.mult)
    }
}

impl Obj {
    /// Total number of simple summands, counted with multiplicity.
    pub fn total_mult(&self) -> usize {
        self.mult.iter().sum()
    }

    pub fn same_cat(&self, other: &Obj) -> bool {
        Arc::ptr_eq(&self.cat, &other.cat) || self.cat == other.cat
    }

    pub fn is_zero(&self) -> bool {
        self.mult.iter().all(|&m| m == 0)
    }

    /// dim End(x) = Σ mult[i]².
    pub fn end_dim(&self) -> usize {
        self.mult.iter().map(|&m| m * m).sum()
    }

    pub fn direct_sum(&self, other: &Obj) -> Obj {
        assert!(self.same_cat(other), "direct sum across categories");
        Obj {
            cat: Arc::clone(&self.cat),
            mult: self
                .mult
                .iter()
                .zip(other.mult.iter())
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

/// Morphism: one block per simple, shape `dst.mult[i] × src.mult[i]`.
#[derive(Clone, PartialEq)]
pub struct Mor {
    pub src: Obj,
    pub dst: Obj,
    pub blocks: Vec<CMatrix>,
}

impl fmt::Debug for Mor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Mor {:?} -> {:?}", self.src.mult, self.dst.mult)
    }
}

impl Mor {
    pub fn new(src: Obj, dst: Obj, blocks: Vec<CMatrix>) -> Self {
        assert!(src.same_cat(&dst), "morphism endpoints in different categories");
        assert_eq!(blocks.len(), src.cat.n_simples(), "one block per simple");
        for (i, b) in blocks.iter().enumerate() {
            assert_eq!(
                (b.rows(), b.cols()),
                (dst.mult[i], src.mult[i]),
                "block {i} shape must be dst.mult x src.mult"
            );
        }
        Mor { src, dst, blocks }
    }

    pub fn zero(src: Obj, dst: Obj) -> Self {
        let blocks = (0..src.cat.n_simples())
            .map(|i| CMatrix::zeros(dst.mult[i], src.mult[i]))
            .collect();
        Mor::new(src, dst, blocks)
    }

    pub fn identity(x: &Obj) -> Self {
        let blocks = x.mult.iter().map(|&m| CMatrix::identity(m)).collect();
        Mor::new(x.clone(), x.clone(), blocks)
    }

    /// z · id_x.
    pub fn scalar(x: &Obj, z: C64) -> Self {
        let blocks = x.mult.iter().map(|&m| CMatrix::scalar(m, z)).collect();
        Mor::new(x.clone(), x.clone(), blocks)
    }

    pub fn from_block_fn(src: &Obj, dst: &Obj, mut f: impl FnMut(usize) -> CMatrix) -> Self {
        let blocks = (0..src.cat.n_simples()).map(&mut f).collect();
        Mor::new(src.clone(), dst.clone(), blocks)
    }

    pub fn is_endo(&self) -> bool {
        self.src == self.dst
    }

    pub fn add(&self, other: &Mor) -> Mor {
        assert_eq!(self.src, other.src, "add: source mismatch");
        assert_eq!(self.dst, other.dst, "add: target mismatch");
        let blocks = self
            .blocks
            .iter()
            .zip(other.blocks.iter())
            .map(|(a, b)| a.add(b))
            .collect();
        Mor::new(self.src.clone(), self.dst.clone(), blocks)
    }

    pub fn sub(&self, other: &Mor) -> Mor {
        self.add(&other.scale(c64(-1.0, 0.0)))
    }

    pub fn scale(&self, z: C64) -> Mor {
        let blocks = self.blocks.iter().map(|b| b.scale(z)).collect();
        Mor::new(self.src.clone(), self.dst.clone(), blocks)
    }

    /// Max over simple blocks of the operator norm.
    pub fn norm(&self) -> f64 {
        self.blocks.iter().map(|b| b.op_norm()).fold(0.0, f64::max)
    }

    /// Σ_i tr(block_i); the un-weighted matrix trace of an endomorphism.
    pub fn trace(&self) -> C64 {
        assert!(self.is_endo(), "trace of non-endomorphism");
        self.blocks.iter().map(|b| b.trace()).sum()
    }

    /// Total complex dimension of the hom-space this morphism lives in.
    pub fn hom_dim(src: &Obj, dst: &Obj) -> usize {
        src.mult
            .iter()
            .zip(dst.mult.iter())
            .map(|(s, d)| s * d)
            .sum()
    }

    /// Flatten blocks into a coefficient vector (block order, row-major).
    pub fn to_vec(&self) -> Vec<C64> {
        let mut v = Vec::with_capacity(Mor::hom_dim(&self.src, &self.dst));
        for b in &self.blocks {
            v.extend_from_slice(b.data());
        }
        v
    }

    /// Inverse of [`Mor::to_vec`] for given endpoints.
    pub fn from_vec(src: &Obj, dst: &Obj, v: &[C64]) -> Mor {
        assert_eq!(v.len(), Mor::hom_dim(src, dst), "coefficient count");
        let mut at = 0;
        let blocks = (0..src.cat.n_simples())
            .map(|i| {
                let (r, c) = (dst.mult[i], src.mult[i]);
                let b = CMatrix::from_data(r, c, v[at..at + r * c].to_vec());
                at += r * c;
                b
            })
            .collect();
        Mor::new(src.clone(), dst.clone(), blocks)
    }
}

/// Blockwise composition g ∘ f (apply f first).
pub fn mor_compose(g: &Mor, f: &Mor) -> Result<Mor, CatError> {
    if f.dst != g.src {
        return Err(CatError::ObjectMismatch(format!(
            "compose: inner objects differ, {:?} vs {:?}",
            f.dst.mult, g.src.mult
        )));
    }
    let blocks = g
        .blocks
        .iter()
        .zip(f.blocks.iter())
        .map(|(gb, fb)| gb.matmul(fb))
        .collect();
    Ok(Mor::new(f.src.clone(), g.dst.clone(), blocks))
}

/// Composition that panics on mismatch; for code paths where endpoints
/// are correct by construction.
pub fn compose(g: &Mor, f: &Mor) -> Mor {
    mor_compose(g, f).expect("composition endpoints")
}

/// Compose a chain right-to-left: chain([a, b, c]) = a ∘ b ∘ c.
pub fn compose_chain(mors: &[&Mor]) -> Mor {
    assert!(!mors.is_empty(), "empty composition chain");
    let mut acc = mors[mors.len() - 1].clone();
    for m in mors[..mors.len() - 1].iter().rev() {
        acc = compose(m, &acc);
    }
    acc
}

/// Blockwise conjugate transpose with endpoints swapped.
pub fn mor_star(f: &Mor) -> Mor {
    let blocks = f.blocks.iter().map(|b| b.adjoint()).collect();
    Mor::new(f.dst.clone(), f.src.clone(), blocks)
}

/// The isometries of a resolution of `x` into simples: one morphism
/// `simple_i → x` per copy `c` of each simple `i`.
#[derive(Debug, Clone)]
pub struct ResolutionTerm {
    pub simple_index: usize,
    pub copy: usize,
    pub isometry: Mor,
}

/// Resolution of `x` by coordinate isometries: Σ u u* = id_x exactly,
/// u*u = id on each simple. Terms are ordered by simple index, then copy.
pub fn simple_resolution(x: &Obj) -> Vec<ResolutionTerm> {
    let n = x.cat.n_simples();
    let mut out = Vec::with_capacity(x.total_mult());
    for i in 0..n {
        for c in 0..x.mult[i] {
            let simple = x.cat.simple(i);
            let mut blocks: Vec<CMatrix> = (0..n)
                .map(|j| CMatrix::zeros(x.mult[j], if j == i { 1 } else { 0 }))
                .collect();
            let mut col = CMatrix::zeros(x.mult[i], 1);
            col[(c, 0)] = c64(1.0, 0.0);
            blocks[i] = col;
            out.push(ResolutionTerm {
                simple_index: i,
                copy: c,
                isometry: Mor::new(simple, x.clone(), blocks),
            });
        }
    }
    out
}

/// Summary metrics of a morphism: max block operator norm plus
/// positivity/unitarity flags for endomorphisms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MorMetrics {
    pub norm: f64,
    pub positive: bool,
    pub unitary: bool,
}

pub fn mor_metrics(f: &Mor, tol: &TolerancePolicy) -> Result<MorMetrics, CatError> {
    let norm = f.norm();
    if !f.is_endo() {
        return Err(CatError::ObjectMismatch(
            "positivity and unitarity are defined for endomorphisms only".into(),
        ));
    }
    let scale = norm.max(1.0);
    let mut positive = true;
    let mut unitary = true;
    for b in &f.blocks {
        if b.rows() == 0 {
            continue;
        }
        let pos_res = crate::numkit::residuals(b, ResidualKind::Positivity)
            .expect("endomorphism blocks are square");
        if pos_res > tol.eps_num * scale {
            positive = false;
        }
        let uni_res = crate::numkit::residuals(b, ResidualKind::Unitarity)
            .expect("unitarity residual is unconditional");
        if uni_res > tol.eps_num * scale.max(norm * norm) {
            unitary = false;
        }
    }
    Ok(MorMetrics {
        norm,
        positive,
        unitary,
    })
}

/// Largest operator-norm distance between two parallel morphisms.
pub fn mor_distance(f: &Mor, g: &Mor) -> f64 {
    assert_eq!(f.src, g.src, "distance: source mismatch");
    assert_eq!(f.dst, g.dst, "distance: target mismatch");
    f.sub(g).norm()
}
